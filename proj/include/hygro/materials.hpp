#pragma once
#include <string>

namespace hygro {

// Physical constants used throughout. SI units.
struct PhysicalConstants {
    double rho_0 = 790.0;    // dry material density [kg/m3]
    double c_0 = 870.0;      // dry material heat capacity [J/(kg.K)]
    double c_w = 4180.0;     // liquid water heat capacity [J/(kg.K)]
    double rho_l = 1000.0;   // liquid water density [kg/m3]
    double R_v = 461.5;      // water vapour gas constant [J/(kg.K)]
    double L_v = 2.5e6;      // latent heat of evaporation, mean value [J/kg]
    double sigma = 5.67e-8;  // Stefan-Boltzmann constant [W/(m2.K4)]
};

// Storage and transport coefficients of the coupled heat/moisture equations.
//   c_M  [s2/m2]   moisture storage        k_M  [s]      moisture transport
//   c_TT [W.s/(m3.K)] energy storage       k_TT [W/(m.K)] heat conduction
//   c_TM [W.s3/(kg.m2)] coupling storage   k_TM [m2/s]   latent heat transport
struct CoefficientSet {
    double c_M = 1.0;
    double k_M = 1.0;
    double c_TT = 1.0;
    double k_TT = 1.0;
    double c_TM = 1.0;
    double k_TM = 1.0;
};

// Saturation vapour pressure [Pa], T in Kelvin, valid on [273.15, 373.15].
// Antoine-type fit anchored near the boiling point (~101.6 kPa at 373.15 K)
// and within 0.4% of steam-table values at room temperature.
double saturation_pressure(double T);

// Kelvin relation: capillary pressure [Pa] from vapour pressure and
// temperature. P_c = rho_l * R_v * T * ln(P_v / P_s(T)); non-positive.
double capillary_pressure(double P_v, double T);

// Sorption isotherm of the load-bearing material as a function of capillary
// pressure (P_c <= 0). Two-plateau curve; 157 kg/m3 at saturation.
struct SorptionCurve {
    double evaluate(double P_c) const;    // moisture content [kg/m3]
    double derivative(double P_c) const;  // d(content)/dP_c [kg/(m3.Pa)]
};

// Convenience wrapper around SorptionCurve::evaluate.
double sorption_content(double P_c);

// Admissible state box for the property correlations.
constexpr double kBoxTMin = 274.15;
constexpr double kBoxTMax = 313.15;
constexpr double kBoxPhiMin = 0.01;
constexpr double kBoxPhiMax = 0.99;

// Hygrothermal property correlations of the load-bearing material.
//
// The transport correlations are calibrated against the published linearized
// coefficient table for this material; the moisture content entering the
// conductivity, storage and permeability laws is parameterized by the
// specific capillary potential R_v*T*ln(phi) (the Kelvin potential per unit
// liquid mass), which is the form that reproduces that table.
class MaterialModel {
public:
    explicit MaterialModel(PhysicalConstants constants = {})
        : constants_(constants) {}

    const PhysicalConstants& constants() const { return constants_; }
    const SorptionCurve& sorption() const { return sorption_; }

    // Moisture content [kg/m3] driving the transport correlations.
    double moisture_content(double T, double phi) const;

    // Vapour permeability delta_v [s]; vanishes as f -> 157.
    double vapour_permeability(double T, double f) const;

    // Thermal conductivity lambda [W/(m.K)] = 0.2 + 0.0045 f.
    double thermal_conductivity(double f) const;

    // Closed-form moisture transport coefficient k_M [s].
    double moisture_transport(double P_v, double P_s) const;

    // Closed-form moisture storage coefficient c_M [s2/m2].
    double moisture_storage(double T, double P_v, double P_s) const;

    // All six coefficients at (T [K], P_v [Pa]). Throws hygro::domain_error
    // outside the admissible box T in [274.15, 313.15], phi in [0.01, 0.99].
    CoefficientSet evaluate(double T, double P_v) const;

    // As evaluate(), with (T, phi) clamped into the admissible box first.
    // Used by steppers whose iterates may transiently leave the box.
    CoefficientSet evaluate_clamped(double T, double P_v) const;

private:
    PhysicalConstants constants_;
    SorptionCurve sorption_;
};

// Evaluates the material once at (T, phi) and freezes the result as the
// constant coefficient set of a linear wall model.
CoefficientSet linearize(const MaterialModel& material, double T, double phi);

}  // namespace hygro
