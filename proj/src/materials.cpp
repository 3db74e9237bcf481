#include "hygro/materials.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hygro/errors.hpp"

namespace hygro {

namespace {
constexpr double kC1 = 1.25e-5;  // first plateau scale
constexpr double kC2 = 1.8e-5;   // second plateau scale
constexpr double kSaturationContent = 157.0;  // 47.1 + 109.9 [kg/m3]

// Two-plateau retention curve versus the positive suction argument s.
double plateau(double s) {
    return 47.1 * std::pow(1.0 + std::pow(kC1 * s, 1.65), -0.39) +
           109.9 * std::pow(1.0 + std::pow(kC2 * s, 6.0), -0.83);
}

// Analytic derivative of plateau() with respect to s (negative).
double plateau_derivative(double s) {
    const double x1 = kC1 * s, x2 = kC2 * s;
    const double d1 = -47.1 * 0.39 * 1.65 * kC1 * std::pow(x1, 0.65) *
                      std::pow(1.0 + std::pow(x1, 1.65), -1.39);
    const double d2 = -109.9 * 0.83 * 6.0 * kC2 * std::pow(x2, 5.0) *
                      std::pow(1.0 + std::pow(x2, 6.0), -1.83);
    return d1 + d2;
}
}  // namespace

double saturation_pressure(double T) {
    if (!(T >= 273.15 && T <= 373.15)) {
        std::ostringstream os;
        os << "saturation_pressure: T = " << T << " K outside [273.15, 373.15]";
        throw domain_error(os.str());
    }
    return std::exp(23.5771 - 4042.9 / (T - 37.58));
}

double capillary_pressure(double P_v, double T) {
    if (!(P_v > 0.0)) throw domain_error("capillary_pressure: P_v must be positive");
    const PhysicalConstants c;
    return c.rho_l * c.R_v * T * std::log(P_v / saturation_pressure(T));
}

double SorptionCurve::evaluate(double P_c) const {
    if (P_c > 0.0) throw domain_error("SorptionCurve: P_c must be non-positive");
    return plateau(-P_c);
}

double SorptionCurve::derivative(double P_c) const {
    if (P_c > 0.0) throw domain_error("SorptionCurve: P_c must be non-positive");
    // d/dP_c = -d/ds at s = -P_c
    return -plateau_derivative(-P_c);
}

double sorption_content(double P_c) { return SorptionCurve{}.evaluate(P_c); }

double MaterialModel::moisture_content(double T, double phi) const {
    return plateau(constants_.R_v * T * (-std::log(phi)));
}

double MaterialModel::vapour_permeability(double T, double f) const {
    const double z = 1.0 - f / kSaturationContent;
    return 1.88e-6 / T * z / (0.503 * z * z + 0.497);
}

double MaterialModel::thermal_conductivity(double f) const {
    return 0.2 + 0.0045 * f;
}

double MaterialModel::moisture_transport(double P_v, double P_s) const {
    const double r = 2.0 * P_v / P_s;
    return 1.97e-10 * std::pow(10.0, 1.44 - 0.07 * std::log10(r)) +
           1.77e-7 * std::exp(-8.0 * (r - 2.0) * (r - 2.0));
}

double MaterialModel::moisture_storage(double T, double P_v, double P_s) const {
    const double x = -std::log(P_v / P_s);
    const double rt = constants_.R_v * T;
    const double x1 = kC1 * rt * x, x2 = kC2 * rt * x;
    const double t1 = 30.62 * (kC1 * rt / P_v) * std::pow(x1, 0.65) *
                      std::pow(1.0 + std::pow(x1, 1.65), -1.39);
    const double t2 = 549.5 * (kC2 * rt / P_v) * std::pow(x2, 5.0) *
                      std::pow(1.0 + std::pow(x2, 6.0), -1.83);
    return t1 + t2;
}

CoefficientSet MaterialModel::evaluate(double T, double P_v) const {
    // box check with headroom for round trips through phi * P_s
    const double tol = 1e-9;
    const double P_s = (T >= kBoxTMin - tol && T <= kBoxTMax + tol) ? saturation_pressure(T) : 0.0;
    const double phi = P_s > 0.0 ? P_v / P_s : -1.0;
    if (!(P_s > 0.0) || !(phi >= kBoxPhiMin * (1.0 - tol) && phi <= kBoxPhiMax * (1.0 + tol))) {
        std::ostringstream os;
        os << "material state outside admissible box: T = " << T
           << " K, P_v = " << P_v << " Pa (phi = " << phi << ")";
        throw domain_error(os.str());
    }
    const double f = moisture_content(T, phi);
    const double c_M = moisture_storage(T, P_v, P_s);
    CoefficientSet out;
    out.c_M = c_M;
    out.k_M = moisture_transport(P_v, P_s);
    out.c_TT = constants_.rho_0 * constants_.c_0 + constants_.c_w * f;
    out.k_TT = thermal_conductivity(f);
    // Coupling storage; the Celsius temperature factor is part of the
    // published calibration of this correlation set.
    out.c_TM = constants_.c_w * (T - 273.15) * c_M;
    out.k_TM = constants_.L_v * vapour_permeability(T, f);
    return out;
}

CoefficientSet MaterialModel::evaluate_clamped(double T, double P_v) const {
    const double Tc = std::clamp(T, kBoxTMin, kBoxTMax);
    const double P_s = saturation_pressure(Tc);
    const double phi = std::clamp(P_v / P_s, kBoxPhiMin, kBoxPhiMax);
    return evaluate(Tc, phi * P_s);
}

CoefficientSet linearize(const MaterialModel& material, double T, double phi) {
    if (!(phi > 0.0 && phi < 1.0)) throw domain_error("linearize: phi must be in (0, 1)");
    return material.evaluate(T, phi * saturation_pressure(T));
}

}  // namespace hygro
