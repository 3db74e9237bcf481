#pragma once
#include <vector>

#include "hygro/materials.hpp"
#include "hygro/signal.hpp"

namespace hygro {

// Reference state shared by every wall and zone of a scenario:
// u = T/T_i, v = P_v/P_vi, t* = t/t_0.
struct ScalingContext {
    double T_i = 293.15;   // reference temperature [K]
    double P_vi = 0.0;     // reference vapour pressure [Pa]
    double t_0 = 3600.0;   // reference time [s]

    static ScalingContext from_state(double T_i, double phi_i, double t_0);
};

// Dimensionless transport groups of one wall.
struct WallGroups {
    double Fo_M = 0.0;   // t0 k_M0 / (L^2 c_M0)
    double Fo_TT = 0.0;  // t0 k_TT0 / (L^2 c_TT0)
    double Fo_TM = 0.0;  // t0 k_TM0 / (L^2 c_TM0)
    double gamma = 0.0;  // c_TM0 P_vi / (c_TT0 T_i)
};

// Biot numbers of one face.
struct FaceBiot {
    double Bi_M = 0.0;   // h_M L / k_M0
    double Bi_TT = 0.0;  // h_T L / k_TT0
    double Bi_TM = 0.0;  // L_v h_M L P_vi / (k_TT0 T_i)
};

struct WallDimensionless {
    WallGroups groups;
    FaceBiot face[2];            // [0] = x*=0, [1] = x*=1
    CoefficientSet reference;    // the "...,0" values
    double theta_T = 0.0;        // k_TT0 A t0 / (L kappa_TT0), set by scale_zone
    double theta_M = 0.0;        // k_M0 A t0 P_v0 / (L kappa_M)
};

// Air-side inputs of a zone, dimensional.
struct ZoneAirConfig {
    double volume = 0.0;    // [m3]
    double rho_a = 1.0;     // air density [kg/m3]
    double c_pa = 1005.0;   // dry air heat capacity [J/(kg.K)]
    double c_pv = 1960.0;   // water vapour heat capacity [J/(kg.K)]
    double ventilation_ach = 0.0;   // air changes per hour [1/h]
    Signal moisture_source;         // g_o(t*) [kg/s]
    Signal heat_source;             // q_h(t*) [W]
};

// Dimensionless source/coupling scalars of a zone (published scaling with
// w_a ~ P_v / P_v0, P_v0 = 1.61e5 Pa).
struct ZoneDimensionless {
    double kappa_a_tt1 = 0.0;  // c_pv P_vi / (c_pa P_v0)
    Signal g_o, q_o, q_h;      // occupant / heat-source schedules
    double g_v = 0.0, q_v1 = 0.0, q_v2 = 0.0;  // ventilation scalars
    double kappa_TT0 = 0.0;    // rho_a V c_pa [J/K] (dimensional echo)
    double kappa_M = 0.0;      // rho_a V [kg] (dimensional echo)
};

// Interzone airflow scalars for a given link.
struct InterzoneScalars {
    double g_inz = 0.0, q_inz1 = 0.0, q_inz2 = 0.0;
};

constexpr double kPv0 = 1.61e5;  // humidity-ratio pressure scale [Pa]

// Converts one wall (frozen or reference coefficients, thickness L, face
// convective pairs (h_T, h_M)) to its dimensionless groups.
WallDimensionless scale_wall(const CoefficientSet& reference, double L,
                             double h_T0, double h_M0, double h_T1, double h_M1,
                             const ScalingContext& ctx);

// Zone scalars from dimensional air-side configuration.
ZoneDimensionless scale_zone(const ZoneAirConfig& zone, const ScalingContext& ctx);

// Wall-to-zone coupling weights for a wall of area A facing the zone.
void attach_wall_to_zone(WallDimensionless& wall, double area, double L,
                         const ZoneDimensionless& zone, const ScalingContext& ctx);

// Interzone scalars from an air change rate [1/h] between two zones.
InterzoneScalars scale_interzone(double ach, const ZoneAirConfig& zone,
                                 const ZoneDimensionless& zd, const ScalingContext& ctx);

// Dimensionless boundary flux scales: g* = L g / (P_vi k_M0), q* = L q / (T_i k_TT0).
double scale_moisture_flux(double g, double L, const CoefficientSet& ref, const ScalingContext& ctx);
double scale_heat_flux(double q, double L, const CoefficientSet& ref, const ScalingContext& ctx);

// Inverse maps and relative humidity.
inline double unscale_temperature(double u, const ScalingContext& ctx) { return u * ctx.T_i; }
inline double unscale_vapour_pressure(double v, const ScalingContext& ctx) { return v * ctx.P_vi; }
double to_relative_humidity(double v, double u, const ScalingContext& ctx);

}  // namespace hygro
