#include "hygro/scaling.hpp"

#include <cmath>
#include <sstream>

#include "hygro/errors.hpp"

namespace hygro {

namespace {
void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        std::ostringstream os;
        os << "degenerate scaling: " << what << " = " << x;
        throw scaling_error(os.str());
    }
}
}  // namespace

ScalingContext ScalingContext::from_state(double T_i, double phi_i, double t_0) {
    ScalingContext ctx;
    ctx.T_i = T_i;
    ctx.P_vi = phi_i * saturation_pressure(T_i);
    ctx.t_0 = t_0;
    require_positive(ctx.P_vi, "P_vi");
    require_positive(t_0, "t_0");
    return ctx;
}

WallDimensionless scale_wall(const CoefficientSet& reference, double L,
                             double h_T0, double h_M0, double h_T1, double h_M1,
                             const ScalingContext& ctx) {
    require_positive(L, "wall thickness");
    require_positive(reference.c_M, "c_M0");
    require_positive(reference.k_M, "k_M0");
    require_positive(reference.c_TT, "c_TT0");
    require_positive(reference.k_TT, "k_TT0");
    require_positive(reference.c_TM, "c_TM0");
    require_positive(reference.k_TM, "k_TM0");

    const PhysicalConstants pc;
    WallDimensionless w;
    w.reference = reference;
    const double L2 = L * L;
    w.groups.Fo_M = ctx.t_0 * reference.k_M / (L2 * reference.c_M);
    w.groups.Fo_TT = ctx.t_0 * reference.k_TT / (L2 * reference.c_TT);
    w.groups.Fo_TM = ctx.t_0 * reference.k_TM / (L2 * reference.c_TM);
    w.groups.gamma = reference.c_TM * ctx.P_vi / (reference.c_TT * ctx.T_i);

    const double h_T[2] = {h_T0, h_T1};
    const double h_M[2] = {h_M0, h_M1};
    for (int f = 0; f < 2; ++f) {
        w.face[f].Bi_M = h_M[f] * L / reference.k_M;
        w.face[f].Bi_TT = h_T[f] * L / reference.k_TT;
        w.face[f].Bi_TM = pc.L_v * h_M[f] * L * ctx.P_vi / (reference.k_TT * ctx.T_i);
    }
    return w;
}

ZoneDimensionless scale_zone(const ZoneAirConfig& zone, const ScalingContext& ctx) {
    require_positive(zone.volume, "zone volume");
    require_positive(zone.rho_a, "air density");
    require_positive(zone.c_pa, "c_pa");

    ZoneDimensionless z;
    z.kappa_TT0 = zone.rho_a * zone.volume * zone.c_pa;
    z.kappa_M = zone.rho_a * zone.volume;
    z.kappa_a_tt1 = zone.c_pv * ctx.P_vi / (zone.c_pa * kPv0);

    const PhysicalConstants pc;
    // ventilation mass flow [kg/s] from air changes per hour
    const double g_v = zone.ventilation_ach * zone.volume * zone.rho_a / 3600.0;
    z.g_v = g_v * ctx.t_0 / z.kappa_M;
    z.q_v1 = zone.c_pv * g_v * ctx.t_0 * ctx.P_vi / (kPv0 * z.kappa_TT0);
    z.q_v2 = pc.L_v * g_v * ctx.t_0 * ctx.P_vi / (kPv0 * z.kappa_TT0 * ctx.T_i);

    // occupant moisture load g_o [kg/s] -> moisture and latent-energy schedules
    z.g_o = zone.moisture_source.scaled(ctx.t_0 * kPv0 / (z.kappa_M * ctx.P_vi));
    z.q_o = zone.moisture_source.scaled(pc.L_v * ctx.t_0 / (ctx.T_i * z.kappa_TT0));
    // direct heat source q_h [W]
    z.q_h = zone.heat_source.scaled(ctx.t_0 / (ctx.T_i * z.kappa_TT0));
    return z;
}

void attach_wall_to_zone(WallDimensionless& wall, double area, double L,
                         const ZoneDimensionless& zone, const ScalingContext& ctx) {
    require_positive(area, "wall area");
    wall.theta_T = wall.reference.k_TT * area * ctx.t_0 / (L * zone.kappa_TT0);
    wall.theta_M = wall.reference.k_M * area * ctx.t_0 * kPv0 / (L * zone.kappa_M);
}

InterzoneScalars scale_interzone(double ach, const ZoneAirConfig& zone,
                                 const ZoneDimensionless& zd, const ScalingContext& ctx) {
    const PhysicalConstants pc;
    const double g = ach * zone.volume * zone.rho_a / 3600.0;  // [kg/s]
    InterzoneScalars s;
    s.g_inz = g * ctx.t_0 / zd.kappa_M;
    s.q_inz1 = zone.c_pv * g * ctx.t_0 * ctx.P_vi / (kPv0 * zd.kappa_TT0);
    s.q_inz2 = pc.L_v * g * ctx.t_0 * ctx.P_vi / (kPv0 * zd.kappa_TT0 * ctx.T_i);
    return s;
}

double scale_moisture_flux(double g, double L, const CoefficientSet& ref, const ScalingContext& ctx) {
    return L * g / (ctx.P_vi * ref.k_M);
}

double scale_heat_flux(double q, double L, const CoefficientSet& ref, const ScalingContext& ctx) {
    return L * q / (ctx.T_i * ref.k_TT);
}

double to_relative_humidity(double v, double u, const ScalingContext& ctx) {
    return v * ctx.P_vi / saturation_pressure(u * ctx.T_i);
}

}  // namespace hygro
