#pragma once
#include <string>
#include <vector>

#include "hygro/scaling.hpp"
#include "hygro/signal.hpp"

namespace hygro {

// Lumped air state of one zone.
struct ZoneState {
    double u_a = 1.0;  // dimensionless air temperature
    double v_a = 1.0;  // dimensionless air vapour pressure
};

// Sign convention of the wall term in the zone moisture balance.
//   AsPrinted:      + sum Bi_M theta_M (v_a - v_i)
//   FluxConsistent: + sum Bi_M theta_M (v_i - v_a)
// The printed form drives the zone away from the walls and is exposed for
// auditing; production scenarios use the flux-consistent form.
enum class MoistureWallSign { AsPrinted, FluxConsistent };

// One wall surface coupled to the zone.
struct ZoneWallLink {
    int wall = -1;       // index into the building wall list
    int face = 1;        // 0: x*=0 face, 1: x*=1 face
    double Bi_M = 0.0, Bi_TT = 0.0, Bi_TM = 0.0;
    double theta_T = 0.0, theta_M = 0.0;
};

// Airflow link to a peer zone.
struct ZoneInterzoneLink {
    int peer = -1;
    double g_inz = 0.0, q_inz1 = 0.0, q_inz2 = 0.0;
};

// Long-wave exchange between two wall surfaces bounding the zone. The flux
// s*eps*sigma*(T_emitter^4 - T_receiver^4) is injected into the receiver
// face's imposed heat flux.
struct RadiationLink {
    int emitter_wall = -1;
    int receiver_wall = -1;
    double view_factor = 0.0;  // s in [0, 1]
    double emissivity = 0.0;   // eps in (0, 1]
};

struct ZoneConfig {
    std::string name;
    ZoneDimensionless params;
    std::vector<ZoneWallLink> walls;
    std::vector<ZoneInterzoneLink> interzone;
    std::vector<RadiationLink> radiation;
    MoistureWallSign moisture_sign = MoistureWallSign::FluxConsistent;
};

// Surface samples for the wall links, in link order.
struct ZoneSamples {
    std::vector<double> u_s, v_s;  // wall surface values, one per wall link
};

// Both balance right-hand sides at (state, samples, peers, t*).
//   (1 + kappa_a_tt1) du_a/dt = q_o + q_h + q_v1 (u_inf v_inf - u_a v_a)
//                             + q_v2 (u_inf - u_a) + interzone + wall terms
//   dv_a/dt = g_o + g_v (v_inf - v_a) + interzone + wall terms
struct ZoneRates {
    double du_a = 0.0, dv_a = 0.0;
};
ZoneRates zone_rhs(const ZoneState& state, const ZoneConfig& config,
                   const ZoneSamples& samples, const std::vector<ZoneState>& peers,
                   double u_inf, double v_inf, double t_star);

// Dimensional long-wave flux onto one receiver surface [W/m2].
// surface_u holds the dimensionless surface temperature of every wall.
double radiative_flux(const std::vector<double>& surface_u, int receiver_wall,
                      const std::vector<RadiationLink>& links, const ScalingContext& ctx);

// Forward Euler update of the zone state with layer-n samples.
ZoneState zone_step_explicit(const ZoneState& state, const ZoneConfig& config,
                             const ZoneSamples& samples, const std::vector<ZoneState>& peers,
                             double u_inf, double v_inf, double t_star, double dt);

// Backward Euler update used inside the whole-building fixed point: the wall
// samples and peer states are the current iterate; the two scalar balances
// are solved in closed form, moisture first.
ZoneState zone_step_implicit(const ZoneState& state_n, const ZoneConfig& config,
                             const ZoneSamples& samples, const std::vector<ZoneState>& peers,
                             double u_inf, double v_inf, double t_next, double dt);

}  // namespace hygro
