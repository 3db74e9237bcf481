#include "hygro/zone.hpp"

#include <cmath>
#include <sstream>

#include "hygro/errors.hpp"

namespace hygro {

namespace {
void check_links(const ZoneConfig& config, const ZoneSamples& samples,
                 const std::vector<ZoneState>& peers) {
    if (samples.u_s.size() != config.walls.size() || samples.v_s.size() != config.walls.size())
        throw std::invalid_argument("zone_rhs: one surface sample required per wall link");
    for (const auto& link : config.interzone) {
        if (link.peer < 0 || link.peer >= static_cast<int>(peers.size())) {
            std::ostringstream os;
            os << "zone '" << config.name << "': interzone peer " << link.peer
               << " not resolvable";
            throw schema_error(os.str());
        }
    }
}
}  // namespace

ZoneRates zone_rhs(const ZoneState& state, const ZoneConfig& config,
                   const ZoneSamples& samples, const std::vector<ZoneState>& peers,
                   double u_inf, double v_inf, double t_star) {
    check_links(config, samples, peers);
    const ZoneDimensionless& z = config.params;

    double du = z.q_o(t_star) + z.q_h(t_star) +
                z.q_v1 * (u_inf * v_inf - state.u_a * state.v_a) +
                z.q_v2 * (u_inf - state.u_a);
    double dv = z.g_o(t_star) + z.g_v * (v_inf - state.v_a);

    for (const auto& link : config.interzone) {
        const ZoneState& p = peers[link.peer];
        du += link.q_inz1 * (p.u_a * p.v_a - state.u_a * state.v_a) +
              link.q_inz2 * (p.u_a - state.u_a);
        dv += link.g_inz * (p.v_a - state.v_a);
    }

    const double sign = config.moisture_sign == MoistureWallSign::AsPrinted ? 1.0 : -1.0;
    for (std::size_t i = 0; i < config.walls.size(); ++i) {
        const auto& w = config.walls[i];
        du += w.Bi_TT * w.theta_T * (samples.u_s[i] - state.u_a) +
              w.Bi_TM * w.theta_T * (samples.v_s[i] - state.v_a);
        dv += sign * w.Bi_M * w.theta_M * (state.v_a - samples.v_s[i]);
    }

    return ZoneRates{du / (1.0 + z.kappa_a_tt1), dv};
}

double radiative_flux(const std::vector<double>& surface_u, int receiver_wall,
                      const std::vector<RadiationLink>& links, const ScalingContext& ctx) {
    const PhysicalConstants pc;
    double q = 0.0;
    for (const auto& link : links) {
        if (link.receiver_wall != receiver_wall) continue;
        const double Te = surface_u[link.emitter_wall] * ctx.T_i;
        const double Tr = surface_u[link.receiver_wall] * ctx.T_i;
        q += link.view_factor * link.emissivity * pc.sigma *
             (Te * Te * Te * Te - Tr * Tr * Tr * Tr);
    }
    return q;
}

ZoneState zone_step_explicit(const ZoneState& state, const ZoneConfig& config,
                             const ZoneSamples& samples, const std::vector<ZoneState>& peers,
                             double u_inf, double v_inf, double t_star, double dt) {
    const ZoneRates r = zone_rhs(state, config, samples, peers, u_inf, v_inf, t_star);
    return ZoneState{state.u_a + dt * r.du_a, state.v_a + dt * r.dv_a};
}

ZoneState zone_step_implicit(const ZoneState& state_n, const ZoneConfig& config,
                             const ZoneSamples& samples, const std::vector<ZoneState>& peers,
                             double u_inf, double v_inf, double t_next, double dt) {
    check_links(config, samples, peers);
    const ZoneDimensionless& z = config.params;
    const double sign = config.moisture_sign == MoistureWallSign::AsPrinted ? 1.0 : -1.0;

    double sum_gz = 0.0, sum_gz_v = 0.0;
    for (const auto& link : config.interzone) {
        sum_gz += link.g_inz;
        sum_gz_v += link.g_inz * peers[link.peer].v_a;
    }
    double S_M = 0.0, W_M = 0.0;
    for (std::size_t i = 0; i < config.walls.size(); ++i) {
        S_M += config.walls[i].Bi_M * config.walls[i].theta_M;
        W_M += config.walls[i].Bi_M * config.walls[i].theta_M * samples.v_s[i];
    }

    const double v_den = 1.0 + dt * (z.g_v + sum_gz - sign * S_M);
    const double v_num = state_n.v_a + dt * (z.g_o(t_next) + z.g_v * v_inf + sum_gz_v -
                                             sign * W_M);
    const double v1 = v_num / v_den;

    double u_coef = (1.0 + z.kappa_a_tt1) + dt * (z.q_v1 * v1 + z.q_v2);
    double u_rhs = (1.0 + z.kappa_a_tt1) * state_n.u_a +
                   dt * (z.q_o(t_next) + z.q_h(t_next) + z.q_v1 * u_inf * v_inf +
                         z.q_v2 * u_inf);
    for (const auto& link : config.interzone) {
        const ZoneState& p = peers[link.peer];
        u_coef += dt * (link.q_inz1 * v1 + link.q_inz2);
        u_rhs += dt * (link.q_inz1 * p.u_a * p.v_a + link.q_inz2 * p.u_a);
    }
    for (std::size_t i = 0; i < config.walls.size(); ++i) {
        const auto& w = config.walls[i];
        u_coef += dt * w.Bi_TT * w.theta_T;
        u_rhs += dt * (w.Bi_TT * w.theta_T * samples.u_s[i] +
                       w.Bi_TM * w.theta_T * (samples.v_s[i] - v1));
    }
    return ZoneState{u_rhs / u_coef, v1};
}

}  // namespace hygro
