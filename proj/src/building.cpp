#include "hygro/building.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <sstream>

#include "hygro/errors.hpp"

namespace hygro {

void BuildingModel::validate() const {
    if (!(horizon >= 0.0)) throw schema_error("horizon must be non-negative");
    if (!(dt > 0.0)) throw schema_error("dt must be positive");
    for (const auto& w : walls) {
        for (int fidx = 0; fidx < 2; ++fidx) {
            const auto& a = w.attach[fidx];
            if (a.kind == FaceAttachment::Kind::Zone &&
                (a.zone < 0 || a.zone >= static_cast<int>(zones.size()))) {
                std::ostringstream os;
                os << "wall '" << w.name << "' face " << fidx << " references zone "
                   << a.zone << " which does not exist";
                throw schema_error(os.str());
            }
        }
    }
    for (const auto& z : zones) {
        for (const auto& l : z.walls) {
            if (l.wall < 0 || l.wall >= static_cast<int>(walls.size())) {
                std::ostringstream os;
                os << "zone '" << z.name << "' links wall " << l.wall << " which does not exist";
                throw schema_error(os.str());
            }
        }
        for (const auto& l : z.interzone) {
            if (l.peer < 0 || l.peer >= static_cast<int>(zones.size())) {
                std::ostringstream os;
                os << "zone '" << z.name << "' links peer zone " << l.peer
                   << " which does not exist";
                throw schema_error(os.str());
            }
        }
        for (const auto& r : z.radiation) {
            if (r.emitter_wall < 0 || r.emitter_wall >= static_cast<int>(walls.size()) ||
                r.receiver_wall < 0 || r.receiver_wall >= static_cast<int>(walls.size())) {
                std::ostringstream os;
                os << "zone '" << z.name << "' radiation link references a missing wall";
                throw schema_error(os.str());
            }
        }
    }
}

BuildingState initial_state(const BuildingModel& model) {
    BuildingState s;
    s.walls.reserve(model.walls.size());
    for (const auto& w : model.walls) {
        WallField f = WallField::uniform(w.grid, w.init_u, w.init_v);
        if (w.init_profile_u) {
            for (int j = 0; j < w.grid.n; ++j) f.u_prev[j] = f.u_curr[j] = w.init_profile_u(w.grid.x(j));
        }
        if (w.init_profile_v) {
            for (int j = 0; j < w.grid.n; ++j) f.v_prev[j] = f.v_curr[j] = w.init_profile_v(w.grid.x(j));
        }
        s.walls.push_back(std::move(f));
    }
    s.zones.assign(model.zones.size(), ZoneState{});
    return s;
}

namespace {

int face_node(const BuildingWall& w, int fidx) { return fidx == 0 ? 0 : w.grid.n - 1; }

// Surface temperature of every wall as seen from one zone: for walls linked
// to the zone, the value at the zone-adjacent face node; 0 elsewhere (such
// walls must not appear in the zone's radiation links).
std::vector<double> zone_surface_u(const BuildingModel& model, const ZoneConfig& zone,
                                   const std::vector<const std::vector<double>*>& wall_u) {
    std::vector<double> s(model.walls.size(), 0.0);
    for (const auto& link : zone.walls) {
        const BuildingWall& w = model.walls[link.wall];
        s[link.wall] = (*wall_u[link.wall])[face_node(w, link.face)];
    }
    return s;
}

// Radiation fluxes per (wall, face): dimensionless q*, computed from the
// supplied wall temperature layers.
std::vector<std::array<double, 2>> radiation_fluxes(
    const BuildingModel& model, const std::vector<const std::vector<double>*>& wall_u) {
    std::vector<std::array<double, 2>> q(model.walls.size(), {0.0, 0.0});
    for (const auto& zone : model.zones) {
        if (zone.radiation.empty()) continue;
        const std::vector<double> surf = zone_surface_u(model, zone, wall_u);
        for (const auto& link : zone.walls) {
            const BuildingWall& w = model.walls[link.wall];
            const double q_rw = radiative_flux(surf, link.wall, zone.radiation, model.ctx);
            if (q_rw != 0.0)
                q[link.wall][link.face] +=
                    w.thickness * q_rw / (model.ctx.T_i * w.k_TT0);
        }
    }
    return q;
}

FaceValues resolve_face(const BuildingWall& w, int fidx,
                        const std::vector<ZoneState>& zones, double t, double q_rad) {
    const FaceAttachment& a = w.attach[fidx];
    FaceValues b;
    b.Bi_M = w.biot[fidx].Bi_M;
    b.Bi_TT = w.biot[fidx].Bi_TT;
    b.Bi_TM = w.biot[fidx].Bi_TM;
    if (a.kind == FaceAttachment::Kind::Exterior) {
        b.u_inf = a.u_inf(t);
        b.v_inf = a.v_inf(t);
        b.g_inf = a.g_inf(t);
        b.q_inf = a.q_inf(t) + q_rad;
    } else {
        b.u_inf = zones[a.zone].u_a;
        b.v_inf = zones[a.zone].v_a;
        b.g_inf = 0.0;
        b.q_inf = q_rad;
    }
    return b;
}

ZoneSamples gather_samples(const BuildingModel& model, const ZoneConfig& zone,
                           const std::vector<const std::vector<double>*>& wall_u,
                           const std::vector<const std::vector<double>*>& wall_v) {
    ZoneSamples s;
    s.u_s.reserve(zone.walls.size());
    s.v_s.reserve(zone.walls.size());
    for (const auto& link : zone.walls) {
        const int j = face_node(model.walls[link.wall], link.face);
        s.u_s.push_back((*wall_u[link.wall])[j]);
        s.v_s.push_back((*wall_v[link.wall])[j]);
    }
    return s;
}

std::vector<const std::vector<double>*> layer_ptrs(const std::vector<WallField>& walls,
                                                   bool v_field) {
    std::vector<const std::vector<double>*> p;
    p.reserve(walls.size());
    for (const auto& f : walls) p.push_back(v_field ? &f.v_curr : &f.u_curr);
    return p;
}

}  // namespace

StepReport step_explicit(const BuildingModel& model, BuildingState& state) {
    const double t = state.t;
    const double dt = model.dt;

    // snapshot layer n
    const auto u_now = layer_ptrs(state.walls, false);
    const auto v_now = layer_ptrs(state.walls, true);
    const auto q_rad = radiation_fluxes(model, u_now);
    const std::vector<ZoneState> zones_now = state.zones;

    std::vector<ZoneSamples> samples;
    samples.reserve(model.zones.size());
    for (const auto& z : model.zones) samples.push_back(gather_samples(model, z, u_now, v_now));

    for (std::size_t i = 0; i < model.walls.size(); ++i) {
        const BuildingWall& w = model.walls[i];
        const FaceValues L = resolve_face(w, 0, zones_now, t, q_rad[i][0]);
        const FaceValues R = resolve_face(w, 1, zones_now, t, q_rad[i][1]);
        if (model.scheme == Scheme::EulerExplicit) {
            euler_explicit_step(state.walls[i], w.grid, w.groups, w.coeffs, L, R, dt);
        } else if (w.coeffs.is_constant()) {
            df_step_coupled(state.walls[i], w.grid, w.groups, L, R, dt);
        } else {
            df_step_nonlinear(state.walls[i], w.grid, w.groups, w.coeffs, L, R, dt);
        }
    }

    const double u_out = model.outdoor_u(t), v_out = model.outdoor_v(t);
    for (std::size_t z = 0; z < model.zones.size(); ++z) {
        state.zones[z] = zone_step_explicit(zones_now[z], model.zones[z], samples[z],
                                            zones_now, u_out, v_out, t, dt);
    }

    state.t += dt;
    return StepReport{0, 0.0};
}

StepReport step_implicit(const BuildingModel& model, BuildingState& state, double eta,
                         int max_subiters) {
    if (!(eta > 0.0)) throw std::invalid_argument("step_implicit: eta must be positive");
    const double t1 = state.t + model.dt;
    const double dt = model.dt;

    // iterates start from the previous time layer
    std::vector<std::vector<double>> iter_u, iter_v;
    for (const auto& f : state.walls) {
        iter_u.push_back(f.u_curr);
        iter_v.push_back(f.v_curr);
    }
    std::vector<ZoneState> iter_z = state.zones;

    const double u_out = model.outdoor_u(t1), v_out = model.outdoor_v(t1);

    int pass = 0;
    double diff = 0.0;
    while (true) {
        ++pass;
        diff = 0.0;

        std::vector<const std::vector<double>*> u_it, v_it;
        for (std::size_t i = 0; i < iter_u.size(); ++i) {
            u_it.push_back(&iter_u[i]);
            v_it.push_back(&iter_v[i]);
        }
        // radiation refreshed from the current iterate surfaces
        const auto q_rad = radiation_fluxes(model, u_it);
        const std::vector<ZoneState> z_snapshot = iter_z;

        std::vector<double> uN, vN;
        for (std::size_t i = 0; i < model.walls.size(); ++i) {
            const BuildingWall& w = model.walls[i];
            const FaceValues L = resolve_face(w, 0, z_snapshot, t1, q_rad[i][0]);
            const FaceValues R = resolve_face(w, 1, z_snapshot, t1, q_rad[i][1]);
            implicit_wall_pass(state.walls[i], w.grid, w.groups, w.coeffs, L, R, dt,
                               iter_u[i], iter_v[i], uN, vN);
            for (int j = 0; j < w.grid.n; ++j) {
                diff = std::max(diff, std::abs(uN[j] - iter_u[i][j]));
                diff = std::max(diff, std::abs(vN[j] - iter_v[i][j]));
            }
            iter_u[i].swap(uN);
            iter_v[i].swap(vN);
        }

        for (std::size_t i = 0; i < iter_u.size(); ++i) {
            u_it[i] = &iter_u[i];
            v_it[i] = &iter_v[i];
        }
        for (std::size_t z = 0; z < model.zones.size(); ++z) {
            const ZoneSamples s = gather_samples(model, model.zones[z], u_it, v_it);
            const ZoneState nz = zone_step_implicit(state.zones[z], model.zones[z], s,
                                                    z_snapshot, u_out, v_out, t1, dt);
            diff = std::max(diff, std::abs(nz.u_a - iter_z[z].u_a));
            diff = std::max(diff, std::abs(nz.v_a - iter_z[z].v_a));
            iter_z[z] = nz;
        }

        if (diff < eta) break;
        if (pass >= max_subiters) {
            std::ostringstream os;
            os << "building fixed point did not converge in " << max_subiters
               << " sub-iterations at t* = " << t1 << " (residual " << diff << ")";
            throw convergence_error(os.str(), diff);
        }
    }

    for (std::size_t i = 0; i < model.walls.size(); ++i) {
        WallField& f = state.walls[i];
        f.u_prev.swap(f.u_curr);
        f.u_curr.swap(iter_u[i]);
        f.v_prev.swap(f.v_curr);
        f.v_curr.swap(iter_v[i]);
        f.t_star += dt;
    }
    state.zones = iter_z;
    state.t = t1;
    return StepReport{pass, diff};
}

namespace {
Frame make_frame(const BuildingState& s) {
    Frame fr;
    fr.t = s.t;
    for (const auto& f : s.walls) {
        fr.wall_u.push_back(f.u_curr);
        fr.wall_v.push_back(f.v_curr);
    }
    fr.zones = s.zones;
    return fr;
}

void check_bounded(const BuildingModel& model, const BuildingState& s) {
    for (std::size_t i = 0; i < s.walls.size(); ++i) {
        const double m = max_abs_field(s.walls[i]);
        if (!(m <= model.divergence_norm)) {
            std::ostringstream os;
            os << "field norm " << m << " exceeded " << model.divergence_norm
               << " in wall '" << model.walls[i].name << "' at t* = " << s.t;
            throw numerical_error(os.str(), s.t);
        }
    }
    for (const auto& z : s.zones) {
        if (!std::isfinite(z.u_a) || !std::isfinite(z.v_a) ||
            std::abs(z.u_a) > model.divergence_norm || std::abs(z.v_a) > model.divergence_norm) {
            std::ostringstream os;
            os << "zone state diverged at t* = " << s.t;
            throw numerical_error(os.str(), s.t);
        }
    }
}
}  // namespace

SimulationResult run(const BuildingModel& model, double cadence, SimulationResult* partial) {
    model.validate();
    const auto t_start = std::chrono::steady_clock::now();

    BuildingState state = initial_state(model);
    SimulationResult result;
    result.frames.push_back(make_frame(state));

    const long nsteps = std::lround(model.horizon / model.dt);
    const long stride = std::max<long>(1, std::lround(cadence / model.dt));
    long done = 0;
    long subiter_sum = 0;

    try {
        if (model.scheme == Scheme::DufortFrankel && nsteps > 0) {
            const StepReport boot = step_implicit(model, state, model.eta(), model.max_subiters);
            result.bootstrap_subiters = boot.subiterations;
            check_bounded(model, state);
            ++done;
            if (done % stride == 0 || done == nsteps) result.frames.push_back(make_frame(state));
        }

        while (done < nsteps) {
            StepReport rep;
            if (model.scheme == Scheme::EulerImplicit) {
                rep = step_implicit(model, state, model.eta(), model.max_subiters);
            } else {
                rep = step_explicit(model, state);
            }
            subiter_sum += rep.subiterations;
            result.max_subiters_seen = std::max(result.max_subiters_seen, rep.subiterations);
            check_bounded(model, state);
            ++done;
            if (done % stride == 0 || done == nsteps) result.frames.push_back(make_frame(state));
        }
    } catch (...) {
        if (partial) {
            result.steps = done;
            result.wall_clock_s = std::chrono::duration<double>(
                                      std::chrono::steady_clock::now() - t_start)
                                      .count();
            *partial = std::move(result);
        }
        throw;
    }

    result.steps = done;
    const long counted =
        model.scheme == Scheme::DufortFrankel ? std::max<long>(done - 1, 0) : done;
    result.mean_subiters = counted > 0 ? double(subiter_sum) / double(counted) : 0.0;
    result.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

}  // namespace hygro
