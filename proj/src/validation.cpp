#include "hygro/validation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hygro/errors.hpp"

namespace hygro {

namespace {

BuildingModel refined(const BuildingModel& model, int space_factor, double dt) {
    BuildingModel m = model;
    m.scheme = Scheme::EulerImplicit;
    m.dt = dt;
    // the committed fixed-point residual (~eta per step) sits far below the
    // discretization error the reference resolves; no need for a tighter gate
    m.eta_factor = std::max(m.eta_factor, 1e-4);
    for (auto& w : m.walls) w.grid = Grid1D::with_nodes((w.grid.n - 1) * space_factor + 1);
    return m;
}

// Index of the reference frame matching time t, or -1.
int match_frame(const std::vector<Frame>& frames, double t, double tol) {
    int best = -1;
    double best_gap = tol;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const double gap = std::abs(frames[i].t - t);
        if (gap < best_gap) {
            best_gap = gap;
            best = static_cast<int>(i);
        }
    }
    return best;
}

}  // namespace

void ReferenceSolution::require_adequate_for(double eps) const {
    if (!(richardson_gap < 0.1 * eps)) {
        std::ostringstream os;
        os << "reference not adequate: Richardson gap " << richardson_gap
           << " is not below 10% of the measured error " << eps;
        throw reference_quality_error(os.str());
    }
}

ReferenceSolution compute_reference(const BuildingModel& model, int space_factor,
                                    int time_factor, double cadence) {
    if (space_factor < 4 || time_factor < 16)
        throw std::invalid_argument("compute_reference: refinement must be at least (4, 16)");

    ReferenceSolution ref;
    ref.space_factor = space_factor;
    ref.time_factor = time_factor;
    ref.fine = run(refined(model, space_factor, model.dt / time_factor), cadence);

    // Richardson companion at half the refinement: for the first-order
    // reference, |u(2h) - u(h)| = 2 |u(h) - u(h/2)| to leading order, so the
    // further-2x-refinement change is half the measured coarse-side gap.
    // The companion costs a quarter of a true h/2 run.
    const SimulationResult finer =
        run(refined(model, space_factor, 2.0 * model.dt / time_factor), cadence);

    double gap = 0.0;
    const double tol = std::max(1e-9, 0.25 * cadence);
    for (const Frame& fa : ref.fine.frames) {
        const int ib = match_frame(finer.frames, fa.t, tol);
        if (ib < 0) continue;
        const Frame& fb = finer.frames[ib];
        for (std::size_t w = 0; w < fa.wall_u.size(); ++w) {
            for (std::size_t j = 0; j < fa.wall_u[w].size(); ++j) {
                gap = std::max(gap, std::abs(fa.wall_u[w][j] - fb.wall_u[w][j]));
                gap = std::max(gap, std::abs(fa.wall_v[w][j] - fb.wall_v[w][j]));
            }
        }
        for (std::size_t z = 0; z < fa.zones.size(); ++z) {
            gap = std::max(gap, std::abs(fa.zones[z].u_a - fb.zones[z].u_a));
            gap = std::max(gap, std::abs(fa.zones[z].v_a - fb.zones[z].v_a));
        }
    }
    ref.richardson_gap = 0.5 * gap;
    return ref;
}

ErrorReport linf_errors(const BuildingModel& model, const SimulationResult& result,
                        const ReferenceSolution& ref) {
    ErrorReport rep;
    rep.eps_of_x.resize(model.walls.size());
    for (std::size_t w = 0; w < model.walls.size(); ++w)
        rep.eps_of_x[w].assign(model.walls[w].grid.n, 0.0);

    const double tol = 1e-6 * std::max(1.0, model.horizon);
    const int sf = ref.space_factor;
    for (const Frame& fr : result.frames) {
        const int ib = match_frame(ref.fine.frames, fr.t, tol);
        if (ib < 0) {
            std::ostringstream os;
            os << "no reference frame at t* = " << fr.t << "; cadences are not nested";
            throw std::invalid_argument(os.str());
        }
        const Frame& rf = ref.fine.frames[ib];
        double eps_t = 0.0;
        for (std::size_t w = 0; w < fr.wall_u.size(); ++w) {
            if ((fr.wall_u[w].size() - 1) * sf != rf.wall_u[w].size() - 1)
                throw std::invalid_argument("linf_errors: grids are not nested");
            for (std::size_t j = 0; j < fr.wall_u[w].size(); ++j) {
                const std::size_t jf = j * sf;
                const double e = std::max(std::abs(fr.wall_u[w][j] - rf.wall_u[w][jf]),
                                          std::abs(fr.wall_v[w][j] - rf.wall_v[w][jf]));
                rep.eps_of_x[w][j] = std::max(rep.eps_of_x[w][j], e);
                eps_t = std::max(eps_t, e);
            }
        }
        for (std::size_t z = 0; z < fr.zones.size(); ++z) {
            eps_t = std::max(eps_t, std::abs(fr.zones[z].u_a - rf.zones[z].u_a));
            eps_t = std::max(eps_t, std::abs(fr.zones[z].v_a - rf.zones[z].v_a));
        }
        rep.eps_of_t.push_back(eps_t);
        rep.frame_times.push_back(fr.t);
        rep.eps_global = std::max(rep.eps_global, eps_t);
    }
    return rep;
}

ErrorReport linf_errors_exact(const BuildingModel& model, const SimulationResult& result,
                              const std::function<double(double, double)>& v_exact) {
    ErrorReport rep;
    rep.eps_of_x.resize(model.walls.size());
    for (std::size_t w = 0; w < model.walls.size(); ++w)
        rep.eps_of_x[w].assign(model.walls[w].grid.n, 0.0);
    for (const Frame& fr : result.frames) {
        double eps_t = 0.0;
        for (std::size_t w = 0; w < fr.wall_v.size(); ++w) {
            const Grid1D& g = model.walls[w].grid;
            for (int j = 0; j < g.n; ++j) {
                const double e = std::abs(fr.wall_v[w][j] - v_exact(g.x(j), fr.t));
                rep.eps_of_x[w][j] = std::max(rep.eps_of_x[w][j], e);
                eps_t = std::max(eps_t, e);
            }
        }
        rep.eps_of_t.push_back(eps_t);
        rep.frame_times.push_back(fr.t);
        rep.eps_global = std::max(rep.eps_global, eps_t);
    }
    return rep;
}

StudyResult convergence_study(const BuildingModel& model, Scheme scheme,
                              const std::vector<double>& dt_list,
                              const std::function<double(const BuildingModel&)>& error_of_run) {
    StudyResult out;
    for (double dt : dt_list) {
        BuildingModel m = model;
        m.scheme = scheme;
        m.dt = dt;
        StudyRow row;
        row.dt = dt;
        try {
            row.eps = error_of_run(m);
        } catch (const numerical_error&) {
            row.divergent = true;
            row.eps = std::numeric_limits<double>::infinity();
        } catch (const convergence_error&) {
            row.divergent = true;
            row.eps = std::numeric_limits<double>::infinity();
        }
        out.rows.push_back(row);
    }

    // slope fit over the convergent rows, smallest dt first, dropping the
    // error-floor region (pairwise slope below 0.5)
    std::vector<StudyRow*> rows;
    for (auto& r : out.rows)
        if (!r.divergent) rows.push_back(&r);
    std::sort(rows.begin(), rows.end(),
              [](const StudyRow* a, const StudyRow* b) { return a->dt < b->dt; });
    std::size_t first = 0;
    while (first + 1 < rows.size()) {
        const double s = std::log(rows[first + 1]->eps / rows[first]->eps) /
                         std::log(rows[first + 1]->dt / rows[first]->dt);
        if (s >= 0.5) break;
        ++first;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int npts = 0;
    for (std::size_t i = first; i < rows.size(); ++i) {
        rows[i]->in_fit = true;
        const double x = std::log(rows[i]->dt), y = std::log(rows[i]->eps);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++npts;
    }
    out.slope = npts >= 2 ? (npts * sxy - sx * sy) / (npts * sxx - sx * sx) : 0.0;
    return out;
}

}  // namespace hygro
