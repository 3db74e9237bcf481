#pragma once
#include <functional>
#include <string>
#include <vector>

#include "hygro/building.hpp"

namespace hygro {

// Maximum-norm error metrics between a run and a reference.
struct ErrorReport {
    double eps_global = 0.0;                      // sup over space and time
    std::vector<std::vector<double>> eps_of_x;    // per wall, per node: sup over time
    std::vector<double> eps_of_t;                 // per frame: sup over space and zones
    std::vector<double> frame_times;
};

// Fine-grid backward-Euler solution sampled at the coarse frame times,
// with nested-node subsampling available at the coarse nodes.
struct ReferenceSolution {
    SimulationResult fine;       // frames on the fine grid
    int space_factor = 4;
    int time_factor = 16;
    double richardson_gap = 0.0; // fine vs 2x-finer-in-time, max norm

    // Asserts the reference resolves the error being measured: the
    // Richardson gap must stay below 10% of eps. Throws otherwise.
    void require_adequate_for(double eps) const;
};

// Runs the model implicitly at (dx / space_factor, dt / time_factor) and at
// dt / (2 time_factor) for the Richardson self-check, recording frames at
// `cadence`. Factors below (4, 16) are rejected.
ReferenceSolution compute_reference(const BuildingModel& model, int space_factor,
                                    int time_factor, double cadence);

// L-infinity error metrics of a run against the reference. Frame times must
// match (nested cadences) and wall grids must be nested in the reference's.
ErrorReport linf_errors(const BuildingModel& model, const SimulationResult& run,
                        const ReferenceSolution& ref);

// Error of a run against a closed-form solution v(x, t) of the moisture
// field (manufactured-solution studies on single-wall models).
ErrorReport linf_errors_exact(const BuildingModel& model, const SimulationResult& run,
                              const std::function<double(double, double)>& v_exact);

// One row of a convergence study.
struct StudyRow {
    double dt = 0.0;
    double eps = 0.0;
    bool divergent = false;
    bool in_fit = false;  // used by the slope fit (floor and divergence excluded)
};

struct StudyResult {
    std::vector<StudyRow> rows;
    double slope = 0.0;  // least-squares slope of log(eps) vs log(dt)
};

// Runs the model once per dt value against the supplied error functional and
// fits the temporal order. Points on the error floor are dropped from the
// fit (smallest-dt points whose pairwise slope falls below 0.5), as are
// divergent runs (recorded with eps > 1).
StudyResult convergence_study(const BuildingModel& model, Scheme scheme,
                              const std::vector<double>& dt_list,
                              const std::function<double(const BuildingModel&)>& error_of_run);

}  // namespace hygro
