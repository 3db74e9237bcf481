#pragma once
#include <ostream>
#include <string>
#include <vector>

#include "hygro/building.hpp"
#include "hygro/validation.hpp"

namespace hygro {

// Time-series CSV, one row per (frame, wall node) and per (frame, zone).
// Header (fixed): t_star,entity,kind,node_or_zone,x_star,u,v,T_K,P_v_Pa,phi
void write_timeseries_csv(std::ostream& os, const BuildingModel& model,
                          const SimulationResult& result);

struct BenchRow {
    std::string scheme;
    double wall_clock_s = 0.0;
    double mean_subiters = 0.0;
    int max_subiters = 0;
};

// Header (fixed): scheme,wall_clock_s,mean_subiters,max_subiters
void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);

// Header (fixed): dt_star,scheme,eps_global,slope_region
void write_study_csv(std::ostream& os, const std::string& scheme, const StudyResult& study);

}  // namespace hygro
