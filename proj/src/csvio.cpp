#include "hygro/csvio.hpp"

#include <cstdio>

namespace hygro {

namespace {
// fixed formatting keeps repeated runs byte-identical
std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}
}  // namespace

void write_timeseries_csv(std::ostream& os, const BuildingModel& model,
                          const SimulationResult& result) {
    os << "t_star,entity,kind,node_or_zone,x_star,u,v,T_K,P_v_Pa,phi\n";
    for (const Frame& fr : result.frames) {
        const std::string t = num(fr.t);
        for (std::size_t w = 0; w < fr.wall_u.size(); ++w) {
            const BuildingWall& bw = model.walls[w];
            for (int j = 0; j < bw.grid.n; ++j) {
                const double u = fr.wall_u[w][j], v = fr.wall_v[w][j];
                const double T = unscale_temperature(u, model.ctx);
                const double Pv = unscale_vapour_pressure(v, model.ctx);
                os << t << ',' << bw.name << ",wall," << j << ',' << num(bw.grid.x(j)) << ','
                   << num(u) << ',' << num(v) << ',' << num(T) << ',' << num(Pv) << ','
                   << num(to_relative_humidity(v, u, model.ctx)) << '\n';
            }
        }
        for (std::size_t z = 0; z < fr.zones.size(); ++z) {
            const double u = fr.zones[z].u_a, v = fr.zones[z].v_a;
            const double T = unscale_temperature(u, model.ctx);
            const double Pv = unscale_vapour_pressure(v, model.ctx);
            os << t << ',' << model.zones[z].name << ",zone," << z << ",," << num(u) << ','
               << num(v) << ',' << num(T) << ',' << num(Pv) << ','
               << num(to_relative_humidity(v, u, model.ctx)) << '\n';
        }
    }
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
    os << "scheme,wall_clock_s,mean_subiters,max_subiters\n";
    for (const auto& r : rows)
        os << r.scheme << ',' << num(r.wall_clock_s) << ',' << num(r.mean_subiters) << ','
           << r.max_subiters << '\n';
}

void write_study_csv(std::ostream& os, const std::string& scheme, const StudyResult& study) {
    os << "dt_star,scheme,eps_global,slope_region\n";
    for (const auto& row : study.rows)
        os << num(row.dt) << ',' << scheme << ','
           << (row.divergent ? "inf" : num(row.eps)) << ',' << (row.in_fit ? 1 : 0) << '\n';
}

}  // namespace hygro
