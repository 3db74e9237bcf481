// hygrosim: coupled heat/moisture wall-and-zone simulation driver.
//
//   hygrosim run   <scenario.json> [--scheme S] [--dt-star X] [--dx-star X]
//                  [--eta X] [--horizon X] [--reference] [--out DIR]
//   hygrosim study <scenario.json> --dt-list 1e-4,3e-4,... [--scheme S] [--out DIR]
//   hygrosim bench <scenario.json> [--schemes df,euler-implicit] [--horizon X] [--out DIR]
//   hygrosim cfl   <scenario.json>
//
// Exit codes: 0 success, 2 scenario/schema error, 3 numerical failure.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hygro/csvio.hpp"
#include "hygro/errors.hpp"
#include "hygro/scenario.hpp"
#include "hygro/validation.hpp"

using namespace hygro;
namespace fs = std::filesystem;

namespace {

struct Overrides {
    std::string scheme;
    double dt = 0.0, dx = 0.0, eta = 0.0, horizon = -1.0;
};

void apply(const Overrides& o, Scenario& sc) {
    if (!o.scheme.empty()) sc.model.scheme = scheme_from_name(o.scheme);
    if (o.dt > 0.0) sc.model.dt = o.dt;
    if (o.eta > 0.0) sc.model.eta_factor = o.eta / sc.model.dt;
    if (o.horizon >= 0.0) sc.model.horizon = o.horizon;
    if (o.dx > 0.0)
        for (auto& w : sc.model.walls) w.grid = Grid1D::with_spacing(o.dx);
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

void write_report(const fs::path& dir, const Scenario& sc, const SimulationResult& r,
                  bool failed, const std::string& failure) {
    std::ostringstream os;
    os << "scenario: " << sc.name << "\n"
       << "scheme: " << scheme_name(sc.model.scheme) << "\n"
       << "dx_star: " << sc.model.walls.front().grid.dx << "\n"
       << "dt_star: " << sc.model.dt << "\n"
       << "eta: " << sc.model.eta() << " (eta_factor " << sc.model.eta_factor << ")\n"
       << "t0_s: " << sc.model.ctx.t_0 << "\n"
       << "T_i_K: " << sc.model.ctx.T_i << "\n"
       << "P_vi_Pa: " << sc.model.ctx.P_vi << "\n"
       << "horizon: " << sc.model.horizon << "\n"
       << "materials: ";
    bool any_nonlinear = false;
    for (const auto& w : sc.model.walls) any_nonlinear |= !w.coeffs.is_constant();
    os << (any_nonlinear ? "load_bearing correlations" : "frozen coefficient sets") << "\n"
       << "steps: " << r.steps << "\n"
       << "wall_clock_s: " << r.wall_clock_s << "\n"
       << "mean_subiters: " << r.mean_subiters << "\n"
       << "max_subiters: " << r.max_subiters_seen << "\n"
       << "bootstrap_subiters: " << r.bootstrap_subiters << "\n";
    if (failed)
        os << "status: ABORTED (" << failure << ")\n";
    else
        os << "status: completed\n";
    write_file(dir / "run_report.txt", os.str());
}

std::string cfl_report(const BuildingModel& m);

void write_artifacts(const fs::path& dir, const Scenario& sc, const SimulationResult& r) {
    fs::create_directories(dir);
    std::ofstream csv(dir / "timeseries.csv");
    write_timeseries_csv(csv, sc.model, r);
    write_file(dir / "scenario_echo.json", sc.dimensional_echo);
    write_file(dir / "dimensionless_echo.json", sc.dimensionless_echo);
    write_file(dir / "cfl_report.txt", cfl_report(sc.model));
}

int cmd_run(const std::string& path, const Overrides& o, bool with_reference,
            const std::string& out_dir) {
    Scenario sc = load_scenario(path);
    apply(o, sc);
    const fs::path dir = out_dir.empty() ? fs::path("out") / sc.name : fs::path(out_dir);

    SimulationResult partial;
    SimulationResult result;
    try {
        result = run(sc.model, sc.cadence, &partial);
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        write_artifacts(dir, sc, partial);
        write_report(dir, sc, partial, true, e.what());
        return 3;
    } catch (const convergence_error& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        write_artifacts(dir, sc, partial);
        write_report(dir, sc, partial, true, e.what());
        return 3;
    }
    write_artifacts(dir, sc, result);
    write_report(dir, sc, result, false, "");

    if (with_reference) {
        std::cout << "computing fine-grid reference (4x space, 16x time)...\n";
        const ReferenceSolution ref = compute_reference(sc.model, 4, 16, sc.cadence);
        const ErrorReport rep = linf_errors(sc.model, result, ref);
        std::ofstream err(dir / "error_report.csv");
        err << "t_star,eps\n";
        for (std::size_t i = 0; i < rep.eps_of_t.size(); ++i)
            err << rep.frame_times[i] << ',' << rep.eps_of_t[i] << '\n';
        std::cout << "eps_global = " << rep.eps_global << " (reference Richardson gap "
                  << ref.richardson_gap << ")\n";
        if (!(ref.richardson_gap < 0.1 * rep.eps_global)) {
            std::cout << "note: the run resolves the fields better than the reference "
                         "itself; conservative true-error bound "
                      << rep.eps_global + 2.0 * ref.richardson_gap << "\n";
        }
    }
    std::cout << "run complete: " << result.steps << " steps, " << result.wall_clock_s
              << " s, mean sub-iterations " << result.mean_subiters << "\n"
              << "artifacts in " << dir.string() << "\n";
    return 0;
}

std::string cfl_report(const BuildingModel& m) {
    std::ostringstream os;
    os << "explicit-scheme stability bounds per wall (dx* = " << m.walls.front().grid.dx
       << ")\n";
    for (const auto& w : m.walls) {
        // a-priori box: initial state plus the 3x3 grid over the ambient
        // forcing extremes of both faces
        double u_lo = 1.0, u_hi = 1.0, v_lo = 1.0, v_hi = 1.0;
        for (int f = 0; f < 2; ++f) {
            if (w.attach[f].kind != FaceAttachment::Kind::Exterior) continue;
            const auto ur = w.attach[f].u_inf.range();
            const auto vr = w.attach[f].v_inf.range();
            u_lo = std::min(u_lo, ur.first);
            u_hi = std::max(u_hi, ur.second);
            v_lo = std::min(v_lo, vr.first);
            v_hi = std::max(v_hi, vr.second);
        }
        std::vector<std::pair<double, double>> box{{1.0, 1.0}};
        for (double uu : {u_lo, 0.5 * (u_lo + u_hi), u_hi})
            for (double vv : {v_lo, 0.5 * (v_lo + v_hi), v_hi}) box.emplace_back(uu, vv);
        const CflBounds at_ref = cfl_limit(w.coeffs, w.groups, w.grid.dx, {{1.0, 1.0}});
        const CflBounds over_box = cfl_limit(w.coeffs, w.groups, w.grid.dx, box);
        os << "wall '" << w.name << "'\n"
           << "  at the initial state:  heat " << at_ref.dt_heat << " ("
           << at_ref.dt_heat * m.ctx.t_0 << " s), moisture " << at_ref.dt_moisture << " ("
           << at_ref.dt_moisture * m.ctx.t_0 << " s)\n"
           << "  over the forcing box:  heat " << over_box.dt_heat << " ("
           << over_box.dt_heat * m.ctx.t_0 << " s), moisture " << over_box.dt_moisture
           << " (" << over_box.dt_moisture * m.ctx.t_0 << " s)\n"
           << "  binding bound: " << over_box.binding() << " ("
           << over_box.binding() * m.ctx.t_0 << " s); configured dt* = " << m.dt
           << (m.dt > over_box.binding() ? "  [explicit scheme unstable]" : "") << "\n";
    }
    return os.str();
}

int cmd_cfl(const std::string& path) {
    const Scenario sc = load_scenario(path);
    std::cout << cfl_report(sc.model);
    return 0;
}

int cmd_study(const std::string& path, const Overrides& o, const std::string& dt_list,
              const std::string& out_dir) {
    Scenario sc = load_scenario(path);
    apply(o, sc);
    std::vector<double> dts;
    std::stringstream ss(dt_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) dts.push_back(std::stod(tok));
    if (dts.size() < 2) throw schema_error("study: need at least two dt values");

    // shared reference, finer than the smallest requested step
    BuildingModel base = sc.model;
    base.dt = *std::min_element(dts.begin(), dts.end());
    std::cout << "computing shared reference...\n";
    const ReferenceSolution ref = compute_reference(base, 4, 16, sc.cadence);

    const StudyResult study =
        convergence_study(sc.model, sc.model.scheme, dts, [&](const BuildingModel& m) {
            const SimulationResult r = run(m, sc.cadence);
            return linf_errors(m, r, ref).eps_global;
        });

    const fs::path dir =
        out_dir.empty() ? fs::path("out") / (sc.name + "_study") : fs::path(out_dir);
    fs::create_directories(dir);
    std::ofstream csv(dir / "convergence.csv");
    write_study_csv(csv, scheme_name(sc.model.scheme), study);
    for (const auto& row : study.rows)
        std::cout << "dt* = " << row.dt << "  eps = "
                  << (row.divergent ? std::string("divergent") : std::to_string(row.eps))
                  << (row.in_fit ? "  [fit]" : "") << "\n";
    std::cout << "fitted slope: " << study.slope << " (reference Richardson gap "
              << ref.richardson_gap << ")\n";
    return 0;
}

int cmd_bench(const std::string& path, const Overrides& o, const std::string& schemes,
              const std::string& out_dir) {
    Scenario sc = load_scenario(path);
    apply(o, sc);
    std::vector<BenchRow> rows;
    std::stringstream ss(schemes);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        BuildingModel m = sc.model;
        m.scheme = scheme_from_name(tok);
        const SimulationResult r = run(m, sc.cadence);
        rows.push_back(BenchRow{tok, r.wall_clock_s, r.mean_subiters, r.max_subiters_seen});
        std::cout << tok << ": " << r.wall_clock_s << " s, mean sub-iterations "
                  << r.mean_subiters << ", max " << r.max_subiters_seen << "\n";
    }
    if (rows.size() >= 2) {
        std::cout << "wall-clock ratio " << rows[0].scheme << "/" << rows[1].scheme << " = "
                  << rows[0].wall_clock_s / rows[1].wall_clock_s << "\n";
    }
    const fs::path dir =
        out_dir.empty() ? fs::path("out") / (sc.name + "_bench") : fs::path(out_dir);
    fs::create_directories(dir);
    std::ofstream csv(dir / "bench.csv");
    write_bench_csv(csv, rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled heat and moisture wall/zone simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir, dt_list, schemes = "df,euler-implicit";
    Overrides o;
    bool with_reference = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("scenario", scenario_path, "scenario file")->required();
        cmd->add_option("--scheme", o.scheme, "df | euler-implicit | euler-explicit");
        cmd->add_option("--dt-star", o.dt, "time step override");
        cmd->add_option("--dx-star", o.dx, "grid spacing override");
        cmd->add_option("--eta", o.eta, "fixed-point tolerance override (absolute)");
        cmd->add_option("--horizon", o.horizon, "simulation horizon override");
        cmd->add_option("--out", out_dir, "output directory");
    };

    CLI::App* runc = app.add_subcommand("run", "simulate and write time series");
    add_common(runc);
    runc->add_flag("--reference", with_reference, "compare against a fine-grid reference");

    CLI::App* study = app.add_subcommand("study", "temporal convergence study");
    add_common(study);
    study->add_option("--dt-list", dt_list, "comma-separated dt* values")->required();

    CLI::App* bench = app.add_subcommand("bench", "wall-clock comparison across schemes");
    add_common(bench);
    bench->add_option("--schemes", schemes, "comma-separated scheme list");

    CLI::App* cfl = app.add_subcommand("cfl", "explicit-scheme stability report");
    cfl->add_option("scenario", scenario_path, "scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (runc->parsed()) return cmd_run(scenario_path, o, with_reference, out_dir);
        if (study->parsed()) return cmd_study(scenario_path, o, dt_list, out_dir);
        if (bench->parsed()) return cmd_bench(scenario_path, o, schemes, out_dir);
        if (cfl->parsed()) return cmd_cfl(scenario_path);
    } catch (const schema_error& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const scaling_error& e) {
        std::cerr << "scaling error: " << e.what() << "\n";
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const convergence_error& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
