#include "hygro/scenario.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hygro/errors.hpp"

namespace hygro {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw schema_error("scenario: " + path + ": " + what);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) fail(path + "." + key, "missing");
    return j.at(key);
}

double number(const json& j, const std::string& key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return j.at(key).get<double>();
}

std::string text(const json& j, const std::string& key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

Signal parse_signal(const json& j, const std::string& path) {
    if (j.is_number()) return Signal::constant(j.get<double>());
    if (!j.is_object()) fail(path, "expected a signal object or number");
    const std::string form = j.value("form", "constant");
    const double base = number_or(j, "base", 0.0);
    Signal s;
    if (form == "constant") {
        s = Signal::constant(base);
    } else if (form == "sinusoid") {
        s = Signal::sinusoid(base, number(j, "amplitude", path), number(j, "period", path),
                             number_or(j, "phase", 0.0));
    } else if (form == "sin_squared") {
        s = Signal::sin_squared(base, number(j, "amplitude", path), number(j, "period", path),
                                number_or(j, "phase", 0.0));
    } else if (form == "schedule") {
        std::vector<Signal::Window> windows;
        if (j.contains("windows")) {
            for (const auto& w : j.at("windows"))
                windows.push_back(Signal::Window{number(w, "from", path), number(w, "to", path),
                                                 number(w, "value", path)});
        }
        s = Signal::schedule(base, std::move(windows));
    } else {
        fail(path + ".form", "unknown signal form '" + form + "'");
    }
    return s;
}

struct SignalTable {
    std::map<std::string, Signal> named;

    Signal resolve(const json& j, const std::string& path) const {
        if (j.is_string()) {
            const auto it = named.find(j.get<std::string>());
            if (it == named.end())
                fail(path, "unknown signal '" + j.get<std::string>() + "'");
            return it->second;
        }
        return parse_signal(j, path);
    }
};

struct MaterialEntry {
    bool nonlinear = false;
    CoefficientSet constant;  // frozen set when not nonlinear
};

CoefficientSet parse_constant_set(const json& j, const std::string& path) {
    CoefficientSet c;
    c.c_M = number(j, "c_M", path);
    c.k_M = number(j, "k_M", path);
    c.c_TT = number(j, "c_TT", path);
    c.k_TT = number(j, "k_TT", path);
    c.c_TM = number(j, "c_TM", path);
    c.k_TM = number(j, "k_TM", path);
    return c;
}

json echo_groups(const WallDimensionless& w) {
    json g;
    g["Fo_M"] = w.groups.Fo_M;
    g["Fo_TT"] = w.groups.Fo_TT;
    g["Fo_TM"] = w.groups.Fo_TM;
    g["gamma"] = w.groups.gamma;
    for (int f = 0; f < 2; ++f) {
        json b;
        b["Bi_M"] = w.face[f].Bi_M;
        b["Bi_TT"] = w.face[f].Bi_TT;
        b["Bi_TM"] = w.face[f].Bi_TM;
        g[f == 0 ? "face_x0" : "face_x1"] = b;
    }
    return g;
}

}  // namespace

Scheme scheme_from_name(const std::string& name) {
    if (name == "df" || name == "dufort-frankel") return Scheme::DufortFrankel;
    if (name == "euler-implicit") return Scheme::EulerImplicit;
    if (name == "euler-explicit") return Scheme::EulerExplicit;
    throw schema_error("unknown scheme '" + name + "'");
}

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::DufortFrankel: return "df";
        case Scheme::EulerImplicit: return "euler-implicit";
        case Scheme::EulerExplicit: return "euler-explicit";
    }
    return "?";
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw schema_error("scenario: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw schema_error("scenario: " + path + ": " + e.what());
    }
    return parse_scenario(j);
}

Scenario parse_scenario(const json& j) {
    if (!j.is_object()) throw schema_error("scenario: top level must be an object");
    Scenario sc;
    sc.name = j.value("name", "unnamed");

    const json& jscale = require(j, "scaling", "scaling");
    const double T_i = number(jscale, "T_i_K", "scaling");
    const double phi_i = number(jscale, "phi_i", "scaling");
    const double t_0 = number(jscale, "t0_s", "scaling");
    const ScalingContext ctx = ScalingContext::from_state(T_i, phi_i, t_0);
    sc.model.ctx = ctx;

    // materials
    std::map<std::string, MaterialEntry> materials;
    const MaterialModel builtin_material;
    if (j.contains("materials")) {
        for (const auto& [mname, mj] : j.at("materials").items()) {
            const std::string mpath = "materials." + mname;
            MaterialEntry e;
            if (mj.contains("constant")) {
                e.constant = parse_constant_set(mj.at("constant"), mpath + ".constant");
            } else if (mj.contains("builtin")) {
                const std::string which = mj.at("builtin").get<std::string>();
                if (which != "load_bearing")
                    fail(mpath + ".builtin", "unknown material '" + which + "'");
                if (mj.contains("linearize_at")) {
                    const json& lj = mj.at("linearize_at");
                    e.constant = linearize(builtin_material, number(lj, "T_K", mpath),
                                           number(lj, "phi", mpath));
                } else {
                    e.nonlinear = true;
                    e.constant = builtin_material.evaluate(T_i, ctx.P_vi);  // reference set
                }
            } else {
                fail(mpath, "needs either 'constant' or 'builtin'");
            }
            materials[mname] = e;
        }
    }

    // named signals
    SignalTable signals;
    if (j.contains("signals")) {
        for (const auto& [sname, sj] : j.at("signals").items())
            signals.named[sname] = parse_signal(sj, "signals." + sname);
    }

    const json& jrun = require(j, "run", "run");
    const double dx = number(jrun, "dx_star", "run");
    sc.model.scheme = scheme_from_name(text(jrun, "scheme", "run"));
    sc.model.dt = number(jrun, "dt_star", "run");
    sc.model.horizon = number(jrun, "horizon", "run");
    sc.model.eta_factor = number_or(jrun, "eta_factor", 1e-2);
    sc.model.max_subiters = static_cast<int>(number_or(jrun, "max_subiters", 100));
    sc.model.divergence_norm = number_or(jrun, "divergence_norm", 1e3);
    sc.cadence = number_or(jrun, "cadence", 0.1);

    if (j.contains("outdoor")) {
        const json& jo = j.at("outdoor");
        if (jo.contains("u_inf")) sc.model.outdoor_u = signals.resolve(jo.at("u_inf"), "outdoor.u_inf");
        if (jo.contains("v_inf")) sc.model.outdoor_v = signals.resolve(jo.at("v_inf"), "outdoor.v_inf");
    }

    // zone name -> index
    std::map<std::string, int> zone_index;
    if (j.contains("zones")) {
        int zi = 0;
        for (const auto& zj : j.at("zones"))
            zone_index[text(zj, "name", "zones")] = zi++;
    }

    json dimless_echo;
    dimless_echo["scaling"] = {{"T_i_K", ctx.T_i}, {"P_vi_Pa", ctx.P_vi}, {"t0_s", ctx.t_0}};

    // walls
    std::map<std::string, int> wall_index;
    struct WallAux {
        double area = 0.0;
        WallDimensionless dimless;
    };
    std::vector<WallAux> aux;
    const json& jwalls = require(j, "walls", "walls");
    for (const auto& wj : jwalls) {
        const std::string wname = text(wj, "name", "walls");
        const std::string wpath = "walls." + wname;
        const std::string mat = text(wj, "material", wpath);
        const auto mit = materials.find(mat);
        if (mit == materials.end()) fail(wpath + ".material", "unknown material '" + mat + "'");

        BuildingWall w;
        w.name = wname;
        w.thickness = number(wj, "thickness_m", wpath);
        w.grid = Grid1D::with_spacing(dx);
        const json& jfaces = require(wj, "faces", wpath);
        if (!jfaces.is_array() || jfaces.size() != 2)
            fail(wpath + ".faces", "expected exactly two faces");

        double h_T[2], h_M[2];
        for (int f = 0; f < 2; ++f) {
            h_T[f] = number(jfaces[f], "h_T", wpath + ".faces");
            h_M[f] = number(jfaces[f], "h_M", wpath + ".faces");
        }
        const WallDimensionless wd =
            scale_wall(mit->second.constant, w.thickness, h_T[0], h_M[0], h_T[1], h_M[1], ctx);
        w.groups = wd.groups;
        w.biot[0] = wd.face[0];
        w.biot[1] = wd.face[1];
        w.k_TT0 = mit->second.constant.k_TT;
        w.coeffs = mit->second.nonlinear
                       ? CoefficientModel::material(builtin_material, ctx, mit->second.constant)
                       : CoefficientModel::constant();

        for (int f = 0; f < 2; ++f) {
            const json& fj = jfaces[f];
            const std::string fpath = wpath + ".faces[" + std::to_string(f) + "]";
            const std::string touches = text(fj, "touches", fpath);
            FaceAttachment& a = w.attach[f];
            if (touches == "exterior") {
                a.kind = FaceAttachment::Kind::Exterior;
                if (fj.contains("u_inf")) a.u_inf = signals.resolve(fj.at("u_inf"), fpath + ".u_inf");
                if (fj.contains("v_inf")) a.v_inf = signals.resolve(fj.at("v_inf"), fpath + ".v_inf");
                // imposed fluxes are declared dimensionally and scaled here
                if (fj.contains("g_inf_kg_m2s"))
                    a.g_inf = signals.resolve(fj.at("g_inf_kg_m2s"), fpath + ".g_inf_kg_m2s")
                                  .scaled(scale_moisture_flux(1.0, w.thickness,
                                                              mit->second.constant, ctx));
                if (fj.contains("q_inf_W_m2"))
                    a.q_inf = signals.resolve(fj.at("q_inf_W_m2"), fpath + ".q_inf_W_m2")
                                  .scaled(scale_heat_flux(1.0, w.thickness,
                                                          mit->second.constant, ctx));
            } else if (touches == "zone") {
                a.kind = FaceAttachment::Kind::Zone;
                const std::string zname = text(fj, "zone", fpath);
                const auto zit = zone_index.find(zname);
                if (zit == zone_index.end()) fail(fpath + ".zone", "unknown zone '" + zname + "'");
                a.zone = zit->second;
            } else {
                fail(fpath + ".touches", "must be 'exterior' or 'zone'");
            }
        }

        wall_index[wname] = static_cast<int>(sc.model.walls.size());
        dimless_echo["walls"][wname] = echo_groups(wd);
        sc.model.walls.push_back(std::move(w));
        aux.push_back(WallAux{number(wj, "area_m2", wpath), wd});
    }

    // zones
    if (j.contains("zones")) {
        for (const auto& zj : j.at("zones")) {
            const std::string zname = text(zj, "name", "zones");
            const std::string zpath = "zones." + zname;
            ZoneAirConfig air;
            air.volume = number(zj, "volume_m3", zpath);
            if (zj.contains("air")) {
                const json& aj = zj.at("air");
                air.rho_a = number_or(aj, "rho_a", air.rho_a);
                air.c_pa = number_or(aj, "c_pa", air.c_pa);
                air.c_pv = number_or(aj, "c_pv", air.c_pv);
            }
            air.ventilation_ach = number_or(zj, "ventilation_ach", 0.0);
            if (zj.contains("moisture_source_kg_s"))
                air.moisture_source =
                    signals.resolve(zj.at("moisture_source_kg_s"), zpath + ".moisture_source_kg_s");
            if (zj.contains("heat_source_W"))
                air.heat_source = signals.resolve(zj.at("heat_source_W"), zpath + ".heat_source_W");

            ZoneConfig zc;
            zc.name = zname;
            zc.params = scale_zone(air, ctx);
            if (zj.contains("moisture_wall_sign")) {
                const std::string s = zj.at("moisture_wall_sign").get<std::string>();
                if (s == "as_printed")
                    zc.moisture_sign = MoistureWallSign::AsPrinted;
                else if (s == "flux_consistent")
                    zc.moisture_sign = MoistureWallSign::FluxConsistent;
                else
                    fail(zpath + ".moisture_wall_sign", "must be 'as_printed' or 'flux_consistent'");
            }

            // wall links: every wall with a face touching this zone
            const int this_zone = zone_index.at(zname);
            json zecho;
            for (std::size_t wi = 0; wi < sc.model.walls.size(); ++wi) {
                for (int f = 0; f < 2; ++f) {
                    const FaceAttachment& a = sc.model.walls[wi].attach[f];
                    if (a.kind != FaceAttachment::Kind::Zone || a.zone != this_zone) continue;
                    WallDimensionless wd = aux[wi].dimless;
                    attach_wall_to_zone(wd, aux[wi].area, sc.model.walls[wi].thickness,
                                        zc.params, ctx);
                    ZoneWallLink link;
                    link.wall = static_cast<int>(wi);
                    link.face = f;
                    link.Bi_M = wd.face[f].Bi_M;
                    link.Bi_TT = wd.face[f].Bi_TT;
                    link.Bi_TM = wd.face[f].Bi_TM;
                    link.theta_T = wd.theta_T;
                    link.theta_M = wd.theta_M;
                    zc.walls.push_back(link);
                    zecho["theta"][sc.model.walls[wi].name] = {{"theta_T", wd.theta_T},
                                                               {"theta_M", wd.theta_M}};
                }
            }

            if (zj.contains("radiation")) {
                for (const auto& rj : zj.at("radiation")) {
                    RadiationLink r;
                    const std::string em = text(rj, "emitter", zpath + ".radiation");
                    const std::string re = text(rj, "receiver", zpath + ".radiation");
                    if (!wall_index.count(em)) fail(zpath + ".radiation.emitter", "unknown wall '" + em + "'");
                    if (!wall_index.count(re)) fail(zpath + ".radiation.receiver", "unknown wall '" + re + "'");
                    r.emitter_wall = wall_index.at(em);
                    r.receiver_wall = wall_index.at(re);
                    r.view_factor = number(rj, "view_factor", zpath + ".radiation");
                    r.emissivity = number(rj, "emissivity", zpath + ".radiation");
                    if (r.view_factor < 0.0 || r.view_factor > 1.0)
                        fail(zpath + ".radiation.view_factor", "must be in [0, 1]");
                    if (!(r.emissivity > 0.0 && r.emissivity <= 1.0))
                        fail(zpath + ".radiation.emissivity", "must be in (0, 1]");
                    zc.radiation.push_back(r);
                }
            }

            zecho["kappa_a_tt1"] = zc.params.kappa_a_tt1;
            zecho["g_v"] = zc.params.g_v;
            zecho["q_v1"] = zc.params.q_v1;
            zecho["q_v2"] = zc.params.q_v2;
            dimless_echo["zones"][zname] = zecho;
            sc.model.zones.push_back(std::move(zc));
        }

        // interzone links need every zone parsed first
        int zi = 0;
        for (const auto& zj : j.at("zones")) {
            if (zj.contains("interzone")) {
                ZoneAirConfig air;
                air.volume = number(zj, "volume_m3", "zones");
                if (zj.contains("air")) {
                    const json& aj = zj.at("air");
                    air.rho_a = number_or(aj, "rho_a", air.rho_a);
                    air.c_pa = number_or(aj, "c_pa", air.c_pa);
                    air.c_pv = number_or(aj, "c_pv", air.c_pv);
                }
                for (const auto& ij : zj.at("interzone")) {
                    const std::string peer = text(ij, "zone", "zones.interzone");
                    if (!zone_index.count(peer))
                        fail("zones.interzone.zone", "unknown zone '" + peer + "'");
                    const InterzoneScalars s = scale_interzone(
                        number(ij, "ach", "zones.interzone"), air,
                        sc.model.zones[zi].params, ctx);
                    ZoneInterzoneLink link;
                    link.peer = zone_index.at(peer);
                    link.g_inz = s.g_inz;
                    link.q_inz1 = s.q_inz1;
                    link.q_inz2 = s.q_inz2;
                    sc.model.zones[zi].interzone.push_back(link);
                }
            }
            ++zi;
        }
    }

    sc.model.validate();
    sc.dimensional_echo = j.dump(2);
    sc.dimensionless_echo = dimless_echo.dump(2);
    return sc;
}

}  // namespace hygro
