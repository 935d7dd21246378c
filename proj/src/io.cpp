#include "mmsph/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace mmsph::io {

using nlohmann::json;

Snapshot make_snapshot(const Simulation& sim) {
    const ParticleSystem& ps = sim.particles();
    const MaterialParams& mat = sim.config().material;
    Snapshot snap;
    snap.time = sim.time();
    snap.delta_p = sim.config().delta_p;
    const std::size_t n = ps.size();
    snap.positions = ps.x;
    snap.velocities = ps.v;
    snap.density = ps.rho;
    snap.pressure.resize(n);
    snap.von_mises_stress.resize(n);
    snap.eps_pl = ps.eps_pl;
    snap.temperature = ps.T;
    snap.body_id.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        snap.pressure[i] = eos_pressure(ps.rho[i], mat);
        snap.von_mises_stress[i] = ps.is_tool(i) ? 0.0 : von_mises(ps.s[i]);
        snap.body_id[i] = static_cast<int>(ps.body[i]);
    }
    return snap;
}

namespace {

void write_scalar_array(std::ofstream& f, const std::string& name,
                        const std::vector<double>& data) {
    f << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : data) f << v << "\n";
}

}  // namespace

void write_vtk_snapshot(const Snapshot& snap, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_vtk_snapshot: cannot open '" + path + "'");
    f << std::setprecision(12);
    const std::size_t n = snap.size();
    f << "# vtk DataFile Version 3.0\n";
    f << "mmsph snapshot time=" << snap.time << " delta_p=" << snap.delta_p << "\n";
    f << "ASCII\nDATASET POLYDATA\n";
    f << "POINTS " << n << " double\n";
    for (const Vec3& p : snap.positions) f << p.x << " " << p.y << " " << p.z << "\n";
    f << "VERTICES " << n << " " << 2 * n << "\n";
    for (std::size_t i = 0; i < n; ++i) f << "1 " << i << "\n";
    f << "POINT_DATA " << n << "\n";
    write_scalar_array(f, "density", snap.density);
    write_scalar_array(f, "pressure", snap.pressure);
    write_scalar_array(f, "von_mises", snap.von_mises_stress);
    write_scalar_array(f, "eps_pl", snap.eps_pl);
    write_scalar_array(f, "temperature", snap.temperature);
    f << "SCALARS body_id int 1\nLOOKUP_TABLE default\n";
    for (int b : snap.body_id) f << b << "\n";
    f << "VECTORS velocity double\n";
    for (const Vec3& v : snap.velocities) f << v.x << " " << v.y << " " << v.z << "\n";
    if (!f) throw std::runtime_error("write_vtk_snapshot: write failed for '" + path + "'");
}

Snapshot read_vtk_snapshot(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("read_vtk_snapshot: cannot open '" + path + "'");
    Snapshot snap;
    std::string line;
    std::getline(f, line);  // version
    std::getline(f, line);  // title
    {
        const auto tpos = line.find("time=");
        if (tpos != std::string::npos) snap.time = std::stod(line.substr(tpos + 5));
        const auto dpos = line.find("delta_p=");
        if (dpos != std::string::npos) snap.delta_p = std::stod(line.substr(dpos + 8));
    }
    std::size_t n = 0;
    std::string word;
    while (f >> word) {
        if (word == "POINTS") {
            std::string type;
            f >> n >> type;
            snap.positions.resize(n);
            for (auto& p : snap.positions) f >> p.x >> p.y >> p.z;
        } else if (word == "SCALARS") {
            std::string name, type;
            int comps;
            f >> name >> type >> comps;
            f >> word >> word;  // LOOKUP_TABLE default
            std::vector<double>* target = nullptr;
            if (name == "density") target = &snap.density;
            else if (name == "pressure") target = &snap.pressure;
            else if (name == "von_mises") target = &snap.von_mises_stress;
            else if (name == "eps_pl") target = &snap.eps_pl;
            else if (name == "temperature") target = &snap.temperature;
            if (name == "body_id") {
                snap.body_id.resize(n);
                for (auto& b : snap.body_id) f >> b;
            } else if (target) {
                target->resize(n);
                for (auto& v : *target) f >> v;
            }
        } else if (word == "VECTORS") {
            std::string name, type;
            f >> name >> type;
            snap.velocities.resize(n);
            for (auto& v : snap.velocities) f >> v.x >> v.y >> v.z;
        }
    }
    return snap;
}

std::pair<double, double> measure_taylor_metrics(const Snapshot& snap, double slab_factor) {
    const double dp = snap.delta_p;
    double zmin = std::numeric_limits<double>::infinity(), zmax = -zmin;
    for (std::size_t i = 0; i < snap.size(); ++i) {
        if (!snap.body_id.empty() && snap.body_id[i] != 0) continue;
        zmin = std::min(zmin, snap.positions[i].z);
        zmax = std::max(zmax, snap.positions[i].z);
    }
    // axis from the in-plane centroid of the body
    double cx = 0.0, cy = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < snap.size(); ++i) {
        if (!snap.body_id.empty() && snap.body_id[i] != 0) continue;
        cx += snap.positions[i].x;
        cy += snap.positions[i].y;
        ++count;
    }
    cx /= count;
    cy /= count;
    double rmax = 0.0;
    for (std::size_t i = 0; i < snap.size(); ++i) {
        if (!snap.body_id.empty() && snap.body_id[i] != 0) continue;
        const Vec3& p = snap.positions[i];
        if (p.z > zmin + slab_factor * dp) continue;
        rmax = std::max(rmax, std::hypot(p.x - cx, p.y - cy));
    }
    return {zmax - zmin, 2.0 * rmax};
}

MetricsRow make_metrics_row(const Simulation& sim) {
    MetricsRow row;
    row.time = sim.time();
    const ParticleSystem& ps = sim.particles();
    if (sim.config().kind == CaseKind::taylor) {
        const Snapshot snap = make_snapshot(sim);
        std::tie(row.length, row.diameter) = measure_taylor_metrics(snap);
    } else {
        row.tool_force = norm(sim.tool_reaction());
    }
    for (std::size_t i = 0; i < ps.tool_begin; ++i) {
        row.max_eps_pl = std::max(row.max_eps_pl, ps.eps_pl[i]);
        row.max_T = std::max(row.max_T, ps.T[i]);
    }
    return row;
}

namespace {

void write_metrics_header(std::ostream& f) {
    f << "time,length,diameter,tool_force,max_eps_pl,max_T\n";
}

void write_metrics_row(std::ostream& f, const MetricsRow& r) {
    f << r.time << "," << r.length << "," << r.diameter << "," << r.tool_force << ","
      << r.max_eps_pl << "," << r.max_T << "\n";
}

}  // namespace

void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_metrics_csv: cannot open '" + path + "'");
    f << std::setprecision(12);
    write_metrics_header(f);
    for (const auto& r : rows) write_metrics_row(f, r);
}

// ---------------------------------------------------------------------------
// configuration parsing

namespace {

[[noreturn]] void bad_key(const std::string& section, const std::string& key) {
    throw ConfigError("config: unknown key '" + (section.empty() ? key : section + "." + key) +
                      "'");
}

void check_keys(const json& j, const std::string& section,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (item.key() == a) { ok = true; break; }
        if (!ok) bad_key(section, item.key());
    }
}

double as_number(const json& j, const std::string& key) {
    if (!j.is_number()) throw ConfigError("config: '" + key + "' must be a number");
    return j.get<double>();
}

Vec3 as_vec3(const json& j, const std::string& key) {
    if (!j.is_array() || (j.size() != 3 && j.size() != 2))
        throw ConfigError("config: '" + key + "' must be an array of 2 or 3 numbers");
    Vec3 v;
    v.x = as_number(j[0], key);
    v.y = as_number(j[1], key);
    if (j.size() == 3) v.z = as_number(j[2], key);
    return v;
}

void parse_material(const json& j, MaterialParams& m) {
    check_keys(j, "material",
               {"rho0", "E", "nu", "mu", "K", "A", "B", "n", "C", "m", "eps_dot_0", "T_ref",
                "T_melt", "C_p", "chi"});
    const bool elastic_pair = j.contains("E") || j.contains("nu");
    const bool moduli_pair = j.contains("mu") || j.contains("K");
    if (elastic_pair && !moduli_pair) m.mu = m.K = 0.0;  // user-supplied (E, nu) wins
    if (j.contains("rho0")) m.rho0 = as_number(j["rho0"], "material.rho0");
    if (j.contains("E")) m.E = as_number(j["E"], "material.E");
    if (j.contains("nu")) m.nu = as_number(j["nu"], "material.nu");
    if (j.contains("mu")) m.mu = as_number(j["mu"], "material.mu");
    if (j.contains("K")) m.K = as_number(j["K"], "material.K");
    if (j.contains("A")) m.A = as_number(j["A"], "material.A");
    if (j.contains("B")) m.B = as_number(j["B"], "material.B");
    if (j.contains("n")) m.n_hard = as_number(j["n"], "material.n");
    if (j.contains("C")) m.C_rate = as_number(j["C"], "material.C");
    if (j.contains("m")) m.m_therm = as_number(j["m"], "material.m");
    if (j.contains("eps_dot_0")) m.eps_dot_0 = as_number(j["eps_dot_0"], "material.eps_dot_0");
    if (j.contains("T_ref")) m.T_ref = as_number(j["T_ref"], "material.T_ref");
    if (j.contains("T_melt")) m.T_melt = as_number(j["T_melt"], "material.T_melt");
    if (j.contains("C_p")) m.C_p = as_number(j["C_p"], "material.C_p");
    if (j.contains("chi")) m.chi = as_number(j["chi"], "material.chi");
}

}  // namespace

CaseConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    check_keys(j, "",
               {"preset", "case", "solver", "dim", "delta_p", "h", "lattice", "geometry",
                "initial_velocity", "wall_z", "material", "tool", "fixed", "esph", "contact",
                "tlsph", "step"});

    CaseConfig cfg;
    if (j.contains("preset")) {
        try {
            cfg = preset(j["preset"].get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    } else {
        for (const char* req : {"case", "delta_p", "h", "geometry", "material", "step"})
            if (!j.contains(req))
                throw ConfigError(std::string("config: missing required key '") + req + "'");
    }

    if (j.contains("case")) {
        const std::string k = j["case"].get<std::string>();
        if (k == "taylor") cfg.kind = CaseKind::taylor;
        else if (k == "pressing") cfg.kind = CaseKind::pressing;
        else if (k == "cutting") cfg.kind = CaseKind::cutting;
        else throw ConfigError("config: 'case' must be taylor|pressing|cutting");
        if (!j.contains("preset")) cfg.dim = (cfg.kind == CaseKind::cutting) ? 2 : 3;
    }
    if (j.contains("solver")) {
        const std::string s = j["solver"].get<std::string>();
        if (s == "esph") cfg.solver = SolverKind::esph;
        else if (s == "tlsph") cfg.solver = SolverKind::tlsph;
        else throw ConfigError("config: 'solver' must be esph|tlsph");
    }
    if (j.contains("dim")) {
        cfg.dim = j["dim"].get<int>();
        if (cfg.dim != 2 && cfg.dim != 3) throw ConfigError("config: 'dim' must be 2 or 3");
    }
    if (j.contains("delta_p")) {
        cfg.delta_p = as_number(j["delta_p"], "delta_p");
        if (!(cfg.delta_p > 0.0)) throw ConfigError("config: 'delta_p' must be positive");
        cfg.esph_params.delta_p = cfg.delta_p;
    }
    if (j.contains("h")) {
        cfg.h = as_number(j["h"], "h");
        if (!(cfg.h > 0.0)) throw ConfigError("config: 'h' must be positive");
    }
    if (j.contains("lattice")) {
        const std::string s = j["lattice"].get<std::string>();
        if (s == "cell") cfg.lattice = LatticeMode::cell;
        else if (s == "node") cfg.lattice = LatticeMode::node;
        else throw ConfigError("config: 'lattice' must be cell|node");
    }
    if (j.contains("geometry")) {
        const json& g = j["geometry"];
        check_keys(g, "geometry", {"box", "cylinder"});
        if (g.contains("box")) cfg.box_extents = as_vec3(g["box"], "geometry.box");
        if (g.contains("cylinder")) {
            const json& c = g["cylinder"];
            check_keys(c, "geometry.cylinder", {"length", "diameter"});
            cfg.cyl_length = as_number(c.at("length"), "geometry.cylinder.length");
            cfg.cyl_diameter = as_number(c.at("diameter"), "geometry.cylinder.diameter");
        }
    }
    if (j.contains("initial_velocity"))
        cfg.initial_velocity = as_vec3(j["initial_velocity"], "initial_velocity");
    if (j.contains("wall_z")) {
        if (j["wall_z"].is_null()) {
            cfg.has_wall = false;
        } else {
            cfg.has_wall = true;
            cfg.wall_z = as_number(j["wall_z"], "wall_z");
        }
    }
    if (j.contains("material")) parse_material(j["material"], cfg.material);
    if (j.contains("tool")) {
        const json& t = j["tool"];
        check_keys(t, "tool", {"extents", "velocity", "feed"});
        cfg.has_tool = true;
        if (t.contains("extents")) cfg.tool_extents = as_vec3(t["extents"], "tool.extents");
        if (t.contains("velocity")) cfg.tool_velocity = as_vec3(t["velocity"], "tool.velocity");
        if (t.contains("feed")) cfg.feed = as_number(t["feed"], "tool.feed");
    }
    if (j.contains("fixed")) {
        const json& fx = j["fixed"];
        check_keys(fx, "fixed", {"faces", "layers"});
        if (fx.contains("faces")) {
            cfg.fixed_faces.clear();
            for (const auto& f : fx["faces"]) cfg.fixed_faces.push_back(f.get<std::string>());
        }
        if (fx.contains("layers")) cfg.fixed_layers = fx["layers"].get<int>();
    }
    if (j.contains("esph")) {
        const json& e = j["esph"];
        check_keys(e, "esph", {"beta1", "beta2", "gamma_ap", "n_ap", "eps_visc"});
        if (e.contains("beta1")) cfg.esph_params.beta1 = as_number(e["beta1"], "esph.beta1");
        if (e.contains("beta2")) cfg.esph_params.beta2 = as_number(e["beta2"], "esph.beta2");
        if (e.contains("gamma_ap"))
            cfg.esph_params.gamma_ap = as_number(e["gamma_ap"], "esph.gamma_ap");
        if (e.contains("n_ap")) cfg.esph_params.n_ap = as_number(e["n_ap"], "esph.n_ap");
        if (e.contains("eps_visc"))
            cfg.esph_params.eps_visc = as_number(e["eps_visc"], "esph.eps_visc");
    }
    // an overridden spacing rescales the pinball radius (0.5 delta_p)
    // unless the config pins the radius explicitly
    if (j.contains("delta_p") && cfg.contact_params.radius > 0.0)
        cfg.contact_params.radius = 0.5 * cfg.delta_p;
    if (j.contains("contact")) {
        const json& c = j["contact"];
        check_keys(c, "contact", {"k_p", "radius", "normal_rate"});
        if (c.contains("k_p")) cfg.contact_params.k_p = as_number(c["k_p"], "contact.k_p");
        if (c.contains("radius"))
            cfg.contact_params.radius = as_number(c["radius"], "contact.radius");
        if (c.contains("normal_rate")) cfg.contact_params.normal_rate = c["normal_rate"].get<bool>();
    }
    if (j.contains("tlsph")) {
        const json& t = j["tlsph"];
        check_keys(t, "tlsph", {"ref_update_threshold", "paper_pk1", "hg_alpha"});
        if (t.contains("ref_update_threshold"))
            cfg.tlsph_params.ref_update_threshold =
                as_number(t["ref_update_threshold"], "tlsph.ref_update_threshold");
        if (t.contains("paper_pk1")) cfg.tlsph_params.paper_pk1 = t["paper_pk1"].get<bool>();
        if (t.contains("hg_alpha"))
            cfg.tlsph_params.hg_alpha = as_number(t["hg_alpha"], "tlsph.hg_alpha");
    }
    if (j.contains("step")) {
        const json& s = j["step"];
        check_keys(s, "step", {"dt", "cfl", "use_cfl", "t_end", "vtk_every"});
        if (s.contains("dt")) cfg.step.dt = as_number(s["dt"], "step.dt");
        if (s.contains("cfl")) cfg.step.cfl = as_number(s["cfl"], "step.cfl");
        if (s.contains("use_cfl")) cfg.step.use_cfl = s["use_cfl"].get<bool>();
        if (s.contains("t_end")) cfg.step.t_end = as_number(s["t_end"], "step.t_end");
        if (s.contains("vtk_every")) cfg.step.vtk_every = s["vtk_every"].get<int>();
    }

    try {
        MaterialParams probe = cfg.material;
        probe.finalize();
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

std::string config_to_json(const CaseConfig& cfg) {
    json j;
    if (!cfg.name.empty()) j["preset"] = cfg.name;
    j["case"] = cfg.kind == CaseKind::taylor ? "taylor"
               : cfg.kind == CaseKind::pressing ? "pressing" : "cutting";
    j["solver"] = cfg.solver == SolverKind::esph ? "esph" : "tlsph";
    j["dim"] = cfg.dim;
    j["delta_p"] = cfg.delta_p;
    j["h"] = cfg.h;
    j["lattice"] = cfg.lattice == LatticeMode::cell ? "cell" : "node";
    if (cfg.kind == CaseKind::taylor) {
        j["geometry"]["cylinder"]["length"] = cfg.cyl_length;
        j["geometry"]["cylinder"]["diameter"] = cfg.cyl_diameter;
    } else {
        j["geometry"]["box"] = {cfg.box_extents.x, cfg.box_extents.y, cfg.box_extents.z};
    }
    j["initial_velocity"] = {cfg.initial_velocity.x, cfg.initial_velocity.y,
                             cfg.initial_velocity.z};
    if (cfg.has_wall) j["wall_z"] = cfg.wall_z;
    json& m = j["material"];
    m["rho0"] = cfg.material.rho0;
    m["E"] = cfg.material.E;
    m["nu"] = cfg.material.nu;
    m["mu"] = cfg.material.mu;
    m["K"] = cfg.material.K;
    m["A"] = cfg.material.A;
    m["B"] = cfg.material.B;
    m["n"] = cfg.material.n_hard;
    m["C"] = cfg.material.C_rate;
    m["m"] = cfg.material.m_therm;
    m["eps_dot_0"] = cfg.material.eps_dot_0;
    m["T_ref"] = cfg.material.T_ref;
    m["T_melt"] = cfg.material.T_melt;
    m["C_p"] = cfg.material.C_p;
    m["chi"] = cfg.material.chi;
    if (cfg.has_tool) {
        j["tool"]["extents"] = {cfg.tool_extents.x, cfg.tool_extents.y, cfg.tool_extents.z};
        j["tool"]["velocity"] = {cfg.tool_velocity.x, cfg.tool_velocity.y, cfg.tool_velocity.z};
        j["tool"]["feed"] = cfg.feed;
    }
    if (!cfg.fixed_faces.empty()) {
        j["fixed"]["faces"] = cfg.fixed_faces;
        j["fixed"]["layers"] = cfg.fixed_layers;
    }
    j["esph"] = {{"beta1", cfg.esph_params.beta1},
                 {"beta2", cfg.esph_params.beta2},
                 {"gamma_ap", cfg.esph_params.gamma_ap},
                 {"n_ap", cfg.esph_params.n_ap},
                 {"eps_visc", cfg.esph_params.eps_visc}};
    j["contact"] = {{"k_p", cfg.contact_params.k_p},
                    {"radius", cfg.contact_params.radius},
                    {"normal_rate", cfg.contact_params.normal_rate}};
    j["tlsph"] = {{"ref_update_threshold", cfg.tlsph_params.ref_update_threshold},
                  {"paper_pk1", cfg.tlsph_params.paper_pk1},
                  {"hg_alpha", cfg.tlsph_params.hg_alpha}};
    j["step"] = {{"dt", cfg.step.dt},
                 {"cfl", cfg.step.cfl},
                 {"use_cfl", cfg.step.use_cfl},
                 {"t_end", cfg.step.t_end},
                 {"vtk_every", cfg.step.vtk_every}};
    return j.dump(2);
}

int run_case_to_files(Simulation& sim, const RunOptions& opts) {
    namespace fs = std::filesystem;
    fs::create_directories(opts.out_dir);
    CaseConfig cfg = sim.config();
    if (opts.vtk_every >= 0) cfg.step.vtk_every = opts.vtk_every;
    if (opts.t_end > 0.0) cfg.step.t_end = opts.t_end;

    auto manifest_path = fs::path(opts.out_dir) / "manifest.json";
    auto write_manifest = [&](const std::string& status) {
        json m;
        m["generator"] = "mmsph 0.1.0";
        m["status"] = status;
        m["steps"] = sim.steps_taken();
        m["time"] = sim.time();
        m["config"] = json::parse(config_to_json(cfg));
        std::ofstream f(manifest_path);
        f << m.dump(2) << "\n";
    };
    write_manifest("running");

    std::ofstream metrics(fs::path(opts.out_dir) / "metrics.csv");
    metrics << std::setprecision(12);
    write_metrics_header(metrics);

    auto snap_path = [&](long stepno) {
        std::ostringstream s;
        s << "snap_" << std::setw(7) << std::setfill('0') << stepno << ".vtk";
        return (fs::path(opts.out_dir) / s.str()).string();
    };

    const double t_end = cfg.step.t_end;
    int exit_code = 0;
    std::string status = "completed";
    try {
        while (sim.time() < t_end * (1.0 - 1e-12)) {
            if (cfg.step.vtk_every > 0 && sim.steps_taken() % cfg.step.vtk_every == 0)
                write_vtk_snapshot(make_snapshot(sim), snap_path(sim.steps_taken()));
            if (sim.steps_taken() % opts.metrics_every == 0) {
                write_metrics_row(metrics, make_metrics_row(sim));
                metrics.flush();
            }
            const double dt = std::min(sim.next_dt(), t_end - sim.time());
            sim.step(dt);
            if (!opts.quiet && sim.steps_taken() % 1000 == 0)
                std::cout << "step " << sim.steps_taken() << "  t = " << sim.time() << " / "
                          << t_end << "\n"
                          << std::flush;
        }
        // always leave a final-state snapshot, aligned to the stride or not
        if (cfg.step.vtk_every > 0)
            write_vtk_snapshot(make_snapshot(sim), snap_path(sim.steps_taken()));
        write_metrics_row(metrics, make_metrics_row(sim));
    } catch (const NumericalAbort& e) {
        std::cerr << "numerical abort: " << e.what() << "\n";
        status = std::string("aborted: ") + e.what();
        exit_code = 2;
    }
    write_manifest(status);
    return exit_code;
}

}  // namespace mmsph::io
