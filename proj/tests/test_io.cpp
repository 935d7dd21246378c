#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "mmsph/io.hpp"

using namespace mmsph;
namespace fs = std::filesystem;

namespace {

CaseConfig tiny_taylor() {
    CaseConfig c = preset("taylor");
    c.name.clear();
    c.cyl_length = 3e-3;
    c.cyl_diameter = 3e-3;
    c.step.t_end = 2.5e-7;
    return c;
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() /
                     ("mmsph_io_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("vtk snapshot round trip") {
    Simulation sim(tiny_taylor());
    sim.step(1e-8);
    io::Snapshot snap = io::make_snapshot(sim);
    REQUIRE(snap.size() > 50);
    snap.eps_pl[3] = 0.125;  // exercise non-trivial fields
    snap.temperature[4] = 431.5;

    TempDir dir;
    const std::string path = (dir.path / "snap.vtk").string();
    io::write_vtk_snapshot(snap, path);
    const io::Snapshot back = io::read_vtk_snapshot(path);

    REQUIRE(back.size() == snap.size());
    CHECK(back.time == doctest::Approx(snap.time).epsilon(1e-7));
    CHECK(back.delta_p == doctest::Approx(snap.delta_p).epsilon(1e-7));
    double worst = 0.0;
    for (std::size_t i = 0; i < snap.size(); ++i) {
        worst = std::max(worst, norm(back.positions[i] - snap.positions[i]));
        worst = std::max(worst, norm(back.velocities[i] - snap.velocities[i]));
        worst = std::max(worst, std::abs(back.density[i] - snap.density[i]) / 7830.0);
        worst = std::max(worst, std::abs(back.eps_pl[i] - snap.eps_pl[i]));
        worst = std::max(worst, std::abs(back.temperature[i] - snap.temperature[i]) / 300.0);
    }
    CHECK(worst < 1e-7);
    CHECK(back.body_id == snap.body_id);
}

TEST_CASE("taylor metrics on the undeformed bar") {
    CaseConfig cfg = preset("taylor");
    Simulation sim(cfg);
    const io::Snapshot snap = io::make_snapshot(sim);
    auto [length, diameter] = io::measure_taylor_metrics(snap);
    CHECK(std::abs(length - 37.97e-3) < cfg.delta_p);
    CHECK(std::abs(diameter - 7.595e-3) < cfg.delta_p);

    // translation invariance
    io::Snapshot moved = snap;
    for (auto& p : moved.positions) p += Vec3{0.4, -1.2, 3.3};
    auto [l2, d2] = io::measure_taylor_metrics(moved);
    CHECK(l2 == doctest::Approx(length).epsilon(1e-9));
    CHECK(d2 == doctest::Approx(diameter).epsilon(1e-9));
}

TEST_CASE("metrics csv layout") {
    std::vector<io::MetricsRow> rows(2);
    rows[0].time = 1e-6;
    rows[0].length = 0.037;
    rows[1].time = 2e-6;
    rows[1].tool_force = 123.5;
    TempDir dir;
    const std::string path = (dir.path / "m.csv").string();
    io::write_metrics_csv(rows, path);
    std::ifstream f(path);
    std::string line;
    std::getline(f, line);
    CHECK(line == "time,length,diameter,tool_force,max_eps_pl,max_T");
    int count = 0;
    while (std::getline(f, line))
        if (!line.empty()) ++count;
    CHECK(count == 2);
}

TEST_CASE("config parsing") {
    SUBCASE("preset merge with overrides") {
        const CaseConfig c = io::parse_config(
            R"({"preset": "taylor", "solver": "esph", "step": {"t_end": 1e-6}})");
        CHECK(c.kind == CaseKind::taylor);
        CHECK(c.solver == SolverKind::esph);
        CHECK(c.step.t_end == doctest::Approx(1e-6));
        CHECK(c.delta_p == doctest::Approx(0.5e-3));  // untouched preset value
        CHECK(c.step.dt == doctest::Approx(1e-8));
    }
    SUBCASE("unknown keys are named in the error") {
        try {
            io::parse_config(R"({"preset": "taylor", "stepp": {}})");
            FAIL("expected ConfigError");
        } catch (const io::ConfigError& e) {
            CHECK(std::string(e.what()).find("stepp") != std::string::npos);
        }
        try {
            io::parse_config(R"({"preset": "taylor", "esph": {"beta3": 1.0}})");
            FAIL("expected ConfigError");
        } catch (const io::ConfigError& e) {
            CHECK(std::string(e.what()).find("beta3") != std::string::npos);
        }
    }
    SUBCASE("invalid values are rejected") {
        CHECK_THROWS_AS(io::parse_config("not json"), io::ConfigError);
        CHECK_THROWS_AS(io::parse_config(R"({"preset": "nope"})"), io::ConfigError);
        CHECK_THROWS_AS(io::parse_config(R"({"preset": "taylor", "delta_p": -1.0})"),
                        io::ConfigError);
        CHECK_THROWS_AS(io::parse_config(R"({"preset": "taylor", "solver": "fem"})"),
                        io::ConfigError);
        CHECK_THROWS_AS(io::parse_config(R"({"case": "taylor"})"), io::ConfigError);
        // h / delta_p constraint enforced at parse time
        CHECK_THROWS_AS(io::parse_config(R"({"preset": "taylor", "h": 5e-3})"),
                        io::ConfigError);
    }
    SUBCASE("material override by (E, nu) wins over preset moduli") {
        const CaseConfig c = io::parse_config(
            R"({"preset": "taylor", "material": {"E": 100e9, "nu": 0.25}})");
        MaterialParams m = c.material;
        m.finalize();
        CHECK(m.E == doctest::Approx(100e9));
        CHECK(m.mu == doctest::Approx(100e9 / 2.5));
    }
}

TEST_CASE("config echo round trip") {
    for (const std::string& name : preset_names()) {
        const CaseConfig a = preset(name);
        const CaseConfig b = io::parse_config(io::config_to_json(a));
        CHECK(b.kind == a.kind);
        CHECK(b.dim == a.dim);
        CHECK(b.delta_p == doctest::Approx(a.delta_p).epsilon(1e-12));
        CHECK(b.h == doctest::Approx(a.h).epsilon(1e-12));
        CHECK(b.step.dt == doctest::Approx(a.step.dt).epsilon(1e-12));
        CHECK(b.step.t_end == doctest::Approx(a.step.t_end).epsilon(1e-12));
        CHECK(b.feed == doctest::Approx(a.feed).epsilon(1e-12));
        CHECK(b.esph_params.beta1 == doctest::Approx(a.esph_params.beta1));
        CHECK(b.contact_params.k_p == doctest::Approx(a.contact_params.k_p));
        CHECK(b.has_tool == a.has_tool);
        CHECK(b.has_wall == a.has_wall);
        CHECK(b.fixed_faces == a.fixed_faces);
    }
}

TEST_CASE("run loop writes snapshots, metrics and a manifest") {
    CaseConfig cfg = tiny_taylor();
    Simulation sim(cfg);
    TempDir dir;
    io::RunOptions opts;
    opts.out_dir = (dir.path / "out").string();
    opts.vtk_every = 10;
    opts.metrics_every = 5;
    opts.quiet = true;
    const int rc = io::run_case_to_files(sim, opts);
    CHECK(rc == 0);
    CHECK(sim.steps_taken() == 25);  // 2.5e-7 / 1e-8

    int vtks = 0;
    for (const auto& e : fs::directory_iterator(opts.out_dir))
        if (e.path().extension() == ".vtk") ++vtks;
    CHECK(vtks == 25 / 10 + 2);  // steps 0, 10, 20, plus the final state at 25
    CHECK(fs::exists(fs::path(opts.out_dir) / "metrics.csv"));
    CHECK(fs::exists(fs::path(opts.out_dir) / "manifest.json"));

    std::ifstream mf(fs::path(opts.out_dir) / "manifest.json");
    std::string manifest((std::istreambuf_iterator<char>(mf)),
                         std::istreambuf_iterator<char>());
    CHECK(manifest.find("\"status\": \"completed\"") != std::string::npos);
    CHECK(manifest.find("\"case\": \"taylor\"") != std::string::npos);
}
