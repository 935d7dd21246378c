#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mmsph/integrator.hpp"
#include "mmsph/scenes.hpp"

namespace mmsph::io {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Field bundle matching one VTK snapshot.
struct Snapshot {
    double time = 0.0;
    double delta_p = 0.0;
    std::vector<Vec3> positions;
    std::vector<Vec3> velocities;
    std::vector<double> density;
    std::vector<double> pressure;
    std::vector<double> von_mises_stress;
    std::vector<double> eps_pl;
    std::vector<double> temperature;
    std::vector<int> body_id;

    std::size_t size() const { return positions.size(); }
};

Snapshot make_snapshot(const Simulation& sim);

// Legacy ASCII VTK polydata: points, vertices, six scalar arrays and the
// velocity vector array.
void write_vtk_snapshot(const Snapshot& snap, const std::string& path);

// Reads files produced by write_vtk_snapshot (round-trip/testing aid).
Snapshot read_vtk_snapshot(const std::string& path);

// (length, mushroom diameter) of a Taylor cylinder along z, measured as
// particle-centre extents (z span; twice the largest radial distance in
// the bottom slab). The mushroom slab height is 2 dp unless overridden.
std::pair<double, double> measure_taylor_metrics(const Snapshot& snap,
                                                 double slab_factor = 2.0);

struct MetricsRow {
    double time = 0.0;
    double length = 0.0;
    double diameter = 0.0;
    double tool_force = 0.0;
    double max_eps_pl = 0.0;
    double max_T = 0.0;
};

MetricsRow make_metrics_row(const Simulation& sim);

void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::string& path);

// JSON case configuration: either {"preset": name, ...overrides} or a
// fully specified case. Unknown keys are rejected.
CaseConfig parse_config(const std::string& text);

// Full config echo, used for the run manifest.
std::string config_to_json(const CaseConfig& cfg);

struct RunOptions {
    std::string out_dir = "out";
    int vtk_every = -1;      // override; -1 keeps config value
    double t_end = -1.0;     // override; <0 keeps config value
    int metrics_every = 100; // metrics row stride in steps
    bool quiet = false;
};

// Drives a simulation to t_end, writing snapshots, metrics.csv and
// manifest.json. Returns the process exit code contract:
// 0 success, 2 numerical abort.
int run_case_to_files(Simulation& sim, const RunOptions& opts);

}  // namespace mmsph::io
