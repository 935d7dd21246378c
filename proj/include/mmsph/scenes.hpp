#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mmsph/contact.hpp"
#include "mmsph/esph.hpp"
#include "mmsph/material.hpp"
#include "mmsph/state.hpp"
#include "mmsph/tlsph.hpp"

namespace mmsph {

enum class CaseKind { taylor, pressing, cutting };
enum class SolverKind { esph, tlsph };
enum class LatticeMode { cell, node };

struct StepConfig {
    double dt = 0.0;        // fixed step [s]; ignored when use_cfl
    double cfl = 0.3;
    bool use_cfl = false;
    double t_end = 0.0;     // [s]
    int vtk_every = 0;      // snapshot stride in steps; 0 disables
};

struct CaseConfig {
    std::string name;       // preset name, "" for custom
    CaseKind kind = CaseKind::taylor;
    SolverKind solver = SolverKind::tlsph;
    int dim = 3;

    // workpiece geometry: box for pressing/cutting, cylinder for taylor
    Vec3 box_extents;
    double cyl_length = 0.0, cyl_diameter = 0.0;
    double delta_p = 0.0;
    double h = 0.0;
    LatticeMode lattice = LatticeMode::cell;

    MaterialParams material;

    bool has_tool = false;
    Vec3 tool_extents;
    Vec3 tool_velocity;
    double feed = 0.0;      // cutting feed depth [m]

    Vec3 initial_velocity;
    bool has_wall = false;
    double wall_z = 0.0;

    std::vector<std::string> fixed_faces;  // "x_min" | "x_max" | "y_min" | ...
    int fixed_layers = 1;

    esph::EsphParams esph_params;
    contact::ContactParams contact_params;
    tlsph::TlsphParams tlsph_params;
    StepConfig step;

    void validate() const;
};

struct Lattice {
    std::vector<Vec3> positions;
    double volume = 0.0;  // per-particle volume [m^dim]
};

// Uniform lattice filling a box anchored at `origin`. Cell mode places
// particles at cell centres (count = round(extent / dp) per axis); node
// mode includes both faces (count + 1 per axis). Per-particle volume is
// dp^dim either way.
Lattice generate_box_lattice(const Vec3& extents, double dp, int dim,
                             LatticeMode mode = LatticeMode::cell,
                             const Vec3& origin = {});

// Axis-aligned lattice clipped to a z-axis cylinder; the lattice is
// symmetric about the axis and starts at z = dp/2.
Lattice generate_cylinder_lattice(double length, double diameter, double dp);

struct SimulationSetup {
    CaseConfig config;
    ParticleSystem ps;
    RigidTool tool;
};

SimulationSetup build_case(const CaseConfig& config);

std::vector<std::string> preset_names();
CaseConfig preset(const std::string& name);

}  // namespace mmsph
