#pragma once

#include <cstdint>
#include <vector>

#include "mmsph/math.hpp"

namespace mmsph {

enum class Body : std::uint8_t { workpiece = 0, tool = 1 };

// Structure-of-arrays particle state shared by both solvers. Rigid tool
// particles live at the tail of the arrays (indices >= tool_begin) and
// carry prescribed motion only.
struct ParticleSystem {
    int dim = 3;
    std::vector<Vec3> x;      // current positions [m]
    std::vector<Vec3> v;      // velocities [m/s]
    std::vector<double> mass; // [kg] (per unit thickness in 2D)
    std::vector<double> rho;  // current density [kg/m^3]
    std::vector<Mat3> s;      // deviatoric stress [Pa]
    std::vector<double> eps_pl;
    std::vector<double> eps_pl_rate;  // [1/s], previous accepted step
    std::vector<double> T;    // [K]
    std::vector<std::uint8_t> body;
    std::vector<std::uint8_t> fixed;

    std::size_t tool_begin = 0;  // == size() when there is no tool

    std::size_t size() const { return x.size(); }
    bool is_tool(std::size_t i) const { return i >= tool_begin; }

    void resize(std::size_t n) {
        x.resize(n); v.resize(n);
        mass.resize(n, 0.0); rho.resize(n, 0.0);
        s.resize(n); eps_pl.resize(n, 0.0); eps_pl_rate.resize(n, 0.0);
        T.resize(n, 0.0);
        body.resize(n, 0); fixed.resize(n, 0);
    }
};

// Prescribed-motion rigid tool metadata; the particle cloud itself lives
// in the ParticleSystem tail.
struct RigidTool {
    Vec3 velocity;         // constant [m/s]
    double radius = 0.0;   // pinball influence radius [m]
};

}  // namespace mmsph
