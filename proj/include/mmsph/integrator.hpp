#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "mmsph/contact.hpp"
#include "mmsph/esph.hpp"
#include "mmsph/scenes.hpp"
#include "mmsph/state.hpp"
#include "mmsph/tlsph.hpp"

namespace mmsph {

// Raised when a run goes non-finite or inverts; carries the particle id.
struct NumericalAbort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CFL bound: cfl * min_i h / (C_i + |v_i|) with C = sqrt(E/rho).
double stable_timestep(const ParticleSystem& ps, double h, const MaterialParams& mat,
                       double cfl);

// Two-stage midpoint (modified Euler) driver for both solver pipelines.
// The plastic return mapping and adiabatic heating are applied once, at
// the corrector stage.
class Simulation {
public:
    explicit Simulation(const CaseConfig& config) : Simulation(build_case(config)) {}
    explicit Simulation(SimulationSetup setup);

    void step(double dt);

    // dt resolution per StepConfig: fixed value or CFL-adaptive.
    double next_dt() const;

    const CaseConfig& config() const { return cfg_; }
    const ParticleSystem& particles() const { return ps_; }
    ParticleSystem& particles() { return ps_; }
    const std::optional<tlsph::ReferenceState>& reference() const { return ref_; }
    double time() const { return time_; }
    long steps_taken() const { return nsteps_; }
    Vec3 tool_reaction() const { return tool_reaction_; }
    long reference_updates() const { return ref_updates_; }

    // last evaluated TLSPH kinematics (empty for ESPH)
    const std::vector<Mat3>& deformation() const { return F_; }
    const std::vector<double>& jacobian() const { return J_; }

private:
    void step_esph(double dt);
    void step_tlsph(double dt);
    void apply_wall(double dt);
    void plastic_corrector(double dt, std::span<const double> rho);
    void check_finite() const;

    CaseConfig cfg_;
    ParticleSystem ps_;
    RigidTool tool_;
    KernelSpec kern_;
    std::optional<tlsph::ReferenceState> ref_;
    std::vector<Mat3> F_;
    std::vector<double> J_;
    double time_ = 0.0;
    long nsteps_ = 0;
    long ref_updates_ = 0;
    Vec3 tool_reaction_;

    // scratch for the predictor/corrector stages
    std::vector<Vec3> x0_, v0_, vh_;
    std::vector<double> rho0_;
    std::vector<Mat3> s0_;
};

// Generic one-step midpoint update for a single point mass; the scheme
// mirrors Simulation::step and backs the convergence-order tests.
struct PointState {
    Vec3 x, v;
};

template <class Accel>
PointState midpoint_point_step(const PointState& y, double dt, Accel&& accel) {
    PointState h;
    h.x = y.x + (0.5 * dt) * y.v;
    h.v = y.v + (0.5 * dt) * accel(y.x, y.v);
    PointState out;
    out.x = y.x + dt * h.v;
    out.v = y.v + dt * accel(h.x, h.v);
    return out;
}

}  // namespace mmsph
