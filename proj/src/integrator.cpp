#include "mmsph/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mmsph {

double stable_timestep(const ParticleSystem& ps, double h, const MaterialParams& mat,
                       double cfl) {
    double dt = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double c = mat.sound_speed(ps.rho[i]);
        dt = std::min(dt, h / (c + norm(ps.v[i])));
    }
    return cfl * dt;
}

Simulation::Simulation(SimulationSetup setup)
    : cfg_(std::move(setup.config)), ps_(std::move(setup.ps)), tool_(setup.tool) {
    kern_ = KernelSpec::make(cfg_.h, cfg_.dim);
    if (cfg_.solver == SolverKind::tlsph) {
        const std::size_t nw = ps_.tool_begin;
        std::vector<double> vol(nw);
        for (std::size_t i = 0; i < nw; ++i) vol[i] = ps_.mass[i] / ps_.rho[i];
        ref_ = tlsph::build_reference({ps_.x.data(), nw}, {ps_.rho.data(), nw}, vol, kern_);
    }
}

double Simulation::next_dt() const {
    if (!cfg_.step.use_cfl) return cfg_.step.dt;
    double dt = stable_timestep(ps_, cfg_.h, cfg_.material, cfg_.step.cfl);
    // the hourglass spring adds ~alpha E to the pair stiffness, raising the
    // fastest signal speed by ~sqrt(1 + alpha)
    if (cfg_.solver == SolverKind::tlsph && cfg_.tlsph_params.hg_alpha > 0.0)
        dt /= std::sqrt(1.0 + cfg_.tlsph_params.hg_alpha);
    return dt;
}

void Simulation::apply_wall(double dt) {
    if (!cfg_.has_wall) return;
    // unilateral frictionless contact. Particles on the plane keep a
    // non-negative normal velocity; particles that would cross the plane
    // within one step have the normal velocity limited to exactly reach
    // it. Without the limiter the one-sided pressure gradient integrates
    // into an unbounded approach speed on particles hovering just above
    // the plane, and the artificial viscosity feeds that spurious speed
    // back into the bulk as energy.
    for (std::size_t i = 0; i < ps_.tool_begin; ++i) {
        Vec3& x = ps_.x[i];
        Vec3& v = ps_.v[i];
        if (x.z <= cfg_.wall_z) {
            x.z = cfg_.wall_z;
            if (v.z < 0.0) v.z = 0.0;  // tangential free
        } else if (v.z < 0.0 && x.z + dt * v.z < cfg_.wall_z) {
            v.z = (cfg_.wall_z - x.z) / dt;
        }
    }
}

void Simulation::plastic_corrector(double dt, std::span<const double> rho) {
    const MaterialParams& mat = cfg_.material;
    for (std::size_t i = 0; i < ps_.tool_begin; ++i) {
        const double sigma_y = jc_yield_stress(ps_.eps_pl[i], ps_.eps_pl_rate[i], ps_.T[i], mat);
        const ReturnResult rr = radial_return(ps_.s[i], sigma_y, mat.mu);
        ps_.s[i] = rr.s;
        if (rr.delta_eps_pl > 0.0) {
            ps_.eps_pl[i] += rr.delta_eps_pl;
            ps_.T[i] = update_temperature(ps_.T[i], rr.delta_w_p, rho[i], mat);
        }
        ps_.eps_pl_rate[i] = rr.delta_eps_pl / dt;
    }
}

void Simulation::check_finite() const {
    for (std::size_t i = 0; i < ps_.size(); ++i) {
        if (!is_finite(ps_.x[i]) || !is_finite(ps_.v[i]) || !std::isfinite(ps_.rho[i]) ||
            !is_finite(ps_.s[i]) || !std::isfinite(ps_.T[i]))
            throw NumericalAbort("non-finite state at particle " + std::to_string(i) +
                                 " after step " + std::to_string(nsteps_));
    }
}

void Simulation::step(double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    if (cfg_.solver == SolverKind::esph)
        step_esph(dt);
    else
        step_tlsph(dt);
    time_ += dt;
    ++nsteps_;
    check_finite();
}

void Simulation::step_esph(double dt) {
    const std::size_t n = ps_.size();
    const double cutoff = 2.0 * kern_.h;
    const CellIndex idx = build_index(ps_.x, cutoff);
    const NeighborList nbrs = query(idx, ps_.x, cutoff);

    x0_ = ps_.x; v0_ = ps_.v; rho0_ = ps_.rho; s0_ = ps_.s;

    const auto r0 = esph::compute_rates(ps_, nbrs, kern_, cfg_.esph_params, cfg_.material);
    for (std::size_t i = 0; i < n; ++i) {
        ps_.rho[i] = rho0_[i] + 0.5 * dt * r0.drho[i];
        if (ps_.is_tool(i)) {
            ps_.x[i] = x0_[i] + (0.5 * dt) * tool_.velocity;
            continue;
        }
        ps_.s[i] = s0_[i] + (0.5 * dt) * r0.sdot[i];
        if (ps_.fixed[i]) continue;
        ps_.x[i] = x0_[i] + (0.5 * dt) * v0_[i];
        ps_.v[i] = v0_[i] + (0.5 * dt) * r0.accel[i];
    }
    apply_wall(dt);

    const auto r1 = esph::compute_rates(ps_, nbrs, kern_, cfg_.esph_params, cfg_.material);
    vh_ = ps_.v;
    for (std::size_t i = 0; i < n; ++i) {
        ps_.rho[i] = rho0_[i] + dt * r1.drho[i];
        if (ps_.is_tool(i)) {
            ps_.x[i] = x0_[i] + dt * tool_.velocity;
            continue;
        }
        ps_.s[i] = s0_[i] + dt * r1.sdot[i];
        if (ps_.fixed[i]) continue;
        ps_.x[i] = x0_[i] + dt * vh_[i];
        ps_.v[i] = v0_[i] + dt * r1.accel[i];
    }
    apply_wall(dt);
    plastic_corrector(dt, {ps_.rho.data(), ps_.tool_begin});
    tool_reaction_ = r1.tool_reaction;
}

void Simulation::step_tlsph(double dt) {
    const std::size_t nw = ps_.tool_begin;
    const bool has_tool = nw < ps_.size();

    x0_ = ps_.x; v0_ = ps_.v; s0_ = ps_.s;

    auto r0 = tlsph::compute_rates(ps_, *ref_, cfg_.esph_params, cfg_.material,
                                   cfg_.tlsph_params);
    if (has_tool)
        contact::apply_contact(ps_, cfg_.material, cfg_.contact_params, dt, r0.accel);

    for (std::size_t i = 0; i < ps_.size(); ++i) {
        if (ps_.is_tool(i)) {
            ps_.x[i] = x0_[i] + (0.5 * dt) * tool_.velocity;
            continue;
        }
        ps_.s[i] = s0_[i] + (0.5 * dt) * r0.sdot[i];
        if (ps_.fixed[i]) continue;
        ps_.x[i] = x0_[i] + (0.5 * dt) * v0_[i];
        ps_.v[i] = v0_[i] + (0.5 * dt) * r0.accel[i];
    }
    apply_wall(dt);

    auto r1 = tlsph::compute_rates(ps_, *ref_, cfg_.esph_params, cfg_.material,
                                   cfg_.tlsph_params);
    Vec3 reaction;
    if (has_tool) {
        const auto c = contact::apply_contact(ps_, cfg_.material, cfg_.contact_params, dt,
                                              r1.accel);
        reaction = c.tool_reaction;
    }
    vh_ = ps_.v;
    for (std::size_t i = 0; i < ps_.size(); ++i) {
        if (ps_.is_tool(i)) {
            ps_.x[i] = x0_[i] + dt * tool_.velocity;
            continue;
        }
        ps_.s[i] = s0_[i] + dt * r1.sdot[i];
        if (ps_.fixed[i]) continue;
        ps_.x[i] = x0_[i] + dt * vh_[i];
        ps_.v[i] = v0_[i] + dt * r1.accel[i];
    }
    apply_wall(dt);
    for (std::size_t i = 0; i < nw; ++i) ps_.rho[i] = r1.rho[i];
    plastic_corrector(dt, r1.rho);
    tool_reaction_ = reaction;
    F_ = std::move(r1.F);
    J_ = std::move(r1.J);

    if (r1.max_def > cfg_.tlsph_params.ref_update_threshold) {
        tlsph::update_reference(*ref_, {ps_.x.data(), nw});
        ++ref_updates_;
    }
}

}  // namespace mmsph
