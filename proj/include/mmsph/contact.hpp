#pragma once

#include <span>
#include <vector>

#include "mmsph/material.hpp"
#include "mmsph/neighbors.hpp"
#include "mmsph/state.hpp"

namespace mmsph::contact {

struct ContactParams {
    double k_p = 1.0;        // penalty scaling factor (case-calibrated)
    double radius = 0.0;     // influence radius R [m]; default 0.5 delta_p set by scenes
    bool normal_rate = false;  // use the normal closing rate instead of |v_i - v_j|
};

// p_d = (R_i + R_j) - |x_i - x_j|; contact is active for p_d > 0.
double penetration(const Vec3& x_i, const Vec3& x_j, double r_i, double r_j);

// Pinball force magnitude K_p min(F1, F2) for an overlapping pair.
double contact_force(double p_d, double pd_rate, double dt, double rho_i, double rho_j,
                     double mu_i, double mu_j, double r_i, double r_j,
                     const ContactParams& params);

struct ContactResult {
    Vec3 tool_reaction;        // total force exerted on the tool [N]
    std::size_t active_pairs = 0;
};

// Accumulates pinball accelerations on workpiece particles from the rigid
// tool cloud (indices >= ps.tool_begin). The tool is kinematic: its
// reaction is recorded, not applied.
ContactResult apply_contact(const ParticleSystem& ps, const MaterialParams& mat,
                            const ContactParams& params, double dt,
                            std::vector<Vec3>& accel);

// Prescribed rigid motion: every tool particle advances by v dt.
void rigid_tool_advance(ParticleSystem& ps, const RigidTool& tool, double dt);

}  // namespace mmsph::contact
