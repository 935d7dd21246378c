#include "mmsph/contact.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace mmsph::contact {

double penetration(const Vec3& x_i, const Vec3& x_j, double r_i, double r_j) {
    return (r_i + r_j) - norm(x_i - x_j);
}

double contact_force(double p_d, double pd_rate, double dt, double rho_i, double rho_j,
                     double mu_i, double mu_j, double r_i, double r_j,
                     const ContactParams& params) {
    if (dt <= 0.0) throw std::invalid_argument("contact_force: dt must be positive");
    if (p_d <= 0.0) return 0.0;
    const double ri3 = r_i * r_i * r_i;
    const double rj3 = r_j * r_j * r_j;
    const double f1 = pd_rate > 0.0
                          ? rho_i * rho_j * ri3 * rj3 / (rho_i * ri3 + rho_j * rj3) * pd_rate / dt
                          : 0.0;
    const double f2 = mu_i * mu_j / (mu_i + mu_j) *
                      std::sqrt(r_i * r_j / (r_i + r_j)) * std::pow(p_d, 1.5);
    return params.k_p * std::min(f1, f2);
}

ContactResult apply_contact(const ParticleSystem& ps, const MaterialParams& mat,
                            const ContactParams& params, double dt,
                            std::vector<Vec3>& accel) {
    ContactResult res;
    const std::size_t nw = ps.tool_begin;
    const std::size_t nt = ps.size() - nw;
    if (nt == 0) return res;
    if (!(params.radius > 0.0)) throw std::invalid_argument("apply_contact: radius must be positive");

    const double cutoff = 2.0 * params.radius;
    const std::span<const Vec3> tool_x(ps.x.data() + nw, nt);
    const CellIndex idx = build_index(tool_x, cutoff);

    Vec3 lo = tool_x[0], hi = tool_x[0];
    for (const Vec3& p : tool_x) {
        lo.x = std::min(lo.x, p.x); hi.x = std::max(hi.x, p.x);
        lo.y = std::min(lo.y, p.y); hi.y = std::max(hi.y, p.y);
        lo.z = std::min(lo.z, p.z); hi.z = std::max(hi.z, p.z);
    }

    for (std::size_t i = 0; i < nw; ++i) {
        const Vec3& xi = ps.x[i];
        if (xi.x < lo.x - cutoff || xi.x > hi.x + cutoff ||
            xi.y < lo.y - cutoff || xi.y > hi.y + cutoff ||
            xi.z < lo.z - cutoff || xi.z > hi.z + cutoff)
            continue;
        for (int jt : query_point(idx, tool_x, xi, cutoff)) {
            const std::size_t j = nw + static_cast<std::size_t>(jt);
            const Vec3 x_ij = xi - ps.x[j];
            const double dist = norm(x_ij);
            if (dist == 0.0) {
                std::cerr << "contact: coincident particles " << i << "/" << j
                          << ", pair skipped\n";
                continue;
            }
            const double p_d = (2.0 * params.radius) - dist;
            if (p_d <= 0.0) continue;
            const Vec3 v_ij = ps.v[i] - ps.v[j];
            const double pd_rate = params.normal_rate ? -dot(v_ij, x_ij) / dist : norm(v_ij);
            const double f = contact_force(p_d, pd_rate, dt, ps.rho[i], ps.rho[j],
                                           mat.mu, mat.mu, params.radius, params.radius, params);
            if (f == 0.0) continue;
            const Vec3 dir = x_ij * (1.0 / dist);
            accel[i] += dir * (f / ps.mass[i]);
            res.tool_reaction -= dir * f;
            ++res.active_pairs;
        }
    }
    return res;
}

void rigid_tool_advance(ParticleSystem& ps, const RigidTool& tool, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("rigid_tool_advance: dt must be positive");
    for (std::size_t i = ps.tool_begin; i < ps.size(); ++i)
        ps.x[i] += tool.velocity * dt;
}

}  // namespace mmsph::contact
