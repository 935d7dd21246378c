#pragma once

// Shared fixtures for the solver test binaries.

#include <vector>

#include "mmsph/material.hpp"
#include "mmsph/state.hpp"

namespace mmsph::testing {

inline MaterialParams steel() {
    MaterialParams m;
    m.rho0 = 7830.0;
    m.mu = 82.9e9;
    m.K = 169.1e9;
    m.A = 792e6;
    m.B = 510e6;
    m.n_hard = 0.26;
    m.C_rate = 0.014;
    m.m_therm = 1.03;
    m.T_ref = 293.0;
    m.T_melt = 1293.0;
    m.C_p = 460.0;
    m.finalize();
    return m;
}

// same elastic/thermal constants but an unreachable yield surface
inline MaterialParams elastic_steel() {
    MaterialParams m = steel();
    m.A = 1e15;
    m.B = 1e15;
    m.finalize();
    return m;
}

// uniform block of nx*ny*nz particles at spacing dp, first corner at origin
inline ParticleSystem make_block(int dim, int nx, int ny, int nz, double dp,
                                 const MaterialParams& mat) {
    ParticleSystem ps;
    ps.dim = dim;
    if (dim == 2) nz = 1;
    ps.resize(static_cast<std::size_t>(nx) * ny * nz);
    std::size_t i = 0;
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int l = 0; l < nx; ++l, ++i) {
                ps.x[i] = {l * dp, j * dp, dim == 3 ? k * dp : 0.0};
                ps.rho[i] = mat.rho0;
                ps.mass[i] = mat.rho0 * (dim == 3 ? dp * dp * dp : dp * dp);
                ps.T[i] = mat.T_ref;
            }
    ps.tool_begin = ps.size();
    return ps;
}

}  // namespace mmsph::testing
