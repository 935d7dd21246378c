#pragma once

#include <span>
#include <vector>

#include "mmsph/kernel.hpp"
#include "mmsph/material.hpp"
#include "mmsph/neighbors.hpp"
#include "mmsph/state.hpp"

namespace mmsph::esph {

struct EsphParams {
    double beta1 = 0.0;     // artificial viscosity, linear term
    double beta2 = 0.0;     // artificial viscosity, quadratic term
    double gamma_ap = 0.0;  // artificial pressure coefficient
    double n_ap = 4.0;      // artificial pressure exponent
    double eps_visc = 0.01; // singularity guard in mu_ij
    double delta_p = 0.0;   // initial particle spacing [m]
};

struct EsphRates {
    std::vector<Vec3> accel;
    std::vector<double> drho;
    std::vector<Mat3> sdot;
    Vec3 tool_reaction;  // force the workpiece exerts on the tool [N]
};

// Monaghan viscosity scalar pi_ij; non-zero only for approaching pairs.
double artificial_viscosity(const Vec3& x_ij, const Vec3& v_ij, double rho_i, double rho_j,
                            double c_i, double c_j, double h, const EsphParams& p);

// Tensile-instability suppression term; zero when both pressures are
// compressive. w_ij and w_dp are kernel values at |x_ij| and delta_p.
double artificial_pressure(double p_i, double p_j, double rho_i, double rho_j,
                           double w_ij, double w_dp, const EsphParams& p);

std::vector<double> compute_pressures(const ParticleSystem& ps, const MaterialParams& mat);

double continuity_rate(std::size_t i, const NeighborList& nl, const ParticleSystem& ps,
                       const KernelSpec& kern);

Mat3 velocity_gradient(std::size_t i, const NeighborList& nl, const ParticleSystem& ps,
                       const KernelSpec& kern);

Vec3 momentum_rate(std::size_t i, const NeighborList& nl, const ParticleSystem& ps,
                   std::span<const double> pressure, const KernelSpec& kern,
                   const EsphParams& params, const MaterialParams& mat);

// Fused evaluation of all right-hand sides (continuity for every particle,
// momentum/velocity-gradient/Jaumann rate for workpiece particles).
EsphRates compute_rates(const ParticleSystem& ps, const NeighborList& nl,
                        const KernelSpec& kern, const EsphParams& params,
                        const MaterialParams& mat);

}  // namespace mmsph::esph
