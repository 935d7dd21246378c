#pragma once

#include <span>
#include <vector>

#include "mmsph/esph.hpp"
#include "mmsph/kernel.hpp"
#include "mmsph/material.hpp"
#include "mmsph/neighbors.hpp"
#include "mmsph/state.hpp"

namespace mmsph::tlsph {

// Frozen reference configuration of the workpiece: positions, densities,
// volumes, neighbour list and kernel gradients. Immutable between
// update_reference events.
struct ReferenceState {
    KernelSpec kern;
    std::vector<Vec3> X;
    std::vector<double> rho0;  // reference density [kg/m^3]
    std::vector<double> V0;    // reference volume [m^3]
    NeighborList nbrs;
    std::vector<Vec3> gradW0;   // CSR-aligned with nbrs.ids
    std::vector<double> W0;     // kernel values at reference separation
    std::vector<Mat3> L0;      // per-particle gradient correction (restores F = I at x = X)

    std::size_t count() const { return X.size(); }
};

struct TlsphParams {
    double ref_update_threshold = 0.1;  // max ||F - I||_F before a reference update
    bool paper_pk1 = false;             // compatibility switch: P = J F^-1 sigma
    // Hourglass (zero-energy mode) control: penalises the non-affine part of
    // each pair separation, x_ij - 0.5 (F_i + F_j) X_ij. Zero for any affine
    // deformation, so patch tests are unaffected. 0 disables.
    double hg_alpha = 5.0;
};

struct TlsphRates {
    std::vector<Vec3> accel;
    std::vector<Mat3> sdot;
    std::vector<Mat3> F;
    std::vector<double> J;
    std::vector<double> rho;
    double max_def = 0.0;  // max ||F - I||_F, drives the reference update
};

ReferenceState build_reference(std::span<const Vec3> positions, std::span<const double> rho0,
                               std::span<const double> volume, const KernelSpec& kern);

// F_i from current positions against the reference kernel; in 2D the
// out-of-plane stretch is pinned to 1 (plane strain).
Mat3 deformation_gradient(std::size_t i, const ReferenceState& ref,
                          std::span<const Vec3> x);

Mat3 deformation_gradient_rate(std::size_t i, const ReferenceState& ref,
                               std::span<const Vec3> v);

// l = F_dot F^-1
Mat3 velocity_gradient(const Mat3& F, const Mat3& F_dot);

Mat3 pk1_from_cauchy(const Mat3& F, const Mat3& sigma, bool paper_convention = false);

double density_from_jacobian(double rho0, double J);

// Stress part of the reference-frame momentum equation (no viscosity).
Vec3 momentum_rate(std::size_t i, const ReferenceState& ref, std::span<const Mat3> pk1,
                   std::span<const double> mass);

// Full right-hand side over the workpiece (indices [0, ref.count())):
// kinematics, constitutive rate and momentum with mapped artificial
// viscosity. Throws on J <= 0 with the offending particle id.
TlsphRates compute_rates(const ParticleSystem& ps, const ReferenceState& ref,
                         const esph::EsphParams& visc, const MaterialParams& mat,
                         const TlsphParams& params);

// Rebase the reference onto the current configuration: X := x, V0 := J V0,
// rho0 := rho0 / J (mass conserved), neighbour list and kernel gradients
// rebuilt. Stress state is untouched.
void update_reference(ReferenceState& ref, std::span<const Vec3> x);

}  // namespace mmsph::tlsph
