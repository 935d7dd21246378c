#include "mmsph/tlsph.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mmsph::tlsph {

namespace {

void rebuild_kernel_cache(ReferenceState& ref) {
    const double cutoff = 2.0 * ref.kern.h;
    const CellIndex idx = build_index(ref.X, cutoff);
    ref.nbrs = query(idx, ref.X, cutoff);
    ref.gradW0.resize(ref.nbrs.ids.size());
    ref.W0.resize(ref.nbrs.ids.size());
    for (std::size_t i = 0; i < ref.count(); ++i) {
        const int begin = ref.nbrs.offsets[i];
        const int end = ref.nbrs.offsets[i + 1];
        for (int k = begin; k < end; ++k) {
            const Vec3 dx = ref.X[i] - ref.X[ref.nbrs.ids[k]];
            ref.gradW0[k] = kernel_gradient(dx, ref.kern);
            ref.W0[k] = kernel_value(norm(dx), ref.kern);
        }
    }
    // First-order correction: the raw gradient sum B_i deviates from I where
    // kernel support is truncated (free surfaces). Post-multiplying by
    // L0 = B^-1 makes the deformation gradient exact for affine maps.
    ref.L0.resize(ref.count());
    for (std::size_t i = 0; i < ref.count(); ++i) {
        Mat3 b;
        const int begin = ref.nbrs.offsets[i];
        const int end = ref.nbrs.offsets[i + 1];
        for (int k = begin; k < end; ++k) {
            const int j = ref.nbrs.ids[k];
            b -= outer(ref.X[i] - ref.X[j], ref.gradW0[k]) * ref.V0[j];
        }
        if (ref.kern.dim == 2) b(2, 2) = 1.0;
        // degenerate support (isolated/collinear particles) cannot be
        // corrected; keep the raw gradients there
        if (std::abs(det(b)) < 1e-8)
            ref.L0[i] = Mat3::identity();
        else
            ref.L0[i] = inverse(b);
    }
}

}  // namespace

ReferenceState build_reference(std::span<const Vec3> positions, std::span<const double> rho0,
                               std::span<const double> volume, const KernelSpec& kern) {
    ReferenceState ref;
    ref.kern = kern;
    ref.X.assign(positions.begin(), positions.end());
    ref.rho0.assign(rho0.begin(), rho0.end());
    ref.V0.assign(volume.begin(), volume.end());
    rebuild_kernel_cache(ref);
    return ref;
}

Mat3 deformation_gradient(std::size_t i, const ReferenceState& ref, std::span<const Vec3> x) {
    Mat3 f;
    const int begin = ref.nbrs.offsets[i];
    const int end = ref.nbrs.offsets[i + 1];
    for (int k = begin; k < end; ++k) {
        const int j = ref.nbrs.ids[k];
        f -= outer(x[i] - x[j], ref.gradW0[k]) * ref.V0[j];
    }
    f = f * ref.L0[i];
    if (ref.kern.dim == 2) f(2, 2) = 1.0;  // plane strain
    return f;
}

Mat3 deformation_gradient_rate(std::size_t i, const ReferenceState& ref,
                               std::span<const Vec3> v) {
    Mat3 fdot;
    const int begin = ref.nbrs.offsets[i];
    const int end = ref.nbrs.offsets[i + 1];
    for (int k = begin; k < end; ++k) {
        const int j = ref.nbrs.ids[k];
        fdot -= outer(v[i] - v[j], ref.gradW0[k]) * ref.V0[j];
    }
    return fdot * ref.L0[i];
}

Mat3 velocity_gradient(const Mat3& F, const Mat3& F_dot) {
    return F_dot * inverse(F);
}

Mat3 pk1_from_cauchy(const Mat3& F, const Mat3& sigma, bool paper_convention) {
    const double J = det(F);
    if (J <= 0.0)
        throw std::domain_error("pk1_from_cauchy: non-positive Jacobian");
    if (paper_convention) return J * (inverse(F) * sigma);
    return J * (sigma * transpose(inverse(F)));
}

double density_from_jacobian(double rho0, double J) {
    return rho0 / J;
}

Vec3 momentum_rate(std::size_t i, const ReferenceState& ref, std::span<const Mat3> pk1,
                   std::span<const double> mass) {
    const double inv_r0i2 = 1.0 / (ref.rho0[i] * ref.rho0[i]);
    Vec3 a;
    const int begin = ref.nbrs.offsets[i];
    const int end = ref.nbrs.offsets[i + 1];
    for (int k = begin; k < end; ++k) {
        const int j = ref.nbrs.ids[k];
        const Mat3 term = pk1[i] * inv_r0i2 + pk1[j] * (1.0 / (ref.rho0[j] * ref.rho0[j]));
        a += mass[j] * (term * ref.gradW0[k]);
    }
    return a;
}

TlsphRates compute_rates(const ParticleSystem& ps, const ReferenceState& ref,
                         const esph::EsphParams& visc, const MaterialParams& mat,
                         const TlsphParams& params) {
    const std::size_t n = ref.count();
    TlsphRates out;
    out.accel.assign(n, Vec3{});
    out.sdot.assign(n, Mat3{});
    out.F.assign(n, Mat3{});
    out.J.assign(n, 0.0);
    out.rho.assign(n, 0.0);

    std::vector<Mat3> pk1(n), visc_map(n);
    std::vector<double> csound(n);

    const Mat3 eye = Mat3::identity();
    for (std::size_t i = 0; i < n; ++i) {
        const Mat3 f = deformation_gradient(i, ref, ps.x);
        const double jac = det(f);
        if (jac <= 0.0 || !std::isfinite(jac))
            throw std::runtime_error("tlsph: inverted configuration (J <= 0) at particle " +
                                     std::to_string(i));
        const Mat3 finv = inverse(f);
        const Mat3 fdot = deformation_gradient_rate(i, ref, ps.v);
        const Mat3 l = fdot * finv;
        const double rho = density_from_jacobian(ref.rho0[i], jac);
        const double p = eos_pressure(rho, mat);

        Mat3 sigma = ps.s[i];
        sigma(0, 0) -= p;
        sigma(1, 1) -= p;
        sigma(2, 2) -= p;
        pk1[i] = params.paper_pk1 ? jac * (finv * sigma) : jac * (sigma * transpose(finv));
        visc_map[i] = jac * finv;

        const auto [eps_dot, omega] = strain_rate_spin(l);
        out.sdot[i] = jaumann_deviatoric_rate(ps.s[i], eps_dot, omega, mat.mu);
        out.F[i] = f;
        out.J[i] = jac;
        out.rho[i] = rho;
        csound[i] = mat.sound_speed(rho);
        out.max_def = std::max(out.max_def, frobenius_norm(f - eye));
    }

    const bool want_visc = visc.beta1 != 0.0 || visc.beta2 != 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double inv_r0i2 = 1.0 / (ref.rho0[i] * ref.rho0[i]);
        Vec3 a;
        const int begin = ref.nbrs.offsets[i];
        const int end = ref.nbrs.offsets[i + 1];
        for (int k = begin; k < end; ++k) {
            const int j = ref.nbrs.ids[k];
            Mat3 term = pk1[i] * inv_r0i2 + pk1[j] * (1.0 / (ref.rho0[j] * ref.rho0[j]));
            if (want_visc) {
                // pi_ij is physical: evaluated with current-frame quantities,
                // then mapped back with the pair-averaged J F^-1 factor
                const double pi_ij = esph::artificial_viscosity(
                    ps.x[i] - ps.x[j], ps.v[i] - ps.v[j], out.rho[i], out.rho[j],
                    csound[i], csound[j], ref.kern.h, visc);
                if (pi_ij != 0.0) term -= (0.5 * pi_ij) * (visc_map[i] + visc_map[j]);
            }
            a += ps.mass[j] * (term * ref.gradW0[k]);
            if (params.hg_alpha != 0.0) {
                // hourglass control: spring on the non-affine part of the
                // pair separation, projected on the current pair direction
                // (antisymmetric under i <-> j, so momentum is conserved)
                const Vec3 xx = ref.X[j] - ref.X[i];
                const Vec3 dx = ps.x[j] - ps.x[i];
                const double r0sq = dot(xx, xx);
                const double r = norm(dx);
                if (r0sq > 0.0 && r > 0.0) {
                    const Vec3 u = (1.0 / r) * dx;
                    const Vec3 err = 0.5 * ((out.F[i] + out.F[j]) * xx) - dx;
                    const double delta = dot(err, u);
                    a -= (params.hg_alpha * mat.E * ref.V0[i] * ref.V0[j] * ref.W0[k] *
                          delta / (r0sq * ps.mass[i])) * u;
                }
            }
        }
        out.accel[i] = a;
    }
    return out;
}

void update_reference(ReferenceState& ref, std::span<const Vec3> x) {
    const std::size_t n = ref.count();
    std::vector<double> jac(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double j = det(deformation_gradient(i, ref, x));
        if (j <= 0.0 || !std::isfinite(j))
            throw std::runtime_error("update_reference: J <= 0 at particle " + std::to_string(i));
        jac[i] = j;
    }
    for (std::size_t i = 0; i < n; ++i) {
        ref.V0[i] *= jac[i];
        ref.rho0[i] /= jac[i];
        ref.X[i] = x[i];
    }
    rebuild_kernel_cache(ref);
}

}  // namespace mmsph::tlsph
