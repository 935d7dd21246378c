#include "mmsph/esph.hpp"

#include <cmath>

namespace mmsph::esph {

double artificial_viscosity(const Vec3& x_ij, const Vec3& v_ij, double rho_i, double rho_j,
                            double c_i, double c_j, double h, const EsphParams& p) {
    const double vx = dot(v_ij, x_ij);
    if (vx >= 0.0) return 0.0;
    const double mu_ij = h * vx / (norm2(x_ij) + p.eps_visc * h * h);
    const double c_bar = 0.5 * (c_i + c_j);
    const double rho_bar = 0.5 * (rho_i + rho_j);
    return (-p.beta1 * c_bar * mu_ij + p.beta2 * mu_ij * mu_ij) / rho_bar;
}

double artificial_pressure(double p_i, double p_j, double rho_i, double rho_j,
                           double w_ij, double w_dp, const EsphParams& p) {
    if (p.gamma_ap == 0.0) return 0.0;
    if (p_i > 0.0 && p_j > 0.0) return 0.0;
    const double ratio = w_ij / w_dp;
    return p.gamma_ap * (std::abs(p_i) / (rho_i * rho_i) + std::abs(p_j) / (rho_j * rho_j)) *
           std::pow(ratio, p.n_ap);
}

std::vector<double> compute_pressures(const ParticleSystem& ps, const MaterialParams& mat) {
    std::vector<double> p(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) p[i] = eos_pressure(ps.rho[i], mat);
    return p;
}

double continuity_rate(std::size_t i, const NeighborList& nl, const ParticleSystem& ps,
                       const KernelSpec& kern) {
    double drho = 0.0;
    for (int j : nl.neighbors(i)) {
        const Vec3 g = kernel_gradient(ps.x[i] - ps.x[j], kern);
        drho += ps.mass[j] * dot(ps.v[i] - ps.v[j], g);
    }
    return drho;
}

Mat3 velocity_gradient(std::size_t i, const NeighborList& nl, const ParticleSystem& ps,
                       const KernelSpec& kern) {
    Mat3 l;
    for (int j : nl.neighbors(i)) {
        const Vec3 g = kernel_gradient(ps.x[i] - ps.x[j], kern);
        l -= outer(ps.v[i] - ps.v[j], g) * (ps.mass[j] / ps.rho[j]);
    }
    return l;
}

namespace {

inline Mat3 cauchy_over_rho2(const ParticleSystem& ps, std::span<const double> pressure,
                             std::size_t i) {
    Mat3 sig = ps.is_tool(i) ? Mat3{} : ps.s[i];
    sig(0, 0) -= pressure[i];
    sig(1, 1) -= pressure[i];
    sig(2, 2) -= pressure[i];
    return sig * (1.0 / (ps.rho[i] * ps.rho[i]));
}

}  // namespace

Vec3 momentum_rate(std::size_t i, const NeighborList& nl, const ParticleSystem& ps,
                   std::span<const double> pressure, const KernelSpec& kern,
                   const EsphParams& params, const MaterialParams& mat) {
    const double w_dp = kernel_value(params.delta_p, kern);
    const Mat3 sri = cauchy_over_rho2(ps, pressure, i);
    const double c_i = mat.sound_speed(ps.rho[i]);
    Vec3 a;
    for (int j : nl.neighbors(i)) {
        const Vec3 x_ij = ps.x[i] - ps.x[j];
        const Vec3 g = kernel_gradient(x_ij, kern);
        const Mat3 srj = cauchy_over_rho2(ps, pressure, j);
        const double pi_ij = artificial_viscosity(x_ij, ps.v[i] - ps.v[j], ps.rho[i], ps.rho[j],
                                                  c_i, mat.sound_speed(ps.rho[j]), kern.h, params);
        const double pa_ij = artificial_pressure(pressure[i], pressure[j], ps.rho[i], ps.rho[j],
                                                 kernel_value(norm(x_ij), kern), w_dp, params);
        a += ps.mass[j] * ((sri + srj) * g - (pi_ij + pa_ij) * g);
    }
    return a;
}

EsphRates compute_rates(const ParticleSystem& ps, const NeighborList& nl,
                        const KernelSpec& kern, const EsphParams& params,
                        const MaterialParams& mat) {
    const std::size_t n = ps.size();
    EsphRates out;
    out.accel.assign(n, Vec3{});
    out.drho.assign(n, 0.0);
    out.sdot.assign(n, Mat3{});

    const std::vector<double> pressure = compute_pressures(ps, mat);
    std::vector<Mat3> sig_r2(n);
    std::vector<double> csound(n);
    for (std::size_t i = 0; i < n; ++i) {
        sig_r2[i] = cauchy_over_rho2(ps, pressure, i);
        csound[i] = mat.sound_speed(ps.rho[i]);
    }
    const double w_dp = kernel_value(params.delta_p, kern);
    const bool want_ap = params.gamma_ap != 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        const bool tool_i = ps.is_tool(i);
        double drho = 0.0;
        Vec3 a;
        Mat3 l;
        for (int j : nl.neighbors(i)) {
            const Vec3 x_ij = ps.x[i] - ps.x[j];
            const Vec3 v_ij = ps.v[i] - ps.v[j];
            const Vec3 g = kernel_gradient(x_ij, kern);
            drho += ps.mass[j] * dot(v_ij, g);
            if (tool_i) continue;

            const double pi_ij = artificial_viscosity(x_ij, v_ij, ps.rho[i], ps.rho[j],
                                                      csound[i], csound[j], kern.h, params);
            double pa_ij = 0.0;
            if (want_ap && !(pressure[i] > 0.0 && pressure[j] > 0.0))
                pa_ij = artificial_pressure(pressure[i], pressure[j], ps.rho[i], ps.rho[j],
                                            kernel_value(norm(x_ij), kern), w_dp, params);
            const Vec3 da = ps.mass[j] * ((sig_r2[i] + sig_r2[j]) * g - (pi_ij + pa_ij) * g);
            a += da;
            if (ps.is_tool(static_cast<std::size_t>(j)))
                out.tool_reaction -= ps.mass[i] * da;
            l -= outer(v_ij, g) * (ps.mass[j] / ps.rho[j]);
        }
        out.drho[i] = drho;
        if (tool_i) continue;
        out.accel[i] = a;
        const auto [eps_dot, omega] = strain_rate_spin(l);
        out.sdot[i] = jaumann_deviatoric_rate(ps.s[i], eps_dot, omega, mat.mu);
    }
    return out;
}

}  // namespace mmsph::esph
