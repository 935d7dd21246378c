#include "mmsph/material.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmsph {

void MaterialParams::finalize() {
    if (mu > 0.0 && K > 0.0) {
        E = 9.0 * K * mu / (3.0 * K + mu);
        nu = (3.0 * K - 2.0 * mu) / (2.0 * (3.0 * K + mu));
    } else if (E > 0.0 && nu > 0.0) {
        mu = E / (2.0 * (1.0 + nu));
        K = E / (3.0 * (1.0 - 2.0 * nu));
    } else {
        throw std::invalid_argument("MaterialParams: need (E, nu) or (mu, K)");
    }
    if (rho0 <= 0.0) throw std::invalid_argument("MaterialParams: rho0 must be positive");
    if (nu <= 0.0 || nu >= 0.5) throw std::invalid_argument("MaterialParams: nu out of (0, 0.5)");
    if (A <= 0.0 || B <= 0.0) throw std::invalid_argument("MaterialParams: A, B must be positive");
    if (C_p <= 0.0) throw std::invalid_argument("MaterialParams: C_p must be positive");
    if (T_melt <= T_ref) throw std::invalid_argument("MaterialParams: T_melt must exceed T_ref");
    if (chi <= 0.0 || chi > 1.0) throw std::invalid_argument("MaterialParams: chi out of (0, 1]");
    if (eps_dot_0 <= 0.0) throw std::invalid_argument("MaterialParams: eps_dot_0 must be positive");
}

double eos_pressure(double rho, const MaterialParams& mat) {
    return mat.K * (rho / mat.rho0 - 1.0);
}

std::pair<Mat3, Mat3> strain_rate_spin(const Mat3& l) {
    const Mat3 lt = transpose(l);
    return {0.5 * (l + lt), 0.5 * (l - lt)};
}

Mat3 jaumann_deviatoric_rate(const Mat3& s, const Mat3& eps_dot, const Mat3& omega, double mu) {
    return 2.0 * mu * deviatoric(eps_dot) + omega * s - s * omega;
}

double jc_yield_stress(double eps_pl, double eps_pl_rate, double T, const MaterialParams& mat) {
    const double hard = mat.A + (eps_pl > 0.0 ? mat.B * std::pow(eps_pl, mat.n_hard) : 0.0);
    const double rate_star = std::max(eps_pl_rate / mat.eps_dot_0, 1.0);
    const double rate = 1.0 + mat.C_rate * std::log(rate_star);
    const double t_star = std::clamp((T - mat.T_ref) / (mat.T_melt - mat.T_ref), 0.0, 1.0);
    const double therm = 1.0 - std::pow(t_star, mat.m_therm);
    return hard * rate * therm;
}

ReturnResult radial_return(const Mat3& s_trial, double sigma_y, double mu) {
    ReturnResult r;
    const double ss = double_dot(s_trial, s_trial);
    const double svm = std::sqrt(1.5 * ss);  // sqrt(3 J2)
    if (svm <= sigma_y || svm == 0.0) {
        r.s = s_trial;
        return r;
    }
    r.c_f = sigma_y / svm;
    r.s = r.c_f * s_trial;
    r.delta_eps_pl = (1.0 - r.c_f) / (3.0 * mu) * svm;
    // delta_eps_tensor : s_n = (1-c_f)/(2 mu) c_f (s:s)
    r.delta_w_p = (1.0 - r.c_f) * r.c_f / (2.0 * mu) * ss;
    return r;
}

double update_temperature(double T, double delta_w_p, double rho, const MaterialParams& mat) {
    if (delta_w_p < 0.0)
        throw std::invalid_argument("update_temperature: negative plastic work");
    return T + mat.chi * delta_w_p / (rho * mat.C_p);
}

}  // namespace mmsph
