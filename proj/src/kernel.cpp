#include "mmsph/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace mmsph {

KernelSpec KernelSpec::make(double h, int dim) {
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("KernelSpec: smoothing length must be positive");
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("KernelSpec: dimension must be 2 or 3");
    KernelSpec s;
    s.h = h;
    s.dim = dim;
    s.alpha_d = (dim == 2) ? 10.0 / (7.0 * M_PI * h * h) : 1.0 / (M_PI * h * h * h);
    return s;
}

double kernel_value(double r, const KernelSpec& spec) {
    if (!std::isfinite(r) || r < 0.0)
        throw std::invalid_argument("kernel_value: distance must be finite and non-negative");
    const double q = r / spec.h;
    if (q >= 2.0) return 0.0;
    if (q < 1.0) {
        return spec.alpha_d * (1.0 - 1.5 * q * q + 0.75 * q * q * q);
    }
    const double t = 2.0 - q;
    return spec.alpha_d * 0.25 * t * t * t;
}

Vec3 kernel_gradient(const Vec3& r_vec, const KernelSpec& spec) {
    if (!is_finite(r_vec))
        throw std::invalid_argument("kernel_gradient: non-finite separation");
    const double r = norm(r_vec);
    if (r == 0.0) return {};
    const double q = r / spec.h;
    if (q >= 2.0) return {};
    double dwdq;
    if (q < 1.0) {
        dwdq = spec.alpha_d * (-3.0 * q + 2.25 * q * q);
    } else {
        const double t = 2.0 - q;
        dwdq = -0.75 * spec.alpha_d * t * t;
    }
    // grad W = dW/dq * (1/h) * r_vec/|r_vec|
    return r_vec * (dwdq / (spec.h * r));
}

std::pair<Mat3, double> decompose_stress(const Mat3& sigma) {
    double asym = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            asym = std::max(asym, std::abs(sigma(i, j) - sigma(j, i)));
    if (asym > 1e-8 * std::max(frobenius_norm(sigma), 1e-300))
        throw std::invalid_argument("decompose_stress: tensor is not symmetric");
    const double p = -trace(sigma) / 3.0;
    Mat3 s = sigma;
    s(0, 0) += p;
    s(1, 1) += p;
    s(2, 2) += p;
    return {s, p};
}

}  // namespace mmsph
