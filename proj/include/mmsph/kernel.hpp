#pragma once

#include <utility>

#include "mmsph/math.hpp"

namespace mmsph {

// Cubic B-spline kernel with compact support 2h.
struct KernelSpec {
    double h = 0.0;    // smoothing length [m]
    int dim = 3;       // 2 or 3
    double alpha_d = 0.0;  // normalisation [1/m^dim]

    static KernelSpec make(double h, int dim);
};

// W(r) for r = |x_i - x_j|.
double kernel_value(double r, const KernelSpec& spec);

// grad_i W(x_ij) for r_vec = x_i - x_j. Zero vector at zero separation.
Vec3 kernel_gradient(const Vec3& r_vec, const KernelSpec& spec);

// Splits a symmetric Cauchy stress into (deviatoric s, pressure p) with
// sigma = s - p I and p = -tr(sigma)/3.
std::pair<Mat3, double> decompose_stress(const Mat3& sigma);

}  // namespace mmsph
