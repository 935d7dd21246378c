#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mmsph/kernel.hpp"

using namespace mmsph;

TEST_CASE("normalisation constants") {
    const auto k2 = KernelSpec::make(1.5, 2);
    CHECK(k2.alpha_d == doctest::Approx(10.0 / (7.0 * M_PI * 1.5 * 1.5)).epsilon(1e-14));
    const auto k3 = KernelSpec::make(0.75e-3, 3);
    CHECK(k3.alpha_d ==
          doctest::Approx(1.0 / (M_PI * std::pow(0.75e-3, 3.0))).epsilon(1e-14));
    CHECK_THROWS_AS(KernelSpec::make(0.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(KernelSpec::make(1.0, 4), std::invalid_argument);
}

TEST_CASE("kernel values at pinned abscissae") {
    const auto k = KernelSpec::make(1.0, 3);
    CHECK(kernel_value(0.0, k) == doctest::Approx(k.alpha_d).epsilon(1e-14));
    // q = 0.5: alpha (1 - 1.5/4 + 0.75/8) = alpha * 0.71875
    CHECK(kernel_value(0.5, k) == doctest::Approx(k.alpha_d * 0.71875).epsilon(1e-14));
    // q = 1.5: alpha/4 (0.5)^3 = alpha * 0.03125
    CHECK(kernel_value(1.5, k) == doctest::Approx(k.alpha_d * 0.03125).epsilon(1e-14));
    CHECK(kernel_value(2.0, k) == 0.0);
    CHECK(kernel_value(5.0, k) == 0.0);
    CHECK_THROWS_AS(kernel_value(-0.1, k), std::invalid_argument);
    CHECK_THROWS_AS(kernel_value(std::nan(""), k), std::invalid_argument);
}

TEST_CASE("continuity across the branch points") {
    for (int dim : {2, 3}) {
        const auto k = KernelSpec::make(0.8, dim);
        const double eps = 1e-9;
        CHECK(kernel_value(0.8 - eps, k) ==
              doctest::Approx(kernel_value(0.8 + eps, k)).epsilon(1e-6));
        CHECK(kernel_value(1.6 - eps, k) == doctest::Approx(0.0).epsilon(1e-6 * k.alpha_d));
        // gradient magnitude continuity at q = 1
        const double gm = norm(kernel_gradient({0.8 - eps, 0.0, 0.0}, k));
        const double gp = norm(kernel_gradient({0.8 + eps, 0.0, 0.0}, k));
        CHECK(gm == doctest::Approx(gp).epsilon(1e-6));
    }
}

TEST_CASE("gradient matches a central finite difference") {
    for (int dim : {2, 3}) {
        const auto k = KernelSpec::make(1.3, dim);
        for (double q : {0.25, 0.5, 0.9, 1.2, 1.5, 1.9}) {
            const double r = q * k.h;
            const double eps = 1e-7 * k.h;
            const double dwdr =
                (kernel_value(r + eps, k) - kernel_value(r - eps, k)) / (2.0 * eps);
            const Vec3 g = kernel_gradient({r, 0.0, 0.0}, k);
            CHECK(g.x == doctest::Approx(dwdr).epsilon(1e-5));
            CHECK(g.y == 0.0);
            // radial direction: points along r_vec for dW/dq < 0 => negative x
            CHECK(g.x < 0.0);
        }
        CHECK(norm(kernel_gradient({0.0, 0.0, 0.0}, k)) == 0.0);
        CHECK(norm(kernel_gradient({2.5 * k.h, 0.0, 0.0}, k)) == 0.0);
        CHECK_THROWS_AS(kernel_gradient({std::nan(""), 0.0, 0.0}, k), std::invalid_argument);
    }
}

TEST_CASE("partition of unity on a lattice, h = 1.5 dp") {
    const double dp = 1.0;
    SUBCASE("3d") {
        const auto k = KernelSpec::make(1.5 * dp, 3);
        double sum = 0.0;
        Vec3 gsum;
        for (int i = -4; i <= 4; ++i)
            for (int j = -4; j <= 4; ++j)
                for (int l = -4; l <= 4; ++l) {
                    const Vec3 r{i * dp, j * dp, l * dp};
                    sum += kernel_value(norm(r), k) * dp * dp * dp;
                    gsum += kernel_gradient(r, k) * (dp * dp * dp);
                }
        CHECK(sum > 0.99);
        CHECK(sum < 1.01);
        CHECK(norm(gsum) < 1e-12);  // symmetric stencil cancels exactly
    }
    SUBCASE("2d") {
        const auto k = KernelSpec::make(1.5 * dp, 2);
        double sum = 0.0;
        Vec3 gsum;
        for (int i = -4; i <= 4; ++i)
            for (int j = -4; j <= 4; ++j) {
                const Vec3 r{i * dp, j * dp, 0.0};
                sum += kernel_value(norm(r), k) * dp * dp;
                gsum += kernel_gradient(r, k) * (dp * dp);
            }
        CHECK(sum > 0.99);
        CHECK(sum < 1.01);
        CHECK(norm(gsum) < 1e-12);
    }
}

TEST_CASE("stress decomposition") {
    Mat3 sigma = Mat3::diag(-300e6, -150e6, -150e6);
    sigma(0, 1) = sigma(1, 0) = 40e6;
    const auto [s, p] = decompose_stress(sigma);
    CHECK(p == doctest::Approx(200e6).epsilon(1e-12));
    CHECK(trace(s) == doctest::Approx(0.0).epsilon(1e-3));
    // sigma = s - p I reconstruction
    Mat3 rec = s;
    rec(0, 0) -= p; rec(1, 1) -= p; rec(2, 2) -= p;
    CHECK(frobenius_norm(rec - sigma) < 1e-6 * frobenius_norm(sigma));

    Mat3 asym = sigma;
    asym(0, 1) = 40e6;
    asym(1, 0) = -40e6;
    CHECK_THROWS_AS(decompose_stress(asym), std::invalid_argument);

    const auto [s0, p0] = decompose_stress(Mat3{});
    CHECK(p0 == 0.0);
    CHECK(frobenius_norm(s0) == 0.0);
}
