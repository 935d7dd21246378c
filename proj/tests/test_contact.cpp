#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mmsph/contact.hpp"

using namespace mmsph;
using namespace mmsph::testing;

TEST_CASE("penetration depth") {
    CHECK(contact::penetration({0, 0, 0}, {3, 0, 0}, 1.0, 1.0) == doctest::Approx(-1.0));
    CHECK(contact::penetration({0, 0, 0}, {1.5, 0, 0}, 1.0, 1.0) == doctest::Approx(0.5));
    CHECK(contact::penetration({0, 0, 0}, {2.0, 0, 0}, 1.0, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("pinball force branches") {
    contact::ContactParams params;
    params.k_p = 1.0;
    const double rho = 7830.0, mu = 82.9e9, r = 0.25e-3, dt = 1e-8;
    SUBCASE("no overlap, no force") {
        CHECK(contact::contact_force(0.0, 10.0, dt, rho, rho, mu, mu, r, r, params) == 0.0);
        CHECK(contact::contact_force(-0.1, 10.0, dt, rho, rho, mu, mu, r, r, params) == 0.0);
    }
    SUBCASE("non-closing overlap gives zero (momentum branch gates the min)") {
        CHECK(contact::contact_force(0.1 * r, 0.0, dt, rho, rho, mu, mu, r, r, params) == 0.0);
        CHECK(contact::contact_force(0.1 * r, -5.0, dt, rho, rho, mu, mu, r, r, params) == 0.0);
    }
    SUBCASE("symmetric pair closed forms") {
        const double pd = 0.2 * r, rate = 30.0;
        const double r3 = r * r * r;
        const double f1 = rho * rho * r3 * r3 / (rho * r3 + rho * r3) * rate / dt;
        const double f2 = mu * mu / (mu + mu) * std::sqrt(r * r / (r + r)) * std::pow(pd, 1.5);
        const double expect = std::min(f1, f2);
        CHECK(contact::contact_force(pd, rate, dt, rho, rho, mu, mu, r, r, params) ==
              doctest::Approx(expect).epsilon(1e-14));
        CHECK(f1 == doctest::Approx(0.5 * rho * r3 * rate / dt).epsilon(1e-14));
        CHECK(f2 == doctest::Approx(0.5 * mu * std::sqrt(0.5 * r) * std::pow(pd, 1.5))
                        .epsilon(1e-14));
    }
    SUBCASE("penalty factor scales linearly") {
        contact::ContactParams scaled = params;
        scaled.k_p = 7.5;
        const double base =
            contact::contact_force(0.2 * r, 30.0, dt, rho, rho, mu, mu, r, r, params);
        const double more =
            contact::contact_force(0.2 * r, 30.0, dt, rho, rho, mu, mu, r, r, scaled);
        CHECK(more == doctest::Approx(7.5 * base).epsilon(1e-14));
    }
    SUBCASE("continuity at contact onset") {
        const double tiny =
            contact::contact_force(1e-12 * r, 30.0, dt, rho, rho, mu, mu, r, r, params);
        CHECK(tiny >= 0.0);
        CHECK(tiny < 1e-6);
    }
    SUBCASE("dt must be positive") {
        CHECK_THROWS_AS(
            contact::contact_force(0.1, 1.0, 0.0, rho, rho, mu, mu, r, r, params),
            std::invalid_argument);
    }
}

TEST_CASE("apply_contact bookkeeping") {
    const MaterialParams mat = steel();
    const double dp = 0.5e-3;
    // two-layer workpiece with a tool slab hovering one overlapping radius away
    ParticleSystem ps = make_block(3, 5, 5, 2, dp, mat);
    const std::size_t nw = ps.size();
    ParticleSystem tool = make_block(3, 3, 3, 1, dp, mat);
    ps.resize(nw + tool.size());
    ps.tool_begin = nw;
    for (std::size_t k = 0; k < tool.size(); ++k) {
        const std::size_t i = nw + k;
        ps.x[i] = tool.x[k] + Vec3{dp, dp, 1.35 * dp};  // within 2R = dp of the top layer
        ps.v[i] = {0.0, 0.0, -50.0};
        ps.rho[i] = mat.rho0;
        ps.mass[i] = tool.mass[k];
        ps.body[i] = 1;
    }
    contact::ContactParams params;
    params.k_p = 1.0;
    params.radius = 0.5 * dp;
    std::vector<Vec3> accel(ps.size());
    const auto res = contact::apply_contact(ps, mat, params, 1e-8, accel);
    CHECK(res.active_pairs > 0);
    // reaction equals minus the momentum imparted to the workpiece
    Vec3 imparted;
    for (std::size_t i = 0; i < nw; ++i) imparted += ps.mass[i] * accel[i];
    CHECK(norm(imparted + res.tool_reaction) < 1e-10 * norm(imparted));
    // the push is away from the tool
    CHECK(imparted.z < 0.0);
    CHECK(res.tool_reaction.z > 0.0);
    for (std::size_t i = nw; i < ps.size(); ++i) CHECK(norm(accel[i]) == 0.0);
}

TEST_CASE("apply_contact edge cases") {
    const MaterialParams mat = steel();
    ParticleSystem ps = make_block(3, 3, 3, 3, 0.5e-3, mat);
    contact::ContactParams params;
    params.radius = 0.25e-3;
    std::vector<Vec3> accel(ps.size());
    SUBCASE("no tool particles: no-op") {
        const auto res = contact::apply_contact(ps, mat, params, 1e-8, accel);
        CHECK(res.active_pairs == 0);
        CHECK(norm(res.tool_reaction) == 0.0);
    }
    SUBCASE("separated bodies: no pairs") {
        const std::size_t nw = ps.size();
        ps.resize(nw + 1);
        ps.tool_begin = nw;
        ps.x[nw] = {50e-3, 50e-3, 50e-3};
        ps.rho[nw] = mat.rho0;
        ps.mass[nw] = ps.mass[0];
        accel.assign(ps.size(), Vec3{});
        const auto res = contact::apply_contact(ps, mat, params, 1e-8, accel);
        CHECK(res.active_pairs == 0);
    }
    SUBCASE("receding pair with the normal-rate variant carries no force") {
        const std::size_t nw = ps.size();
        ps.resize(nw + 1);
        ps.tool_begin = nw;
        ps.x[nw] = ps.x[nw - 1] + Vec3{0.3e-3, 0.0, 0.0};  // overlapping
        ps.v[nw] = {200.0, 0.0, 0.0};                      // moving away
        ps.rho[nw] = mat.rho0;
        ps.mass[nw] = ps.mass[0];
        contact::ContactParams nr = params;
        nr.normal_rate = true;
        accel.assign(ps.size(), Vec3{});
        const auto res = contact::apply_contact(ps, mat, nr, 1e-8, accel);
        CHECK(norm(res.tool_reaction) == 0.0);
    }
}

TEST_CASE("rigid tool advance") {
    const MaterialParams mat = steel();
    ParticleSystem ps = make_block(3, 2, 2, 2, 1e-3, mat);
    ps.tool_begin = 4;
    RigidTool tool;
    tool.velocity = {-100.0, 0.0, 25.0};
    const Vec3 before_work = ps.x[0], before_tool = ps.x[6];
    contact::rigid_tool_advance(ps, tool, 1e-6);
    CHECK(norm(ps.x[0] - before_work) == 0.0);
    CHECK(norm(ps.x[6] - (before_tool + Vec3{-1e-4, 0.0, 2.5e-5})) < 1e-18);
    CHECK_THROWS_AS(contact::rigid_tool_advance(ps, tool, 0.0), std::invalid_argument);
}
