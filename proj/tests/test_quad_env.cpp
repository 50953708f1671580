#include <doctest.h>

#include <limits>
#include <random>

#include "polopt/errors.hpp"
#include "polopt/oracles.hpp"
#include "polopt/quad_env.hpp"

using namespace polopt;
using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {

QuadState random_state(std::mt19937& rng, double scale = 0.3) {
    std::normal_distribution<double> normal;
    Eigen::Matrix<double, kQuadStateDim, 1> xv;
    for (int i = 0; i < kQuadStateDim; ++i) xv(i) = scale * normal(rng);
    return QuadState::from_vector(xv);
}

}  // namespace

TEST_CASE("state vector roundtrip and ordering") {
    QuadState x;
    x.ierr = {1, 2, 3};
    x.p = {4, 5, 6};
    x.v = {7, 8, 9};
    x.r = {0.1, 0.2, 0.3};
    x.w = {10, 11, 12};
    const auto v = x.to_vector();
    CHECK(v(0) == 1.0);
    CHECK(v(3) == 4.0);
    CHECK(v(6) == 7.0);
    CHECK(v(9) == doctest::Approx(0.1));
    CHECK(v(12) == 10.0);
    const QuadState y = QuadState::from_vector(v);
    CHECK((y.to_vector() - v).norm() == 0.0);
}

TEST_CASE("hover equilibrium") {
    EnvConfig cfg;
    QuadState x;
    x.p = {0.3, -0.2, 1.0};
    QuadAction u{cfg.gravity, Vector3d::Zero()};
    const QuadState next = step_true(x, u, 0.0, cfg, x.p);
    CHECK((next.p - x.p).norm() < 1e-15);
    CHECK(next.v.norm() < 1e-12);
    CHECK(next.r.norm() == 0.0);
    CHECK(next.w.norm() == 0.0);
    CHECK(next.ierr.norm() == 0.0);  // pdes == p
}

TEST_CASE("integral error row integrates position error") {
    EnvConfig cfg;
    QuadState x;
    x.p = {1.0, 0.0, 0.0};
    QuadAction u{cfg.gravity, Vector3d::Zero()};
    const Vector3d pdes{0.0, 0.0, 0.0};
    const QuadState next = step_true(x, u, 0.0, cfg, pdes);
    CHECK(next.ierr.x() == doctest::Approx(cfg.dt * 1.0));
}

TEST_CASE("free fall under zero thrust") {
    EnvConfig cfg;
    QuadState x;
    QuadAction u{0.0, Vector3d::Zero()};
    const QuadState next = step_true(x, u, 0.0, cfg, Vector3d::Zero());
    CHECK(next.v.z() == doctest::Approx(-cfg.dt * cfg.gravity));
}

TEST_CASE("true plant scales thrust by the mass ratio") {
    EnvConfig cfg;
    cfg.mass_scale = 1.6;
    QuadState x;
    QuadAction u{cfg.gravity, Vector3d::Zero()};
    const QuadState next = step_true(x, u, 0.0, cfg, Vector3d::Zero());
    // Net specific force (g/1.6 - g) on the z velocity.
    CHECK(next.v.z() ==
          doctest::Approx(cfg.dt * (cfg.gravity / 1.6 - cfg.gravity)));
}

TEST_CASE("thrust clamps at zero and counts") {
    EnvConfig cfg;
    QuadState x;
    QuadAction u{-3.0, Vector3d::Zero()};
    int count = 0;
    const QuadState next = step_true(x, u, 0.0, cfg, Vector3d::Zero(), &count);
    CHECK(count == 1);
    CHECK(next.v.z() == doctest::Approx(-cfg.dt * cfg.gravity));
}

TEST_CASE("wind schedule: off first, square wave after") {
    WindModel wind;
    wind.enabled = true;
    wind.period_off = 12.0;
    wind.period_on = 12.0;
    CHECK_FALSE(wind.active_at(0.0));
    CHECK_FALSE(wind.active_at(11.9));
    CHECK(wind.active_at(12.1));
    CHECK(wind.active_at(23.9));
    CHECK_FALSE(wind.active_at(24.1));
    CHECK(wind.active_at(36.5));
    WindModel off;
    off.force = {5, 0, 0};
    CHECK_FALSE(off.active_at(15.0));
}

TEST_CASE("wind adds specific force to velocity only when active") {
    EnvConfig cfg;
    cfg.wind.enabled = true;
    cfg.wind.force = {0.0, 2.5, 0.0};
    QuadState x;
    QuadAction u{cfg.gravity, Vector3d::Zero()};
    const QuadState calm = step_true(x, u, 1.0, cfg, Vector3d::Zero());
    CHECK(calm.v.y() == doctest::Approx(0.0));
    const QuadState windy = step_true(x, u, 13.0, cfg, Vector3d::Zero());
    CHECK(windy.v.y() == doctest::Approx(cfg.dt * 2.5));
}

TEST_CASE("nominal model ignores mass scale and wind") {
    EnvConfig cfg;
    cfg.mass_scale = 1.6;
    cfg.wind.enabled = true;
    cfg.wind.force = {4, 0, 0};
    std::mt19937 rng(5);
    const QuadState x = random_state(rng);
    QuadAction u{9.0, {0.1, -0.2, 0.05}};
    EnvConfig clean;
    const auto nominal = step_model_jacobians(x, u, 13.0, cfg, Vector3d::Zero());
    const QuadState truth = step_true(x, u, 13.0, clean, Vector3d::Zero());
    CHECK((nominal.next.to_vector() - truth.to_vector()).norm() == 0.0);
}

TEST_CASE("true plant matches the nominal model bitwise when undisturbed") {
    EnvConfig cfg;  // mass_scale 1, wind disabled
    std::mt19937 rng(6);
    for (int i = 0; i < 20; ++i) {
        const QuadState x = random_state(rng);
        std::normal_distribution<double> normal;
        QuadAction u{9.81 + normal(rng), {normal(rng), normal(rng), normal(rng)}};
        const Vector3d pdes{normal(rng), normal(rng), normal(rng)};
        const QuadState a = step_true(x, u, 0.7, cfg, pdes);
        const QuadState b = step_model_jacobians(x, u, 0.7, cfg, pdes).next;
        CHECK((a.to_vector() - b.to_vector()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("analytic dg/dx and dg/du match finite differences") {
    EnvConfig cfg;
    std::mt19937 rng(7);
    std::normal_distribution<double> normal;
    double worst_x = 0.0, worst_u = 0.0;
    for (int i = 0; i < 50; ++i) {
        const QuadState x = random_state(rng, 0.4);
        QuadAction u{9.81 + normal(rng), {normal(rng), normal(rng), normal(rng)}};
        const Vector3d pdes{normal(rng), normal(rng), normal(rng)};
        const auto sj = step_model_jacobians(x, u, 0.0, cfg, pdes);

        const auto fd_x = oracles::fd_jacobian(
            [&](const VectorXd& p) -> VectorXd {
                return step_model_jacobians(QuadState::from_vector(p), u, 0.0, cfg,
                                            pdes)
                    .next.to_vector();
            },
            x.to_vector());
        const auto fd_u = oracles::fd_jacobian(
            [&](const VectorXd& p) -> VectorXd {
                return step_model_jacobians(x, QuadAction::from_vector(p), 0.0, cfg,
                                            pdes)
                    .next.to_vector();
            },
            u.to_vector());
        worst_x = std::max(worst_x,
                           oracles::max_rel_error(sj.dg_dx, fd_x, {.abs_floor = 1e-6}));
        worst_u = std::max(worst_u,
                           oracles::max_rel_error(sj.dg_du, fd_u, {.abs_floor = 1e-6}));
    }
    CHECK(worst_x < 1e-4);
    CHECK(worst_u < 1e-4);
}

TEST_CASE("dg/du sparsity: thrust moves velocity, torque moves body rate") {
    EnvConfig cfg;
    std::mt19937 rng(8);
    const QuadState x = random_state(rng);
    QuadAction u{9.5, {0.3, 0.1, -0.2}};
    const auto sj = step_model_jacobians(x, u, 0.0, cfg, Vector3d::Zero());
    // Thrust column: only rows 6..8 (velocity) are nonzero.
    for (int i = 0; i < kQuadStateDim; ++i) {
        if (i < 6 || i >= 9) CHECK(sj.dg_du(i, 0) == 0.0);
    }
    // Torque columns: only rows 12..14 (body rate), each dt on the diagonal.
    for (int j = 1; j < 4; ++j) {
        for (int i = 0; i < 12; ++i) CHECK(sj.dg_du(i, j) == 0.0);
        CHECK(sj.dg_du(11 + j, j) == doctest::Approx(cfg.dt));
    }
}

TEST_CASE("attitude outside the single-cover region raises SimDiverged") {
    EnvConfig cfg;
    QuadState x;
    x.r = {3.1416, 0.0, 0.0};  // just past the admissible angle
    QuadAction u{9.81, Vector3d::Zero()};
    CHECK_THROWS_AS(step_true(x, u, 0.0, cfg, Vector3d::Zero()), SimDiverged);
}

TEST_CASE("non-finite input raises SimDiverged") {
    EnvConfig cfg;
    QuadState x;
    QuadAction u{std::numeric_limits<double>::quiet_NaN(), Vector3d::Zero()};
    CHECK_THROWS_AS(step_true(x, u, 0.0, cfg, Vector3d::Zero()), SimDiverged);
}
