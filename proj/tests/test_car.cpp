#include <doctest.h>

#include <cmath>
#include <random>

#include "polopt/car_env.hpp"
#include "polopt/errors.hpp"
#include "polopt/harness.hpp"
#include "polopt/oracles.hpp"

using namespace polopt;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

CarState random_state(std::mt19937& rng) {
    std::normal_distribution<double> normal;
    CarState x;
    x.p = {normal(rng), normal(rng)};
    x.r = 0.5 * normal(rng);
    x.v = {1.5 + 0.3 * normal(rng), 0.2 * normal(rng)};
    x.w = 0.5 * normal(rng);
    x.psi = 0.2 * normal(rng);
    return x;
}

CarRef random_ref(std::mt19937& rng) {
    std::normal_distribution<double> normal;
    CarRef ref;
    ref.pdes = {normal(rng), normal(rng)};
    ref.pdot = {1.0 + 0.2 * normal(rng), 0.3 * normal(rng)};
    ref.pddot = {0.3 * normal(rng), 0.3 * normal(rng)};
    return ref;
}

CarParams test_params() { return CarParams::from_gains(1.0, 0.5, 2.0, 0.5, 2.0); }

}  // namespace

TEST_CASE("state vector roundtrip") {
    CarState x;
    x.p = {1, 2};
    x.r = 0.3;
    x.v = {4, 5};
    x.w = 6;
    x.psi = 0.7;
    const auto v = x.to_vector();
    CHECK(v(0) == 1.0);
    CHECK(v(2) == doctest::Approx(0.3));
    CHECK(v(3) == 4.0);
    CHECK(v(5) == 6.0);
    CHECK((CarState::from_vector(v).to_vector() - v).norm() == 0.0);
}

TEST_CASE("derive_ref hand values") {
    CarRef ref;
    ref.pdot = {0.0, 2.0};
    ref.pddot = {-1.0, 0.0};
    const CarRefDerived d = derive_ref(ref);
    CHECK(d.r_d == doctest::Approx(M_PI / 2));
    CHECK(d.vx_d == doctest::Approx(2.0));
    // w_d = (px' py'' - py' px'') / |p'|^2 = (0*0 - 2*(-1)) / 4 = 0.5
    CHECK(d.w_d == doctest::Approx(0.5));
    CarRef stopped;
    CHECK_THROWS_AS(derive_ref(stopped), ReferenceSingular);
}

TEST_CASE("straight-line coasting") {
    CarModelConfig cfg;
    CarState x;
    x.v = {2.0, 0.0};
    CarAction u{2.0, 0.0};  // throttle matches speed, no steering
    const CarState n = car_step(x, u, cfg);
    CHECK(n.p.x() == doctest::Approx(cfg.dt * 2.0));
    CHECK(n.p.y() == doctest::Approx(0.0));
    CHECK(n.v.x() == doctest::Approx(2.0));
    CHECK(n.v.y() == doctest::Approx(0.0));
    CHECK(n.w == doctest::Approx(0.0));
}

TEST_CASE("throttle and steering first-order lags") {
    CarModelConfig cfg;
    CarState x;
    x.v = {1.0, 0.0};
    CarAction u{2.0, 0.5};
    const CarState n = car_step(x, u, cfg);
    CHECK(n.v.x() == doctest::Approx(1.0 + cfg.dt * cfg.c_th * (2.0 - 1.0)));
    CHECK(n.psi == doctest::Approx(cfg.dt * cfg.c_st * 0.5));
}

TEST_CASE("steering angle induces yaw") {
    CarModelConfig cfg;
    CarState x;
    x.v = {2.0, 0.0};
    x.psi = 0.2;
    const CarState n = car_step(x, {2.0, 0.2}, cfg);
    // B = (c_f, c_f l_f / i_z) drives (vy, w) from psi.
    CHECK(n.v.y() == doctest::Approx(cfg.dt * cfg.c_f * 0.2));
    CHECK(n.w == doctest::Approx(cfg.dt * cfg.c_f * cfg.l_f / cfg.i_z * 0.2));
}

TEST_CASE("slow forward speed raises SimDiverged") {
    CarModelConfig cfg;
    CarState x;
    x.v = {0.05, 0.0};
    CHECK_THROWS_AS(car_step(x, {1.0, 0.0}, cfg), SimDiverged);
}

TEST_CASE("heading wraps through pi") {
    CarModelConfig cfg;
    CarState x;
    x.r = 3.1;
    x.v = {2.0, 0.0};
    x.w = 5.0;
    const CarState n = car_step(x, {2.0, 0.0}, cfg);
    CHECK(n.r == doctest::Approx(3.1 + cfg.dt * 5.0 - 2 * M_PI));
}

TEST_CASE("car step jacobians match finite differences") {
    CarModelConfig cfg;
    std::mt19937 rng(71);
    std::normal_distribution<double> normal;
    double worst_x = 0.0, worst_u = 0.0;
    for (int i = 0; i < 50; ++i) {
        const CarState x = random_state(rng);
        const CarAction u{normal(rng), 0.3 * normal(rng)};
        const auto sj = car_step_jacobians(x, u, cfg);
        const auto fd_x = oracles::fd_jacobian(
            [&](const VectorXd& p) -> VectorXd {
                return car_step(CarState::from_vector(p), u, cfg).to_vector();
            },
            x.to_vector());
        const auto fd_u = oracles::fd_jacobian(
            [&](const VectorXd& p) -> VectorXd {
                return car_step(x, {p(0), p(1)}, cfg).to_vector();
            },
            u.to_vector());
        worst_x = std::max(worst_x,
                           oracles::max_rel_error(sj.dg_dx, fd_x, {.abs_floor = 1e-7}));
        worst_u = std::max(worst_u,
                           oracles::max_rel_error(sj.dg_du, fd_u, {.abs_floor = 1e-7}));
    }
    CHECK(worst_x < 1e-4);
    CHECK(worst_u < 1e-4);
}

TEST_CASE("policy on the reference issues the feedforward command") {
    CarRef ref;
    ref.pdes = {1.0, 2.0};
    ref.pdot = {1.5, 0.0};
    CarState x;
    x.p = ref.pdes;
    x.r = 0.0;  // aligned with pdot
    x.v = {1.5, 0.0};
    const CarAction u = car_act(x, ref, test_params());
    CHECK(u.throttle == doctest::Approx(1.5));
    CHECK(u.steer == doctest::Approx(0.0));
}

TEST_CASE("lateral offset steers back toward the path") {
    CarRef ref;
    ref.pdot = {1.5, 0.0};
    CarState x;
    x.p = {0.0, 0.5};  // left of the path heading +x
    x.v = {1.5, 0.0};
    const CarAction u = car_act(x, ref, test_params());
    CHECK(u.steer < 0.0);  // steer right
}

TEST_CASE("car policy jacobians match finite differences") {
    const CarParams params = test_params();
    std::mt19937 rng(73);
    double worst_x = 0.0, worst_t = 0.0;
    for (int i = 0; i < 50; ++i) {
        const CarState x = random_state(rng);
        const CarRef ref = random_ref(rng);
        const auto j = car_act_jacobians(x, ref, params);
        const auto fd_x = oracles::fd_jacobian(
            [&](const VectorXd& p) -> VectorXd {
                return car_act(CarState::from_vector(p), ref, params).to_vector();
            },
            x.to_vector());
        const auto fd_t = oracles::fd_jacobian(
            [&](const VectorXd& th) -> VectorXd {
                CarParams q;
                q.theta = th;
                return car_act(x, ref, q).to_vector();
            },
            params.theta);
        worst_x = std::max(worst_x,
                           oracles::max_rel_error(j.dpi_dx, fd_x, {.abs_floor = 1e-6}));
        worst_t = std::max(worst_t,
                           oracles::max_rel_error(j.dpi_dtheta, fd_t, {.abs_floor = 1e-6}));
    }
    CHECK(worst_x < 1e-4);
    CHECK(worst_t < 1e-4);
}

TEST_CASE("closed loop tracks the circular reference") {
    // Drive the expert-gain policy around the circle; the position error must
    // stay small after a transient.
    Trajectory traj;
    traj.kind = Trajectory::Kind::CarCircle;
    traj.amplitude = 1.5;
    traj.period = 6.0;
    CarModelConfig cfg;
    const CarParams params = expert_car_params();

    CarRef r0 = car_ref(traj, 0.0);
    const CarRefDerived d0 = derive_ref(r0);
    CarState x;
    x.p = r0.pdes;
    x.r = d0.r_d;
    x.v = {d0.vx_d, 0.0};
    x.w = d0.w_d;

    double max_err_late = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const double time = t * cfg.dt;
        const CarRef ref = car_ref(traj, time);
        const CarAction u = car_act(x, ref, params);
        x = car_step(x, u, cfg);
        if (time > 10.0) {
            max_err_late = std::max(max_err_late, (x.p - ref.pdes).norm());
        }
    }
    CHECK(max_err_late < 0.5);
}
