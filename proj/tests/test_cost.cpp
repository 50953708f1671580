#include <doctest.h>

#include <random>

#include "polopt/cost.hpp"
#include "polopt/oracles.hpp"

using namespace polopt;
using Eigen::Vector3d;
using Eigen::VectorXd;

TEST_CASE("quad cost hand value") {
    QuadCostWeights w;
    const double dt = 0.002;
    QuadState x;
    x.p = {1, 0, 0};
    x.v = {0, 2, 0};
    x.w = {0, 0, 3};
    QuadAction u{4.0, {5, 0, 0}};
    RefSample ref;  // zero reference
    const QuadCost c = quad_cost(x, u, ref, w, dt);
    const double expected =
        dt * (1.0 * 1.0 + 1e-4 * 4.0 + 1e-3 * 9.0 + 1e-7 * 25.0 + 1e-8 * 16.0);
    CHECK(c.value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("quad cost is zero on the reference with zero action") {
    QuadCostWeights w;
    QuadState x;
    x.p = {0.5, 0.5, 1.0};
    x.v = {1, 0, 0};
    x.w = {0, 0.2, 0};
    x.ierr = {3, 3, 3};  // integral error carries no cost
    x.r = {0.4, 0, 0};   // attitude carries no cost
    RefSample ref;
    ref.pdes = x.p;
    ref.vdes = x.v;
    ref.wdes = x.w;
    const QuadCost c = quad_cost(x, QuadAction{}, ref, w, 0.002);
    CHECK(c.value == 0.0);
    CHECK(c.df_dx.norm() == 0.0);
    CHECK(c.df_du.norm() == 0.0);
}

TEST_CASE("quad cost gradients match finite differences") {
    QuadCostWeights w;
    const double dt = 0.002;
    std::mt19937 rng(61);
    std::normal_distribution<double> normal;
    RefSample ref;
    ref.pdes = {0.1, -0.2, 1.0};
    ref.vdes = {0.5, 0, 0};
    ref.wdes = {0, 0.1, 0};
    for (int i = 0; i < 20; ++i) {
        Eigen::Matrix<double, kQuadStateDim, 1> xv;
        for (int k = 0; k < kQuadStateDim; ++k) xv(k) = normal(rng);
        Eigen::Vector4d uv{9.0 + normal(rng), normal(rng), normal(rng), normal(rng)};
        const QuadState x = QuadState::from_vector(xv);
        const QuadAction u = QuadAction::from_vector(uv);
        const QuadCost c = quad_cost(x, u, ref, w, dt);

        const auto fd_x = oracles::fd_jacobian(
            [&](const VectorXd& p) -> VectorXd {
                VectorXd out(1);
                out(0) = quad_cost(QuadState::from_vector(p), u, ref, w, dt).value;
                return out;
            },
            xv);
        const auto fd_u = oracles::fd_jacobian(
            [&](const VectorXd& p) -> VectorXd {
                VectorXd out(1);
                out(0) = quad_cost(x, QuadAction::from_vector(p), ref, w, dt).value;
                return out;
            },
            uv);
        CHECK((c.df_dx.transpose() - fd_x).cwiseAbs().maxCoeff() < 1e-7);
        CHECK((c.df_du.transpose() - fd_u).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("car cost hand value") {
    CarState x;
    x.p = {3, 4};
    x.w = 0.5;
    CarAction u{1.0, 0.3};
    CarRef ref;  // zero position reference; w reference derived from pdot...
    ref.pdot = {1.0, 0.0};
    const CarCost c = car_cost(x, u, ref);
    // ||p||^2 + (1/30) (w - wd)^2 + (1/15) steer^2 with wd = 0 here.
    CHECK(c.value == doctest::Approx(25.0 + 0.25 / 30.0 + 0.09 / 15.0));
}

TEST_CASE("car cost gradients match finite differences") {
    std::mt19937 rng(67);
    std::normal_distribution<double> normal;
    CarRef ref;
    ref.pdes = {0.3, -0.1};
    ref.pdot = {1.0, 0.2};
    ref.pddot = {0.0, 0.5};
    for (int i = 0; i < 20; ++i) {
        Eigen::Matrix<double, kCarStateDim, 1> xv;
        for (int k = 0; k < kCarStateDim; ++k) xv(k) = normal(rng);
        xv(3) = 1.5 + 0.2 * normal(rng);  // forward speed away from the guard
        const CarState x = CarState::from_vector(xv);
        const CarAction u{normal(rng), 0.3 * normal(rng)};
        const CarCost c = car_cost(x, u, ref);

        const auto fd_x = oracles::fd_jacobian(
            [&](const VectorXd& p) -> VectorXd {
                VectorXd out(1);
                out(0) = car_cost(CarState::from_vector(p), u, ref).value;
                return out;
            },
            xv);
        const auto fd_u = oracles::fd_jacobian(
            [&](const VectorXd& p) -> VectorXd {
                VectorXd out(1);
                out(0) = car_cost(x, CarAction{p(0), p(1)}, ref).value;
                return out;
            },
            u.to_vector());
        CHECK((c.df_dx.transpose() - fd_x).cwiseAbs().maxCoeff() < 1e-6);
        CHECK((c.df_du.transpose() - fd_u).cwiseAbs().maxCoeff() < 1e-6);
    }
}
