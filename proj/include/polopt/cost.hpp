#pragma once

#include <Eigen/Dense>

#include "polopt/car_env.hpp"
#include "polopt/quad_env.hpp"
#include "polopt/reference.hpp"

namespace polopt {

// Per-step cost weights; each term is additionally scaled by dt.
struct QuadCostWeights {
    double w_p = 1.0;
    double w_v = 1e-4;
    double w_w = 1e-3;
    double w_tau = 1e-7;
    double w_f = 1e-8;
};

struct QuadCost {
    double value = 0.0;
    Eigen::Matrix<double, kQuadStateDim, 1> df_dx;
    Eigen::Matrix<double, kQuadActionDim, 1> df_du;
};

// dt * (wp ||p-pd||^2 + wv ||v-vd||^2 + ww ||w-wd||^2 + wtau ||tau||^2 + wf f^2)
// with exact quadratic-form gradients. The integral error and attitude do not
// enter the cost.
QuadCost quad_cost(const QuadState& x, const QuadAction& u, const RefSample& ref,
                   const QuadCostWeights& weights, double dt);

struct CarCost {
    double value = 0.0;
    Eigen::Matrix<double, kCarStateDim, 1> df_dx;
    Eigen::Matrix<double, kCarActionDim, 1> df_du;
};

// ||p-pd||^2 + (1/30)(w-wd)^2 + (1/15) steer^2, no dt factor.
CarCost car_cost(const CarState& x, const CarAction& u, const CarRef& ref);

}  // namespace polopt
