#pragma once

#include <Eigen/Dense>

#include "polopt/quad_env.hpp"
#include "polopt/reference.hpp"

namespace polopt {

// Log-gain parameter vector. Ordering:
// (ki_xy, ki_z, kp_xy, kp_z, kv_xy, kv_z, kr_xy, kr_z, kw_xy, kw_z).
struct Params {
    Eigen::Matrix<double, kQuadParamDim, 1> theta =
        Eigen::Matrix<double, kQuadParamDim, 1>::Zero();

    static Params from_gains(double ki_xy, double ki_z, double kp_xy, double kp_z,
                             double kv_xy, double kv_z, double kr_xy, double kr_z,
                             double kw_xy, double kw_z);
    // Exponentiated gains.
    Eigen::Matrix<double, kQuadParamDim, 1> gains() const;
};

// Subtracts `amount` from every log-gain; the default halves every gain.
Params detune(const Params& params, double amount = 0.6931471805599453);

struct PolicyConfig {
    double b_xy = 200.0;    // rad/s^2, softclamp bound for roll/pitch
    double b_z = 50.0;      // rad/s^2, softclamp bound for yaw
    double gravity = 9.81;  // m/s^2, feedforward in the outer loop
};

// Elementwise saturation bound*tanh(x/bound); strictly inside (-bound, bound).
double softclamp(double x, double bound);

// Geometric cascade controller: outer-loop PID thrust vector, projection onto
// the body axis, shortest-rotation desired attitude, inner-loop attitude law
// with softclamped angular acceleration.
QuadAction act(const QuadState& x, const RefSample& ref, const Params& params,
               const PolicyConfig& cfg);

struct QuadPolicyJacobians {
    QuadAction u;
    Eigen::Matrix<double, kQuadActionDim, kQuadStateDim> dpi_dx;
    Eigen::Matrix<double, kQuadActionDim, kQuadParamDim> dpi_dtheta;
};

// act plus analytic Jacobians with respect to the state and the log-gains.
QuadPolicyJacobians act_with_jacobians(const QuadState& x, const RefSample& ref,
                                       const Params& params, const PolicyConfig& cfg);

}  // namespace polopt
