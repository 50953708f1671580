#pragma once

#include <Eigen/Dense>

namespace polopt {

inline constexpr int kQuadStateDim = 15;
inline constexpr int kQuadActionDim = 4;
inline constexpr int kQuadParamDim = 10;

// Full quadrotor state: integral position error, position, velocity,
// attitude (logarithmic coordinates), body-frame angular velocity.
struct QuadState {
    Eigen::Vector3d ierr = Eigen::Vector3d::Zero();  // m*s
    Eigen::Vector3d p = Eigen::Vector3d::Zero();     // m
    Eigen::Vector3d v = Eigen::Vector3d::Zero();     // m/s
    Eigen::Vector3d r = Eigen::Vector3d::Zero();     // rad (axis-angle)
    Eigen::Vector3d w = Eigen::Vector3d::Zero();     // rad/s, body frame

    Eigen::Matrix<double, kQuadStateDim, 1> to_vector() const;
    static QuadState from_vector(const Eigen::Matrix<double, kQuadStateDim, 1>& x);
};

// Mass-normalized thrust and desired angular acceleration.
struct QuadAction {
    double thrust = 0.0;                              // m/s^2, >= 0
    Eigen::Vector3d torque = Eigen::Vector3d::Zero(); // rad/s^2

    Eigen::Vector4d to_vector() const;
    static QuadAction from_vector(const Eigen::Vector4d& u);
};

// Square-wave wind: off for period_off seconds, then on for period_on, repeating.
struct WindModel {
    Eigen::Vector3d force = Eigen::Vector3d::Zero();  // m/s^2, specific force
    double period_on = 12.0;
    double period_off = 12.0;
    bool enabled = false;

    bool active_at(double t) const;
};

struct EnvConfig {
    double dt = 0.002;        // s (500 Hz)
    double gravity = 9.81;    // m/s^2
    double mass_scale = 1.0;  // true mass / modeled mass
    WindModel wind;
};

// One step of the TRUE plant: nominal dynamics with thrust scaled by
// 1/mass_scale, wind specific force added to the velocity row when active, and
// thrust clamped at zero. pdes_t feeds the integral-error row. Throws
// SimDiverged if the attitude leaves the single-cover region.
// thrust_clamp_count, if given, is incremented whenever the clamp engages.
QuadState step_true(const QuadState& x, const QuadAction& u, double t,
                    const EnvConfig& cfg, const Eigen::Vector3d& pdes_t,
                    int* thrust_clamp_count = nullptr);

struct QuadStepJacobians {
    QuadState next;  // nominal-model next state
    Eigen::Matrix<double, kQuadStateDim, kQuadStateDim> dg_dx;
    Eigen::Matrix<double, kQuadStateDim, kQuadActionDim> dg_du;
};

// Nominal-model step with analytic Jacobians about (x, u). The nominal model
// always uses mass_scale = 1 and no wind, regardless of cfg; it is what the
// model-based optimizers consume even when the true plant differs.
QuadStepJacobians step_model_jacobians(const QuadState& x, const QuadAction& u,
                                       double t, const EnvConfig& cfg,
                                       const Eigen::Vector3d& pdes_t);

}  // namespace polopt
