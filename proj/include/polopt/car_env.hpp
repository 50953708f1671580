#pragma once

#include <Eigen/Dense>

#include "polopt/reference.hpp"

namespace polopt {

inline constexpr int kCarStateDim = 7;
inline constexpr int kCarActionDim = 2;
inline constexpr int kCarParamDim = 5;

// Planar Ackermann car state. v = (forward, left) in the body frame.
struct CarState {
    Eigen::Vector2d p = Eigen::Vector2d::Zero();  // m
    double r = 0.0;                               // rad, wrapped to (-pi, pi]
    Eigen::Vector2d v = Eigen::Vector2d::Zero();  // m/s
    double w = 0.0;                               // rad/s
    double psi = 0.0;                             // rad, steering angle

    Eigen::Matrix<double, kCarStateDim, 1> to_vector() const;
    static CarState from_vector(const Eigen::Matrix<double, kCarStateDim, 1>& x);
};

struct CarAction {
    double throttle = 0.0;  // m/s, speed command
    double steer = 0.0;     // rad, steering command

    Eigen::Vector2d to_vector() const { return {throttle, steer}; }
};

// First-order input lags plus a linear single-track lateral model
// s' = s + dt*A(vx)*s + dt*B*psi acting on s = (vy, w).
struct CarModelConfig {
    double dt = 0.02;    // s
    double c_th = 2.0;   // 1/s, throttle lag
    double c_st = 8.0;   // 1/s, steering lag
    double c_f = 5.0;    // 1/s, front cornering stiffness per mass
    double c_r = 5.0;    // 1/s, rear cornering stiffness per mass
    double l_f = 0.24;   // m
    double l_r = 0.24;   // m
    double i_z = 0.04;   // m^2, yaw inertia per mass
    double v_min = 0.1;  // m/s, guard on the 1/vx terms
};

// Log-gain parameter (K1, K2, K3, K4, Kp).
struct CarParams {
    Eigen::Matrix<double, kCarParamDim, 1> theta =
        Eigen::Matrix<double, kCarParamDim, 1>::Zero();

    static CarParams from_gains(double k1, double k2, double k3, double k4, double kp);
    Eigen::Matrix<double, kCarParamDim, 1> gains() const;
};

// Planar reference: desired position and its first two time derivatives.
struct CarRef {
    Eigen::Vector2d pdes = Eigen::Vector2d::Zero();
    Eigen::Vector2d pdot = Eigen::Vector2d::Zero();
    Eigen::Vector2d pddot = Eigen::Vector2d::Zero();
};

// Heading, body-frame forward speed, and angular rate implied by the reference.
// Throws ReferenceSingular when pdot vanishes.
struct CarRefDerived {
    double r_d = 0.0;
    double vx_d = 0.0;
    double w_d = 0.0;
};
CarRefDerived derive_ref(const CarRef& ref);

CarRef car_ref(const Trajectory& traj, double t);

// One forward-Euler step of the car model. Throws SimDiverged when |vx| drops
// below v_min (the lateral model divides by forward speed).
CarState car_step(const CarState& x, const CarAction& u, const CarModelConfig& cfg);

struct CarStepJacobians {
    CarState next;
    Eigen::Matrix<double, kCarStateDim, kCarStateDim> dg_dx;
    Eigen::Matrix<double, kCarStateDim, kCarActionDim> dg_du;
};
CarStepJacobians car_step_jacobians(const CarState& x, const CarAction& u,
                                    const CarModelConfig& cfg);

// Tracking policy: steering from lateral error / sideslip / heading / rate
// feedback, throttle from longitudinal error plus speed feedforward.
CarAction car_act(const CarState& x, const CarRef& ref, const CarParams& params);

struct CarPolicyJacobians {
    CarAction u;
    Eigen::Matrix<double, kCarActionDim, kCarStateDim> dpi_dx;
    Eigen::Matrix<double, kCarActionDim, kCarParamDim> dpi_dtheta;
};
CarPolicyJacobians car_act_jacobians(const CarState& x, const CarRef& ref,
                                     const CarParams& params);

}  // namespace polopt
