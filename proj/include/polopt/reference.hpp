#pragma once

#include <Eigen/Dense>

namespace polopt {

// One sample of the target trajectory: position, velocity, acceleration, and
// the feedforward body-frame angular velocity of the desired attitude.
struct RefSample {
    Eigen::Vector3d pdes = Eigen::Vector3d::Zero();
    Eigen::Vector3d vdes = Eigen::Vector3d::Zero();
    Eigen::Vector3d ades = Eigen::Vector3d::Zero();
    Eigen::Vector3d wdes = Eigen::Vector3d::Zero();
};

struct Trajectory {
    enum class Kind {
        Figure8Diagonal,   // lemniscate in a tilted plane
        LineBackForth,     // sinusoidal line along x
        CircleHorizontal,  // horizontal circle
        CarCircle,         // planar circle for the car (z unused)
    };

    Kind kind = Kind::Figure8Diagonal;
    double period = 4.0;     // s
    double amplitude = 0.75; // m; radius for circles, half-length for the line
    double tilt = 0.7853981633974483;  // rad, plane tilt for the figure-8
    double height = 1.0;     // m, hover height offset (quad kinds)
    double gravity = 9.81;   // m/s^2, for the feedforward attitude
    // Smooth-start: over [0, ramp] the reference is blended from its t=0 point
    // with a quintic smoothstep. 0 disables the blend.
    double ramp = 0.0;
};

// Position/velocity/acceleration of the analytic curve (with smooth-start
// blend applied). Valid for every kind, including the car.
void sample_pva(const Trajectory& traj, double t, Eigen::Vector3d& pdes,
                Eigen::Vector3d& vdes, Eigen::Vector3d& ades);

// Full reference sample including the flatness feedforward wdes. For the car
// kind, wdes = (0, 0, omega_des) with omega_des the planar heading rate.
RefSample sample(const Trajectory& traj, double t);

}  // namespace polopt
