#pragma once

#include <Eigen/Dense>

namespace polopt::lie {

// Largest admissible rotation angle. Rotations at or beyond this leave the
// single-cover region of the logarithmic parameterization and are rejected.
inline constexpr double kMaxAngle = 3.14159265358979323846 - 1e-6;

// Below this angle the closed-form Rodrigues / Jacobian coefficients switch to
// their Taylor expansions.
inline constexpr double kSmallAngle = 1e-6;

// Skew-symmetric matrix of w, so that hat(w) * y == w.cross(y).
Eigen::Matrix3d hat(const Eigen::Vector3d& w);

// Inverse of hat on skew-symmetric matrices.
Eigen::Vector3d vee(const Eigen::Matrix3d& m);

// Rodrigues formula. Throws RotationDomainError if ||r|| >= kMaxAngle.
Eigen::Matrix3d exp_so3(const Eigen::Vector3d& r);

// Logarithm of a rotation matrix, valid for angles strictly below pi.
// Throws RotationDomainError at/near angle pi.
Eigen::Vector3d log_so3(const Eigen::Matrix3d& R);

// log(exp(r) * exp(dt*w)). Exact identity when dt*w == 0.
Eigen::Vector3d boxplus(const Eigen::Vector3d& r, const Eigen::Vector3d& w, double dt);

// Right Jacobian of the exponential map: exp(r + d) ~= exp(r) * exp(Jr(r) d).
Eigen::Matrix3d right_jacobian(const Eigen::Vector3d& r);

// Inverse of the right Jacobian; also the Jacobian of log about exp(r):
// log(exp(r) exp(d)) ~= r + Jr^{-1}(r) d.
Eigen::Matrix3d right_jacobian_inv(const Eigen::Vector3d& r);

// Left Jacobian, Jl(r) = Jr(-r) = Jr(r)^T.
Eigen::Matrix3d left_jacobian(const Eigen::Vector3d& r);

struct BoxplusJacobians {
    Eigen::Vector3d r_next;
    Eigen::Matrix3d d_r;  // d r_next / d r
    Eigen::Matrix3d d_w;  // d r_next / d w
};

// boxplus together with its analytic Jacobians with respect to r and w.
BoxplusJacobians boxplus_jacobians(const Eigen::Vector3d& r, const Eigen::Vector3d& w,
                                   double dt);

// ---- SO(2) ----

// Wrap an angle to (-pi, pi].
double wrap_angle(double a);

// 2D rotation matrix of angle a.
Eigen::Matrix2d rot2(double a);

// Heading integration on SO(2): wrap(r + dt*w).
double boxplus_so2(double r, double w, double dt);

}  // namespace polopt::lie
