#include "polopt/lie.hpp"

#include <cmath>

#include "polopt/errors.hpp"

namespace polopt::lie {

namespace {

void check_angle(double angle, const char* where) {
    if (!(angle < kMaxAngle)) {
        throw RotationDomainError(std::string(where) +
                                  ": rotation angle " + std::to_string(angle) +
                                  " outside single-cover region (|angle| < pi)");
    }
}

}  // namespace

Eigen::Matrix3d hat(const Eigen::Vector3d& w) {
    Eigen::Matrix3d m;
    m << 0.0, -w.z(), w.y(),
         w.z(), 0.0, -w.x(),
        -w.y(), w.x(), 0.0;
    return m;
}

Eigen::Vector3d vee(const Eigen::Matrix3d& m) {
    return {m(2, 1), m(0, 2), m(1, 0)};
}

Eigen::Matrix3d exp_so3(const Eigen::Vector3d& r) {
    const double angle = r.norm();
    check_angle(angle, "exp_so3");
    const Eigen::Matrix3d K = hat(r);
    double a, b;  // R = I + a*K + b*K^2
    if (angle < kSmallAngle) {
        const double a2 = angle * angle;
        a = 1.0 - a2 / 6.0;
        b = 0.5 - a2 / 24.0;
    } else {
        a = std::sin(angle) / angle;
        b = (1.0 - std::cos(angle)) / (angle * angle);
    }
    return Eigen::Matrix3d::Identity() + a * K + b * K * K;
}

Eigen::Vector3d log_so3(const Eigen::Matrix3d& R) {
    // sin(angle) * axis from the antisymmetric part, cos(angle) from the trace.
    const Eigen::Vector3d w = vee(0.5 * (R - R.transpose()));
    const double s = w.norm();
    const double c = 0.5 * (R.trace() - 1.0);
    const double angle = std::atan2(s, c);
    check_angle(angle, "log_so3");
    if (angle < kSmallAngle) {
        // log(R) ~= vee((R - R^T)/2) * (1 + angle^2/6)
        return w * (1.0 + angle * angle / 6.0);
    }
    return w * (angle / s);
}

Eigen::Vector3d boxplus(const Eigen::Vector3d& r, const Eigen::Vector3d& w, double dt) {
    const Eigen::Vector3d inc = dt * w;
    if (inc.isZero(0.0)) {
        return r;
    }
    return log_so3(exp_so3(r) * exp_so3(inc));
}

namespace {

// Coefficients c1, c2 of J = I - c1*K + c2*K^2 (right) or I + c1*K + c2*K^2 (left).
void jacobian_coeffs(double angle, double& c1, double& c2) {
    if (angle < kSmallAngle) {
        const double a2 = angle * angle;
        c1 = 0.5 - a2 / 24.0;
        c2 = 1.0 / 6.0 - a2 / 120.0;
    } else {
        const double a2 = angle * angle;
        c1 = (1.0 - std::cos(angle)) / a2;
        c2 = (angle - std::sin(angle)) / (a2 * angle);
    }
}

void jacobian_inv_coeffs(double angle, double& c2) {
    if (angle < kSmallAngle) {
        c2 = 1.0 / 12.0 + angle * angle / 720.0;
    } else {
        c2 = 1.0 / (angle * angle) -
             (1.0 + std::cos(angle)) / (2.0 * angle * std::sin(angle));
    }
}

}  // namespace

Eigen::Matrix3d right_jacobian(const Eigen::Vector3d& r) {
    const double angle = r.norm();
    double c1, c2;
    jacobian_coeffs(angle, c1, c2);
    const Eigen::Matrix3d K = hat(r);
    return Eigen::Matrix3d::Identity() - c1 * K + c2 * K * K;
}

Eigen::Matrix3d right_jacobian_inv(const Eigen::Vector3d& r) {
    const double angle = r.norm();
    check_angle(angle, "right_jacobian_inv");
    double c2;
    jacobian_inv_coeffs(angle, c2);
    const Eigen::Matrix3d K = hat(r);
    return Eigen::Matrix3d::Identity() + 0.5 * K + c2 * K * K;
}

Eigen::Matrix3d left_jacobian(const Eigen::Vector3d& r) {
    const double angle = r.norm();
    double c1, c2;
    jacobian_coeffs(angle, c1, c2);
    const Eigen::Matrix3d K = hat(r);
    return Eigen::Matrix3d::Identity() + c1 * K + c2 * K * K;
}

BoxplusJacobians boxplus_jacobians(const Eigen::Vector3d& r, const Eigen::Vector3d& w,
                                   double dt) {
    BoxplusJacobians out;
    const Eigen::Vector3d inc = dt * w;
    out.r_next = boxplus(r, w, dt);
    // Perturbing r by d moves r_next by Jr^{-1}(r') * exp(inc)^T * Jr(r) * d:
    // the exp(Jr d) factor is conjugated past exp(inc) by the adjoint.
    const Eigen::Matrix3d jr_next_inv = right_jacobian_inv(out.r_next);
    out.d_r = jr_next_inv * exp_so3(inc).transpose() * right_jacobian(r);
    out.d_w = dt * jr_next_inv * right_jacobian(inc);
    return out;
}

double wrap_angle(double a) {
    const double two_pi = 2.0 * M_PI;
    double x = std::fmod(a + M_PI, two_pi);
    if (x <= 0.0) x += two_pi;
    return x - M_PI;
}

Eigen::Matrix2d rot2(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Eigen::Matrix2d m;
    m << c, -s, s, c;
    return m;
}

double boxplus_so2(double r, double w, double dt) {
    return wrap_angle(r + dt * w);
}

}  // namespace polopt::lie
