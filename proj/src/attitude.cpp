#include "polopt/attitude.hpp"

#include <cmath>

#include "polopt/errors.hpp"

namespace polopt {

namespace {

struct Decomp {
    Eigen::Vector3d axis_sin;  // e_z x z, norm = |z| sin(angle)
    double s;                  // |e_z x z|
    double norm_z;
    double angle;              // angle between e_z and z
};

Decomp decompose(const Eigen::Vector3d& z) {
    Decomp d;
    d.norm_z = z.norm();
    if (d.norm_z <= 1e-9) {
        throw ControllerSingular("shortest_rotation: thrust vector has near-zero norm");
    }
    d.axis_sin = Eigen::Vector3d(-z.y(), z.x(), 0.0);
    d.s = d.axis_sin.norm();
    d.angle = std::atan2(d.s, z.z());
    if (d.angle >= M_PI - 1e-6) {
        throw ControllerSingular(
            "shortest_rotation: thrust vector anti-parallel to e_z (angle -> pi)");
    }
    return d;
}

}  // namespace

Eigen::Vector3d shortest_rotation(const Eigen::Vector3d& z) {
    const Decomp d = decompose(z);
    // r_d = alpha * (e_z x z) with alpha = angle / |e_z x z|; alpha is a smooth
    // function of (s^2, z_z) with limit 1/z_z at s = 0.
    double alpha;
    if (d.s < 1e-4 * d.norm_z) {
        const double q = d.s * d.s;
        const double zz = z.z();
        alpha = 1.0 / zz - q / (3.0 * zz * zz * zz);
    } else {
        alpha = d.angle / d.s;
    }
    return alpha * d.axis_sin;
}

ShortestRotation shortest_rotation_jacobian(const Eigen::Vector3d& z) {
    const Decomp d = decompose(z);
    const double zz = z.z();
    const double nz2 = d.norm_z * d.norm_z;
    const double q = d.s * d.s;

    double alpha, dalpha_dq;
    if (d.s < 1e-4 * d.norm_z) {
        const double zz3 = zz * zz * zz;
        alpha = 1.0 / zz - q / (3.0 * zz3);
        dalpha_dq = -1.0 / (3.0 * zz3) + 2.0 * q / (5.0 * zz3 * zz * zz);
    } else {
        alpha = d.angle / d.s;
        dalpha_dq = (zz * d.s / nz2 - d.angle) / (2.0 * q * d.s);
    }
    const double dalpha_dzz = -1.0 / nz2;

    Eigen::Matrix3d cross_jac;  // d (e_z x z) / d z
    cross_jac << 0, -1, 0,
                 1, 0, 0,
                 0, 0, 0;
    const Eigen::Vector3d grad_alpha(2.0 * z.x() * dalpha_dq,
                                     2.0 * z.y() * dalpha_dq, dalpha_dzz);

    ShortestRotation out;
    out.r_d = alpha * d.axis_sin;
    out.d_z = d.axis_sin * grad_alpha.transpose() + alpha * cross_jac;
    return out;
}

}  // namespace polopt
