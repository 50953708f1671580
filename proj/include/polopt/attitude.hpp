#pragma once

#include <Eigen/Dense>

namespace polopt {

// Desired attitude as the shortest rotation taking e_z to z, in logarithmic
// coordinates. Returns zero when z is parallel to e_z. Throws
// ControllerSingular for degenerate z (near-zero norm or anti-parallel to e_z).
Eigen::Vector3d shortest_rotation(const Eigen::Vector3d& z);

struct ShortestRotation {
    Eigen::Vector3d r_d;
    Eigen::Matrix3d d_z;  // d r_d / d z
};

// shortest_rotation with its analytic Jacobian; smooth across z || e_z.
ShortestRotation shortest_rotation_jacobian(const Eigen::Vector3d& z);

}  // namespace polopt
