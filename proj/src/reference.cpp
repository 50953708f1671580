#include "polopt/reference.hpp"

#include <cmath>

#include "polopt/attitude.hpp"
#include "polopt/lie.hpp"

namespace polopt {

namespace {

// Raw analytic curve, before the smooth-start blend.
void curve_pva(const Trajectory& traj, double t, Eigen::Vector3d& p,
               Eigen::Vector3d& v, Eigen::Vector3d& a) {
    const double w = 2.0 * M_PI / traj.period;
    const double tau = w * t;
    const double A = traj.amplitude;
    switch (traj.kind) {
        case Trajectory::Kind::Figure8Diagonal: {
            // Lemniscate of Gerono in a plane tilted by traj.tilt about e_x.
            const double c1 = A * std::sin(tau);
            const double c2 = 0.5 * A * std::sin(2.0 * tau);
            const double dc1 = A * w * std::cos(tau);
            const double dc2 = A * w * std::cos(2.0 * tau);
            const double ddc1 = -A * w * w * std::sin(tau);
            const double ddc2 = -2.0 * A * w * w * std::sin(2.0 * tau);
            const double ct = std::cos(traj.tilt), st = std::sin(traj.tilt);
            p = {c1, c2 * ct, traj.height + c2 * st};
            v = {dc1, dc2 * ct, dc2 * st};
            a = {ddc1, ddc2 * ct, ddc2 * st};
            break;
        }
        case Trajectory::Kind::LineBackForth: {
            p = {A * std::sin(tau), 0.0, traj.height};
            v = {A * w * std::cos(tau), 0.0, 0.0};
            a = {-A * w * w * std::sin(tau), 0.0, 0.0};
            break;
        }
        case Trajectory::Kind::CircleHorizontal:
        case Trajectory::Kind::CarCircle: {
            const double z0 =
                traj.kind == Trajectory::Kind::CircleHorizontal ? traj.height : 0.0;
            p = {A * std::cos(tau), A * std::sin(tau), z0};
            v = {-A * w * std::sin(tau), A * w * std::cos(tau), 0.0};
            a = {-A * w * w * std::cos(tau), -A * w * w * std::sin(tau), 0.0};
            break;
        }
    }
}

}  // namespace

void sample_pva(const Trajectory& traj, double t, Eigen::Vector3d& pdes,
                Eigen::Vector3d& vdes, Eigen::Vector3d& ades) {
    Eigen::Vector3d p, v, a;
    curve_pva(traj, t, p, v, a);
    if (traj.ramp > 0.0 && t < traj.ramp) {
        Eigen::Vector3d p0, v0, a0;
        curve_pva(traj, 0.0, p0, v0, a0);
        const double x = t / traj.ramp;
        const double s = x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
        const double ds = x * x * (30.0 + x * (-60.0 + 30.0 * x)) / traj.ramp;
        const double dds = x * (60.0 + x * (-180.0 + 120.0 * x)) / (traj.ramp * traj.ramp);
        const Eigen::Vector3d dp = p - p0;
        pdes = p0 + s * dp;
        vdes = ds * dp + s * v;
        ades = dds * dp + 2.0 * ds * v + s * a;
    } else {
        pdes = p;
        vdes = v;
        ades = a;
    }
}

namespace {

Eigen::Matrix3d desired_attitude_matrix(const Trajectory& traj, double t) {
    Eigen::Vector3d p, v, a;
    sample_pva(traj, t, p, v, a);
    const Eigen::Vector3d z = a + traj.gravity * Eigen::Vector3d::UnitZ();
    return lie::exp_so3(shortest_rotation(z));
}

}  // namespace

RefSample sample(const Trajectory& traj, double t) {
    RefSample ref;
    sample_pva(traj, t, ref.pdes, ref.vdes, ref.ades);
    if (traj.kind == Trajectory::Kind::CarCircle) {
        const double speed2 = ref.vdes.head<2>().squaredNorm();
        const double wd =
            speed2 > 1e-18
                ? (ref.vdes.x() * ref.ades.y() - ref.vdes.y() * ref.ades.x()) / speed2
                : 0.0;
        ref.wdes = {0.0, 0.0, wd};
        return ref;
    }
    // Body-frame rate of the feedforward attitude, by central differences on
    // the rotation itself.
    const double h = 1e-5;
    const double t0 = std::max(t, h);
    const Eigen::Matrix3d Rm = desired_attitude_matrix(traj, t0 - h);
    const Eigen::Matrix3d Rp = desired_attitude_matrix(traj, t0 + h);
    ref.wdes = lie::log_so3(Rm.transpose() * Rp) / (2.0 * h);
    return ref;
}

}  // namespace polopt
