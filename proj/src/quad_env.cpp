#include "polopt/quad_env.hpp"

#include <cmath>

#include "polopt/errors.hpp"
#include "polopt/lie.hpp"

namespace polopt {

Eigen::Matrix<double, kQuadStateDim, 1> QuadState::to_vector() const {
    Eigen::Matrix<double, kQuadStateDim, 1> x;
    x << ierr, p, v, r, w;
    return x;
}

QuadState QuadState::from_vector(const Eigen::Matrix<double, kQuadStateDim, 1>& x) {
    QuadState s;
    s.ierr = x.segment<3>(0);
    s.p = x.segment<3>(3);
    s.v = x.segment<3>(6);
    s.r = x.segment<3>(9);
    s.w = x.segment<3>(12);
    return s;
}

Eigen::Vector4d QuadAction::to_vector() const {
    return {thrust, torque.x(), torque.y(), torque.z()};
}

QuadAction QuadAction::from_vector(const Eigen::Vector4d& u) {
    return {u(0), u.segment<3>(1)};
}

bool WindModel::active_at(double t) const {
    if (!enabled) return false;
    const double phase = std::fmod(t, period_off + period_on);
    return phase >= period_off;
}

namespace {

QuadState step_nominal(const QuadState& x, double thrust,
                       const Eigen::Vector3d& torque, const EnvConfig& cfg,
                       const Eigen::Vector3d& pdes_t) {
    QuadState next;
    const double dt = cfg.dt;
    next.ierr = x.ierr + dt * (x.p - pdes_t);
    next.p = x.p + dt * x.v;
    Eigen::Matrix3d R;
    try {
        R = lie::exp_so3(x.r);
        next.r = lie::boxplus(x.r, x.w, dt);
    } catch (const RotationDomainError& e) {
        throw SimDiverged(std::string("attitude left single-cover region: ") + e.what());
    }
    next.v = x.v + dt * (thrust * R.col(2) -
                         cfg.gravity * Eigen::Vector3d::UnitZ());
    next.w = x.w + dt * torque;
    return next;
}

}  // namespace

QuadState step_true(const QuadState& x, const QuadAction& u, double t,
                    const EnvConfig& cfg, const Eigen::Vector3d& pdes_t,
                    int* thrust_clamp_count) {
    double thrust = u.thrust / cfg.mass_scale;
    if (thrust < 0.0) {
        thrust = 0.0;
        if (thrust_clamp_count) ++*thrust_clamp_count;
    }
    QuadState next = step_nominal(x, thrust, u.torque, cfg, pdes_t);
    if (cfg.wind.active_at(t)) {
        next.v += cfg.dt * cfg.wind.force;
    }
    if (!next.to_vector().allFinite()) {
        throw SimDiverged("quadrotor state became non-finite");
    }
    return next;
}

QuadStepJacobians step_model_jacobians(const QuadState& x, const QuadAction& u,
                                       double t, const EnvConfig& cfg,
                                       const Eigen::Vector3d& pdes_t) {
    (void)t;  // the nominal model is time-invariant
    QuadStepJacobians out;
    out.next = step_nominal(x, u.thrust, u.torque, cfg, pdes_t);

    const double dt = cfg.dt;
    const Eigen::Matrix3d I3 = Eigen::Matrix3d::Identity();
    auto& A = out.dg_dx;
    auto& B = out.dg_du;
    A.setZero();
    B.setZero();

    // ierr' = ierr + dt (p - pdes)
    A.block<3, 3>(0, 0) = I3;
    A.block<3, 3>(0, 3) = dt * I3;
    // p' = p + dt v
    A.block<3, 3>(3, 3) = I3;
    A.block<3, 3>(3, 6) = dt * I3;
    // v' = v + dt (f R e_z - g e_z)
    const Eigen::Matrix3d R = lie::exp_so3(x.r);
    const Eigen::Matrix3d dRez_dr =
        -R * lie::hat(Eigen::Vector3d::UnitZ()) * lie::right_jacobian(x.r);
    A.block<3, 3>(6, 6) = I3;
    A.block<3, 3>(6, 9) = dt * u.thrust * dRez_dr;
    B.block<3, 1>(6, 0) = dt * R.col(2);
    // r' = log(exp(r) exp(dt w))
    const lie::BoxplusJacobians bj = lie::boxplus_jacobians(x.r, x.w, dt);
    A.block<3, 3>(9, 9) = bj.d_r;
    A.block<3, 3>(9, 12) = bj.d_w;
    // w' = w + dt tau
    A.block<3, 3>(12, 12) = I3;
    B.block<3, 3>(12, 1) = dt * I3;

    return out;
}

}  // namespace polopt
