#include "polopt/quad_policy.hpp"

#include <cmath>

#include "polopt/attitude.hpp"
#include "polopt/lie.hpp"

namespace polopt {

Params Params::from_gains(double ki_xy, double ki_z, double kp_xy, double kp_z,
                          double kv_xy, double kv_z, double kr_xy, double kr_z,
                          double kw_xy, double kw_z) {
    Params p;
    p.theta << ki_xy, ki_z, kp_xy, kp_z, kv_xy, kv_z, kr_xy, kr_z, kw_xy, kw_z;
    p.theta = p.theta.array().log();
    return p;
}

Eigen::Matrix<double, kQuadParamDim, 1> Params::gains() const {
    return theta.array().exp();
}

Params detune(const Params& params, double amount) {
    Params out = params;
    out.theta.array() -= amount;
    return out;
}

double softclamp(double x, double bound) {
    return bound * std::tanh(x / bound);
}

namespace {

// Everything act/act_with_jacobians share.
struct Cascade {
    Eigen::Matrix<double, kQuadParamDim, 1> k;  // exponentiated gains
    Eigen::Vector3d ki, kp, kv, kr, kw;         // diagonal gain vectors
    Eigen::Vector3d pe, ve, we;                 // tracking errors
    Eigen::Vector3d z;                          // commanded thrust vector
    Eigen::Matrix3d R;
    Eigen::Vector3d body_z;                     // R e_z
    double thrust;
    Eigen::Vector3d r_d;                        // desired attitude
    Eigen::Vector3d att_err;                    // log(exp(r) exp(-r_d))
    Eigen::Vector3d tau_raw;                    // pre-softclamp
    Eigen::Vector3d tau;
    Eigen::Vector3d bounds;
};

}  // namespace

namespace detail {

struct FullCascade : Cascade {
    Eigen::Matrix3d d_attmat_r;   // d(R e_z)/dr, 3x3
    Eigen::Matrix3d de_dr;        // d att_err / d r
    Eigen::Matrix3d de_drd;       // d att_err / d r_d
    Eigen::Matrix3d drd_dz;
    Eigen::Vector3d clamp_slope;  // sech^2 factors
};

}  // namespace detail

namespace {

Cascade run_cascade(const QuadState& x, const RefSample& ref, const Params& params,
                    const PolicyConfig& cfg, bool with_jacobians,
                    detail::FullCascade* full) {
    const double gravity = cfg.gravity;
    Cascade base;
    Cascade& c = full ? static_cast<Cascade&>(*full) : base;
    c.k = params.gains();
    c.ki = {c.k(0), c.k(0), c.k(1)};
    c.kp = {c.k(2), c.k(2), c.k(3)};
    c.kv = {c.k(4), c.k(4), c.k(5)};
    c.kr = {c.k(6), c.k(6), c.k(7)};
    c.kw = {c.k(8), c.k(8), c.k(9)};
    c.bounds = {cfg.b_xy, cfg.b_xy, cfg.b_z};

    c.pe = x.p - ref.pdes;
    c.ve = x.v - ref.vdes;
    c.we = x.w - ref.wdes;
    c.z = -c.ki.cwiseProduct(x.ierr) - c.kp.cwiseProduct(c.pe) -
          c.kv.cwiseProduct(c.ve) + ref.ades +
          gravity * Eigen::Vector3d::UnitZ();

    c.R = lie::exp_so3(x.r);
    c.body_z = c.R.col(2);
    c.thrust = c.z.dot(c.body_z);

    if (with_jacobians) {
        const ShortestRotation sr = shortest_rotation_jacobian(c.z);
        c.r_d = sr.r_d;
        full->drd_dz = sr.d_z;
    } else {
        c.r_d = shortest_rotation(c.z);
    }

    const Eigen::Matrix3d R_err = c.R * lie::exp_so3(-c.r_d);
    c.att_err = lie::log_so3(R_err);

    c.tau_raw = -c.kr.cwiseProduct(c.att_err) - c.kw.cwiseProduct(c.we);
    for (int i = 0; i < 3; ++i) {
        c.tau(i) = softclamp(c.tau_raw(i), c.bounds(i));
    }

    if (with_jacobians) {
        const Eigen::Matrix3d jr_r = lie::right_jacobian(x.r);
        full->d_attmat_r = -c.R * lie::hat(Eigen::Vector3d::UnitZ()) * jr_r;
        const Eigen::Matrix3d jinv_e = lie::right_jacobian_inv(c.att_err);
        // exp(r + d) exp(-r_d) = exp(r) exp(-r_d) exp(exp(r_d) Jr(r) d)
        full->de_dr = jinv_e * lie::exp_so3(c.r_d) * jr_r;
        // exp(-(r_d + d)) = exp(-r_d) exp(-Jl(r_d) d)
        full->de_drd = -jinv_e * lie::left_jacobian(c.r_d);
        for (int i = 0; i < 3; ++i) {
            const double th = std::tanh(c.tau_raw(i) / c.bounds(i));
            full->clamp_slope(i) = 1.0 - th * th;
        }
    }
    return c;
}

}  // namespace

QuadAction act(const QuadState& x, const RefSample& ref, const Params& params,
               const PolicyConfig& cfg) {
    const Cascade c = run_cascade(x, ref, params, cfg, false, nullptr);
    return {c.thrust, c.tau};
}

QuadPolicyJacobians act_with_jacobians(const QuadState& x, const RefSample& ref,
                                       const Params& params, const PolicyConfig& cfg) {
    detail::FullCascade c;
    run_cascade(x, ref, params, cfg, true, &c);

    QuadPolicyJacobians out;
    out.u = {c.thrust, c.tau};
    out.dpi_dx.setZero();
    out.dpi_dtheta.setZero();

    // d z / d(state blocks): diagonal gain matrices on ierr, p, v.
    const Eigen::Matrix3d dz_di = (-c.ki).asDiagonal();
    const Eigen::Matrix3d dz_dp = (-c.kp).asDiagonal();
    const Eigen::Matrix3d dz_dv = (-c.kv).asDiagonal();

    // Thrust row: f = z . (R e_z).
    out.dpi_dx.block<1, 3>(0, 0) = c.body_z.transpose() * dz_di;
    out.dpi_dx.block<1, 3>(0, 3) = c.body_z.transpose() * dz_dp;
    out.dpi_dx.block<1, 3>(0, 6) = c.body_z.transpose() * dz_dv;
    out.dpi_dx.block<1, 3>(0, 9) = c.z.transpose() * c.d_attmat_r;

    // Torque rows. Chain through z for the outer-loop states, direct for r, w.
    const Eigen::Matrix3d S = c.clamp_slope.asDiagonal();
    const Eigen::Matrix3d Kr = c.kr.asDiagonal();
    const Eigen::Matrix3d Kw = c.kw.asDiagonal();
    const Eigen::Matrix3d dtau_dz = -S * Kr * c.de_drd * c.drd_dz;
    out.dpi_dx.block<3, 3>(1, 0) = dtau_dz * dz_di;
    out.dpi_dx.block<3, 3>(1, 3) = dtau_dz * dz_dp;
    out.dpi_dx.block<3, 3>(1, 6) = dtau_dz * dz_dv;
    out.dpi_dx.block<3, 3>(1, 9) = -S * Kr * c.de_dr;
    out.dpi_dx.block<3, 3>(1, 12) = -S * Kw;

    // Log-gain Jacobian: d gain / d theta = gain, so each column is the raw
    // gain derivative scaled by the gain itself.
    auto xy_split = [](const Eigen::Vector3d& v, Eigen::Vector3d& vxy,
                       Eigen::Vector3d& vz) {
        vxy = {v.x(), v.y(), 0.0};
        vz = {0.0, 0.0, v.z()};
    };
    Eigen::Matrix<double, 3, kQuadParamDim> dz_dtheta;
    dz_dtheta.setZero();
    Eigen::Vector3d exy, ez;
    xy_split(x.ierr, exy, ez);
    dz_dtheta.col(0) = -c.k(0) * exy;
    dz_dtheta.col(1) = -c.k(1) * ez;
    xy_split(c.pe, exy, ez);
    dz_dtheta.col(2) = -c.k(2) * exy;
    dz_dtheta.col(3) = -c.k(3) * ez;
    xy_split(c.ve, exy, ez);
    dz_dtheta.col(4) = -c.k(4) * exy;
    dz_dtheta.col(5) = -c.k(5) * ez;

    out.dpi_dtheta.row(0) = c.body_z.transpose() * dz_dtheta;
    out.dpi_dtheta.block<3, kQuadParamDim>(1, 0) = dtau_dz * dz_dtheta;
    xy_split(c.att_err, exy, ez);
    out.dpi_dtheta.block<3, 1>(1, 6) = -S * (c.k(6) * exy);
    out.dpi_dtheta.block<3, 1>(1, 7) = -S * (c.k(7) * ez);
    xy_split(c.we, exy, ez);
    out.dpi_dtheta.block<3, 1>(1, 8) = -S * (c.k(8) * exy);
    out.dpi_dtheta.block<3, 1>(1, 9) = -S * (c.k(9) * ez);

    return out;
}

}  // namespace polopt
