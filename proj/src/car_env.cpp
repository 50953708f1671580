#include "polopt/car_env.hpp"

#include <cmath>

#include "polopt/errors.hpp"
#include "polopt/lie.hpp"

namespace polopt {

Eigen::Matrix<double, kCarStateDim, 1> CarState::to_vector() const {
    Eigen::Matrix<double, kCarStateDim, 1> x;
    x << p.x(), p.y(), r, v.x(), v.y(), w, psi;
    return x;
}

CarState CarState::from_vector(const Eigen::Matrix<double, kCarStateDim, 1>& x) {
    CarState s;
    s.p = {x(0), x(1)};
    s.r = x(2);
    s.v = {x(3), x(4)};
    s.w = x(5);
    s.psi = x(6);
    return s;
}

CarParams CarParams::from_gains(double k1, double k2, double k3, double k4,
                                double kp) {
    CarParams p;
    p.theta << k1, k2, k3, k4, kp;
    p.theta = p.theta.array().log();
    return p;
}

Eigen::Matrix<double, kCarParamDim, 1> CarParams::gains() const {
    return theta.array().exp();
}

CarRefDerived derive_ref(const CarRef& ref) {
    const double speed2 = ref.pdot.squaredNorm();
    if (speed2 < 1e-18) {
        throw ReferenceSingular("car reference has zero desired velocity");
    }
    CarRefDerived d;
    d.r_d = std::atan2(ref.pdot.y(), ref.pdot.x());
    // v_d = R(-r_d) pdot; its y component is zero by construction.
    d.vx_d = std::sqrt(speed2);
    d.w_d = (ref.pdot.x() * ref.pddot.y() - ref.pdot.y() * ref.pddot.x()) / speed2;
    return d;
}

CarRef car_ref(const Trajectory& traj, double t) {
    Eigen::Vector3d p, v, a;
    sample_pva(traj, t, p, v, a);
    return {p.head<2>(), v.head<2>(), a.head<2>()};
}

namespace {

struct Lateral {
    Eigen::Matrix2d A;
    Eigen::Matrix2d dA_dvx;
    Eigen::Vector2d B;
};

Lateral lateral_model(double vx, const CarModelConfig& c) {
    Lateral m;
    const double k1 = c.c_f + c.c_r;
    const double k2 = c.c_f * c.l_f - c.c_r * c.l_r;
    const double k3 = c.c_f * c.l_f * c.l_f + c.c_r * c.l_r * c.l_r;
    m.A << -k1 / vx, -vx - k2 / vx,
           -k2 / (c.i_z * vx), -k3 / (c.i_z * vx);
    const double vx2 = vx * vx;
    m.dA_dvx << k1 / vx2, -1.0 + k2 / vx2,
                k2 / (c.i_z * vx2), k3 / (c.i_z * vx2);
    m.B << c.c_f, c.c_f * c.l_f / c.i_z;
    return m;
}

void check_speed(double vx, const CarModelConfig& cfg) {
    if (std::abs(vx) < cfg.v_min) {
        throw SimDiverged("car forward speed below v_min; lateral model singular");
    }
}

}  // namespace

CarState car_step(const CarState& x, const CarAction& u, const CarModelConfig& cfg) {
    check_speed(x.v.x(), cfg);
    const Lateral m = lateral_model(x.v.x(), cfg);
    const double dt = cfg.dt;
    CarState n;
    n.p = x.p + dt * lie::rot2(x.r) * x.v;
    n.r = lie::boxplus_so2(x.r, x.w, dt);
    const Eigen::Vector2d s{x.v.y(), x.w};
    const Eigen::Vector2d s_next = s + dt * (m.A * s + m.B * x.psi);
    n.v.x() = x.v.x() + dt * cfg.c_th * (u.throttle - x.v.x());
    n.v.y() = s_next(0);
    n.w = s_next(1);
    n.psi = x.psi + dt * cfg.c_st * (u.steer - x.psi);
    if (!n.to_vector().allFinite()) {
        throw SimDiverged("car state became non-finite");
    }
    return n;
}

CarStepJacobians car_step_jacobians(const CarState& x, const CarAction& u,
                                    const CarModelConfig& cfg) {
    CarStepJacobians out;
    out.next = car_step(x, u, cfg);
    const Lateral m = lateral_model(x.v.x(), cfg);
    const double dt = cfg.dt;
    auto& A = out.dg_dx;
    auto& B = out.dg_du;
    A.setIdentity();
    B.setZero();

    // p' = p + dt R(r) v
    const double c = std::cos(x.r), s = std::sin(x.r);
    A(0, 2) = dt * (-s * x.v.x() - c * x.v.y());
    A(1, 2) = dt * (c * x.v.x() - s * x.v.y());
    A(0, 3) = dt * c;
    A(0, 4) = -dt * s;
    A(1, 3) = dt * s;
    A(1, 4) = dt * c;
    // r' = r + dt w
    A(2, 5) = dt;
    // vx' = vx + dt c_th (throttle - vx)
    A(3, 3) = 1.0 - dt * cfg.c_th;
    B(3, 0) = dt * cfg.c_th;
    // (vy', w') = s + dt (A(vx) s + B psi)
    const Eigen::Vector2d sv{x.v.y(), x.w};
    const Eigen::Vector2d ds_dvx = dt * (m.dA_dvx * sv);
    A(4, 3) = ds_dvx(0);
    A(5, 3) = ds_dvx(1);
    A(4, 4) = 1.0 + dt * m.A(0, 0);
    A(4, 5) = dt * m.A(0, 1);
    A(5, 4) = dt * m.A(1, 0);
    A(5, 5) = 1.0 + dt * m.A(1, 1);
    A(4, 6) = dt * m.B(0);
    A(5, 6) = dt * m.B(1);
    // psi' = psi + dt c_st (steer - psi)
    A(6, 6) = 1.0 - dt * cfg.c_st;
    B(6, 1) = dt * cfg.c_st;
    (void)u;
    return out;
}

namespace {

struct CarCascade {
    Eigen::Matrix<double, kCarParamDim, 1> k;
    CarRefDerived d;
    double re;        // heading error, wrapped
    double ey;        // lateral position error in the reference frame
    double ex_body;   // longitudinal position error in the body frame
    double steer;
    double throttle;
};

CarCascade car_cascade(const CarState& x, const CarRef& ref, const CarParams& params) {
    CarCascade c;
    c.k = params.gains();
    c.d = derive_ref(ref);
    const Eigen::Vector2d pe = x.p - ref.pdes;
    c.ey = (lie::rot2(-c.d.r_d) * pe).y();
    c.ex_body = (lie::rot2(-x.r) * pe).x();
    c.re = lie::wrap_angle(x.r - c.d.r_d);
    c.steer = -c.k(0) * c.ey - c.k(1) * (x.v.y() + c.re * x.v.x()) - c.k(2) * c.re -
              c.k(3) * (x.w - c.d.w_d);
    c.throttle = -c.k(4) * c.ex_body + c.d.vx_d;
    return c;
}

}  // namespace

CarAction car_act(const CarState& x, const CarRef& ref, const CarParams& params) {
    const CarCascade c = car_cascade(x, ref, params);
    return {c.throttle, c.steer};
}

CarPolicyJacobians car_act_jacobians(const CarState& x, const CarRef& ref,
                                     const CarParams& params) {
    const CarCascade c = car_cascade(x, ref, params);
    CarPolicyJacobians out;
    out.u = {c.throttle, c.steer};
    out.dpi_dx.setZero();
    out.dpi_dtheta.setZero();

    const Eigen::Vector2d pe = x.p - ref.pdes;
    const double cr = std::cos(x.r), sr = std::sin(x.r);
    const double cd = std::cos(c.d.r_d), sd = std::sin(c.d.r_d);

    // Throttle row (action index 0).
    out.dpi_dx(0, 0) = -c.k(4) * cr;
    out.dpi_dx(0, 1) = -c.k(4) * sr;
    out.dpi_dx(0, 2) = -c.k(4) * (-sr * pe.x() + cr * pe.y());
    // Steer row (action index 1).
    out.dpi_dx(1, 0) = -c.k(0) * (-sd);
    out.dpi_dx(1, 1) = -c.k(0) * cd;
    out.dpi_dx(1, 2) = -c.k(1) * x.v.x() - c.k(2);
    out.dpi_dx(1, 3) = -c.k(1) * c.re;
    out.dpi_dx(1, 4) = -c.k(1);
    out.dpi_dx(1, 5) = -c.k(3);

    // Log-gain chain: d gain / d theta = gain.
    out.dpi_dtheta(1, 0) = -c.k(0) * c.ey;
    out.dpi_dtheta(1, 1) = -c.k(1) * (x.v.y() + c.re * x.v.x());
    out.dpi_dtheta(1, 2) = -c.k(2) * c.re;
    out.dpi_dtheta(1, 3) = -c.k(3) * (x.w - c.d.w_d);
    out.dpi_dtheta(0, 4) = -c.k(4) * c.ex_body;
    return out;
}

}  // namespace polopt
