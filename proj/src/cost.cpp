#include "polopt/cost.hpp"

namespace polopt {

QuadCost quad_cost(const QuadState& x, const QuadAction& u, const RefSample& ref,
                   const QuadCostWeights& wt, double dt) {
    QuadCost out;
    const Eigen::Vector3d pe = x.p - ref.pdes;
    const Eigen::Vector3d ve = x.v - ref.vdes;
    const Eigen::Vector3d we = x.w - ref.wdes;
    out.value = dt * (wt.w_p * pe.squaredNorm() + wt.w_v * ve.squaredNorm() +
                      wt.w_w * we.squaredNorm() + wt.w_tau * u.torque.squaredNorm() +
                      wt.w_f * u.thrust * u.thrust);
    out.df_dx.setZero();
    out.df_dx.segment<3>(3) = 2.0 * dt * wt.w_p * pe;
    out.df_dx.segment<3>(6) = 2.0 * dt * wt.w_v * ve;
    out.df_dx.segment<3>(12) = 2.0 * dt * wt.w_w * we;
    out.df_du(0) = 2.0 * dt * wt.w_f * u.thrust;
    out.df_du.segment<3>(1) = 2.0 * dt * wt.w_tau * u.torque;
    return out;
}

CarCost car_cost(const CarState& x, const CarAction& u, const CarRef& ref) {
    CarCost out;
    const Eigen::Vector2d pe = x.p - ref.pdes;
    const double wd = derive_ref(ref).w_d;
    const double we = x.w - wd;
    out.value = pe.squaredNorm() + we * we / 30.0 + u.steer * u.steer / 15.0;
    out.df_dx.setZero();
    out.df_dx(0) = 2.0 * pe.x();
    out.df_dx(1) = 2.0 * pe.y();
    out.df_dx(5) = 2.0 * we / 30.0;
    out.df_du.setZero();
    out.df_du(1) = 2.0 * u.steer / 15.0;
    return out;
}

}  // namespace polopt
