#include "polopt/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace polopt::oracles {

Eigen::MatrixXd fd_jacobian(const VectorFn& fn, const Eigen::VectorXd& point,
                            const FdSpec& spec) {
    Eigen::MatrixXd jac;
    for (Eigen::Index j = 0; j < point.size(); ++j) {
        const double h = spec.h * std::max(1.0, std::abs(point(j)));
        Eigen::VectorXd xp = point, xm = point;
        xp(j) += h;
        xm(j) -= h;
        const Eigen::VectorXd fp = fn(xp);
        const Eigen::VectorXd fm = fn(xm);
        if (!fp.allFinite() || !fm.allFinite()) {
            throw std::runtime_error("fd_jacobian: non-finite evaluation");
        }
        if (jac.size() == 0) jac.resize(fp.size(), point.size());
        jac.col(j) = (fp - fm) / (2.0 * h);
    }
    return jac;
}

double max_rel_error(const Eigen::MatrixXd& analytic, const Eigen::MatrixXd& fd,
                     const FdSpec& spec) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < analytic.rows(); ++i) {
        for (Eigen::Index j = 0; j < analytic.cols(); ++j) {
            const double denom =
                std::max({std::abs(analytic(i, j)), std::abs(fd(i, j)), spec.abs_floor});
            worst = std::max(worst, std::abs(analytic(i, j) - fd(i, j)) / denom);
        }
    }
    return worst;
}

Eigen::MatrixXd resim_sensitivity(const VectorFn& rollout, const Eigen::VectorXd& theta,
                                  const FdSpec& spec) {
    return fd_jacobian(rollout, theta, spec);
}

ContractionFit contraction_probe(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&, int)>& step,
    const Eigen::VectorXd& x0, const Eigen::VectorXd& dx, int horizon) {
    ContractionFit fit;
    Eigen::VectorXd a = x0;
    Eigen::VectorXd b = x0 + dx;
    fit.distances.reserve(horizon + 1);
    fit.distances.push_back((a - b).norm());
    for (int t = 0; t < horizon; ++t) {
        a = step(a, t);
        b = step(b, t);
        fit.distances.push_back((a - b).norm());
    }
    if (dx.isZero(0.0)) {
        // Identical trajectories; nothing to fit.
        fit.c = 0.0;
        fit.rho = 0.0;
        return fit;
    }
    // Least-squares fit of log d_t = log c + t log rho over positive distances.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t t = 0; t < fit.distances.size(); ++t) {
        if (fit.distances[t] <= 0.0) continue;
        const double xi = static_cast<double>(t);
        const double yi = std::log(fit.distances[t]);
        sx += xi;
        sy += yi;
        sxx += xi * xi;
        sxy += xi * yi;
        ++n;
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    fit.rho = std::exp(slope);
    fit.c = std::exp(intercept);
    double ss = 0.0;
    for (std::size_t t = 0; t < fit.distances.size(); ++t) {
        if (fit.distances[t] <= 0.0) continue;
        const double pred = intercept + slope * static_cast<double>(t);
        const double err = std::log(fit.distances[t]) - pred;
        ss += err * err;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

}  // namespace polopt::oracles
