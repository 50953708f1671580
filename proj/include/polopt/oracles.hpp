#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace polopt::oracles {

struct FdSpec {
    double h = 1e-6;        // base step, scaled per coordinate by max(1, |x_i|)
    double rel_tol = 1e-5;
    double abs_floor = 1e-9;
};

using VectorFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Central-difference Jacobian of fn about point.
Eigen::MatrixXd fd_jacobian(const VectorFn& fn, const Eigen::VectorXd& point,
                            const FdSpec& spec = {});

// Largest relative error between two Jacobians, entrywise, applying the
// given absolute floor. Used by the derivative test suites.
double max_rel_error(const Eigen::MatrixXd& analytic, const Eigen::MatrixXd& fd,
                     const FdSpec& spec = {});

// Sensitivity of the final rollout state to the (constant) parameter, by
// re-rolling the whole closed loop per perturbed parameter entry. rollout maps
// theta to the final state x_T.
Eigen::MatrixXd resim_sensitivity(const VectorFn& rollout, const Eigen::VectorXd& theta,
                                  const FdSpec& spec = {});

struct ContractionFit {
    double c = 0.0;        // fitted initial amplification
    double rho = 0.0;      // fitted per-step decay factor
    double residual = 0.0; // RMS residual of the log-linear fit
    std::vector<double> distances;
};

// Rolls two closed-loop trajectories from x0 and x0 + dx under a fixed
// parameter and fits ||x_t - x'_t|| ~= c * rho^t. step advances one state by
// one timestep (closed loop, time index supplied).
ContractionFit contraction_probe(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&, int)>& step,
    const Eigen::VectorXd& x0, const Eigen::VectorXd& dx, int horizon);

}  // namespace polopt::oracles
