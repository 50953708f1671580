#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace polopt {

// Per-step derivative bundle revealed by the environment/policy/cost.
// Dimensions: state n, action m, parameter d.
struct StepDerivs {
    Eigen::MatrixXd dg_dx;      // n x n
    Eigen::MatrixXd dg_du;      // n x m
    Eigen::MatrixXd dpi_dx;     // m x n
    Eigen::MatrixXd dpi_dtheta; // m x d
    Eigen::VectorXd df_dx;      // n
    Eigen::VectorXd df_du;      // m
};

struct MgapsConfig {
    double eta = 1e-2;
    // Optional elementwise clip on the gradient estimate; <= 0 disables.
    double grad_clip = 0.0;
};

// Gradient estimate G = (df_dx + df_du dpi_dx)^T y + dpi_dtheta^T df_du.
Eigen::VectorXd policy_gradient_term(const StepDerivs& d, const Eigen::MatrixXd& y);

// Sensitivity recursion y' = (dg_dx + dg_du dpi_dx) y + dg_du dpi_dtheta.
Eigen::MatrixXd sensitivity_update(const StepDerivs& d, const Eigen::MatrixXd& y);

struct MgapsStep {
    Eigen::VectorXd theta;
    Eigen::MatrixXd y;
};

// One step of the non-episodic optimizer. The parameter update uses the
// pre-update sensitivity, then the sensitivity advances. Throws
// OptimizerDiverged on non-finite G or y.
MgapsStep mgaps_step(const Eigen::VectorXd& theta, const Eigen::MatrixXd& y,
                     const StepDerivs& derivs, const MgapsConfig& cfg);

struct EpisodicConfig {
    double eta = 1e-2;
    int horizon = 1000;
};

// Episodic model-based accumulator: y resets to zero at episode start, the
// per-step gradient terms sum into g over the episode.
class DiffTuneEpisode {
  public:
    DiffTuneEpisode(int state_dim, int param_dim);
    void observe(const StepDerivs& derivs);
    const Eigen::VectorXd& gradient() const { return g_; }
    const Eigen::MatrixXd& sensitivity() const { return y_; }
    int steps() const { return steps_; }
    void reset();

  private:
    Eigen::MatrixXd y_;
    Eigen::VectorXd g_;
    int steps_ = 0;
};

// theta_{k+1} = theta_k - eta * G_pg over one full episode of derivatives.
Eigen::VectorXd difftune_episode(const Eigen::VectorXd& theta,
                                 const std::vector<StepDerivs>& episode, double eta);

struct OprfConfig {
    double eta = 1e-4;
    int horizon = 1000;
    double epsilon = 0.05;
    std::uint64_t rng_seed = 0;
};

// Residual update theta_{k+1} = theta_k - (eta/epsilon) (J_k - J_{k-1}) h_k.
Eigen::VectorXd oprf_update(const Eigen::VectorXd& theta, double j_k, double j_prev,
                            const Eigen::VectorXd& h_k, const OprfConfig& cfg);

// Episode bookkeeping for the one-point residual-feedback optimizer. The
// deployed parameter perturbs the previous base parameter, while the update
// rule moves the current base; both are recorded.
class OprfOptimizer {
  public:
    OprfOptimizer(Eigen::VectorXd theta0, const OprfConfig& cfg);

    // Samples h_k and returns the query parameter to deploy this episode.
    const Eigen::VectorXd& begin_episode();
    // Consumes the accumulated episode cost and advances the base parameter.
    void end_episode(double episode_cost);

    const Eigen::VectorXd& base() const { return theta_; }
    const Eigen::VectorXd& query() const { return query_; }

  private:
    OprfConfig cfg_;
    Eigen::VectorXd theta_;       // theta_k
    Eigen::VectorXd theta_prev_;  // theta_{k-1}
    Eigen::VectorXd h_;
    Eigen::VectorXd query_;
    double j_prev_ = 0.0;  // J_0 := 0
    std::mt19937_64 rng_;
};

// Partial sums of (costs_alg - costs_expert). Throws std::invalid_argument on
// length mismatch.
std::vector<double> quasi_regret(const std::vector<double>& costs_alg,
                                 const std::vector<double>& costs_expert);

}  // namespace polopt
