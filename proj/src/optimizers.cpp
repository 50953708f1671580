#include "polopt/optimizers.hpp"

#include <stdexcept>

#include "polopt/errors.hpp"

namespace polopt {

Eigen::VectorXd policy_gradient_term(const StepDerivs& d, const Eigen::MatrixXd& y) {
    const Eigen::VectorXd dF_dx = d.df_dx + d.dpi_dx.transpose() * d.df_du;
    return y.transpose() * dF_dx + d.dpi_dtheta.transpose() * d.df_du;
}

Eigen::MatrixXd sensitivity_update(const StepDerivs& d, const Eigen::MatrixXd& y) {
    return (d.dg_dx + d.dg_du * d.dpi_dx) * y + d.dg_du * d.dpi_dtheta;
}

MgapsStep mgaps_step(const Eigen::VectorXd& theta, const Eigen::MatrixXd& y,
                     const StepDerivs& derivs, const MgapsConfig& cfg) {
    Eigen::VectorXd g = policy_gradient_term(derivs, y);
    if (!g.allFinite()) {
        throw OptimizerDiverged("gradient estimate became non-finite");
    }
    if (cfg.grad_clip > 0.0) {
        g = g.cwiseMax(-cfg.grad_clip).cwiseMin(cfg.grad_clip);
    }
    MgapsStep out;
    out.theta = theta - cfg.eta * g;
    out.y = sensitivity_update(derivs, y);
    if (!out.y.allFinite()) {
        throw OptimizerDiverged("sensitivity state became non-finite");
    }
    return out;
}

DiffTuneEpisode::DiffTuneEpisode(int state_dim, int param_dim)
    : y_(Eigen::MatrixXd::Zero(state_dim, param_dim)),
      g_(Eigen::VectorXd::Zero(param_dim)) {}

void DiffTuneEpisode::observe(const StepDerivs& derivs) {
    g_ += policy_gradient_term(derivs, y_);
    y_ = sensitivity_update(derivs, y_);
    if (!g_.allFinite() || !y_.allFinite()) {
        throw OptimizerDiverged("episodic gradient accumulator became non-finite");
    }
    ++steps_;
}

void DiffTuneEpisode::reset() {
    y_.setZero();
    g_.setZero();
    steps_ = 0;
}

Eigen::VectorXd difftune_episode(const Eigen::VectorXd& theta,
                                 const std::vector<StepDerivs>& episode, double eta) {
    if (episode.empty()) return theta;
    DiffTuneEpisode acc(static_cast<int>(episode.front().dg_dx.rows()),
                        static_cast<int>(theta.size()));
    for (const StepDerivs& d : episode) acc.observe(d);
    return theta - eta * acc.gradient();
}

Eigen::VectorXd oprf_update(const Eigen::VectorXd& theta, double j_k, double j_prev,
                            const Eigen::VectorXd& h_k, const OprfConfig& cfg) {
    if (!std::isfinite(j_k) || !std::isfinite(j_prev)) {
        throw OptimizerDiverged("episode cost became non-finite");
    }
    return theta - (cfg.eta / cfg.epsilon) * (j_k - j_prev) * h_k;
}

OprfOptimizer::OprfOptimizer(Eigen::VectorXd theta0, const OprfConfig& cfg)
    : cfg_(cfg),
      theta_(std::move(theta0)),
      theta_prev_(theta_),
      h_(Eigen::VectorXd::Zero(theta_.size())),
      query_(theta_),
      rng_(cfg.rng_seed) {}

const Eigen::VectorXd& OprfOptimizer::begin_episode() {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index i = 0; i < h_.size(); ++i) h_(i) = normal(rng_);
    query_ = theta_prev_ + cfg_.epsilon * h_;
    return query_;
}

void OprfOptimizer::end_episode(double episode_cost) {
    Eigen::VectorXd next = oprf_update(theta_, episode_cost, j_prev_, h_, cfg_);
    theta_prev_ = theta_;
    theta_ = std::move(next);
    j_prev_ = episode_cost;
}

std::vector<double> quasi_regret(const std::vector<double>& costs_alg,
                                 const std::vector<double>& costs_expert) {
    if (costs_alg.size() != costs_expert.size()) {
        throw std::invalid_argument("quasi_regret: cost stream length mismatch");
    }
    std::vector<double> out(costs_alg.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < costs_alg.size(); ++i) {
        acc += costs_alg[i] - costs_expert[i];
        out[i] = acc;
    }
    return out;
}

}  // namespace polopt
