#include "polopt/harness.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "polopt/errors.hpp"

namespace polopt {

namespace {

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t entry_seed(const Scenario& s, const RosterEntry& e) {
    return s.seed * 0x9E3779B97F4A7C15ull ^ fnv1a64(e.name);
}

double scenario_dt(const Scenario& s) {
    return s.platform == Platform::Quad ? s.env.dt : s.car.dt;
}

// Keeps the gravity constants of the trajectory and policy in sync with the
// environment before a run.
Scenario normalized(const Scenario& in) {
    Scenario s = in;
    s.traj.gravity = s.env.gravity;
    s.policy.gravity = s.env.gravity;
    return s;
}

struct QuadAdapter {
    static constexpr int n = kQuadStateDim;
    static constexpr int m = kQuadActionDim;
    static constexpr int d = kQuadParamDim;
    using State = QuadState;

    const Scenario& s;

    State initial() const {
        QuadState x;
        Eigen::Vector3d p, v, a;
        sample_pva(s.traj, 0.0, p, v, a);
        x.p = p;
        return x;
    }

    struct Out {
        State next;
        Eigen::VectorXd u;
        double cost = 0.0;
        bool wind = false;
    };

    Out step(const State& x, const Eigen::VectorXd& theta, double t,
             StepDerivs* derivs, int* clamp) const {
        const RefSample ref = sample(s.traj, t);
        Params params;
        params.theta = theta;
        Out out;
        QuadAction u;
        if (derivs) {
            const QuadPolicyJacobians pj = act_with_jacobians(x, ref, params, s.policy);
            u = pj.u;
            const QuadStepJacobians sj = step_model_jacobians(x, u, t, s.env, ref.pdes);
            derivs->dg_dx = sj.dg_dx;
            derivs->dg_du = sj.dg_du;
            derivs->dpi_dx = pj.dpi_dx;
            derivs->dpi_dtheta = pj.dpi_dtheta;
        } else {
            u = act(x, ref, params, s.policy);
        }
        const QuadCost c = quad_cost(x, u, ref, s.weights, s.env.dt);
        if (derivs) {
            derivs->df_dx = c.df_dx;
            derivs->df_du = c.df_du;
        }
        out.cost = c.value;
        out.next = step_true(x, u, t, s.env, ref.pdes, clamp);
        out.u = u.to_vector();
        out.wind = s.env.wind.active_at(t);
        return out;
    }

    Eigen::VectorXd state_vec(const State& x) const { return x.to_vector(); }
};

struct CarAdapter {
    static constexpr int n = kCarStateDim;
    static constexpr int m = kCarActionDim;
    static constexpr int d = kCarParamDim;
    using State = CarState;

    const Scenario& s;

    State initial() const {
        // On-trajectory start: the lateral model is singular at rest.
        const CarRef ref = car_ref(s.traj, 0.0);
        const CarRefDerived der = derive_ref(ref);
        CarState x;
        x.p = ref.pdes;
        x.r = der.r_d;
        x.v = {der.vx_d, 0.0};
        x.w = der.w_d;
        return x;
    }

    struct Out {
        State next;
        Eigen::VectorXd u;
        double cost = 0.0;
        bool wind = false;
    };

    Out step(const State& x, const Eigen::VectorXd& theta, double t,
             StepDerivs* derivs, int* /*clamp*/) const {
        const CarRef ref = car_ref(s.traj, t);
        CarParams params;
        params.theta = theta;
        Out out;
        CarAction u;
        if (derivs) {
            const CarPolicyJacobians pj = car_act_jacobians(x, ref, params);
            u = pj.u;
            const CarStepJacobians sj = car_step_jacobians(x, u, s.car);
            derivs->dg_dx = sj.dg_dx;
            derivs->dg_du = sj.dg_du;
            derivs->dpi_dx = pj.dpi_dx;
            derivs->dpi_dtheta = pj.dpi_dtheta;
        } else {
            u = car_act(x, ref, params);
        }
        const CarCost c = car_cost(x, u, ref);
        if (derivs) {
            derivs->df_dx = c.df_dx;
            derivs->df_du = c.df_du;
        }
        out.cost = c.value;
        out.next = car_step(x, u, s.car);
        out.u = u.to_vector();
        return out;
    }

    Eigen::VectorXd state_vec(const State& x) const { return x.to_vector(); }
};

template <class Adapter>
RunLog run_entry(const Scenario& s, const RosterEntry& e) {
    const Adapter ad{s};
    RunLog log;
    const double dt = scenario_dt(s);
    const int total_steps = static_cast<int>(std::llround(s.duration / dt));
    log.steps.reserve(total_steps);

    typename Adapter::State x = ad.initial();
    Eigen::VectorXd theta = e.theta0;
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(Adapter::n, Adapter::d);
    DiffTuneEpisode acc(Adapter::n, Adapter::d);
    OprfConfig ocfg;
    ocfg.eta = e.eta;
    ocfg.horizon = e.horizon;
    ocfg.epsilon = e.epsilon;
    ocfg.rng_seed = entry_seed(s, e);
    OprfOptimizer oprf(theta, ocfg);
    double episode_cost = 0.0;
    int episode_steps = 0;
    int episode_k = 0;

    try {
        for (int i = 0; i < total_steps; ++i) {
            const double t = i * dt;
            const bool enabled = t >= e.enable_after - 1e-9;
            const bool model_based =
                e.kind == OptimizerKind::Mgaps || e.kind == OptimizerKind::DiffTune;
            const bool need_derivs = model_based && enabled;

            Eigen::VectorXd theta_t = theta;
            if (e.kind == OptimizerKind::Oprf && enabled) {
                if (episode_steps == 0) {
                    oprf.begin_episode();
                    episode_cost = 0.0;
                }
                theta_t = oprf.query();
            }

            StepDerivs derivs;
            typename Adapter::Out out =
                ad.step(x, theta_t, t, need_derivs ? &derivs : nullptr,
                        &log.thrust_clamp_count);

            double y_norm = 0.0;
            if (e.kind == OptimizerKind::Mgaps) y_norm = y.norm();
            if (e.kind == OptimizerKind::DiffTune) y_norm = acc.sensitivity().norm();
            log.steps.push_back(
                {t, ad.state_vec(x), out.u, theta_t, out.cost, y_norm, out.wind});

            if (enabled) {
                switch (e.kind) {
                    case OptimizerKind::Fixed:
                        break;
                    case OptimizerKind::Mgaps: {
                        MgapsConfig cfg{e.eta, e.grad_clip};
                        MgapsStep st = mgaps_step(theta, y, derivs, cfg);
                        theta = std::move(st.theta);
                        y = std::move(st.y);
                        break;
                    }
                    case OptimizerKind::DiffTune: {
                        acc.observe(derivs);
                        if (acc.steps() >= e.horizon) {
                            Eigen::VectorXd g = acc.gradient();
                            if (e.grad_clip > 0.0) {
                                g = g.cwiseMax(-e.grad_clip).cwiseMin(e.grad_clip);
                            }
                            theta -= e.eta * g;
                            log.episodes.push_back({episode_k++, theta, theta, 0.0});
                            acc.reset();
                        }
                        break;
                    }
                    case OptimizerKind::Oprf: {
                        episode_cost += out.cost;
                        if (++episode_steps >= e.horizon) {
                            oprf.end_episode(episode_cost);
                            log.episodes.push_back(
                                {episode_k++, oprf.base(), oprf.query(), episode_cost});
                            theta = oprf.base();
                            episode_steps = 0;
                        }
                        break;
                    }
                }
            }
            x = out.next;
        }
    } catch (const std::exception& ex) {
        log.diverged = true;
        log.message = ex.what();
    }
    return log;
}

}  // namespace

double RunLog::total_cost() const {
    double acc = 0.0;
    for (const StepRecord& r : steps) acc += r.cost;
    return acc;
}

std::vector<double> RunLog::costs() const {
    std::vector<double> out;
    out.reserve(steps.size());
    for (const StepRecord& r : steps) out.push_back(r.cost);
    return out;
}

std::vector<double> RunLog::per_lap_cost(double lap_duration, double dt) const {
    const int per_lap = static_cast<int>(std::llround(lap_duration / dt));
    std::vector<double> laps;
    double acc = 0.0;
    int count = 0;
    for (const StepRecord& r : steps) {
        acc += r.cost;
        if (++count == per_lap) {
            laps.push_back(acc);
            acc = 0.0;
            count = 0;
        }
    }
    return laps;
}

double RunLog::rms_position_error(const Scenario& s_in, double t0, double t1) const {
    const Scenario s = normalized(s_in);
    double acc = 0.0;
    int n = 0;
    const int offset = s.platform == Platform::Quad ? 3 : 0;
    const int dim = s.platform == Platform::Quad ? 3 : 2;
    for (const StepRecord& r : steps) {
        if (r.t < t0 || r.t >= t1) continue;
        Eigen::Vector3d p, v, a;
        sample_pva(s.traj, r.t, p, v, a);
        acc += (r.x.segment(offset, dim) - p.head(dim)).squaredNorm();
        ++n;
    }
    return n > 0 ? std::sqrt(acc / n) : 0.0;
}

double RunLog::cumulative_tracking_error(const Scenario& s_in) const {
    const Scenario s = normalized(s_in);
    const double dt = scenario_dt(s);
    const int offset = s.platform == Platform::Quad ? 3 : 0;
    const int dim = s.platform == Platform::Quad ? 3 : 2;
    double acc = 0.0;
    for (const StepRecord& r : steps) {
        Eigen::Vector3d p, v, a;
        sample_pva(s.traj, r.t, p, v, a);
        acc += dt * (r.x.segment(offset, dim) - p.head(dim)).squaredNorm();
    }
    return acc;
}

Eigen::VectorXd RunLog::mean_theta(double t0, double t1, double dt) const {
    (void)dt;
    Eigen::VectorXd acc;
    int n = 0;
    for (const StepRecord& r : steps) {
        if (r.t < t0 || r.t >= t1) continue;
        if (acc.size() == 0) acc = Eigen::VectorXd::Zero(r.theta.size());
        acc += r.theta;
        ++n;
    }
    if (n == 0) return acc;
    return acc / n;
}

RunLog run_single(const Scenario& s_in, const RosterEntry& entry) {
    const Scenario s = normalized(s_in);
    if (s.platform == Platform::Quad) {
        return run_entry<QuadAdapter>(s, entry);
    }
    return run_entry<CarAdapter>(s, entry);
}

std::map<std::string, RunLog> run_scenario(const Scenario& s) {
    std::map<std::string, RunLog> out;
    for (const RosterEntry& e : s.roster) {
        out.emplace(e.name, run_single(s, e));
    }
    return out;
}

std::vector<SweepResult> episode_sweep(const Scenario& s, const RosterEntry& seed_entry,
                                       const std::vector<int>& lengths) {
    std::vector<SweepResult> out;
    for (int h : lengths) {
        RosterEntry e = seed_entry;
        e.kind = OptimizerKind::DiffTune;
        e.horizon = h;
        const RunLog log = run_single(s, e);
        out.push_back({h, log.total_cost()});
    }
    return out;
}

}  // namespace polopt
