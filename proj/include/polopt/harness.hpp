#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polopt/car_env.hpp"
#include "polopt/cost.hpp"
#include "polopt/optimizers.hpp"
#include "polopt/quad_env.hpp"
#include "polopt/quad_policy.hpp"
#include "polopt/reference.hpp"

namespace polopt {

enum class Platform { Quad, Car };
enum class OptimizerKind { Fixed, Mgaps, DiffTune, Oprf };

struct RosterEntry {
    std::string name;
    OptimizerKind kind = OptimizerKind::Fixed;
    Eigen::VectorXd theta0;
    double eta = 1e-2;
    int horizon = 1000;      // episodic methods
    double epsilon = 0.05;   // OPRF perturbation radius
    double grad_clip = 0.0;  // optional elementwise clip, <= 0 off
    double enable_after = 0.0;  // s; runs with fixed theta0 before this time
};

struct Scenario {
    std::string name = "scenario";
    Platform platform = Platform::Quad;
    Trajectory traj;
    double duration = 60.0;
    std::uint64_t seed = 1;
    EnvConfig env;
    CarModelConfig car;
    QuadCostWeights weights;
    PolicyConfig policy;
    std::vector<RosterEntry> roster;
};

struct StepRecord {
    double t = 0.0;
    Eigen::VectorXd x;
    Eigen::VectorXd u;
    Eigen::VectorXd theta;
    double cost = 0.0;
    double y_norm = 0.0;
    bool wind_active = false;
};

struct EpisodeRecord {
    int k = 0;
    Eigen::VectorXd theta_base;
    Eigen::VectorXd theta_query;
    double episode_cost = 0.0;
};

struct RunLog {
    std::vector<StepRecord> steps;
    std::vector<EpisodeRecord> episodes;
    bool diverged = false;
    std::string message;
    int thrust_clamp_count = 0;

    double total_cost() const;
    std::vector<double> costs() const;
    // Sum of per-step costs per whole lap of the given duration.
    std::vector<double> per_lap_cost(double lap_duration, double dt) const;
    // RMS position tracking error over [t0, t1).
    double rms_position_error(const Scenario& s, double t0, double t1) const;
    // Cumulative dt*||p - p^d||^2 (the tracking-error cost term alone).
    double cumulative_tracking_error(const Scenario& s) const;
    // Mean parameter vector over [t0, t1).
    Eigen::VectorXd mean_theta(double t0, double t1, double dt) const;
};

// Deterministic closed-loop rollout of one roster entry. A diverging member
// yields a partial log with the diverged flag set, not an exception.
RunLog run_single(const Scenario& s, const RosterEntry& entry);

// Runs every roster entry on the identical scenario realization.
std::map<std::string, RunLog> run_scenario(const Scenario& s);

struct SweepResult {
    int horizon = 0;
    double total_cost = 0.0;
};

// Runs the episodic model-based optimizer once per episode length.
std::vector<SweepResult> episode_sweep(const Scenario& s, const RosterEntry& seed_entry,
                                       const std::vector<int>& lengths);

// ---- I/O ----

void write_csv(const RunLog& log, const Scenario& s, std::ostream& os);
// Sum of the "cost[1]" column of an emitted CSV.
double csv_total_cost(std::istream& is);

void write_summary(const Scenario& s, const std::map<std::string, RunLog>& results,
                   std::ostream& os);

Scenario load_scenario(const std::filesystem::path& path);
Scenario scenario_from_json_string(const std::string& text);

// ---- Frozen baseline parameters ----

// Simulation-expert quadrotor log-gains: the converged fixed point of the
// non-episodic optimizer on the disturbance-free figure-8, frozen.
Params expert_quad_params();
CarParams expert_car_params();

// Reproduces the frozen expert parameter: long run with decaying learning
// rate on the disturbance-free figure-8, final parameters averaged over the
// last few laps.
Params tune_expert_quad(double eta0 = 2000.0, double duration_per_stage = 120.0,
                        int stages = 4);

}  // namespace polopt
