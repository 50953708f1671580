#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "polopt/harness.hpp"
#include "polopt/lie.hpp"

namespace py = pybind11;
using namespace polopt;

namespace {

py::dict log_to_dict(const Scenario& s, const RunLog& log) {
    py::dict d;
    d["diverged"] = log.diverged;
    d["message"] = log.message;
    d["total_cost"] = log.total_cost();
    d["costs"] = log.costs();
    d["per_lap_cost"] = log.per_lap_cost(
        s.traj.period, s.platform == Platform::Quad ? s.env.dt : s.car.dt);
    if (!log.steps.empty()) {
        d["final_theta"] = Eigen::VectorXd(log.steps.back().theta);
        d["final_state"] = Eigen::VectorXd(log.steps.back().x);
    }
    d["steps"] = static_cast<int>(log.steps.size());
    d["thrust_clamp_count"] = log.thrust_clamp_count;
    return d;
}

py::dict run_json(const std::string& text) {
    const Scenario s = scenario_from_json_string(text);
    py::dict out;
    for (const auto& [name, log] : run_scenario(s)) {
        out[py::str(name)] = log_to_dict(s, log);
    }
    return out;
}

py::dict run_file(const std::string& path) {
    const Scenario s = load_scenario(path);
    py::dict out;
    for (const auto& [name, log] : run_scenario(s)) {
        out[py::str(name)] = log_to_dict(s, log);
    }
    return out;
}

std::string summary_json(const std::string& text) {
    const Scenario s = scenario_from_json_string(text);
    std::ostringstream os;
    write_summary(s, run_scenario(s), os);
    return os.str();
}

std::vector<std::pair<int, double>> sweep_json(const std::string& text,
                                               const std::vector<int>& lengths) {
    const Scenario s = scenario_from_json_string(text);
    for (const RosterEntry& e : s.roster) {
        if (e.kind == OptimizerKind::DiffTune) {
            std::vector<std::pair<int, double>> out;
            for (const SweepResult& r : episode_sweep(s, e, lengths)) {
                out.emplace_back(r.horizon, r.total_cost);
            }
            return out;
        }
    }
    throw std::runtime_error("scenario has no episodic model-based roster entry");
}

}  // namespace

PYBIND11_MODULE(polopt, m) {
    m.doc() = "Online controller-gain tuning testbed (quadrotor + Ackermann car)";

    m.def("run_scenario_json", &run_json, py::arg("text"),
          "Run every roster member of a scenario given as a JSON string; "
          "returns {member name: result dict}.");
    m.def("run_scenario_file", &run_file, py::arg("path"),
          "Run every roster member of a scenario file.");
    m.def("summary_json", &summary_json, py::arg("text"),
          "Run a scenario and return the JSON summary document.");
    m.def("episode_sweep_json", &sweep_json, py::arg("text"), py::arg("lengths"),
          "Sweep the episode length of the episodic model-based member; "
          "returns [(length, total_cost)].");

    m.def(
        "expert_quad_theta",
        []() { return Eigen::VectorXd(expert_quad_params().theta); },
        "Frozen expert quadrotor log-gains.");
    m.def(
        "expert_car_theta",
        []() { return Eigen::VectorXd(expert_car_params().theta); },
        "Frozen expert car log-gains.");

    // Dynamic-size signatures: the fixed-size Eigen casters crash with the
    // installed pybind11/numpy combination.
    m.def(
        "exp_so3",
        [](const Eigen::VectorXd& r) -> Eigen::MatrixXd {
            if (r.size() != 3) throw std::invalid_argument("exp_so3: r must have 3 entries");
            return lie::exp_so3(Eigen::Vector3d(r));
        },
        py::arg("r"), "Rotation matrix of an axis-angle vector.");
    m.def(
        "log_so3",
        [](const Eigen::MatrixXd& R) -> Eigen::VectorXd {
            if (R.rows() != 3 || R.cols() != 3)
                throw std::invalid_argument("log_so3: R must be 3x3");
            return lie::log_so3(Eigen::Matrix3d(R));
        },
        py::arg("R"), "Axis-angle vector of a rotation matrix.");
}
