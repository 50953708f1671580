#include <fstream>
#include <iomanip>
#include <istream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "polopt/harness.hpp"
#include "polopt/optimizers.hpp"

namespace polopt {

namespace {

using nlohmann::json;

Trajectory::Kind traj_kind_from_string(const std::string& s) {
    if (s == "figure8_diagonal") return Trajectory::Kind::Figure8Diagonal;
    if (s == "line_back_forth") return Trajectory::Kind::LineBackForth;
    if (s == "circle_horizontal") return Trajectory::Kind::CircleHorizontal;
    if (s == "car_circle") return Trajectory::Kind::CarCircle;
    throw std::runtime_error("unknown trajectory kind: " + s);
}

std::string traj_kind_to_string(Trajectory::Kind k) {
    switch (k) {
        case Trajectory::Kind::Figure8Diagonal: return "figure8_diagonal";
        case Trajectory::Kind::LineBackForth: return "line_back_forth";
        case Trajectory::Kind::CircleHorizontal: return "circle_horizontal";
        case Trajectory::Kind::CarCircle: return "car_circle";
    }
    return "?";
}

OptimizerKind optimizer_from_string(const std::string& s) {
    if (s == "fixed") return OptimizerKind::Fixed;
    if (s == "mgaps") return OptimizerKind::Mgaps;
    if (s == "difftune") return OptimizerKind::DiffTune;
    if (s == "oprf") return OptimizerKind::Oprf;
    throw std::runtime_error("unknown optimizer kind: " + s);
}

Eigen::VectorXd theta_from_json(const json& j, Platform platform) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        const bool quad = platform == Platform::Quad;
        Eigen::VectorXd expert = quad ? Eigen::VectorXd(expert_quad_params().theta)
                                      : Eigen::VectorXd(expert_car_params().theta);
        if (name == "expert") return expert;
        if (name == "detune") return expert.array() - std::log(2.0);
        throw std::runtime_error("unknown theta0 preset: " + name);
    }
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                             static_cast<Eigen::Index>(values.size()));
}

}  // namespace

Scenario scenario_from_json_string(const std::string& text) {
    const json j = json::parse(text);
    Scenario s;
    s.name = j.value("name", s.name);
    const std::string platform = j.value("platform", std::string("quad"));
    s.platform = platform == "car" ? Platform::Car : Platform::Quad;
    s.duration = j.value("duration", s.duration);
    s.seed = j.value("seed", s.seed);

    if (j.contains("trajectory")) {
        const json& t = j["trajectory"];
        s.traj.kind = traj_kind_from_string(t.value("kind", std::string("figure8_diagonal")));
        s.traj.period = t.value("period", s.traj.period);
        s.traj.amplitude = t.value("amplitude", s.traj.amplitude);
        if (t.contains("tilt_deg")) s.traj.tilt = t["tilt_deg"].get<double>() * M_PI / 180.0;
        s.traj.height = t.value("height", s.traj.height);
        s.traj.ramp = t.value("ramp", s.traj.ramp);
    }
    if (j.contains("env")) {
        const json& e = j["env"];
        s.env.dt = e.value("dt", s.env.dt);
        s.env.gravity = e.value("gravity", s.env.gravity);
        s.env.mass_scale = e.value("mass_scale", s.env.mass_scale);
        if (e.contains("wind")) {
            const json& w = e["wind"];
            s.env.wind.enabled = w.value("enabled", false);
            if (w.contains("force")) {
                const auto f = w["force"].get<std::vector<double>>();
                s.env.wind.force = {f.at(0), f.at(1), f.at(2)};
            }
            s.env.wind.period_on = w.value("period_on", s.env.wind.period_on);
            s.env.wind.period_off = w.value("period_off", s.env.wind.period_off);
        }
    }
    if (j.contains("car")) {
        const json& c = j["car"];
        s.car.dt = c.value("dt", s.car.dt);
        s.car.c_th = c.value("c_th", s.car.c_th);
        s.car.c_st = c.value("c_st", s.car.c_st);
        s.car.c_f = c.value("c_f", s.car.c_f);
        s.car.c_r = c.value("c_r", s.car.c_r);
        s.car.l_f = c.value("l_f", s.car.l_f);
        s.car.l_r = c.value("l_r", s.car.l_r);
        s.car.i_z = c.value("i_z", s.car.i_z);
        s.car.v_min = c.value("v_min", s.car.v_min);
    }
    if (j.contains("policy")) {
        const json& p = j["policy"];
        s.policy.b_xy = p.value("b_xy", s.policy.b_xy);
        s.policy.b_z = p.value("b_z", s.policy.b_z);
    }
    if (j.contains("cost")) {
        const json& c = j["cost"];
        s.weights.w_p = c.value("w_p", s.weights.w_p);
        s.weights.w_v = c.value("w_v", s.weights.w_v);
        s.weights.w_w = c.value("w_w", s.weights.w_w);
        s.weights.w_tau = c.value("w_tau", s.weights.w_tau);
        s.weights.w_f = c.value("w_f", s.weights.w_f);
    }
    for (const json& r : j.value("roster", json::array())) {
        RosterEntry e;
        e.name = r.at("name").get<std::string>();
        e.kind = optimizer_from_string(r.value("optimizer", std::string("fixed")));
        e.theta0 = theta_from_json(r.at("theta0"), s.platform);
        e.eta = r.value("eta", e.eta);
        e.horizon = r.value("horizon", e.horizon);
        e.epsilon = r.value("epsilon", e.epsilon);
        e.grad_clip = r.value("grad_clip", e.grad_clip);
        e.enable_after = r.value("enable_after", e.enable_after);
        s.roster.push_back(std::move(e));
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open scenario file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return scenario_from_json_string(buf.str());
    } catch (const std::exception& e) {
        throw std::runtime_error("failed to parse " + path.string() + ": " + e.what());
    }
}

namespace {

const char* const kQuadColumns =
    "t[s],ierr_x[m*s],ierr_y[m*s],ierr_z[m*s],p_x[m],p_y[m],p_z[m],"
    "v_x[m/s],v_y[m/s],v_z[m/s],r_x[rad],r_y[rad],r_z[rad],"
    "w_x[rad/s],w_y[rad/s],w_z[rad/s],thrust[m/s^2],tau_x[rad/s^2],"
    "tau_y[rad/s^2],tau_z[rad/s^2],theta_ki_xy[log],theta_ki_z[log],"
    "theta_kp_xy[log],theta_kp_z[log],theta_kv_xy[log],theta_kv_z[log],"
    "theta_kr_xy[log],theta_kr_z[log],theta_kw_xy[log],theta_kw_z[log],"
    "cost[1],y_norm[1],wind_active[0/1]";

const char* const kCarColumns =
    "t[s],p_x[m],p_y[m],r[rad],v_x[m/s],v_y[m/s],w[rad/s],psi[rad],"
    "throttle[m/s],steer[rad],theta_k1[log],theta_k2[log],theta_k3[log],"
    "theta_k4[log],theta_kp[log],cost[1],y_norm[1],wind_active[0/1]";

}  // namespace

void write_csv(const RunLog& log, const Scenario& s, std::ostream& os) {
    os << (s.platform == Platform::Quad ? kQuadColumns : kCarColumns) << "\n";
    os << std::setprecision(17);
    for (const StepRecord& r : log.steps) {
        os << r.t;
        for (Eigen::Index i = 0; i < r.x.size(); ++i) os << ',' << r.x(i);
        for (Eigen::Index i = 0; i < r.u.size(); ++i) os << ',' << r.u(i);
        for (Eigen::Index i = 0; i < r.theta.size(); ++i) os << ',' << r.theta(i);
        os << ',' << r.cost << ',' << r.y_norm << ',' << (r.wind_active ? 1 : 0) << "\n";
    }
}

double csv_total_cost(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) {
        throw std::runtime_error("csv_total_cost: empty input");
    }
    int cost_col = -1;
    {
        std::istringstream hs(header);
        std::string field;
        for (int i = 0; std::getline(hs, field, ','); ++i) {
            if (field.rfind("cost", 0) == 0) cost_col = i;
        }
    }
    if (cost_col < 0) {
        throw std::runtime_error("csv_total_cost: no cost column in header");
    }
    double total = 0.0;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        for (int i = 0; std::getline(ls, field, ','); ++i) {
            if (i == cost_col) total += std::stod(field);
        }
    }
    return total;
}

void write_summary(const Scenario& s, const std::map<std::string, RunLog>& results,
                   std::ostream& os) {
    json j;
    j["schema_version"] = 1;
    j["scenario"] = {
        {"name", s.name},
        {"platform", s.platform == Platform::Quad ? "quad" : "car"},
        {"duration", s.duration},
        {"seed", s.seed},
        {"dt", s.platform == Platform::Quad ? s.env.dt : s.car.dt},
        {"trajectory",
         {{"kind", traj_kind_to_string(s.traj.kind)},
          {"period", s.traj.period},
          {"amplitude", s.traj.amplitude}}},
    };
    const double dt = s.platform == Platform::Quad ? s.env.dt : s.car.dt;
    const RunLog* expert = nullptr;
    if (auto it = results.find("Expert"); it != results.end()) expert = &it->second;

    json members = json::array();
    for (const RosterEntry& e : s.roster) {
        const auto it = results.find(e.name);
        if (it == results.end()) continue;
        const RunLog& log = it->second;
        json m;
        m["name"] = e.name;
        m["diverged"] = log.diverged;
        if (log.diverged) m["message"] = log.message;
        m["total_cost"] = log.total_cost();
        m["per_lap_cost"] = log.per_lap_cost(s.traj.period, dt);
        if (!log.steps.empty()) {
            const Eigen::VectorXd& th = log.steps.back().theta;
            m["final_theta"] = std::vector<double>(th.data(), th.data() + th.size());
        }
        if (log.thrust_clamp_count > 0) m["thrust_clamp_count"] = log.thrust_clamp_count;
        if (expert && !log.diverged && !expert->diverged &&
            expert->steps.size() == log.steps.size()) {
            const auto qr = quasi_regret(log.costs(), expert->costs());
            m["quasi_regret_final"] = qr.empty() ? 0.0 : qr.back();
        }
        members.push_back(std::move(m));
    }
    j["results"] = std::move(members);
    os << j.dump(2) << "\n";
}

}  // namespace polopt
