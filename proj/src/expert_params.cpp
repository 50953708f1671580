#include <cmath>

#include "polopt/errors.hpp"
#include "polopt/harness.hpp"

namespace polopt {

namespace {

// Hand-picked stabilizing gains used as the starting point for tune_expert_quad.
Params hand_tuned_start() {
    return Params::from_gains(/*ki*/ 2.0, 2.0, /*kp*/ 16.0, 16.0, /*kv*/ 8.0, 8.0,
                              /*kr*/ 400.0, 30.0, /*kw*/ 40.0, 10.0);
}

}  // namespace

Params expert_quad_params() {
    // Frozen output of tune_expert_quad() on the disturbance-free figure-8.
    Params p;
    p.theta << 0.68913616697340763, 0.69047847924477435, 2.81018336635778,
        2.813336689983494, 2.4999999923341578, 2.1817003857562591,
        6.4678711983963302, 3.3895849694751288, 3.5933929998920289,
        2.3327957033100906;
    return p;
}

CarParams expert_car_params() {
    return CarParams::from_gains(/*k1*/ 1.0, /*k2*/ 0.5, /*k3*/ 2.0, /*k4*/ 0.5,
                                 /*kp*/ 2.0);
}

Params tune_expert_quad(double eta0, double duration_per_stage, int stages) {
    Scenario s;
    s.name = "tune-expert";
    s.platform = Platform::Quad;
    s.traj.kind = Trajectory::Kind::Figure8Diagonal;
    s.traj.ramp = 2.0;
    s.duration = duration_per_stage;

    Params current = hand_tuned_start();
    double eta = eta0;
    for (int stage = 0; stage < stages; ++stage) {
        RosterEntry e;
        e.name = "tune";
        e.kind = OptimizerKind::Mgaps;
        e.theta0 = current.theta;
        e.eta = eta;
        const RunLog log = run_single(s, e);
        if (log.diverged || log.steps.empty()) {
            throw OptimizerDiverged("tune_expert_quad: rollout diverged at stage " +
                                    std::to_string(stage) + ": " + log.message);
        }
        // Average over the last two laps to strip the limit-cycle wobble.
        current.theta = log.mean_theta(s.duration - 2.0 * s.traj.period, s.duration,
                                       s.env.dt);
        eta *= 0.25;
    }
    return current;
}

}  // namespace polopt
