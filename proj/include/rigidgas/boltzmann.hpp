#pragma once

#include <optional>
#include <string>

#include "rigidgas/md_engine.hpp"
#include "rigidgas/params.hpp"
#include "rigidgas/rng.hpp"
#include "rigidgas/trajectory.hpp"

namespace rigidgas {

// (1/alpha^2) int dsigma_alpha int M_beta(v) (b_alpha)_- dv by quadrature over the
// contact angle; the velocity integral is in closed form.
double total_jump_rate(const BodyState& Y, const SimParams& p, int nodes = 0);

// Expected rate of change of (V, Omega) under the jump generator at Y.
struct JumpDrift {
    Vec2 dV;
    double dOmega = 0.0;
};
JumpDrift jump_generator_drift(const BodyState& Y, const SimParams& p, int nodes = 0);

// Thinning bound (L_alpha/alpha) (s0 + B) with s0 = 1/(alpha sqrt(2 pi beta))
// and B = |V| + max|h'| |Omega| bounding |V.n - Omega h'|.
struct RateEnvelope {
    double lambda_bar = 0.0;
    double s0 = 0.0;
    double B = 0.0;
    static RateEnvelope make(const SimParams& p, double B);
    static RateEnvelope make(const BodyState& Y, const SimParams& p);
};

// State-independent part of a proposal; acceptance is decided per state.
struct JumpProposal {
    double phi = 0.0;   // body-frame contact angle, drawn by arc length on the enlarged body
    double z = 0.0;     // normal atom velocity divided by alpha
    double t = 0.0;     // tangential atom velocity
    double u = 0.0;     // acceptance uniform
};
JumpProposal propose_jump(const SimParams& p, const RateEnvelope& env, Rng& rng);
// acceptance ratio (c - z)_+ / ((-z)_+ + B); throws EnvelopeBreach above 1
double acceptance_ratio(const BodyState& Y, const JumpProposal& q, const SimParams& p, const RateEnvelope& env);
// incoming world-frame atom velocity of a proposal at body orientation Theta
Vec2 proposal_velocity(const JumpProposal& q, double Theta, const SimParams& p);

struct Jump {
    double phi = 0.0;
    Vec2 v;                  // incoming atom velocity
    BodyAtomCollision out;   // post-collision body and atom
};
// One thinning step from Y: a jump on acceptance, nothing on rejection.
std::optional<Jump> sample_jump(const BodyState& Y, const SimParams& p, Rng& rng);

TrajectoryRecord run_jump_process(const BodyState& Y0, double T, RunMode mode, const SimParams& p, Rng& rng,
                                  double sample_dt);

struct CoupledRun {
    TrajectoryRecord plain;
    TrajectoryRecord killed;
    std::optional<double> decouple_time;
    std::string decouple_reason;  // "gated" or the pathology flags that absorbed the killed process
};
CoupledRun coupled_run(const BodyState& Y0, double T, const SimParams& p, Rng& rng, double sample_dt);

}  // namespace rigidgas
