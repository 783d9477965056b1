#include "rigidgas/ou.hpp"

#include <cmath>

#include "rigidgas/errors.hpp"
#include "rigidgas/params.hpp"

namespace rigidgas {

OUParams params_from_body(const ShapeConstants& consts, double beta, std::optional<double> I, OUVariant variant) {
    if (!(beta > 0)) throw InvalidSpec("beta must be positive");
    OUParams q;
    q.a = std::sqrt(8.0 / (kPi * beta));
    q.L = consts.L;
    q.K = consts.K;
    q.I = I.value_or(consts.I);
    if (!(q.I > 0)) throw InvalidSpec("moment of inertia must be positive");
    q.beta = beta;
    q.variant = variant;
    if (variant == OUVariant::generator) {
        q.theta_V = q.a * q.L / 2;
        q.sigma2_V = q.a * q.L / beta;
        q.theta_O = q.a * q.K / q.I;
        q.sigma2_O = 2 * q.a * q.K / (beta * q.I * q.I);
    } else {
        q.theta_V = q.a * q.L;
        q.sigma2_V = 2 * q.a * q.L / beta;
        q.theta_O = q.a * q.K / q.I;
        q.sigma2_O = 2 * q.a * q.K / (beta * q.I);
    }
    return q;
}

OUParams params_from_sim(const SimParams& p, OUVariant variant) {
    return params_from_body(p.consts, p.beta, p.I, variant);
}

namespace {

double step(double x, double theta, double sigma2, double dt, Rng& rng) {
    if (theta <= 0.0 || dt == 0.0) return x;
    const double decay = std::exp(-theta * dt);
    const double var = sigma2 / (2 * theta) * -std::expm1(-2 * theta * dt);
    return decay * x + std::sqrt(var) * rng.normal();
}

}  // namespace

OUState transition(const OUState& W, double dt, const OUParams& q, Rng& rng) {
    if (!(dt >= 0)) throw InvalidSpec("dt must be non-negative");
    OUState out = W;
    out.V.x = step(W.V.x, q.theta_V, q.sigma2_V, dt, rng);
    out.V.y = step(W.V.y, q.theta_V, q.sigma2_V, dt, rng);
    out.O = step(W.O, q.theta_O, q.sigma2_O, dt, rng);
    return out;
}

TrajectoryRecord run_ou(const OUState& W0, double T, double sample_dt, const OUParams& q, Rng& rng) {
    if (!(T > 0)) throw InvalidSpec("T must be positive");
    if (!(sample_dt > 0)) throw InvalidSpec("sample_dt must be positive");
    TrajectoryRecord rec;
    rec.level = "ou";
    auto push = [&](double t, const OUState& W) {
        BodyState Y;
        Y.X = W.X;
        Y.V = W.V;
        Y.Omega = W.O;
        rec.samples.push_back({t, Y});
        ++rec.counts.samples;
    };
    OUState W = W0;
    push(0.0, W);
    double t = 0.0;
    for (long k = 1;; ++k) {
        const double next = std::min(T, k * sample_dt);
        const double dt = next - t;
        OUState Wn = transition(W, dt, q, rng);
        Wn.X = W.X + 0.5 * dt * (W.V + Wn.V);
        W = Wn;
        t = next;
        push(t, W);
        if (t >= T) break;
    }
    return rec;
}

}  // namespace rigidgas
