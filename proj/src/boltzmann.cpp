#include "rigidgas/boltzmann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rigidgas/analysis.hpp"
#include "rigidgas/errors.hpp"

namespace rigidgas {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

double phi_density(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// E[(m - Z)_+] and E[(m - Z)_+^2] for Z ~ N(0, s^2)
double first_partial(double m, double s) { return m * normal_cdf(m / s) + s * phi_density(m / s); }
double second_partial(double m, double s) {
    return (m * m + s * s) * normal_cdf(m / s) + m * s * phi_density(m / s);
}

// V . n - Omega h', the normal velocity of the contact point in units of alpha
double contact_speed(const BodyState& Y, double phi, const SupportJet& j) {
    return dot(Y.V, unit(phi + Y.Theta)) - Y.Omega * j.dh;
}

int default_nodes(const SimParams& p, int nodes) { return nodes > 0 ? nodes : 2 * p.body.quadrature_order(); }

BodyState transported(const BodyState& Y, double s, const SimParams& p) {
    if (s == 0.0) return Y;
    BodyState Z = Y;
    Z.X = wrap_torus(Y.X + s * Y.V);
    Z.Theta = wrap_angle(Y.Theta + s * p.spin_rate() * Y.Omega);
    return Z;
}

double envelope_B(const BodyState& Y, const SimParams& p) {
    return norm(Y.V) + p.consts.dh_max * std::abs(Y.Omega);
}

// sample times k*dt on [0, T] with T itself always included
class SampleClock {
public:
    SampleClock(double T, double dt) : T_(T), dt_(dt) {}
    bool pending(double t) const { return !done_ && next() <= t; }
    double next() const {
        const double s = k_ * dt_;
        return s > T_ - 1e-9 * dt_ ? T_ : s;
    }
    void advance() {
        if (next() == T_) done_ = true;
        ++k_;
    }

private:
    double T_, dt_;
    long k_ = 0;
    bool done_ = false;
};

}  // namespace

double total_jump_rate(const BodyState& Y, const SimParams& p, int nodes) {
    nodes = default_nodes(p, nodes);
    const double s = 1.0 / (p.alpha * std::sqrt(p.beta));
    double acc = 0.0;
    for (int k = 0; k < nodes; ++k) {
        const double phi = kTwoPi * k / nodes;
        const SupportJet j = p.body.jet(phi);
        const double rho_a = j.h + j.d2h + 0.5 * p.alpha;
        acc += rho_a * first_partial(contact_speed(Y, phi, j), s);
    }
    return acc * kTwoPi / nodes / p.alpha;
}

JumpDrift jump_generator_drift(const BodyState& Y, const SimParams& p, int nodes) {
    nodes = default_nodes(p, nodes);
    const double a = p.alpha, sd = 1.0 / std::sqrt(p.beta);
    JumpDrift d;
    for (int k = 0; k < nodes; ++k) {
        const double phi = kTwoPi * k / nodes;
        const SupportJet j = p.body.jet(phi);
        const double rho_a = j.h + j.d2h + 0.5 * a;
        const double A = a * a * (1.0 + j.dh * j.dh / p.I);
        const double Eb2 = second_partial(a * contact_speed(Y, phi, j), sd);
        const double w = rho_a * Eb2 / (1.0 + A);
        d.dV += (-w) * unit(phi + Y.Theta);
        d.dOmega += w * j.dh / p.I;
    }
    const double f = 2.0 / a * kTwoPi / nodes;
    d.dV = f * d.dV;
    d.dOmega *= f;
    return d;
}

RateEnvelope RateEnvelope::make(const SimParams& p, double B) {
    RateEnvelope e;
    e.s0 = 1.0 / (p.alpha * std::sqrt(2 * kPi * p.beta));
    e.B = B;
    e.lambda_bar = p.consts.L_alpha / p.alpha * (e.s0 + B);
    return e;
}

RateEnvelope RateEnvelope::make(const BodyState& Y, const SimParams& p) { return make(p, envelope_B(Y, p)); }

JumpProposal propose_jump(const SimParams& p, const RateEnvelope& env, Rng& rng) {
    JumpProposal q;
    for (;;) {
        q.phi = kTwoPi * rng.uniform();
        const double rho_a = p.body.rho(q.phi) + 0.5 * p.alpha;
        if (rng.uniform() * p.consts.rho_alpha_max < rho_a) break;
    }
    const double s = 1.0 / (p.alpha * std::sqrt(p.beta));
    if (rng.uniform() * (env.s0 + env.B) < env.s0)
        q.z = -s * std::sqrt(-2.0 * std::log(rng.uniform_pos()));
    else
        q.z = s * rng.normal();
    q.t = rng.normal() / std::sqrt(p.beta);
    q.u = rng.uniform();
    return q;
}

double acceptance_ratio(const BodyState& Y, const JumpProposal& q, const SimParams& p, const RateEnvelope& env) {
    const double c = contact_speed(Y, q.phi, p.body.jet(q.phi));
    const double num = c - q.z;
    if (num <= 0.0) return 0.0;
    const double r = num / (std::max(-q.z, 0.0) + env.B);
    if (r > 1.0 + 1e-12)
        throw EnvelopeBreach("acceptance ratio " + std::to_string(r) + " at phi " + std::to_string(q.phi));
    return r;
}

Vec2 proposal_velocity(const JumpProposal& q, double Theta, const SimParams& p) {
    const Vec2 n = unit(q.phi + Theta);
    return (p.alpha * q.z) * n + q.t * perp(n);
}

std::optional<Jump> sample_jump(const BodyState& Y, const SimParams& p, Rng& rng) {
    const RateEnvelope env = RateEnvelope::make(Y, p);
    const JumpProposal q = propose_jump(p, env, rng);
    if (!(q.u < acceptance_ratio(Y, q, p, env))) return std::nullopt;
    Jump j;
    j.phi = q.phi;
    j.v = proposal_velocity(q, Y.Theta, p);
    j.out = collide_body_atom(Y, j.v, q.phi, p);
    return j;
}

namespace {

CollisionEntry make_entry(double t, const Jump& j, const BodyState& pre, const SimParams& p) {
    CollisionEntry e;
    e.t = t;
    e.phi = j.phi;
    e.pre = pre;
    e.post = j.out.Y;
    e.v_pre = j.v;
    e.v_post = j.out.v;
    e.flags = pathology_flags(pre, j.v, j.out.Y, j.out.v, p);
    return e;
}

// One process driven by externally supplied proposals.
struct JumpChain {
    TrajectoryRecord rec;
    BodyState Y;       // valid at tY
    double tY = 0.0;
    bool killed_mode = false;
    bool alive = true;

    BodyState at(double t, const SimParams& p) const { return transported(Y, t - tY, p); }

    enum class Outcome { none, jumped, gated, absorbed };

    Outcome offer(double t, const JumpProposal& q, const RateEnvelope& env, const SimParams& p) {
        ++rec.counts.proposals;
        const BodyState cur = at(t, p);
        if (!(q.u < acceptance_ratio(cur, q, p, env))) {
            ++rec.counts.rejected;
            return Outcome::none;
        }
        Jump j;
        j.phi = q.phi;
        j.v = proposal_velocity(q, cur.Theta, p);
        j.out = collide_body_atom(cur, j.v, q.phi, p);
        CollisionEntry e = make_entry(t, j, cur, p);
        if (killed_mode) {
            if (backward_recollides(cur, j.v, q.phi, p)) {
                e.gated = true;
                rec.collisions.push_back(e);
                return Outcome::gated;
            }
            if (e.flags.any()) {
                rec.collisions.push_back(e);
                rec.killed = KillInfo{t, e.flags.to_string()};
                alive = false;
                return Outcome::absorbed;
            }
        }
        rec.collisions.push_back(e);
        ++rec.counts.atom_body;
        Y = j.out.Y;
        tY = t;
        return Outcome::jumped;
    }
};

void check_run_args(double T, double sample_dt) {
    if (!(T >= 0)) throw InvalidSpec("T must be non-negative");
    if (!(sample_dt > 0)) throw InvalidSpec("sample_dt must be positive");
}

}  // namespace

TrajectoryRecord run_jump_process(const BodyState& Y0, double T, RunMode mode, const SimParams& p, Rng& rng,
                                  double sample_dt) {
    check_run_args(T, sample_dt);
    JumpChain ch;
    ch.rec.level = "jump";
    ch.Y = Y0;
    ch.Y.X = wrap_torus(Y0.X);
    ch.Y.Theta = wrap_angle(Y0.Theta);
    ch.killed_mode = mode == RunMode::killed;
    SampleClock clock(T, sample_dt);
    RateEnvelope env = RateEnvelope::make(ch.Y, p);
    double t = 0.0;
    for (;;) {
        const double t_prop = env.lambda_bar > 0 ? t + rng.exponential(env.lambda_bar)
                                                 : std::numeric_limits<double>::infinity();
        while (clock.pending(std::min(t_prop, T))) {
            ch.rec.samples.push_back({clock.next(), ch.at(clock.next(), p)});
            ++ch.rec.counts.samples;
            clock.advance();
        }
        if (t_prop > T) break;
        t = t_prop;
        const JumpProposal q = propose_jump(p, env, rng);
        const auto out = ch.offer(t, q, env, p);
        if (out == JumpChain::Outcome::absorbed) break;
        if (out == JumpChain::Outcome::jumped) env = RateEnvelope::make(ch.Y, p);
    }
    return ch.rec;
}

CoupledRun coupled_run(const BodyState& Y0, double T, const SimParams& p, Rng& rng, double sample_dt) {
    check_run_args(T, sample_dt);
    JumpChain plain, killed;
    plain.rec.level = killed.rec.level = "jump";
    plain.Y = Y0;
    plain.Y.X = wrap_torus(Y0.X);
    plain.Y.Theta = wrap_angle(Y0.Theta);
    killed.Y = plain.Y;
    killed.killed_mode = true;

    CoupledRun out;
    auto envelope = [&] {
        double B = envelope_B(plain.Y, p);
        if (killed.alive) B = std::max(B, envelope_B(killed.Y, p));
        return RateEnvelope::make(p, B);
    };
    SampleClock clock(T, sample_dt);
    RateEnvelope env = envelope();
    double t = 0.0;
    for (;;) {
        const double t_prop = env.lambda_bar > 0 ? t + rng.exponential(env.lambda_bar)
                                                 : std::numeric_limits<double>::infinity();
        while (clock.pending(std::min(t_prop, T))) {
            const double ts = clock.next();
            plain.rec.samples.push_back({ts, plain.at(ts, p)});
            ++plain.rec.counts.samples;
            if (killed.alive) {
                killed.rec.samples.push_back({ts, killed.at(ts, p)});
                ++killed.rec.counts.samples;
            }
            clock.advance();
        }
        if (t_prop > T) break;
        t = t_prop;
        const JumpProposal q = propose_jump(p, env, rng);
        const auto op = plain.offer(t, q, env, p);
        auto ok = JumpChain::Outcome::none;
        if (killed.alive) ok = killed.offer(t, q, env, p);
        if (!out.decouple_time && op == JumpChain::Outcome::jumped &&
            (ok == JumpChain::Outcome::gated || ok == JumpChain::Outcome::absorbed)) {
            out.decouple_time = t;
            out.decouple_reason = ok == JumpChain::Outcome::gated ? "gated" : killed.rec.killed->reason;
        }
        if (op != JumpChain::Outcome::none || ok != JumpChain::Outcome::none) env = envelope();
    }
    out.plain = std::move(plain.rec);
    out.killed = std::move(killed.rec);
    return out;
}

}  // namespace rigidgas
