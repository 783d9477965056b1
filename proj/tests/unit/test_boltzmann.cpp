#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "rigidgas/analysis.hpp"
#include "rigidgas/boltzmann.hpp"
#include "rigidgas/errors.hpp"
#include "rigidgas/gibbs.hpp"

using namespace rigidgas;

namespace {

SimParams params(const BodySpec& spec, double alpha = 0.1, double beta = 1.0, std::optional<double> I = std::nullopt) {
    return SimParams::make(0, alpha, beta, spec, 0.1, I, alpha / 100);
}

// (1/alpha^2) int dsigma_alpha int M(v) (b_alpha)_- dv with adaptive quadrature over the normal velocity
double rate_oracle(const BodyState& Y, const SimParams& p, int nodes) {
    using boost::math::quadrature::gauss_kronrod;
    const double a = p.alpha, beta = p.beta;
    double acc = 0.0;
    for (int k = 0; k < nodes; ++k) {
        const double phi = kTwoPi * k / nodes;
        const BoundaryPoint bp = boundary(p.body, phi);
        const Vec2 n = rotate(bp.n, Y.Theta), r = rotate(bp.r, Y.Theta);
        const double drift = a * dot(Y.V + Y.Omega * perp(r), n);  // b = w - drift
        auto f = [&](double w) { return std::sqrt(beta / (2 * kPi)) * std::exp(-0.5 * beta * w * w) * (drift - w); };
        const double inner = gauss_kronrod<double, 61>::integrate(f, -std::numeric_limits<double>::infinity(), drift,
                                                                   15, 1e-14);
        acc += (1.0 / bp.kappa + 0.5 * a) * inner;
    }
    return acc * kTwoPi / nodes / (a * a);
}

const BodySpec kAsym = BodySpec::fourier({1.0, 0.0, 0.0, 0.12, 0.05, 0.04, -0.03});

}  // namespace

TEST_CASE("jump rate at rest and by quadrature") {
    for (const auto& spec : {BodySpec::disk(1.0), BodySpec::ellipse(0.5, 0.3), kAsym}) {
        for (double beta : {1.0, 2.0}) {
            const SimParams p = params(spec, 0.1, beta);
            const double rest = total_jump_rate(BodyState{}, p);
            CHECK(rest == doctest::Approx(p.consts.L_alpha / (p.alpha * p.alpha * std::sqrt(2 * kPi * beta)))
                              .epsilon(1e-12));
            BodyState Y;
            Y.V = {0.7, -1.3};
            Y.Omega = 2.1;
            Y.Theta = 0.4;
            CHECK(total_jump_rate(Y, p) == doctest::Approx(rate_oracle(Y, p, 256)).epsilon(1e-9));
        }
    }
    // doubling the enlarged perimeter doubles the rest rate
    const double a = 0.1;
    const double r1 = total_jump_rate(BodyState{}, params(BodySpec::disk(1.0), a));
    const double r2 = total_jump_rate(BodyState{}, params(BodySpec::disk(2.0 + a / 2), a));
    CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("jump rate growth in the body speed") {
    const SimParams p = params(BodySpec::disk(1.0), 0.1);
    auto rate = [&](double speed) {
        BodyState Y;
        Y.V = {speed, 0.0};
        return total_jump_rate(Y, p);
    };
    // finite-difference slopes against the independent quadrature
    for (double s : {1.0, 2.0, 4.0}) {
        BodyState a, b;
        a.V = {s, 0.0};
        b.V = {s + 0.01, 0.0};
        const double slope = (rate(s + 0.01) - rate(s)) / 0.01;
        const double oracle = (rate_oracle(b, p, 128) - rate_oracle(a, p, 128)) / 0.01;
        CHECK(slope == doctest::Approx(oracle).epsilon(1e-5));
        CHECK(slope > 0.0);
    }
    // once alpha |V| sqrt(beta) >> 1 the growth is linear with slope 2 R_alpha / alpha
    const SimParams q = params(BodySpec::disk(1.0), 0.5);
    BodyState Y20, Y40;
    Y20.V = {20.0, 0.0};
    Y40.V = {0.0, -40.0};
    const double slope = (total_jump_rate(Y40, q) - total_jump_rate(Y20, q)) / 20.0;
    CHECK(slope == doctest::Approx(2 * 1.25 / 0.5).epsilon(0.01));
}

TEST_CASE("thinning acceptance matches the rate") {
    for (const auto& spec : {BodySpec::ellipse(0.5, 0.3), kAsym}) {
        const SimParams p = params(spec, 0.1);
        BodyState Y;
        Y.V = {0.9, 0.4};
        Y.Omega = -1.7;
        Y.Theta = 2.0;
        const RateEnvelope env = RateEnvelope::make(Y, p);
        const double rate = total_jump_rate(Y, p);
        CHECK(env.lambda_bar >= rate * (1 + 1e-3));
        Rng rng(9);
        long acc = 0;
        const long n = 1000000;
        for (long k = 0; k < n; ++k) {
            const auto j = sample_jump(Y, p, rng);
            if (!j) continue;
            ++acc;
            CHECK(j->out.contact.b < 0.0);
            const Conserved c0 = conserved_quantities(Y, j->v, p), c1 = conserved_quantities(j->out.Y, j->out.v, p);
            if (std::abs(c1.E - c0.E) > 1e-12 * c0.E) FAIL("energy not conserved at a jump");
        }
        CHECK(acc * env.lambda_bar / n == doctest::Approx(rate).epsilon(0.01));
    }
}

TEST_CASE("disk jumps never change the spin") {
    const SimParams p = params(BodySpec::disk(1.0), 0.2);
    BodyState Y;
    Y.V = {0.3, -0.2};
    Y.Omega = 1.234;
    Rng rng(4);
    int jumps = 0;
    for (int k = 0; k < 100000; ++k) {
        if (auto j = sample_jump(Y, p, rng)) {
            ++jumps;
            CHECK(j->out.Y.Omega == Y.Omega);
        }
    }
    CHECK(jumps > 1000);
    Rng r2(5);
    const auto rec = run_jump_process(Y, 5.0, RunMode::plain, p, r2, 0.1);
    CHECK(rec.counts.atom_body > 100);
    for (const auto& s : rec.samples) CHECK(s.Y.Omega == Y.Omega);
}

TEST_CASE("generator drift") {
    SUBCASE("monte carlo mean jump") {
        const SimParams p = params(BodySpec::ellipse(0.5, 0.3), 0.2);
        BodyState Y;
        Y.V = {0.8, -0.5};
        Y.Omega = 1.5;
        Y.Theta = 0.9;
        const double rate = total_jump_rate(Y, p);
        const JumpDrift d = jump_generator_drift(Y, p);
        Rng rng(12);
        double s1 = 0, s2 = 0, s3 = 0, q1 = 0, q2 = 0, q3 = 0;
        long n = 0;
        while (n < 400000) {
            const auto j = sample_jump(Y, p, rng);
            if (!j) continue;
            ++n;
            const Vec2 dV = j->out.Y.V - Y.V;
            const double dO = j->out.Y.Omega - Y.Omega;
            s1 += dV.x;
            s2 += dV.y;
            s3 += dO;
            q1 += dV.x * dV.x;
            q2 += dV.y * dV.y;
            q3 += dO * dO;
        }
        auto check = [&](double s, double q, double expect) {
            const double mean = s / n, se = std::sqrt((q / n - mean * mean) / n);
            CHECK(std::abs(rate * mean - expect) < 4 * rate * se);
        };
        check(s1, q1, d.dV.x);
        check(s2, q2, d.dV.y);
        check(s3, q3, d.dOmega);
    }
    SUBCASE("small alpha limit") {
        const double beta = 1.0, a_coef = std::sqrt(8.0 / (kPi * beta));
        double prev_v = 1e9, prev_o = 1e9;
        for (double alpha : {0.1, 0.05, 0.02}) {
            const SimParams p = params(BodySpec::ellipse(0.5, 0.3), alpha, beta);
            // average the fixed-orientation drift over the fast body angle
            double dv = 0.0, dom = 0.0;
            const int m = 64;
            for (int k = 0; k < m; ++k) {
                BodyState Y;
                Y.V = {0.3, 0.0};
                Y.Omega = 0.4;
                Y.Theta = kTwoPi * k / m;
                const JumpDrift d = jump_generator_drift(Y, p);
                dv += d.dV.x / m;
                dom += d.dOmega / m;
            }
            const double ev = std::abs(dv / (-a_coef * p.consts.L / 2 * 0.3) - 1);
            const double eo = std::abs(dom / (-a_coef * p.consts.K / p.I * 0.4) - 1);
            CHECK(ev < prev_v);
            CHECK(eo < prev_o);
            prev_v = ev;
            prev_o = eo;
        }
        CHECK(prev_v < 0.05);
        CHECK(prev_o < 0.05);
    }
}

TEST_CASE("jump kernel is symmetric under the gaussian weight") {
    const SimParams p = params(BodySpec::ellipse(0.5, 0.3), 0.3);
    auto g = [](const BodyState& Y) { return std::sin(Y.V.x + 0.5 * Y.Omega); };
    auto h = [](const BodyState& Y) { return Y.V.y * Y.Omega + Y.V.x * Y.V.x; };
    Rng rng(77);
    double s = 0, q = 0;
    const long n = 2000000;
    for (long k = 0; k < n; ++k) {
        BodyState Y = sample_body_velocity(p.beta, p.I, rng);
        Y.Theta = kTwoPi * rng.uniform();
        const RateEnvelope env = RateEnvelope::make(Y, p);
        const JumpProposal prop = propose_jump(p, env, rng);
        double x = 0.0;
        if (prop.u < acceptance_ratio(Y, prop, p, env)) {
            const BodyState Yp = collide_body_atom(Y, proposal_velocity(prop, Y.Theta, p), prop.phi, p).Y;
            x = env.lambda_bar * (g(Y) * h(Yp) - h(Y) * g(Yp));
        }
        s += x;
        q += x * x;
    }
    const double mean = s / n, se = std::sqrt((q / n - mean * mean) / n);
    MESSAGE("antisymmetric part ", mean, " +- ", se);
    CHECK(std::abs(mean) < 4 * se);
    // the asymmetric statistic is not trivially zero
    CHECK(se > 0.0);
}

TEST_CASE("process records") {
    const SimParams p = params(BodySpec::ellipse(0.5, 0.3), 0.2);
    BodyState Y0;
    Y0.X = {0.2, 0.3};
    Y0.V = {0.5, 0.1};
    Y0.Omega = 0.7;
    Rng rng(1);
    const auto empty = run_jump_process(Y0, 0.0, RunMode::plain, p, rng, 0.1);
    REQUIRE(empty.samples.size() == 1u);
    CHECK(empty.samples[0].Y == Y0);
    CHECK(empty.collisions.empty());

    const auto rec = run_jump_process(Y0, 2.0, RunMode::plain, p, rng, 0.1);
    CHECK(rec.samples.size() == 21u);
    CHECK(rec.samples.back().t == 2.0);
    CHECK(rec.counts.atom_body == static_cast<long>(rec.collisions.size()));
    for (std::size_t k = 1; k < rec.collisions.size(); ++k) {
        CHECK(rec.collisions[k].t > rec.collisions[k - 1].t);
        // between jumps V and Omega are constant
        CHECK(rec.collisions[k].pre.V == rec.collisions[k - 1].post.V);
        CHECK(rec.collisions[k].pre.Omega == rec.collisions[k - 1].post.Omega);
    }
    CHECK_THROWS_AS(run_jump_process(Y0, -1.0, RunMode::plain, p, rng, 0.1), InvalidSpec);
}

TEST_CASE("killed process and coupling") {
    SUBCASE("absorption at a pathological jump") {
        const SimParams p = params(BodySpec::ellipse(0.5, 0.3), 0.3);
        int absorbed = 0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            Rng rng(seed);
            const BodyState Y0 = sample_body(p, rng);
            const auto rec = run_jump_process(Y0, 1.0, RunMode::killed, p, rng, 0.1);
            if (!rec.killed) continue;
            ++absorbed;
            REQUIRE_FALSE(rec.collisions.empty());
            CHECK(rec.collisions.back().flags.any());
            CHECK(rec.killed->reason == rec.collisions.back().flags.to_string());
            CHECK(rec.samples.back().t <= rec.killed->t);
        }
        CHECK(absorbed > 0);
    }
    SUBCASE("coupled processes agree until decoupling") {
        const SimParams p = params(BodySpec::ellipse(0.5, 0.3), 0.1, 2.0, 1.0);
        int agree = 0, split = 0;
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            Rng rng(seed);
            const BodyState Y0 = sample_body(p, rng);
            const CoupledRun c = coupled_run(Y0, 0.3, p, rng, 0.05);
            const double td = c.decouple_time.value_or(1e300);
            for (std::size_t k = 0; k < c.killed.samples.size() && c.killed.samples[k].t < td; ++k)
                CHECK(c.killed.samples[k].Y == c.plain.samples[k].Y);
            if (!c.decouple_time) {
                ++agree;
                CHECK_FALSE(c.killed.killed.has_value());
                CHECK(c.killed.samples.size() == c.plain.samples.size());
                REQUIRE(c.killed.collisions.size() == c.plain.collisions.size());
                for (std::size_t k = 0; k < c.plain.collisions.size(); ++k) {
                    CHECK(c.killed.collisions[k].t == c.plain.collisions[k].t);
                    CHECK(c.killed.collisions[k].post == c.plain.collisions[k].post);
                }
            } else {
                ++split;
                CHECK(*c.decouple_time <= 0.3);
            }
        }
        CHECK(agree > 0);
        MESSAGE(split, " of 40 coupled runs decoupled");
    }
}

TEST_CASE("stationarity of the gaussian body law") {
    const SimParams p = params(BodySpec::ellipse(0.5, 0.3), 0.2);
    std::vector<double> v1, om;
    for (std::uint64_t r = 0; r < 200; ++r) {
        Rng rng = Rng(5).split(r);
        const BodyState Y0 = sample_body(p, rng);
        const auto rec = run_jump_process(Y0, 10.0, RunMode::plain, p, rng, 1.0);
        for (std::size_t k = 1; k < rec.samples.size(); ++k) {
            v1.push_back(rec.samples[k].Y.V.x);
            om.push_back(rec.samples[k].Y.Omega);
        }
    }
    const double sdv = 1.0 / std::sqrt(p.beta), sdo = 1.0 / std::sqrt(p.beta * p.I);
    const double Dv = ks_distance(v1, [&](double x) { return normal_cdf(x, 0.0, sdv); });
    const double Do = ks_distance(om, [&](double x) { return normal_cdf(x, 0.0, sdo); });
    MESSAGE("KS V1 ", Dv, " Omega ", Do, " over ", v1.size(), " samples");
    CHECK(ks_pvalue(Dv, v1.size()) > 1e-3);
    CHECK(ks_pvalue(Do, om.size()) > 1e-3);
}
