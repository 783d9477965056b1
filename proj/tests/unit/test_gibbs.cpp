#include <cmath>

#include "doctest.h"
#include "rigidgas/analysis.hpp"
#include "rigidgas/errors.hpp"
#include "rigidgas/gibbs.hpp"

using namespace rigidgas;

TEST_CASE("maxwellian moments and marginal") {
    Rng rng(11);
    const auto v = sample_maxwellians(1000000, 1.0, rng);
    double m2 = 0.0;
    std::vector<double> v1;
    v1.reserve(v.size());
    for (auto& x : v) {
        m2 += norm2(x);
        v1.push_back(x.x);
    }
    CHECK(std::abs(m2 / v.size() - 2.0) < 0.01);
    CHECK(ks_distance(v1, [](double x) { return normal_cdf(x); }) < 0.002);

    Rng r2(12);
    const auto w = sample_maxwellians(1000000, 4.0, r2);
    std::vector<double> w2;
    for (auto& x : w) w2.push_back(x.y);
    CHECK(ks_distance(w2, [](double x) { return normal_cdf(x, 0.0, 0.5); }) < 0.002);
}

TEST_CASE("body velocity draw") {
    const double I = 0.37;
    Rng rng(5);
    double s_om = 0, s_v = 0;
    const int n = 400000;
    for (int k = 0; k < n; ++k) {
        const BodyState Y = sample_body_velocity(2.0, I, rng);
        s_om += Y.Omega * Y.Omega;
        s_v += Y.V.x * Y.V.x;
    }
    CHECK(std::abs(s_om / n / (1.0 / (2.0 * I)) - 1.0) < 0.02);
    CHECK(std::abs(s_v / n / 0.5 - 1.0) < 0.02);
}

namespace {

void check_exclusion(const SimParams& p, const Configuration& c) {
    double min_pair = 1e9;
    for (std::size_t i = 0; i < c.atoms.size(); ++i)
        for (std::size_t j = i + 1; j < c.atoms.size(); ++j)
            min_pair = std::min(min_pair, norm(min_image(c.atoms[i].x - c.atoms[j].x)));
    if (c.atoms.size() > 1) CHECK(min_pair > p.eps);
    for (const auto& a : c.atoms) {
        const double d = signed_distance(p.body, c.body.Theta, p.scale(), min_image(a.x - c.body.X), 0.5 * p.alpha).d;
        CHECK(d > 0.0);
        CHECK(a.x.x >= 0.0);
        CHECK(a.x.x < 1.0);
    }
}

}  // namespace

TEST_CASE("equilibrium sample respects exclusion") {
    for (auto spec : {BodySpec::disk(1.0), BodySpec::ellipse(0.5, 0.3)}) {
        const SimParams p = SimParams::make(500, 0.1, 1.0, spec);
        Rng rng(3);
        for (int rep = 0; rep < 5; ++rep) {
            const Configuration c = sample_equilibrium(p, rng);
            CHECK(c.atoms.size() == 500u);
            check_exclusion(p, c);
        }
    }
    const SimParams one = SimParams::make(1, 0.5, 1.0, BodySpec::ellipse(0.5, 0.3), 0.1, std::nullopt, 0.05, false);
    Rng rng(4);
    check_exclusion(one, sample_equilibrium(one, rng));
}

TEST_CASE("overpacked parameters are rejected") {
    const SimParams p = SimParams::make(100, 0.5, 1.0, BodySpec::disk(1.0), 0.1, std::nullopt, 0.2, false);
    Rng rng(1);
    CHECK_THROWS_AS(sample_equilibrium(p, rng), PackingFailure);
    // dense but under the packing limit: retry cap fires instead
    SamplerOptions tight;
    tight.packing_limit = 10.0;
    tight.retries_per_atom = 50;
    CHECK_THROWS_AS(sample_equilibrium(p, rng, tight), PackingFailure);
}

TEST_CASE("packing fraction of the enlarged body") {
    const SimParams p = SimParams::make(500, 0.1, 1.0, BodySpec::disk(1.0));
    const double r = 1.05 * p.scale();
    CHECK(packing_fraction(p) == doctest::Approx(500 * kPi / 4 * p.eps * p.eps + kPi * r * r).epsilon(1e-12));
}

TEST_CASE("perturbed sampling") {
    const SimParams p = SimParams::make(0, 0.5, 1.0, BodySpec::disk(1.0), 0.1, std::nullopt, 0.01);
    Rng rng(21);
    const auto w = PerturbationWeight::cosine_tilt(0.5);
    CHECK(w.sup_bound == 1.5);
    double s = 0;
    const int n = 100000;
    for (int k = 0; k < n; ++k) s += std::cos(kTwoPi * sample_perturbed(p, w, rng).body.X.x);
    CHECK(std::abs(s / n - 0.25) < 0.01);

    // constant weight: identical draws to the equilibrium sampler
    const SimParams q = SimParams::make(50, 0.2, 1.0, BodySpec::ellipse(0.5, 0.3));
    Rng a(7), b(7);
    const Configuration ca = sample_perturbed(q, PerturbationWeight::constant(), a);
    // the constant weight consumes one acceptance uniform after the body draw
    BodyState body = sample_body(q, b);
    b.uniform();
    const auto atoms = sample_atoms(q, body, b);
    CHECK(ca.body == body);
    CHECK(ca.atoms == atoms);

    PerturbationWeight bad{[](const BodyState&) { return 3.0; }, 1.0, "bad"};
    CHECK_THROWS_AS(sample_perturbed(q, bad, a), InvalidSpec);
}

TEST_CASE("velocity tilt leaves atom statistics unchanged") {
    const SimParams p = SimParams::make(500, 0.1, 1.0, BodySpec::ellipse(0.5, 0.3));
    Rng r1(31), r2(32);
    const auto tilt = PerturbationWeight::gaussian_tilt(1.0, 1.0);
    std::vector<double> xa, xb, va, vb;
    double tilted_speed = 0.0;
    const int reps = 1000;
    for (int k = 0; k < reps; ++k) {
        const Configuration a = sample_perturbed(p, tilt, r1);
        const Configuration b = sample_equilibrium(p, r2);
        tilted_speed += norm2(a.body.V);
        for (int i = 0; i < p.N; ++i) {
            xa.push_back(a.atoms[i].x.x);
            xb.push_back(b.atoms[i].x.x);
            va.push_back(a.atoms[i].v.y);
            vb.push_back(b.atoms[i].v.y);
        }
    }
    CHECK(ks_distance(xa, xb) < 0.005);
    CHECK(ks_distance(va, vb) < 0.005);
    // under the tilt V ~ N(0, 1/(beta + gamma)) per component, so E|V|^2 = 1
    CHECK(std::abs(tilted_speed / reps - 1.0) < 0.15);
}
