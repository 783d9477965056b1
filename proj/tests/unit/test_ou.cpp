#include <cmath>

#include "doctest.h"
#include "rigidgas/analysis.hpp"
#include "rigidgas/gibbs.hpp"
#include "rigidgas/ou.hpp"

using namespace rigidgas;

namespace {

double ellipse_perimeter(double a, double b) {
    // trapezoid on a periodic integrand converges geometrically
    const int n = 4096;
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
        const double t = kTwoPi * k / n;
        s += std::hypot(a * std::sin(t), b * std::cos(t));
    }
    return s * kTwoPi / n;
}

OUState stationary(const OUParams& q, Rng& rng) {
    OUState W;
    W.V = {std::sqrt(q.stationary_var_V()) * rng.normal(), std::sqrt(q.stationary_var_V()) * rng.normal()};
    W.O = std::sqrt(q.stationary_var_O()) * rng.normal();
    return W;
}

}  // namespace

TEST_CASE("coefficients") {
    const ShapeConstants ell = shape_constants(SupportBody(BodySpec::ellipse(0.5, 0.3)), 0.0);
    const OUParams q1 = params_from_body(ell, 1.0);
    CHECK(q1.a == doctest::Approx(1.5957691216057308).epsilon(1e-14));

    const OUParams q = params_from_body(ell, 2.0);
    const double L = ellipse_perimeter(0.5, 0.3);
    const double a = std::sqrt(4.0 / kPi);
    CHECK(q.theta_V == doctest::Approx(a * L / 2).epsilon(1e-9));
    CHECK(q.sigma2_V == doctest::Approx(a * L / 2).epsilon(1e-9));
    CHECK(q.stationary_var_V() == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(q.stationary_var_O() == doctest::Approx(1.0 / (2.0 * q.I)).epsilon(1e-13));
    CHECK(q.theta_O == doctest::Approx(a * ell.K / ell.I).epsilon(1e-13));

    const OUParams pr = params_from_body(ell, 2.0, std::nullopt, OUVariant::printed);
    CHECK(pr.theta_V == doctest::Approx(2 * q.theta_V));
    CHECK(pr.stationary_var_V() == doctest::Approx(0.5));
    // the printed Omega noise gives variance 1/beta rather than 1/(beta I)
    CHECK(pr.stationary_var_O() == doctest::Approx(0.5));

    const OUParams disk = params_from_body(shape_constants(SupportBody(BodySpec::disk(1.0)), 0.0), 1.0);
    CHECK(disk.theta_O == 0.0);
    CHECK(disk.sigma2_O == 0.0);
    CHECK(disk.theta_V == doctest::Approx(std::sqrt(8 / kPi) * kPi).epsilon(1e-12));
}

TEST_CASE("transitions") {
    const SimParams p = SimParams::make(0, 0.1, 1.0, BodySpec::ellipse(0.5, 0.3), 0.1, std::nullopt, 1e-3);
    const OUParams q = params_from_sim(p);
    Rng rng(3);
    OUState W;
    W.V = {0.4, -1.1};
    W.O = 2.5;
    W.X = {0.3, 0.2};
    CHECK(transition(W, 0.0, q, rng) == W);

    // the mean and variance recursion leaves the Gaussian law fixed
    for (double dt : {0.01, 0.3, 5.0}) {
        const double e = std::exp(-2 * q.theta_V * dt);
        CHECK(e * q.stationary_var_V() + q.sigma2_V / (2 * q.theta_V) * (1 - e) ==
              doctest::Approx(1.0 / p.beta).epsilon(1e-14));
        const double eo = std::exp(-2 * q.theta_O * dt);
        CHECK(eo * q.stationary_var_O() + q.sigma2_O / (2 * q.theta_O) * (1 - eo) ==
              doctest::Approx(1.0 / (p.beta * p.I)).epsilon(1e-14));
    }

    std::vector<double> v1, om;
    for (int k = 0; k < 100000; ++k) {
        const OUState Wn = transition(W, 1e3 / q.theta_V, q, rng);
        v1.push_back(Wn.V.x);
        om.push_back(Wn.O);
    }
    CHECK(ks_distance(v1, [](double x) { return normal_cdf(x, 0.0, 1.0); }) < 0.01);
    CHECK(ks_distance(om, [&](double x) { return normal_cdf(x, 0.0, 1.0 / std::sqrt(p.I)); }) < 0.01);

    OUParams cold = q;
    cold.sigma2_V = cold.sigma2_O = 0.0;
    const auto rec = run_ou(W, 2.0, 0.25, cold, rng);
    for (const auto& s : rec.samples) {
        CHECK(s.Y.V.x == doctest::Approx(std::exp(-q.theta_V * s.t) * W.V.x).epsilon(1e-14));
        CHECK(s.Y.Omega == doctest::Approx(std::exp(-q.theta_O * s.t) * W.O).epsilon(1e-14));
    }
}

TEST_CASE("disk spin is frozen") {
    const SimParams p = SimParams::make(0, 0.1, 1.0, BodySpec::disk(1.0), 0.1, 0.8, 1e-3);
    const OUParams q = params_from_sim(p);
    Rng rng(8);
    OUState W;
    W.O = -0.77;
    const auto rec = run_ou(W, 5.0, 0.1, q, rng);
    CHECK(rec.level == "ou");
    CHECK(rec.samples.size() == 51u);
    for (const auto& s : rec.samples) CHECK(s.Y.Omega == -0.77);
}

TEST_CASE("path statistics") {
    const SimParams p = SimParams::make(0, 0.1, 1.0, BodySpec::ellipse(0.5, 0.3), 0.1, std::nullopt, 1e-3);
    const OUParams q = params_from_sim(p);
    Rng root(21);

    SUBCASE("autocovariance decay") {
        std::vector<std::vector<double>> v1;
        for (int r = 0; r < 100; ++r) {
            Rng rng = root.split(r);
            OUState W = stationary(q, rng);
            std::vector<double> s;
            for (int k = 0; k < 10000; ++k) {
                s.push_back(W.V.x);
                W = transition(W, 0.02, q, rng);
            }
            v1.push_back(std::move(s));
        }
        const auto fit = autocovariance(v1, 0.02, 40);
        CHECK(fit.theta == doctest::Approx(q.theta_V).epsilon(0.02));
        CHECK(fit.amplitude == doctest::Approx(1.0).epsilon(0.02));
    }

    SUBCASE("martingale problem") {
        // generator a*L from its printed form, applied to V1, V1^2, O, O^2
        const double a = q.a, L = q.L, K = q.K, I = q.I, beta = q.beta;
        auto gen = [&](int f, const OUState& W) {
            switch (f) {
            case 0: return -(L / 2) * W.V.x * a;
            case 1: return a * ((1 / beta) * (L / 2) * 2 - (L / 2) * 2 * W.V.x * W.V.x);
            case 2: return -a * (K / I) * W.O;
            default: return a * ((1 / beta) * (K / (I * I)) * 2 - (K / I) * 2 * W.O * W.O);
            }
        };
        auto phi = [](int f, const OUState& W) {
            switch (f) {
            case 0: return W.V.x;
            case 1: return W.V.x * W.V.x;
            case 2: return W.O;
            default: return W.O * W.O;
            }
        };
        const double s0 = 0.2, t1 = 0.7, dt = 0.002;
        const int n = 10000;
        double sum[4] = {}, sq[4] = {};
        for (int r = 0; r < n; ++r) {
            Rng rng = root.split(1000 + r);
            OUState W;
            W.V = {1.5, -0.5};
            W.O = 2.0;
            W = transition(W, s0, q, rng);
            double m[4], integral[4] = {};
            for (int f = 0; f < 4; ++f) m[f] = -phi(f, W);
            const int steps = static_cast<int>(std::lround((t1 - s0) / dt));
            for (int k = 0; k < steps; ++k) {
                const OUState Wn = transition(W, dt, q, rng);
                for (int f = 0; f < 4; ++f) integral[f] += 0.5 * dt * (gen(f, W) + gen(f, Wn));
                W = Wn;
            }
            for (int f = 0; f < 4; ++f) {
                const double x = m[f] + phi(f, W) - integral[f];
                sum[f] += x;
                sq[f] += x * x;
            }
        }
        for (int f = 0; f < 4; ++f) {
            const double mean = sum[f] / n, se = std::sqrt((sq[f] / n - mean * mean) / n);
            CHECK(std::abs(mean) < 4 * se);
        }
    }

    SUBCASE("decoupling and diffusive position") {
        const int n = 10000;
        const double T = 20.0;
        double cov = 0, cov2 = 0, x = 0, x2 = 0;
        std::vector<std::vector<double>> v1;
        for (int r = 0; r < n; ++r) {
            Rng rng = root.split(50000 + r);
            const auto rec = run_ou(stationary(q, rng), T, 0.05, q, rng);
            const BodySample& end = rec.samples.back();
            const double c = end.Y.V.x * end.Y.Omega;
            cov += c;
            cov2 += c * c;
            x += end.Y.X.x;
            x2 += end.Y.X.x * end.Y.X.x;
            if (r < 200) {
                std::vector<double> s;
                for (const auto& b : rec.samples) s.push_back(b.Y.V.x);
                v1.push_back(std::move(s));
            }
        }
        const double mc = cov / n, se_c = std::sqrt((cov2 / n - mc * mc) / n);
        CHECK(std::abs(mc) < 4 * se_c);
        const double mx = x / n, var_x = x2 / n - mx * mx;
        CHECK(std::abs(mx) < 4 * std::sqrt(var_x / n));

        // Var X(T) = 2 D (T - (1 - e^{-theta T}) / theta) with D the Green-Kubo integral of C(s)
        const auto fit = autocovariance(v1, 0.05, 30);
        const double D = fit.amplitude / fit.theta;
        CHECK(D == doctest::Approx(1.0 / (p.beta * q.theta_V)).epsilon(0.05));
        const double eff = T - (1 - std::exp(-q.theta_V * T)) / q.theta_V;
        const double tol = 4 * std::sqrt(2.0 / n);
        CHECK(var_x / eff == doctest::Approx(2.0 / (p.beta * q.theta_V)).epsilon(tol));
        CHECK(var_x / eff == doctest::Approx(2 * D).epsilon(tol + 0.05));
    }
}
