#include <cmath>

#include "doctest.h"
#include "rigidgas/errors.hpp"
#include "rigidgas/rng.hpp"
#include "rigidgas/scattering.hpp"

using namespace rigidgas;

namespace {

SimParams ellipse_params(double alpha = 0.1, int N = 1000) {
    return SimParams::make(N, alpha, 1.0, BodySpec::ellipse(0.5, 0.3));
}

struct RandomContact {
    BodyState Y;
    Vec2 v;
    double phi;
};

RandomContact random_contact(Rng& rng, double speed = 1.0) {
    RandomContact c;
    c.Y.X = {rng.uniform(), rng.uniform()};
    c.Y.V = {speed * rng.normal(), speed * rng.normal()};
    c.Y.Theta = kTwoPi * rng.uniform();
    c.Y.Omega = 3.0 * speed * rng.normal();
    c.v = {speed * rng.normal(), speed * rng.normal()};
    c.phi = kTwoPi * rng.uniform();
    return c;
}

double scale_of(const Conserved& c) { return std::max(1.0, c.E); }

}  // namespace

TEST_CASE("atom-atom reflection") {
    auto [a, b] = collide_atoms({1, 0}, {-1, 0}, {1, 0});
    CHECK(a == Vec2{-1, 0});
    CHECK(b == Vec2{1, 0});
    auto [c, d] = collide_atoms({0, 1}, {0, 3}, {1, 0});
    CHECK(c == Vec2{0, 1});
    CHECK(d == Vec2{0, 3});
    Rng rng(1);
    for (int k = 0; k < 1000; ++k) {
        const Vec2 vi{rng.normal(), rng.normal()}, vj{rng.normal(), rng.normal()};
        const Vec2 nu = unit(kTwoPi * rng.uniform());
        const auto [vi1, vj1] = collide_atoms(vi, vj, nu);
        const auto [vi2, vj2] = collide_atoms(vi1, vj1, nu);
        CHECK(norm(vi2 - vi) < 1e-14);
        CHECK(norm(vj2 - vj) < 1e-14);
        CHECK(norm(vi1 + vj1 - vi - vj) < 1e-14);
        CHECK(std::abs(norm2(vi1) + norm2(vj1) - norm2(vi) - norm2(vj)) < 1e-13);
    }
}

TEST_CASE("head-on disk collision matches the closed form") {
    const double alpha = 0.1;
    const SimParams p = SimParams::make(1000, alpha, 1.0, BodySpec::disk(1.0));
    BodyState Y;
    const auto out = collide_body_atom(Y, {-1, 0}, 0.0, p);
    const double f = 1 + alpha * alpha;
    CHECK(out.v.x == doctest::Approx(-1 + 2 / f).epsilon(1e-15));
    CHECK(out.v.y == 0.0);
    CHECK(out.Y.V.x == doctest::Approx(-2 * alpha / f).epsilon(1e-15));
    CHECK(out.Y.V.y == 0.0);
    CHECK(out.Y.Omega == 0.0);
    CHECK(out.contact.incoming());

    const PathologyFlags fl = pathology_flags(Y, {-1, 0}, out.Y, out.v, p);
    CHECK_FALSE(fl.small_deflection);
    CHECK(norm(out.Y.V - Y.V) > std::pow(alpha, 2.1));
}

TEST_CASE("tangential contact is a no-op") {
    const SimParams p = ellipse_params();
    Rng rng(2);
    for (int k = 0; k < 100; ++k) {
        RandomContact c = random_contact(rng);
        const ContactData cd = contact_data(c.Y, c.v, c.phi, p);
        c.v -= cd.b * cd.n;  // remove the normal relative velocity
        const auto out = collide_body_atom(c.Y, c.v, c.phi, p);
        if (contact_data(c.Y, c.v, c.phi, p).b != 0.0) continue;
        CHECK(out.Y == c.Y);
        CHECK(out.v == c.v);
    }
}

TEST_CASE("body-atom scattering: conservation, involution, sign flip, tangential invariance") {
    for (double alpha : {0.05, 0.1, 0.3}) {
        const SimParams p = ellipse_params(alpha);
        Rng rng(3);
        for (int k = 0; k < 2000; ++k) {
            const RandomContact c = random_contact(rng);
            const auto out = collide_body_atom(c.Y, c.v, c.phi, p);
            const Conserved before = conserved_quantities(c.Y, c.v, p), after = conserved_quantities(out.Y, out.v, p);
            CHECK(norm(after.P - before.P) < 1e-12 * scale_of(before));
            CHECK(std::abs(after.E - before.E) < 1e-12 * scale_of(before));
            const double L0 = contact_angular_momentum(c.Y, c.phi, p), L1 = contact_angular_momentum(out.Y, c.phi, p);
            CHECK(std::abs(L1 - L0) < 1e-12 * std::max(1.0, std::abs(L0)));
            CHECK(out.Y.X == c.Y.X);
            CHECK(out.Y.Theta == c.Y.Theta);

            const ContactData cd1 = contact_data(out.Y, out.v, c.phi, p);
            CHECK(cd1.b == doctest::Approx(-out.contact.b).epsilon(1e-12));
            if (out.contact.incoming()) CHECK(cd1.b > 0);

            const Vec2 t = perp(out.contact.n);
            CHECK(dot(out.Y.V - c.Y.V, t) == doctest::Approx(0.0).epsilon(1e-14));
            CHECK(std::abs(dot(out.v - c.v, t)) < 1e-13);

            const auto back = collide_body_atom(out.Y, out.v, c.phi, p);
            CHECK(norm(back.Y.V - c.Y.V) < 1e-12);
            CHECK(std::abs(back.Y.Omega - c.Y.Omega) < 1e-12 * std::max(1.0, std::abs(c.Y.Omega)));
            CHECK(norm(back.v - c.v) < 1e-12);
        }
    }
}

TEST_CASE("rescaled and physical collision laws agree") {
    const SimParams p = ellipse_params(0.1);
    Rng rng(4);
    for (int k = 0; k < 500; ++k) {
        const RandomContact c = random_contact(rng);
        const auto out = collide_body_atom(c.Y, c.v, c.phi, p);
        const PhysicalState phys = collide_physical(to_physical(c.Y, c.v, p), c.Y.Theta, c.phi, p);
        const PhysicalState expect = to_physical(out.Y, out.v, p);
        CHECK(norm(phys.V - expect.V) < 1e-12);
        CHECK(norm(phys.v_hat - expect.v_hat) < 1e-12 * norm(expect.v_hat) + 1e-12);
        CHECK(std::abs(phys.Omega_hat - expect.Omega_hat) < 1e-12 * std::max(1.0, std::abs(expect.Omega_hat)));
    }
}

TEST_CASE("conserved quantities at rest") {
    const SimParams p = ellipse_params();
    const Conserved c = conserved_quantities({}, {0, 0}, p);
    CHECK(c.P == Vec2{0, 0});
    CHECK(c.E == 0.0);
}

TEST_CASE("pathology thresholds") {
    const SimParams p = ellipse_params(0.1);
    BodyState Y;
    Y.V = {0.3, -0.2};
    const Vec2 v = p.alpha * Y.V;
    CHECK(pathology_flags(Y, v, Y, v, p).slow_relative_pre);
    BodyState spin = Y;
    spin.Omega = 2 * std::abs(std::log(p.alpha));
    const Vec2 fast{3.0, 0.0};
    const PathologyFlags f = pathology_flags(spin, fast, spin, fast, p);
    CHECK(f.large_speed);
    CHECK_FALSE(f.small_deflection);  // |V' - V| = 0 is not flagged
    CHECK_FALSE(f.slow_relative_pre);
    CHECK(f.to_string() == "large_speed");
}

TEST_CASE("escape time bound") {
    const SimParams p = SimParams::make(1000, 0.1, 1.0, BodySpec::disk(1.0));
    CHECK(escape_time_bound({1.0, 0.0}, {0.0, 0.0}, p) == doctest::Approx(0.2));
    CHECK_THROWS_AS(escape_time_bound({0.01, 0.02}, {0.1, 0.2}, p), DegenerateVelocity);

    const SimParams e = ellipse_params(0.1);
    Rng rng(6);
    const double bound = 2 * e.consts.r_max * std::pow(e.alpha, 1.0 / 3.0 - e.eta);
    for (int k = 0; k < 10000; ++k) {
        const Vec2 vp{rng.normal(), rng.normal()}, Vp{rng.normal(), rng.normal()};
        if (norm(vp - e.alpha * Vp) < std::pow(e.alpha, 2.0 / 3.0 + e.eta)) continue;
        CHECK(escape_time_bound(vp, Vp, e) <= bound * (1 + 1e-12));
    }
}

TEST_CASE("disk bodies never recollide") {
    const SimParams p = SimParams::make(1000, 0.1, 1.0, BodySpec::disk(0.4));
    Rng rng(7);
    for (int k = 0; k < 500; ++k) {
        const RandomContact c = random_contact(rng);
        const auto out = collide_body_atom(c.Y, c.v, c.phi, p);
        CHECK_FALSE(backward_recollides(out.Y, out.v, c.phi, p));
        CHECK_FALSE(backward_recollides(c.Y, c.v, c.phi, p));
    }
}

TEST_CASE("good post-collisional states on the ellipse do not recollide") {
    const SimParams p = ellipse_params(0.1);
    Rng rng(8);
    int tested = 0;
    while (tested < 2000) {
        RandomContact c = random_contact(rng);
        c.Y.Omega = rng.normal() / std::sqrt(p.I);
        const auto out = collide_body_atom(c.Y, c.v, c.phi, p);
        if (!out.contact.incoming()) continue;
        if (pathology_flags(c.Y, c.v, out.Y, out.v, p).any()) continue;
        ++tested;
        CHECK_FALSE(backward_recollides(out.Y, out.v, c.phi, p));
    }
}

TEST_CASE("slow atoms near a fast elongated body do recollide") {
    const SimParams p = SimParams::make(1000, 0.1, 1.0, BodySpec::ellipse(1.0, 0.1));
    Rng rng(9);
    int found = 0;
    for (int k = 0; k < 100000 && found == 0; ++k) {
        BodyState Y;
        Y.Theta = kTwoPi * rng.uniform();
        Y.V = {0.3 * rng.normal(), 0.3 * rng.normal()};
        Y.Omega = (rng.uniform() < 0.5 ? -1 : 1) * (5.0 + 5.0 * rng.uniform());
        const double phi = kTwoPi * rng.uniform();
        const Vec2 v = p.alpha * Y.V + std::pow(p.alpha, 0.9) * unit(kTwoPi * rng.uniform());
        const auto out = collide_body_atom(Y, v, phi, p);
        if (!out.contact.incoming()) continue;
        if (backward_recollides(out.Y, out.v, phi, p)) {
            ++found;
            MESSAGE("recollision witness: phi=" << phi << " Theta=" << Y.Theta << " V=(" << Y.V.x << ","
                                                << Y.V.y << ") Omega=" << Y.Omega << " v=(" << v.x << "," << v.y
                                                << ")");
        }
    }
    CHECK(found > 0);
}
