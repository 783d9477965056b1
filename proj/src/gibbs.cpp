#include "rigidgas/gibbs.hpp"

#include <cmath>
#include <string>

#include "rigidgas/errors.hpp"

namespace rigidgas {

std::vector<Vec2> sample_maxwellians(std::size_t count, double beta, Rng& rng) {
    const double sd = 1.0 / std::sqrt(beta);
    std::vector<Vec2> out(count);
    for (auto& v : out) v = {sd * rng.normal(), sd * rng.normal()};
    return out;
}

BodyState sample_body_velocity(double beta, double I, Rng& rng) {
    BodyState Y;
    const double sd = 1.0 / std::sqrt(beta);
    Y.V = {sd * rng.normal(), sd * rng.normal()};
    Y.Omega = rng.normal() / std::sqrt(beta * I);
    return Y;
}

BodyState sample_body(const SimParams& p, Rng& rng) {
    BodyState Y = sample_body_velocity(p.beta, p.I, rng);
    Y.X = {rng.uniform(), rng.uniform()};
    Y.Theta = kTwoPi * rng.uniform();
    return Y;
}

PerturbationWeight PerturbationWeight::constant() {
    return {[](const BodyState&) { return 1.0; }, 1.0, "constant"};
}

PerturbationWeight PerturbationWeight::cosine_tilt(double amplitude) {
    if (std::abs(amplitude) > 1.0) throw InvalidSpec("cosine tilt amplitude must satisfy |A| <= 1");
    return {[amplitude](const BodyState& Y) { return 1.0 + amplitude * std::cos(kTwoPi * Y.X.x); },
            1.0 + std::abs(amplitude), "cosine_tilt"};
}

PerturbationWeight PerturbationWeight::gaussian_tilt(double gamma, double beta) {
    if (!(gamma >= 0)) throw InvalidSpec("gaussian tilt needs gamma >= 0");
    const double c = (beta + gamma) / beta;
    return {[c, gamma](const BodyState& Y) { return c * std::exp(-0.5 * gamma * norm2(Y.V)); }, c,
            "gaussian_tilt"};
}

double packing_fraction(const SimParams& p) {
    const double half = 0.5 * p.alpha;
    const double area_alpha = p.consts.area + half * p.consts.L + kPi * half * half;
    const double ell = p.scale();
    return p.N * (kPi / 4.0) * p.eps * p.eps + area_alpha * ell * ell;
}

std::vector<AtomState> sample_atoms(const SimParams& p, const BodyState& body, Rng& rng,
                                    const SamplerOptions& opts) {
    const double pf = packing_fraction(p);
    if (pf >= opts.packing_limit)
        throw PackingFailure("packing fraction " + std::to_string(pf) + " exceeds the dilute limit " +
                             std::to_string(opts.packing_limit));
    const int M = std::max(1, static_cast<int>(std::min(std::floor(1.0 / p.eps), std::floor(std::sqrt(p.N)))));
    std::vector<std::vector<int>> cells(static_cast<std::size_t>(M) * M);
    auto cell_of = [M](Vec2 x) {
        const int cx = std::min(M - 1, static_cast<int>(x.x * M));
        const int cy = std::min(M - 1, static_cast<int>(x.y * M));
        return std::pair{cx, cy};
    };
    const double eps2 = p.eps * p.eps;
    const double ell = p.scale();
    std::vector<AtomState> atoms;
    atoms.reserve(p.N);
    const auto velocities = sample_maxwellians(p.N, p.beta, rng);
    for (int i = 0; i < p.N; ++i) {
        long tries = 0;
        for (;;) {
            if (++tries > opts.retries_per_atom)
                throw PackingFailure("could not place atom " + std::to_string(i) + " after " +
                                     std::to_string(opts.retries_per_atom) + " attempts");
            const Vec2 x{rng.uniform(), rng.uniform()};
            if (signed_distance(p.body, body.Theta, ell, min_image(x - body.X), 0.5 * p.alpha).d <= 0) continue;
            const auto [cx, cy] = cell_of(x);
            bool clash = false;
            for (int dx = -1; dx <= 1 && !clash; ++dx) {
                for (int dy = -1; dy <= 1 && !clash; ++dy) {
                    const int nx = (cx + dx + M) % M, ny = (cy + dy + M) % M;
                    for (int j : cells[static_cast<std::size_t>(nx) * M + ny]) {
                        if (norm2(min_image(atoms[j].x - x)) <= eps2) {
                            clash = true;
                            break;
                        }
                    }
                }
            }
            if (clash) continue;
            cells[static_cast<std::size_t>(cx) * M + cy].push_back(i);
            atoms.push_back({x, velocities[i]});
            break;
        }
    }
    return atoms;
}

Configuration sample_equilibrium(const SimParams& p, Rng& rng, const SamplerOptions& opts) {
    Configuration c;
    c.body = sample_body(p, rng);
    c.atoms = sample_atoms(p, c.body, rng, opts);
    return c;
}

Configuration sample_perturbed(const SimParams& p, const PerturbationWeight& w, Rng& rng,
                               const SamplerOptions& opts) {
    Configuration c;
    for (;;) {
        c.body = sample_body(p, rng);
        const double g = w.g0(c.body);
        if (g < 0 || g > w.sup_bound * (1 + 1e-12))
            throw InvalidSpec("perturbation weight " + w.name + " outside [0, sup_bound]");
        if (rng.uniform() * w.sup_bound < g) break;
    }
    c.atoms = sample_atoms(p, c.body, rng, opts);
    return c;
}

}  // namespace rigidgas
