#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rigidgas/params.hpp"
#include "rigidgas/rng.hpp"

namespace rigidgas {

struct Configuration {
    BodyState body;
    std::vector<AtomState> atoms;
};

std::vector<Vec2> sample_maxwellians(std::size_t count, double beta, Rng& rng);

// (V, Omega) from M_{beta,I}
BodyState sample_body_velocity(double beta, double I, Rng& rng);
// uniform pose on the torus and circle, Maxwellian velocities
BodyState sample_body(const SimParams& p, Rng& rng);

struct PerturbationWeight {
    std::function<double(const BodyState&)> g0;
    double sup_bound = 1.0;
    std::string name = "constant";

    static PerturbationWeight constant();
    // 1 + A cos(2 pi X1)
    static PerturbationWeight cosine_tilt(double amplitude);
    // ((beta + gamma) / beta) exp(-gamma |V|^2 / 2), mean one under M_beta
    static PerturbationWeight gaussian_tilt(double gamma, double beta);
};

struct SamplerOptions {
    double packing_limit = 0.2;
    long retries_per_atom = 100000;
};

// N (pi/4) eps^2 + area(Sigma_alpha) (eps/alpha)^2
double packing_fraction(const SimParams& p);

Configuration sample_equilibrium(const SimParams& p, Rng& rng, const SamplerOptions& opts = {});
Configuration sample_perturbed(const SimParams& p, const PerturbationWeight& w, Rng& rng,
                               const SamplerOptions& opts = {});
// atoms only, for a given body pose
std::vector<AtomState> sample_atoms(const SimParams& p, const BodyState& body, Rng& rng,
                                    const SamplerOptions& opts = {});

}  // namespace rigidgas
