#include "rigidgas/params.hpp"

#include <cmath>
#include <string>

#include "rigidgas/errors.hpp"

namespace rigidgas {

SimParams SimParams::make(int N, double alpha, double beta, const BodySpec& spec, double eta,
                          std::optional<double> inertia, std::optional<double> eps, bool require_scaling) {
    if (N < 0) throw InvalidSpec("N must be non-negative");
    if (!(alpha > 0 && alpha < 1)) throw InvalidSpec("alpha must lie in (0, 1)");
    if (!(beta > 0)) throw InvalidSpec("beta must be positive");
    if (!(eta > 0 && eta < 1.0 / 6.0)) throw InvalidSpec("eta must lie in (0, 1/6)");
    SimParams p;
    p.N = N;
    p.alpha = alpha;
    p.beta = beta;
    p.eta = eta;
    if (eps) {
        p.eps = *eps;
    } else {
        if (N == 0) throw InvalidSpec("eps must be given explicitly when N = 0");
        p.eps = 1.0 / N;
    }
    if (!(p.eps > 0 && p.eps < alpha)) throw InvalidSpec("need 0 < eps < alpha");
    if (require_scaling && N > 0 && std::abs(N * p.eps - 1.0) > 1e-12)
        throw InvalidSpec("Boltzmann-Grad scaling requires N * eps = 1");
    p.body = SupportBody(spec);
    p.consts = shape_constants(p.body, alpha);
    p.I = inertia ? *inertia : p.consts.I;
    if (!(p.I > 0)) throw InvalidSpec("moment of inertia must be positive");
    return p;
}

}  // namespace rigidgas
