#pragma once

#include "rigidgas/geometry.hpp"
#include "rigidgas/rng.hpp"
#include "rigidgas/trajectory.hpp"

namespace rigidgas {

enum class OUVariant {
    generator,  // coefficients read off the limiting generator a*L
    printed,    // drift -aL V and Omega noise 2aK/(beta I), as in the displayed SDE
};

struct OUParams {
    double a = 0.0;
    double L = 0.0;
    double K = 0.0;
    double I = 0.0;
    double beta = 1.0;
    OUVariant variant = OUVariant::generator;
    double theta_V = 0.0, sigma2_V = 0.0;  // per component
    double theta_O = 0.0, sigma2_O = 0.0;

    double stationary_var_V() const { return theta_V > 0 ? sigma2_V / (2 * theta_V) : 0.0; }
    double stationary_var_O() const { return theta_O > 0 ? sigma2_O / (2 * theta_O) : 0.0; }
};

// I defaults to the body's own rescaled moment of inertia
OUParams params_from_body(const ShapeConstants& consts, double beta, std::optional<double> I = std::nullopt,
                          OUVariant variant = OUVariant::generator);
OUParams params_from_sim(const SimParams& p, OUVariant variant = OUVariant::generator);

struct OUState {
    Vec2 V;
    double O = 0.0;
    Vec2 X;  // integrated position, not wrapped onto the torus
    bool operator==(const OUState&) const = default;
};

// Exact Gaussian transition of (V, O); X is left untouched.
OUState transition(const OUState& W, double dt, const OUParams& q, Rng& rng);

// Samples at k*sample_dt and at T. X follows the trapezoid rule on the
// sample grid. In the record, Theta is always 0 and Omega carries O.
TrajectoryRecord run_ou(const OUState& W0, double T, double sample_dt, const OUParams& q, Rng& rng);

}  // namespace rigidgas
