#pragma once

#include <optional>

#include "rigidgas/geometry.hpp"
#include "rigidgas/vec2.hpp"

namespace rigidgas {

struct BodyState {
    Vec2 X;
    Vec2 V;
    double Theta = 0.0;
    double Omega = 0.0;  // rescaled angular velocity
    bool operator==(const BodyState&) const = default;
};

struct AtomState {
    Vec2 x;
    Vec2 v;  // rescaled velocity, v = alpha * v_hat
    bool operator==(const AtomState&) const = default;
};

struct SimParams {
    int N = 0;
    double eps = 0.0;
    double alpha = 0.1;
    double beta = 1.0;
    double eta = 0.1;
    SupportBody body{BodySpec::disk(1.0)};
    ShapeConstants consts;
    double I = 0.0;  // rescaled moment of inertia actually used by the dynamics

    // eps defaults to 1/N; an explicit eps is needed only for N = 0. With
    // require_scaling false the N eps = 1 constraint is skipped, which the
    // sampler tests use to build deliberately dense or tiny systems.
    static SimParams make(int N, double alpha, double beta, const BodySpec& spec, double eta = 0.1,
                          std::optional<double> inertia = std::nullopt, std::optional<double> eps = std::nullopt,
                          bool require_scaling = true);

    double scale() const { return eps / alpha; }      // body length scale in world units
    double spin_rate() const { return alpha / eps; }  // dTheta/dt per unit Omega
    double bound_radius() const { return scale() * consts.r_max_alpha; }
};

}  // namespace rigidgas
