#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "rigidgas/params.hpp"

namespace rigidgas {

struct ContactData {
    double phi = 0.0;
    Vec2 n;          // world-frame outward normal
    Vec2 r;          // world-frame contact vector on the reference body (not the enlarged one)
    double n_rperp = 0.0;  // n . r_perp = -h'(phi)
    double A = 0.0;  // alpha^2 (1 + h'^2 / I)
    double b = 0.0;  // (v - alpha V - alpha Omega r_perp) . n
    bool incoming() const { return b < 0; }
};

ContactData contact_data(const BodyState& Y, Vec2 v, double phi, const SimParams& p);

std::pair<Vec2, Vec2> collide_atoms(Vec2 vi, Vec2 vj, Vec2 nu);

struct BodyAtomCollision {
    BodyState Y;
    Vec2 v;
    ContactData contact;  // evaluated on the incoming state
};

BodyAtomCollision collide_body_atom(const BodyState& Y, Vec2 v, double phi, const SimParams& p);

struct Conserved {
    Vec2 P;
    double E;
};

Conserved conserved_quantities(const BodyState& Y, Vec2 v, const SimParams& p);
// I Omega - V . r_perp at the contact point of angle phi
double contact_angular_momentum(const BodyState& Y, double phi, const SimParams& p);

struct PathologyFlags {
    bool small_deflection = false;
    bool large_speed = false;
    bool slow_relative_pre = false;
    bool slow_relative_post = false;

    bool any() const { return small_deflection || large_speed || slow_relative_pre || slow_relative_post; }
    bool a1() const { return small_deflection || large_speed; }
    bool a2() const { return slow_relative_pre || slow_relative_post; }
    std::uint8_t bits() const {
        return static_cast<std::uint8_t>(small_deflection | large_speed << 1 | slow_relative_pre << 2 |
                                         slow_relative_post << 3);
    }
    std::string to_string() const;  // '|'-joined flag names, empty when clean
    bool operator==(const PathologyFlags&) const = default;
};

PathologyFlags pathology_flags(const BodyState& Y, Vec2 v, const BodyState& Yp, Vec2 vp, const SimParams& p);

// 2 r_max / |v'/alpha - V'| in body time units (world time is scale() times this)
double escape_time_bound(Vec2 vp, Vec2 Vp, const SimParams& p);

// Isolated two-body evolution from a contact configuration, in body units.
// An incoming state is evolved backward in time, an outgoing one forward; the
// result says whether a second contact happens within horizon_factor * delta_max.
bool backward_recollides(const BodyState& Y, Vec2 v, double phi, const SimParams& p, double horizon_factor = 4.0);

// Physical (unscaled) variables, used to cross-check the rescaled laws.
struct PhysicalState {
    Vec2 V;
    double Omega_hat;
    Vec2 v_hat;
};
PhysicalState to_physical(const BodyState& Y, Vec2 v, const SimParams& p);
PhysicalState collide_physical(const PhysicalState& s, double Theta, double phi, const SimParams& p);

}  // namespace rigidgas
