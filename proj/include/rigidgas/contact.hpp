#pragma once

#include <optional>

#include "rigidgas/geometry.hpp"
#include "rigidgas/vec2.hpp"

namespace rigidgas {

// Straight-line motion of a point relative to a translating, spinning body.
struct RelativeMotion {
    Vec2 d0;                  // point minus body centre at s = 0
    Vec2 w;                   // point velocity minus body velocity
    double theta0 = 0.0;
    double theta_rate = 0.0;  // dTheta/ds
    double scale = 1.0;       // body length scale
    double offset = 0.0;      // support-function offset in body units (alpha/2 for the contact body)
};

struct Gap {
    double g;     // signed gap, same units as d0
    double gdot;  // time derivative of g
    double phi;   // body-frame normal angle of the closest point
};

Gap gap_at(const SupportBody& body, const RelativeMotion& m, double s, double* hint = nullptr);

struct ContactHit {
    double s;
    double phi;
};

struct ContactSearch {
    double tol = 1e-12;           // contact registered when g <= tol and gdot < 0
    double overlap_tol = 1e-9;    // penetration beyond this is a hard error
    long max_iter = 20'000'000;
};

// Conservative advancement restricted to the time interval during which the
// point is inside the circle of radius `bound_radius` about the body centre.
// The first approaching contact in [s_begin, s_end] is returned.
std::optional<ContactHit> first_contact(const SupportBody& body, const RelativeMotion& m, double bound_radius,
                                        double s_begin, double s_end, const ContactSearch& opts = {});

}  // namespace rigidgas
