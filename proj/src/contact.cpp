#include "rigidgas/contact.hpp"

#include <cmath>
#include <limits>

#include "rigidgas/errors.hpp"

namespace rigidgas {

Gap gap_at(const SupportBody& body, const RelativeMotion& m, double s, double* hint) {
    const Vec2 d = m.d0 + s * m.w;
    const double theta = m.theta0 + s * m.theta_rate;
    const DistanceResult dr = signed_distance(body, theta, m.scale, d, m.offset, hint);
    if (hint) *hint = dr.phi;
    const SupportJet j = body.jet(dr.phi);
    const Vec2 u = unit(dr.phi);
    const double c = std::cos(theta), sn = std::sin(theta);
    const Vec2 n = rotate(u, c, sn);
    const Vec2 pb = rotate((j.h + m.offset) * u + j.dh * perp(u), c, sn) * m.scale;
    const double gdot = dot(m.w - m.theta_rate * perp(pb), n);
    return {dr.d, gdot, dr.phi};
}

std::optional<ContactHit> first_contact(const SupportBody& body, const RelativeMotion& m, double bound_radius,
                                        double s_begin, double s_end, const ContactSearch& opts) {
    const double R = bound_radius * (1.0 + 1e-9) + opts.tol;
    const double a = norm2(m.w), b = dot(m.d0, m.w), c = norm2(m.d0) - R * R;
    double s_in, s_out;
    if (c > 0) {
        if (b >= 0) return std::nullopt;
        const double disc = b * b - a * c;
        if (disc <= 0) return std::nullopt;
        const double sq = std::sqrt(disc);
        s_in = c / (-b + sq);
        s_out = (-b + sq) / a;
    } else {
        s_in = 0.0;
        s_out = a > 0 ? (-b + std::sqrt(b * b - a * c)) / a : std::numeric_limits<double>::infinity();
    }
    double s = std::max(s_begin, s_in);
    const double hi = std::min(s_end, s_out);
    if (s > hi) return std::nullopt;

    const double lambda = std::sqrt(a) + std::abs(m.theta_rate) * R;
    if (lambda == 0.0) return std::nullopt;
    const double min_step = opts.tol / lambda;
    double hint = 0.0;
    double* hp = nullptr;
    for (long it = 0; it < opts.max_iter; ++it) {
        const Gap gp = gap_at(body, m, s, hp);
        hint = gp.phi;
        hp = &hint;
        if (gp.g < -opts.overlap_tol * m.scale)
            throw OverlapDetected("point is " + std::to_string(-gp.g) + " inside the body");
        if (gp.g <= opts.tol) {
            if (gp.gdot < 0) return ContactHit{s, gp.phi};
            s += min_step;
        } else {
            s += std::max(gp.g / lambda, min_step);
        }
        if (s > hi) return std::nullopt;
    }
    throw NoConvergence("conservative advancement exceeded its iteration cap");
}

}  // namespace rigidgas
