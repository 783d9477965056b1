#include "rigidgas/scattering.hpp"

#include <cmath>

#include "rigidgas/contact.hpp"
#include "rigidgas/errors.hpp"

namespace rigidgas {

ContactData contact_data(const BodyState& Y, Vec2 v, double phi, const SimParams& p) {
    const SupportJet j = p.body.jet(phi);
    const Vec2 u = unit(phi);
    const double c = std::cos(Y.Theta), s = std::sin(Y.Theta);
    ContactData cd;
    cd.phi = phi;
    cd.n = rotate(u, c, s);
    cd.r = rotate(j.h * u + j.dh * perp(u), c, s);
    cd.A = p.alpha * p.alpha * (1.0 + j.dh * j.dh / p.I);
    // n . r_perp = -h' exactly, so a disk (h' = 0) receives no torque
    cd.n_rperp = -j.dh;
    cd.b = dot(v - p.alpha * Y.V, cd.n) - p.alpha * Y.Omega * cd.n_rperp;
    return cd;
}

std::pair<Vec2, Vec2> collide_atoms(Vec2 vi, Vec2 vj, Vec2 nu) {
    const double k = dot(vi - vj, nu);
    return {vi - k * nu, vj + k * nu};
}

BodyAtomCollision collide_body_atom(const BodyState& Y, Vec2 v, double phi, const SimParams& p) {
    BodyAtomCollision out{Y, v, contact_data(Y, v, phi, p)};
    const ContactData& cd = out.contact;
    const double D = -cd.b;
    if (D == 0.0) return out;
    const double f = 2.0 / (cd.A + 1.0);
    out.v = v + (f * D) * cd.n;
    out.Y.V = Y.V - (f * p.alpha * D) * cd.n;
    out.Y.Omega = Y.Omega - f * p.alpha / p.I * cd.n_rperp * D;
    return out;
}

Conserved conserved_quantities(const BodyState& Y, Vec2 v, const SimParams& p) {
    return {p.alpha * v + Y.V, 0.5 * (norm2(v) + norm2(Y.V) + p.I * Y.Omega * Y.Omega)};
}

double contact_angular_momentum(const BodyState& Y, double phi, const SimParams& p) {
    const Vec2 r = rotate(boundary(p.body, phi).r, Y.Theta);
    return p.I * Y.Omega - dot(Y.V, perp(r));
}

std::string PathologyFlags::to_string() const {
    std::string s;
    auto add = [&](bool f, const char* name) {
        if (!f) return;
        if (!s.empty()) s += '|';
        s += name;
    };
    add(small_deflection, "small_deflection");
    add(large_speed, "large_speed");
    add(slow_relative_pre, "slow_relative_pre");
    add(slow_relative_post, "slow_relative_post");
    return s;
}

PathologyFlags pathology_flags(const BodyState& Y, Vec2 v, const BodyState& Yp, Vec2 vp, const SimParams& p) {
    const double a = p.alpha;
    const double dV = norm(Yp.V - Y.V);
    const double speed_cap = std::abs(std::log(a));
    const double slow = std::pow(a, 2.0 / 3.0 + p.eta);
    PathologyFlags f;
    f.small_deflection = dV > 0 && dV < std::pow(a, 2.0 + p.eta);
    f.large_speed = std::max({norm(Y.V), norm(Yp.V), std::abs(Y.Omega), std::abs(Yp.Omega)}) > speed_cap;
    f.slow_relative_pre = norm(v - a * Y.V) < slow;
    f.slow_relative_post = norm(vp - a * Yp.V) < slow;
    return f;
}

double escape_time_bound(Vec2 vp, Vec2 Vp, const SimParams& p) {
    const double rel = norm(vp / p.alpha - Vp);
    if (rel < 1e-14) throw DegenerateVelocity("atom and body centre move together");
    return 2.0 * p.consts.r_max / rel;
}

bool backward_recollides(const BodyState& Y, Vec2 v, double phi, const SimParams& p, double horizon_factor) {
    const double a = p.alpha;
    const double horizon = horizon_factor * escape_time_bound(v, Y.V, p);
    const SupportJet j = p.body.jet(phi);
    const Vec2 u = unit(phi);
    RelativeMotion m;
    m.d0 = rotate((j.h + 0.5 * a) * u + j.dh * perp(u), Y.Theta);
    m.w = v / a - Y.V;
    m.theta0 = Y.Theta;
    m.theta_rate = Y.Omega;
    m.scale = 1.0;
    m.offset = 0.5 * a;
    const Gap g0 = gap_at(p.body, m, 0.0);
    if (g0.gdot < 0) {
        m.w = -m.w;
        m.theta_rate = -m.theta_rate;
    }
    ContactSearch opts;
    opts.tol = 1e-12 * p.consts.r_max_alpha;
    // start just past the initial contact
    const double lambda = norm(m.w) + std::abs(m.theta_rate) * p.consts.r_max_alpha;
    const double s0 = lambda > 0 ? 2.0 * opts.tol / lambda : 0.0;
    return first_contact(p.body, m, p.consts.r_max_alpha, s0, horizon, opts).has_value();
}

PhysicalState to_physical(const BodyState& Y, Vec2 v, const SimParams& p) {
    return {Y.V, Y.Omega * p.alpha / p.eps, v / p.alpha};
}

PhysicalState collide_physical(const PhysicalState& s, double Theta, double phi, const SimParams& p) {
    const double m = p.alpha * p.alpha;
    const double I_hat = p.I * (p.eps / p.alpha) * (p.eps / p.alpha);
    const double ell = p.eps / p.alpha;
    const BoundaryPoint bp = boundary(p.body, phi);
    const Vec2 n = rotate(bp.n, Theta), r = rotate(bp.r, Theta);
    const double nr = dot(n, perp(r));
    // effective mass factor A = m (1/M + ell^2 (n.r_perp)^2 / I_hat), with M = 1
    const double A = m * (1.0 + ell * ell * nr * nr / I_hat);
    const double f = 2.0 * m / (A + 1.0) * dot(s.V + ell * s.Omega_hat * perp(r) - s.v_hat, n);
    return {s.V - f * n, s.Omega_hat - ell * f / I_hat * nr, s.v_hat + (f / m) * n};
}

}  // namespace rigidgas
