#include "rigidgas/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "rigidgas/errors.hpp"

namespace rigidgas {

BodySpec BodySpec::disk(double R, int order) {
    BodySpec s;
    s.kind = BodyKind::disk;
    s.radius = R;
    s.quadrature_order = order;
    return s;
}

BodySpec BodySpec::ellipse(double a, double b, int order) {
    BodySpec s;
    s.kind = BodyKind::ellipse;
    s.a = a;
    s.b = b;
    s.quadrature_order = order;
    return s;
}

BodySpec BodySpec::fourier(std::vector<double> coeffs, int order) {
    BodySpec s;
    s.kind = BodyKind::fourier;
    s.coeffs = std::move(coeffs);
    s.quadrature_order = order;
    return s;
}

namespace {

// Golden-section polish of a periodic maximum seeded from the best grid nodes.
double refined_max(const std::function<double(double)>& f, int nodes) {
    const double dphi = kTwoPi / nodes;
    std::vector<double> vals(nodes);
    for (int k = 0; k < nodes; ++k) vals[k] = f(k * dphi);
    std::vector<int> peaks;
    for (int k = 0; k < nodes; ++k) {
        const double l = vals[(k + nodes - 1) % nodes], r = vals[(k + 1) % nodes];
        if (vals[k] >= l && vals[k] >= r) peaks.push_back(k);
    }
    std::sort(peaks.begin(), peaks.end(), [&](int i, int j) { return vals[i] > vals[j]; });
    double best = *std::max_element(vals.begin(), vals.end());
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (std::size_t p = 0; p < std::min<std::size_t>(peaks.size(), 4); ++p) {
        double lo = peaks[p] * dphi - dphi, hi = peaks[p] * dphi + dphi;
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        double f1 = f(x1), f2 = f(x2);
        for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
            if (f1 < f2) {
                lo = x1; x1 = x2; f1 = f2;
                x2 = lo + g * (hi - lo); f2 = f(x2);
            } else {
                hi = x2; x2 = x1; f2 = f1;
                x1 = hi - g * (hi - lo); f1 = f(x1);
            }
        }
        best = std::max({best, f1, f2});
    }
    return best;
}

}  // namespace

SupportBody::SupportBody(const BodySpec& spec) : spec_(spec) {
    if (spec_.quadrature_order < 16) throw InvalidSpec("quadrature_order must be at least 16");
    switch (spec_.kind) {
    case BodyKind::disk:
        if (!(spec_.radius > 0)) throw InvalidSpec("disk radius must be positive");
        break;
    case BodyKind::ellipse:
        if (!(spec_.a > 0) || !(spec_.b > 0)) throw InvalidSpec("ellipse semi-axes must be positive");
        break;
    case BodyKind::fourier:
        if (spec_.coeffs.empty() || spec_.coeffs.size() % 2 == 0)
            throw InvalidSpec("fourier coeffs must be [c0, a1, b1, ..., ak, bk]");
        if (!(spec_.coeffs[0] > 0)) throw InvalidSpec("fourier mean coefficient c0 must be positive");
        break;
    }

    const int M = spec_.quadrature_order;
    const double w = kTwoPi / M;
    rho_min_ = std::numeric_limits<double>::infinity();
    double area = 0.0;
    Vec2 first_moment;
    for (int k = 0; k < M; ++k) {
        const double phi = k * w;
        const SupportJet j = raw_jet(phi);
        const double rho = j.h + j.d2h;
        rho_min_ = std::min(rho_min_, rho);
        const Vec2 u = unit(phi);
        const Vec2 r = j.h * u + j.dh * perp(u);
        area += 0.5 * j.h * rho * w;
        first_moment += (j.h * rho * w / 3.0) * r;
    }
    if (!(rho_min_ > 0))
        throw ConvexityViolation("min(h + h'') = " + std::to_string(rho_min_) + " on the quadrature grid");
    if (spec_.kind == BodyKind::fourier) shift_ = first_moment / area;
}

SupportJet SupportBody::raw_jet(double phi) const {
    switch (spec_.kind) {
    case BodyKind::disk:
        return {spec_.radius, 0.0, 0.0};
    case BodyKind::ellipse: {
        const double a2 = spec_.a * spec_.a, b2 = spec_.b * spec_.b;
        const double c = std::cos(phi), s = std::sin(phi);
        const double h = std::sqrt(a2 * c * c + b2 * s * s);
        const double dh = (b2 - a2) * s * c / h;
        const double d2h = ((b2 - a2) * (c * c - s * s) - dh * dh) / h;
        return {h, dh, d2h};
    }
    case BodyKind::fourier: {
        const auto& cf = spec_.coeffs;
        double h = cf[0], dh = 0.0, d2h = 0.0;
        const double c1 = std::cos(phi), s1 = std::sin(phi);
        double ck = 1.0, sk = 0.0;
        for (std::size_t k = 1; 2 * k < cf.size(); ++k) {
            const double cn = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = cn;
            const double ak = cf[2 * k - 1], bk = cf[2 * k];
            const double kd = static_cast<double>(k);
            h += ak * ck + bk * sk;
            dh += kd * (bk * ck - ak * sk);
            d2h -= kd * kd * (ak * ck + bk * sk);
        }
        return {h, dh, d2h};
    }
    }
    return {0, 0, 0};
}

SupportJet SupportBody::jet(double phi) const {
    SupportJet j = raw_jet(phi);
    if (shift_.x != 0.0 || shift_.y != 0.0) {
        const Vec2 u = unit(phi);
        j.h -= dot(shift_, u);
        j.dh -= dot(shift_, perp(u));
        j.d2h += dot(shift_, u);
    }
    return j;
}

double SupportBody::rho(double phi) const {
    const SupportJet j = jet(phi);
    return j.h + j.d2h;
}

SupportBody make_support_body(const BodySpec& spec) { return SupportBody(spec); }

BoundaryPoint boundary(const SupportBody& body, double phi) {
    const SupportJet j = body.jet(phi);
    const Vec2 u = unit(phi);
    return {j.h * u + j.dh * perp(u), u, 1.0 / (j.h + j.d2h), j.dh};
}

ShapeConstants shape_constants(const SupportBody& body, double alpha) {
    ShapeConstants c;
    c.alpha = alpha;
    const int M = body.quadrature_order();
    const double w = kTwoPi / M;
    const double half = 0.5 * alpha;
    double J = 0.0, rho_max = 0.0, rho_min = std::numeric_limits<double>::infinity();
    double L_alpha = 0.0;
    for (int k = 0; k < M; ++k) {
        const double phi = k * w;
        const SupportJet j = body.jet(phi);
        const double rho = j.h + j.d2h, rho_a = rho + half;
        const Vec2 u = unit(phi);
        rho_max = std::max(rho_max, rho);
        rho_min = std::min(rho_min, rho);
        c.L += rho * w;
        L_alpha += rho_a * w;
        c.area += 0.5 * j.h * rho * w;
        J += 0.25 * (j.h * j.h + j.dh * j.dh) * j.h * rho * w;
        c.K += j.dh * j.dh * rho * w;
        c.K_alpha += j.dh * j.dh * rho_a * w;
        c.N.xx += u.x * u.x * rho * w;
        c.N.xy += u.x * u.y * rho * w;
        c.N.yy += u.y * u.y * rho * w;
        c.N_alpha.xx += u.x * u.x * rho_a * w;
        c.N_alpha.xy += u.x * u.y * rho_a * w;
        c.N_alpha.yy += u.y * u.y * rho_a * w;
        c.Gamma += (j.dh * rho * w) * u;
        c.Gamma_alpha += (j.dh * rho_a * w) * u;
        c.closure_n += (rho_a * w) * u;
        c.closure_r += -j.dh * rho_a * w;
    }
    c.L_alpha = L_alpha;
    c.I = J / c.area;
    const double rho_peak = std::max(rho_max, refined_max([&](double p) { return body.rho(p); }, M));
    const double rho_low = -refined_max([&](double p) { return -body.rho(p); }, M);
    if (!(rho_low > 0)) throw ConvexityViolation("radius of curvature vanishes between grid nodes");
    c.kappa_min = 1.0 / rho_peak;
    c.kappa_max = 1.0 / std::min(rho_low, rho_min);
    c.rho_alpha_max = rho_peak + half;
    c.r_max = std::sqrt(refined_max([&](double p) {
        const SupportJet j = body.jet(p);
        return j.h * j.h + j.dh * j.dh;
    }, M));
    c.r_max_alpha = std::sqrt(refined_max([&](double p) {
        const SupportJet j = body.jet(p);
        return (j.h + half) * (j.h + half) + j.dh * j.dh;
    }, M));
    c.dh_max = refined_max([&](double p) { return std::abs(body.jet(p).dh); }, M);
    return c;
}

namespace {

struct Objective {
    const SupportBody& body;
    Vec2 q;
    double offset;
    // F = q.u - H, F' = q.u_perp - H', F'' = -q.u - H''
    std::array<double, 3> operator()(double phi) const {
        const SupportJet j = body.jet(phi);
        const double c = std::cos(phi), s = std::sin(phi);
        const double qu = q.x * c + q.y * s, qp = -q.x * s + q.y * c;
        return {qu - j.h - offset, qp - j.dh, -qu - j.d2h};
    }
};

// Maximise F on [lo, hi] given F'(lo) >= 0 >= F'(hi): Newton with bisection fallback.
double bracketed_max(const Objective& F, double lo, double hi) {
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const auto f = F(x);
        if (f[1] > 0) lo = x; else hi = x;
        double next;
        if (f[2] < 0) {
            next = x - f[1] / f[2];
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        } else {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - x) < 1e-15 * (1.0 + std::abs(x)) || hi - lo < 1e-15) return next;
        x = next;
    }
    throw NoConvergence("closest-point search exceeded its iteration cap");
}

}  // namespace

DistanceResult signed_distance(const SupportBody& body, double theta, double scale, Vec2 p,
                               double offset, const double* hint) {
    const Vec2 q = rotate(p, -theta) / scale;
    const Objective F{body, q, offset};

    if (hint) {
        // Every local maximum with F > 0 is global (superlevel sets of F above
        // zero are arcs), so a converged Newton iterate outside the body is exact.
        double x = *hint;
        for (int it = 0; it < 12; ++it) {
            const auto f = F(x);
            if (!(f[2] < 0)) break;
            const double step = -f[1] / f[2];
            if (std::abs(step) > 0.5) break;
            x += step;
            if (std::abs(step) < 1e-14) {
                const auto g = F(x);
                if (g[0] > 0) return {scale * g[0], wrap_angle(x)};
                break;
            }
        }
    }

    constexpr int kGrid = 64;
    const double dphi = kTwoPi / kGrid;
    std::array<double, kGrid> vals{};
    for (int k = 0; k < kGrid; ++k) vals[k] = F(k * dphi)[0];
    std::array<int, kGrid> order{};
    int npeaks = 0;
    for (int k = 0; k < kGrid; ++k) {
        if (vals[k] >= vals[(k + kGrid - 1) % kGrid] && vals[k] >= vals[(k + 1) % kGrid]) order[npeaks++] = k;
    }
    std::sort(order.begin(), order.begin() + npeaks, [&](int i, int j) { return vals[i] > vals[j]; });

    double best_f = -std::numeric_limits<double>::infinity(), best_phi = 0.0;
    for (int pk = 0; pk < std::min(npeaks, 3); ++pk) {
        const double c = order[pk] * dphi;
        double lo = c - dphi, hi = c + dphi;
        for (int widen = 0; widen < 4 && !(F(lo)[1] >= 0 && F(hi)[1] <= 0); ++widen) {
            lo -= dphi;
            hi += dphi;
        }
        double x = c;
        if (F(lo)[1] >= 0 && F(hi)[1] <= 0) x = bracketed_max(F, lo, hi);
        const double fx = F(x)[0];
        if (fx > best_f) {
            best_f = fx;
            best_phi = x;
        }
    }
    return {scale * best_f, wrap_angle(best_phi)};
}

}  // namespace rigidgas
