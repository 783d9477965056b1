#include "rigidgas/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "rigidgas/errors.hpp"
#include "rigidgas/scattering.hpp"

namespace rigidgas {

double normal_cdf(double x, double mean, double sd) { return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0))); }

double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) return 0.0;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double D = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        D = std::max(D, std::abs(i / na - j / nb));
    }
    return D;
}

double ks_distance(std::vector<double> a, const std::function<double(double)>& cdf) {
    if (a.empty()) return 0.0;
    std::sort(a.begin(), a.end());
    const double n = static_cast<double>(a.size());
    double D = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double F = cdf(a[i]);
        D = std::max({D, (i + 1) / n - F, F - i / n});
    }
    return D;
}

double ks_pvalue(double D, double n_eff) {
    if (D <= 0.0) return 1.0;
    const double sn = std::sqrt(n_eff);
    const double lambda = (sn + 0.12 + 0.11 / sn) * D;
    if (lambda < 0.2) return 1.0;
    double sum = 0.0, sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-16) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_two_sample_pvalue(double D, std::size_t n, std::size_t m) {
    const double ne = static_cast<double>(n) * m / static_cast<double>(n + m);
    return ks_pvalue(D, ne);
}

WilsonInterval wilson(long k, long n, double z) {
    WilsonInterval w;
    w.k = k;
    w.n = n;
    if (n <= 0) {
        w.lo = 0.0;
        w.hi = 1.0;
        return w;
    }
    const double nn = static_cast<double>(n);
    const double ph = k / nn;
    const double denom = 1.0 + z * z / nn;
    const double centre = (ph + z * z / (2 * nn)) / denom;
    const double half = z * std::sqrt(ph * (1 - ph) / nn + z * z / (4 * nn * nn)) / denom;
    w.p = ph;
    // the endpoints are exact at k = 0 and k = n; the formula only reaches them up to rounding
    w.lo = k == 0 ? 0.0 : std::max(0.0, centre - half);
    w.hi = k == n ? 1.0 : std::min(1.0, centre + half);
    return w;
}

bool intervals_overlap(const WilsonInterval& a, const WilsonInterval& b) { return a.lo <= b.hi && b.lo <= a.hi; }

std::vector<MomentResidual> moment_identity_check(double beta, double e_angle) {
    if (!(beta > 0)) throw InvalidSpec("beta must be positive");
    using boost::math::quadrature::gauss_kronrod;
    const Vec2 e = unit(e_angle), ep = perp(e);
    const double inf = std::numeric_limits<double>::infinity();
    const double closed[3] = {1.0 / std::sqrt(2 * kPi * beta), 1.0 / (2 * beta),
                              std::sqrt(2.0 / (kPi * beta * beta * beta))};
    std::vector<MomentResidual> out;
    for (int k = 1; k <= 3; ++k) {
        for (int side : {+1, -1}) {
            auto outer = [&](double w) {
                auto inner = [&](double t) {
                    const Vec2 v = w * e + t * ep;
                    return beta / (2 * kPi) * std::exp(-0.5 * beta * norm2(v));
                };
                const double m = gauss_kronrod<double, 61>::integrate(inner, -inf, inf, 8, 1e-13);
                return std::pow(std::abs(w), k) * m;
            };
            const double q = side > 0 ? gauss_kronrod<double, 61>::integrate(outer, 0.0, inf, 8, 1e-13)
                                      : gauss_kronrod<double, 61>::integrate(outer, -inf, 0.0, 8, 1e-13);
            out.push_back({beta, k, side, q, closed[k - 1], q - closed[k - 1]});
        }
    }
    return out;
}

double component(const BodyState& Y, Component c) {
    switch (c) {
        case Component::V1: return Y.V.x;
        case Component::V2: return Y.V.y;
        case Component::Omega: return Y.Omega;
    }
    return 0.0;
}

const char* component_name(Component c) {
    switch (c) {
        case Component::V1: return "V1";
        case Component::V2: return "V2";
        case Component::Omega: return "Omega";
    }
    return "?";
}

namespace {

struct ExpFit {
    double A, theta;
};

// least squares for C_k = A exp(-theta s_k)
ExpFit fit_exponential(const std::vector<double>& s, const std::vector<double>& C) {
    // log-linear start from the positive points
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (C[k] <= 0) break;
        const double y = std::log(C[k]);
        sx += s[k];
        sy += y;
        sxx += s[k] * s[k];
        sxy += s[k] * y;
        ++m;
    }
    double theta = 1.0, A = C.empty() ? 0.0 : C[0];
    if (m >= 2) {
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        theta = std::max(-slope, 1e-8);
        A = std::exp((sy + theta * sx) / m);
    }
    // Levenberg-Marquardt on (A, theta)
    auto sse = [&](double a, double th) {
        double r = 0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            const double d = C[k] - a * std::exp(-th * s[k]);
            r += d * d;
        }
        return r;
    };
    double lambda = 1e-3, cur = sse(A, theta);
    for (int it = 0; it < 200; ++it) {
        double g0 = 0, g1 = 0, h00 = 0, h01 = 0, h11 = 0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            const double ex = std::exp(-theta * s[k]);
            const double r = C[k] - A * ex;
            const double jA = ex, jT = -A * s[k] * ex;
            g0 += jA * r;
            g1 += jT * r;
            h00 += jA * jA;
            h01 += jA * jT;
            h11 += jT * jT;
        }
        const double a00 = h00 * (1 + lambda), a11 = h11 * (1 + lambda);
        const double det = a00 * a11 - h01 * h01;
        if (det == 0) break;
        const double dA = (a11 * g0 - h01 * g1) / det;
        const double dT = (a00 * g1 - h01 * g0) / det;
        const double next = sse(A + dA, theta + dT);
        if (next < cur) {
            A += dA;
            theta += dT;
            const bool done = cur - next <= 1e-15 * cur;
            cur = next;
            lambda = std::max(lambda / 10, 1e-12);
            if (done) break;
        } else {
            lambda *= 10;
            if (lambda > 1e12) break;
        }
    }
    return {A, theta};
}

}  // namespace

AutocovarianceFit autocovariance(const std::vector<std::vector<double>>& series_in, double dt, int max_lag,
                                 int fit_lag) {
    if (max_lag < 2) throw InsufficientData("autocovariance needs at least 3 lags");
    if (fit_lag < 0 || fit_lag > max_lag) fit_lag = max_lag;
    if (fit_lag < 2) throw InsufficientData("exponential fit needs at least 3 lags");

    // groups for the jackknife: whole series when there are several, blocks otherwise
    std::vector<std::vector<double>> split;
    const std::vector<std::vector<double>>* series = &series_in;
    if (series_in.size() == 1) {
        const auto& x = series_in[0];
        const std::size_t G = 20, len = x.size() / G;
        if (len > static_cast<std::size_t>(max_lag)) {
            for (std::size_t g = 0; g < G; ++g)
                split.emplace_back(x.begin() + g * len, g + 1 == G ? x.end() : x.begin() + (g + 1) * len);
        }
    }

    long n_total = 0, pairs_at_max = 0;
    double sum = 0.0;
    for (const auto& x : series_in) {
        n_total += static_cast<long>(x.size());
        pairs_at_max += std::max<long>(0, static_cast<long>(x.size()) - max_lag);
        for (double v : x) sum += v;
    }
    if (pairs_at_max < 10L * (max_lag + 1))
        throw InsufficientData("series too short for " + std::to_string(max_lag) + " lags (" +
                               std::to_string(n_total) + " samples)");
    const double mean = sum / n_total;

    AutocovarianceFit out;
    out.samples = n_total;
    out.C.assign(max_lag + 1, 0.0);
    for (int k = 0; k <= max_lag; ++k) out.lags.push_back(k * dt);
    for (const auto& x : series_in)
        for (int k = 0; k <= max_lag; ++k)
            for (std::size_t t = 0; t + k < x.size(); ++t) out.C[k] += (x[t] - mean) * (x[t + k] - mean);
    for (double& c : out.C) c /= n_total;
    out.band = out.C[0] / std::sqrt(static_cast<double>(n_total));

    const std::vector<double> s(out.lags.begin(), out.lags.begin() + fit_lag + 1);
    const ExpFit f = fit_exponential(s, std::vector<double>(out.C.begin(), out.C.begin() + fit_lag + 1));
    out.amplitude = f.A;
    out.theta = f.theta;

    if (!split.empty()) series = &split;
    std::size_t G = series->size();
    std::vector<std::vector<double>> groups;  // series indices per jackknife group
    if (G >= 2) {
        const std::size_t ng = std::min<std::size_t>(20, G);
        std::vector<std::vector<double>> S(ng, std::vector<double>(fit_lag + 1, 0.0));
        std::vector<double> n(ng, 0.0);
        for (std::size_t r = 0; r < G; ++r) {
            const auto& x = (*series)[r];
            const std::size_t g = r % ng;
            n[g] += static_cast<double>(x.size());
            for (int k = 0; k <= fit_lag; ++k)
                for (std::size_t t = 0; t + k < x.size(); ++t) S[g][k] += (x[t] - mean) * (x[t + k] - mean);
        }
        std::vector<double> thetas;
        for (std::size_t g = 0; g < ng; ++g) {
            std::vector<double> C(fit_lag + 1, 0.0);
            double nn = 0;
            for (std::size_t h = 0; h < ng; ++h) {
                if (h == g) continue;
                nn += n[h];
                for (int k = 0; k <= fit_lag; ++k) C[k] += S[h][k];
            }
            for (double& c : C) c /= nn;
            thetas.push_back(fit_exponential(s, C).theta);
        }
        const double tb = std::accumulate(thetas.begin(), thetas.end(), 0.0) / ng;
        double v = 0;
        for (double t : thetas) v += (t - tb) * (t - tb);
        out.theta_se = std::sqrt((ng - 1.0) / ng * v);
    }
    return out;
}

AutocovarianceFit autocovariance(const std::vector<TrajectoryRecord>& records, Component c, int max_lag, int fit_lag,
                                 double t_min) {
    return autocovariance(records, std::vector<Component>{c}, max_lag, fit_lag, t_min);
}

AutocovarianceFit autocovariance(const std::vector<TrajectoryRecord>& records, const std::vector<Component>& comps,
                                 int max_lag, int fit_lag, double t_min) {
    std::vector<std::vector<double>> series;
    double dt = 0.0;
    for (const auto& r : records) {
        for (Component c : comps) {
            std::vector<double> x;
            double t_first = -1, t_second = -1;
            for (const auto& s : r.samples) {
                if (s.t < t_min) continue;
                if (t_first < 0)
                    t_first = s.t;
                else if (t_second < 0)
                    t_second = s.t;
                x.push_back(component(s.Y, c));
            }
            if (dt == 0.0 && t_second > t_first) dt = t_second - t_first;
            if (!x.empty()) series.push_back(std::move(x));
        }
    }
    if (series.empty() || dt == 0.0) throw InsufficientData("no samples in the stationary segment");
    return autocovariance(series, dt, max_lag, fit_lag);
}

const BodySample& sample_at(const TrajectoryRecord& rec, double t) {
    auto it = std::lower_bound(rec.samples.begin(), rec.samples.end(), t - 1e-9,
                               [](const BodySample& s, double x) { return s.t < x; });
    if (it == rec.samples.end() || std::abs(it->t - t) > 1e-9)
        throw InsufficientData("no sample at t = " + std::to_string(t));
    return *it;
}

std::vector<double> slice_values(const std::vector<TrajectoryRecord>& records, Component c,
                                 const std::vector<double>& times) {
    std::vector<double> out;
    out.reserve(records.size() * times.size());
    for (const auto& r : records)
        for (double t : times) out.push_back(component(sample_at(r, t).Y, c));
    return out;
}

std::vector<double> block_starts(double T, double window, double block) {
    std::vector<double> out;
    const double step = std::max(block, window);
    for (long k = 0;; ++k) {
        const double s = k * step;
        if (s + window > T + 1e-9) break;
        out.push_back(s);
    }
    return out;
}

std::vector<double> window_increments(const std::vector<TrajectoryRecord>& records, Component c, double window,
                                      const std::vector<double>& starts) {
    std::vector<double> out;
    out.reserve(records.size() * starts.size());
    for (const auto& r : records)
        for (double s : starts)
            out.push_back(component(sample_at(r, s + window).Y, c) - component(sample_at(r, s).Y, c));
    return out;
}

PathologyFrequency pathology_frequency(const std::vector<TrajectoryRecord>& records, double T) {
    PathologyFrequency out;
    long a1 = 0, a2 = 0, kill = 0, contacts = 0, sd = 0, ls = 0, sr = 0;
    for (const auto& r : records) {
        bool r1 = false, r2 = false;
        for (const auto& c : r.collisions) {
            if (c.t > T || c.gated) continue;
            ++contacts;
            r1 = r1 || c.flags.a1();
            r2 = r2 || c.flags.a2();
            sd += c.flags.small_deflection;
            ls += c.flags.large_speed;
            sr += c.flags.slow_relative_pre || c.flags.slow_relative_post;
        }
        a1 += r1;
        a2 += r2;
        kill += r.killed.has_value() && r.killed->t <= T;
    }
    const long n = static_cast<long>(records.size());
    out.records = n;
    out.contacts = contacts;
    out.a1 = wilson(a1, n);
    out.a2 = wilson(a2, n);
    out.kill = wilson(kill, n);
    out.small_deflection_contacts = wilson(sd, contacts);
    out.large_speed_contacts = wilson(ls, contacts);
    out.slow_relative_contacts = wilson(sr, contacts);
    return out;
}

ModulusTable modulus_of_continuity(const std::vector<TrajectoryRecord>& records, const std::vector<double>& eta,
                                   const std::vector<double>& xi) {
    ModulusTable out;
    out.eta = eta;
    out.xi = xi;
    std::vector<std::vector<long>> hits(eta.size(), std::vector<long>(xi.size(), 0));
    long n = 0;
    for (const auto& r : records) {
        const auto& S = r.samples;
        if (S.size() < 2) continue;
        ++n;
        const double dt = S[1].t - S[0].t;
        for (std::size_t i = 0; i < eta.size(); ++i) {
            const std::size_t w = static_cast<std::size_t>(std::floor(eta[i] / dt + 1e-9));
            double sup2 = 0.0;
            for (std::size_t a = 0; a < S.size(); ++a)
                for (std::size_t b = a + 1; b < S.size() && b <= a + w; ++b) {
                    const double d1 = S[b].Y.V.x - S[a].Y.V.x, d2 = S[b].Y.V.y - S[a].Y.V.y;
                    const double d3 = S[b].Y.Omega - S[a].Y.Omega;
                    sup2 = std::max(sup2, d1 * d1 + d2 * d2 + d3 * d3);
                }
            const double sup = std::sqrt(sup2);
            for (std::size_t j = 0; j < xi.size(); ++j) hits[i][j] += sup >= xi[j];
        }
    }
    out.p.assign(eta.size(), std::vector<WilsonInterval>(xi.size()));
    for (std::size_t i = 0; i < eta.size(); ++i)
        for (std::size_t j = 0; j < xi.size(); ++j) out.p[i][j] = wilson(hits[i][j], n);
    return out;
}

double chi_square_pvalue(double chi2, int dof) {
    if (dof <= 0) return 1.0;
    return boost::math::gamma_q(0.5 * dof, 0.5 * chi2);
}

ChiSquareReport carleman_chi_square(const SimParams& p, const BodyState& Y, long n_samples, Rng& rng,
                                    bool drop_jacobian, int bins) {
    const double alpha = p.alpha, sigma = 1.0 / std::sqrt(p.beta);
    const double c_max = alpha * (norm(Y.V) + std::abs(Y.Omega) * p.consts.dh_max);
    const double s0 = sigma / std::sqrt(2 * kPi);

    // c(phi) = alpha (V.n - Omega h'), with n the world normal of body angle phi
    auto c_of = [&](double phi, double* A) {
        const SupportJet j = p.body.jet(phi);
        if (A) *A = alpha * alpha * (1.0 + j.dh * j.dh / p.I);
        return alpha * (dot(Y.V, unit(phi + Y.Theta)) - Y.Omega * j.dh);
    };
    auto mean_positive = [&](double c) {  // E[(c - w)_+], w ~ N(0, sigma^2)
        return c * normal_cdf(c / sigma) + sigma * std::exp(-0.5 * c * c / (sigma * sigma)) / std::sqrt(2 * kPi);
    };

    // normalizations over phi (periodic trapezoid)
    const int nq = 4096;
    double Z = 0.0, Zwrong = 0.0;
    for (int q = 0; q < nq; ++q) {
        const double phi = kTwoPi * q / nq;
        double A;
        const double m = mean_positive(c_of(phi, &A));
        Z += m;
        const double g = 2 * alpha / (1 + A);
        Zwrong += g * g * m;
    }
    Z *= kTwoPi / nq;
    Zwrong *= kTwoPi / nq;

    // density of Delta = V' - V
    auto density = [&](Vec2 d) {
        const double r = norm(d);
        if (r == 0.0) return 0.0;
        const double psi = std::atan2(-d.y, -d.x);
        double A;
        const double c = c_of(psi - Y.Theta, &A);
        const double D = r * (1 + A) / (2 * alpha);
        const double w = c - D;
        const double M = std::exp(-0.5 * w * w / (sigma * sigma)) / (sigma * std::sqrt(2 * kPi));
        if (drop_jacobian) return M / Zwrong;
        const double J = (1 + A) / (2 * alpha);
        return J * J * M / Z;
    };

    const double R = 2 * alpha * (c_max + 5.5 * sigma) / (1 + alpha * alpha);
    const double h = 2 * R / bins;

    // Gauss-Legendre on each half of a bin side
    static const double gx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                                 0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
    static const double gw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                                 0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    std::vector<double> prob(bins * bins, 0.0);
    for (int ix = 0; ix < bins; ++ix)
        for (int iy = 0; iy < bins; ++iy) {
            double acc = 0.0;
            const double x0 = -R + ix * h, y0 = -R + iy * h, hh = h / 2;
            for (int sx = 0; sx < 2; ++sx)
                for (int sy = 0; sy < 2; ++sy)
                    for (int a = 0; a < 8; ++a)
                        for (int b = 0; b < 8; ++b) {
                            const Vec2 d{x0 + hh * (sx + 0.5 * (gx[a] + 1)), y0 + hh * (sy + 0.5 * (gx[b] + 1))};
                            acc += gw[a] * gw[b] * density(d);
                        }
            prob[ix * bins + iy] = acc * hh * hh / 4;
        }

    std::vector<long> count(bins * bins, 0);
    long outside = 0;
    for (long k = 0; k < n_samples; ++k) {
        double phi, w;
        for (;;) {
            phi = kTwoPi * rng.uniform();
            const bool rayleigh = rng.uniform() * (s0 + c_max) < s0;
            w = rayleigh ? -sigma * std::sqrt(-2.0 * std::log(rng.uniform_pos())) : sigma * rng.normal();
            const double c = c_of(phi, nullptr);
            const double accept = std::max(c - w, 0.0) / (std::max(-w, 0.0) + c_max);
            if (rng.uniform() < accept) break;
        }
        const double t = sigma * rng.normal();
        const Vec2 n = unit(phi + Y.Theta);
        const Vec2 v = w * n + t * perp(n);
        const BodyAtomCollision col = collide_body_atom(Y, v, phi, p);
        const Vec2 d = col.Y.V - Y.V;
        const int ix = static_cast<int>(std::floor((d.x + R) / h));
        const int iy = static_cast<int>(std::floor((d.y + R) / h));
        if (ix < 0 || iy < 0 || ix >= bins || iy >= bins)
            ++outside;
        else
            ++count[ix * bins + iy];
    }

    // bins with fewer than 5 expected counts are pooled with the outside region
    ChiSquareReport rep;
    rep.samples = n_samples;
    rep.in_grid = n_samples - outside;
    double pooled_expected = 0.0, inside_p = 0.0;
    long pooled_observed = outside;
    int cells = 0;
    for (int k = 0; k < bins * bins; ++k) {
        const double E = prob[k] * n_samples;
        inside_p += prob[k];
        if (E < 5.0) {
            pooled_expected += E;
            pooled_observed += count[k];
            continue;
        }
        rep.chi2 += (count[k] - E) * (count[k] - E) / E;
        ++cells;
    }
    pooled_expected += std::max(0.0, 1.0 - inside_p) * n_samples;
    if (pooled_expected >= 5.0) {
        rep.chi2 += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) / pooled_expected;
        ++cells;
    }
    rep.dof = cells - 1;
    rep.p_value = chi_square_pvalue(rep.chi2, rep.dof);
    return rep;
}

}  // namespace rigidgas
