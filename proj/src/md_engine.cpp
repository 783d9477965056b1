#include "rigidgas/md_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rigidgas/contact.hpp"
#include "rigidgas/errors.hpp"

namespace rigidgas {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

MdEngine::MdEngine(const SimParams& p, const Configuration& init, const MdOptions& opts)
    : p_(p), opts_(opts), body_(init.body) {
    if (!(opts_.sample_dt > 0)) throw InvalidSpec("sample_dt must be positive");
    const double Rb = p_.bound_radius();
    if (Rb >= 0.45) throw InvalidSpec("body bounding circle too large for the unit torus");
    horizon_dist_ = 0.4 * (0.5 - Rb);
    body_.X = wrap_torus(body_.X);
    body_.Theta = wrap_angle(body_.Theta);

    const int N = static_cast<int>(init.atoms.size());
    if (N > 0) {
        const double by_eps = std::floor(1.0 / p_.eps);
        const double by_count = std::floor(std::sqrt(N / opts_.atoms_per_cell));
        M_ = std::max(1, static_cast<int>(std::min(by_eps, by_count)));
    }
    cell_w_ = 1.0 / M_;
    cells_.assign(static_cast<std::size_t>(M_) * M_, {});
    neighbours_.resize(cells_.size());
    for (int cx = 0; cx < M_; ++cx) {
        for (int cy = 0; cy < M_; ++cy) {
            auto& nb = neighbours_[cx * M_ + cy];
            for (int dx = -1; dx <= 1; ++dx)
                for (int dy = -1; dy <= 1; ++dy) {
                    const int c = ((cx + dx + M_) % M_) * M_ + (cy + dy + M_) % M_;
                    if (std::find(nb.begin(), nb.end(), c) == nb.end()) nb.push_back(c);
                }
        }
    }

    atoms_.resize(N);
    for (int i = 0; i < N; ++i) {
        Atom& a = atoms_[i];
        a.x = wrap_torus(init.atoms[i].x);
        a.v = init.atoms[i].v;
        const int cx = std::min(M_ - 1, static_cast<int>(a.x.x * M_));
        const int cy = std::min(M_ - 1, static_cast<int>(a.x.y * M_));
        insert_cell(i, cx * M_ + cy);
    }
    initial_ = totals();
    v_cap_ = norm(body_.V) + 1.0;
    if (M_ < 3) pair_speed_ = std::sqrt(2.0 * initial_.E) * (1.0 + 1e-9) / p_.alpha;

    // the initial configuration must be admissible
    const double ell = p_.scale();
    for (int i = 0; i < N; ++i) {
        const Vec2 d = min_image(atoms_[i].x - body_.X);
        const double g = signed_distance(p_.body, body_.Theta, ell, d, 0.5 * p_.alpha).d;
        if (g < -opts_.overlap_tol * ell) throw OverlapDetected("atom " + std::to_string(i) + " inside the body");
        for (int c : neighbours_[atoms_[i].cell])
            for (int j : cells_[c])
                if (j > i && norm(min_image(atoms_[j].x - atoms_[i].x)) < p_.eps * (1 - opts_.overlap_tol))
                    throw OverlapDetected("atoms " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
    }
    for (int i = 0; i < N; ++i) repredict(i);
}

Vec2 MdEngine::position(const Atom& a, double t) const {
    return wrap_torus(a.x + ((t - a.t) / p_.alpha) * a.v);
}

void MdEngine::advance_atom(Atom& a, double t) const {
    if (t == a.t) return;
    a.x = position(a, t);
    a.t = t;
}

BodyState MdEngine::body_at(double t) const {
    BodyState Y = body_;
    const double s = t - tb_;
    if (s != 0.0) {
        Y.X = wrap_torus(body_.X + s * body_.V);
        Y.Theta = wrap_angle(body_.Theta + s * p_.spin_rate() * body_.Omega);
    }
    return Y;
}

AtomState MdEngine::atom_at(int i, double t) const {
    const Atom& a = atoms_[i];
    return {position(a, t), a.v};
}

Configuration MdEngine::configuration() const {
    Configuration c;
    c.body = body_at(t_);
    c.atoms.reserve(atoms_.size());
    for (int i = 0; i < static_cast<int>(atoms_.size()); ++i) c.atoms.push_back(atom_at(i, t_));
    return c;
}

Conserved MdEngine::totals() const {
    Conserved c{body_.V, 0.5 * (norm2(body_.V) + p_.I * body_.Omega * body_.Omega)};
    for (const Atom& a : atoms_) {
        c.P += p_.alpha * a.v;
        c.E += 0.5 * norm2(a.v);
    }
    return c;
}

double MdEngine::momentum_scale() const {
    double s = norm(body_.V);
    for (const Atom& a : atoms_) s += p_.alpha * norm(a.v);
    return s;
}

void MdEngine::insert_cell(int i, int cell) {
    Atom& a = atoms_[i];
    a.cell = cell;
    a.slot = static_cast<int>(cells_[cell].size());
    cells_[cell].push_back(i);
}

void MdEngine::remove_cell(int i) {
    Atom& a = atoms_[i];
    auto& list = cells_[a.cell];
    const int last = list.back();
    list[a.slot] = last;
    atoms_[last].slot = a.slot;
    list.pop_back();
}

double MdEngine::horizon_speed(const Atom& a) const {
    return norm(a.v) / p_.alpha + v_cap_ + pair_speed_;
}

std::optional<double> MdEngine::predict_atom_atom(int i, int j) const {
    const Atom& ai = atoms_[i];
    const Atom& aj = atoms_[j];
    const Vec2 d = min_image(position(aj, t_) - position(ai, t_));
    const Vec2 du = (aj.v - ai.v) / p_.alpha;
    const double b = dot(d, du);
    if (b >= 0) return std::nullopt;
    const double eps2 = p_.eps * p_.eps;
    const double dd = norm2(d) - eps2;
    if (dd <= 0) {
        if (dd < -2.0 * opts_.overlap_tol * eps2)
            throw OverlapDetected("atoms " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
        return t_;
    }
    const double a = norm2(du);
    const double disc = b * b - a * dd;
    if (disc < 0) return std::nullopt;
    return t_ + dd / (-b + std::sqrt(disc));
}

std::optional<double> MdEngine::predict_atom_body(int i, double window_end, double skip) const {
    const Atom& a = atoms_[i];
    const BodyState Y = body_at(t_);
    RelativeMotion m;
    m.d0 = min_image(position(a, t_) - Y.X);
    m.w = a.v / p_.alpha - Y.V;
    m.theta0 = Y.Theta;
    m.theta_rate = p_.spin_rate() * Y.Omega;
    m.scale = p_.scale();
    m.offset = 0.5 * p_.alpha;
    ContactSearch cs;
    cs.tol = opts_.contact_tol;
    cs.overlap_tol = opts_.overlap_tol;
    const auto hit = first_contact(p_.body, m, p_.bound_radius(), skip, window_end - t_, cs);
    if (!hit) return std::nullopt;
    return t_ + hit->s;
}

void MdEngine::push_body_event(int i, double skip) {
    const Atom& a = atoms_[i];
    const BodyState Y = body_at(t_);
    const double lambda = norm(a.v / p_.alpha - Y.V) + std::abs(Y.Omega) * p_.consts.r_max_alpha;
    const double s0 = skip > 0 && lambda > 0 ? skip * opts_.contact_tol / lambda : 0.0;
    const Vec2 d0 = min_image(position(a, t_) - Y.X);
    RelativeMotion m{d0, a.v / p_.alpha - Y.V, Y.Theta, p_.spin_rate() * Y.Omega, p_.scale(), 0.5 * p_.alpha};
    ContactSearch cs;
    cs.tol = opts_.contact_tol;
    cs.overlap_tol = opts_.overlap_tol;
    const auto hit = first_contact(p_.body, m, p_.bound_radius(), s0, a.t_next - t_, cs);
    if (hit) queue_.push({t_ + hit->s, EventKind::atom_body, i, -1, a.epoch, body_epoch_, hit->phi});
}

void MdEngine::repredict(int i, double body_skip) {
    Atom& a = atoms_[i];
    advance_atom(a, t_);

    double t_exit = kInf;
    int dir = -1;
    if (M_ > 1) {
        const int cx = a.cell / M_, cy = a.cell % M_;
        const Vec2 centre{(cx + 0.5) * cell_w_, (cy + 0.5) * cell_w_};
        const Vec2 d = min_image(a.x - centre);
        const Vec2 u = a.v / p_.alpha;
        const double hw = 0.5 * cell_w_;
        if (u.x > 0) { t_exit = (hw - d.x) / u.x; dir = 0; }
        else if (u.x < 0) { t_exit = (-hw - d.x) / u.x; dir = 1; }
        if (u.y > 0) { const double ty = (hw - d.y) / u.y; if (ty < t_exit) { t_exit = ty; dir = 2; } }
        else if (u.y < 0) { const double ty = (-hw - d.y) / u.y; if (ty < t_exit) { t_exit = ty; dir = 3; } }
        t_exit = std::max(0.0, t_exit);
    }
    const double t_h = horizon_dist_ / horizon_speed(a);
    if (t_h < t_exit) {
        t_exit = t_h;
        dir = -1;
    }
    a.t_next = t_ + t_exit;
    a.exit_dir = dir;
    queue_.push({a.t_next, EventKind::cell_crossing, i, dir, a.epoch, 0, 0.0});

    for (int c : neighbours_[a.cell]) {
        for (int j : cells_[c]) {
            if (j == i) continue;
            const auto tc = predict_atom_atom(i, j);
            if (tc && *tc <= a.t_next) {
                const int lo = std::min(i, j), hi = std::max(i, j);
                queue_.push({*tc, EventKind::atom_atom, lo, hi, atoms_[lo].epoch, atoms_[hi].epoch, 0.0});
            }
        }
    }
    push_body_event(i, body_skip);
}

void MdEngine::repredict_body_all(int except) {
    for (int k = 0; k < static_cast<int>(atoms_.size()); ++k)
        if (k != except) push_body_event(k, 0.0);
}

void MdEngine::process_atom_atom(const Event& e) {
    Atom& ai = atoms_[e.i];
    Atom& aj = atoms_[e.j];
    advance_atom(ai, t_);
    advance_atom(aj, t_);
    const Vec2 d = min_image(aj.x - ai.x);
    const Vec2 nu = d / norm(d);
    const auto [vi, vj] = collide_atoms(ai.v, aj.v, nu);
    ai.v = vi;
    aj.v = vj;
    ++ai.epoch;
    ++aj.epoch;
    ++counts_.atom_atom;
    repredict(e.i);
    repredict(e.j);
}

bool MdEngine::process_atom_body(const Event& e) {
    Atom& a = atoms_[e.i];
    advance_atom(a, t_);
    body_ = body_at(t_);
    tb_ = t_;
    const double ell = p_.scale();
    const double hint = e.phi;
    const DistanceResult dr = signed_distance(p_.body, body_.Theta, ell, min_image(a.x - body_.X), 0.5 * p_.alpha, &hint);
    const BodyAtomCollision col = collide_body_atom(body_, a.v, dr.phi, p_);
    if (!col.contact.incoming()) {
        // grazing or numerically tangential contact: no momentum exchange
        ++counts_.grazing;
        ++a.epoch;
        repredict(e.i, 4.0);
        return true;
    }
    CollisionEntry entry;
    entry.t = t_;
    entry.phi = dr.phi;
    entry.pre = body_;
    entry.post = col.Y;
    entry.v_pre = a.v;
    entry.v_post = col.v;
    entry.flags = pathology_flags(body_, a.v, col.Y, col.v, p_);
    if (opts_.log_collisions || opts_.mode == RunMode::killed) log_.push_back(entry);
    if (opts_.mode == RunMode::killed && entry.flags.any()) {
        killed_ = KillInfo{t_, entry.flags.to_string()};
        return false;
    }
    a.v = col.v;
    body_ = col.Y;
    ++a.epoch;
    ++body_epoch_;
    ++counts_.atom_body;
    if (norm(body_.V) > v_cap_) {
        v_cap_ = norm(body_.V) + 1.0;
        for (int k = 0; k < static_cast<int>(atoms_.size()); ++k) repredict(k, k == e.i ? 4.0 : 0.0);
    } else {
        repredict(e.i, 4.0);
        repredict_body_all(e.i);
    }
    return true;
}

void MdEngine::process_crossing(const Event& e) {
    Atom& a = atoms_[e.i];
    if (e.j >= 0) {
        advance_atom(a, t_);
        int cx = a.cell / M_, cy = a.cell % M_;
        switch (e.j) {
        case 0: cx = (cx + 1) % M_; break;
        case 1: cx = (cx + M_ - 1) % M_; break;
        case 2: cy = (cy + 1) % M_; break;
        default: cy = (cy + M_ - 1) % M_; break;
        }
        remove_cell(e.i);
        insert_cell(e.i, cx * M_ + cy);
        ++counts_.cell_crossing;
    }
    repredict(e.i);
}

ProcessedEvent MdEngine::step(double t_stop) {
    while (!queue_.empty() && !killed_) {
        const Event e = queue_.top();
        if (e.t > t_stop) break;
        queue_.pop();
        bool valid = true;
        switch (e.kind) {
        case EventKind::atom_atom:
            valid = atoms_[e.i].epoch == e.ei && atoms_[e.j].epoch == e.ej;
            break;
        case EventKind::atom_body:
            valid = atoms_[e.i].epoch == e.ei && body_epoch_ == e.ej;
            break;
        case EventKind::cell_crossing:
            valid = atoms_[e.i].epoch == e.ei && atoms_[e.i].t_next == e.t;
            break;
        default:
            break;
        }
        if (!valid) {
            ++counts_.stale;
            continue;
        }
        t_ = std::max(t_, e.t);
        switch (e.kind) {
        case EventKind::atom_atom:
            process_atom_atom(e);
            break;
        case EventKind::atom_body:
            process_atom_body(e);
            break;
        case EventKind::cell_crossing:
            process_crossing(e);
            break;
        case EventKind::sample: {
            samples_.push_back({t_, body_at(t_)});
            ++counts_.samples;
            if (t_ < sample_end_) {
                const long k = std::lround(t_ / opts_.sample_dt) + 1;
                double next = k * opts_.sample_dt;
                if (next > sample_end_ - 1e-9 * opts_.sample_dt) next = sample_end_;
                queue_.push({next, EventKind::sample, -1, -1, 0, 0, 0.0});
            }
            break;
        }
        default:
            break;
        }
        return {e.kind, t_, e.i, e.j};
    }
    if (!killed_) t_ = std::max(t_, t_stop);
    return {};
}

TrajectoryRecord MdEngine::run(double T) {
    if (!(T > 0)) throw InvalidSpec("T must be positive");
    const double t0 = t_;
    sample_end_ = t0 + T;
    queue_.push({t0, EventKind::sample, -1, -1, 0, 0, 0.0});
    while (step(t0 + T).kind != EventKind::none) {
    }
    TrajectoryRecord rec;
    rec.level = "md";
    rec.samples = std::move(samples_);
    samples_.clear();
    rec.collisions = log_;
    rec.killed = killed_;
    rec.counts = counts_;
    const Conserved now = totals();
    rec.energy_drift = initial_.E > 0 ? std::abs(now.E - initial_.E) / initial_.E : 0.0;
    const double ps = momentum_scale();
    rec.momentum_drift = ps > 0 ? norm(now.P - initial_.P) / ps : 0.0;
    return rec;
}

TrajectoryRecord run_md(const SimParams& p, const Configuration& init, double T, const MdOptions& opts) {
    MdEngine engine(p, init, opts);
    return engine.run(T);
}

TrajectoryRecord brute_force_run(const SimParams& p, const Configuration& init, double T, double dt,
                                 double sample_dt, Configuration* final_state) {
    BodyState Y = init.body;
    std::vector<AtomState> atoms = init.atoms;
    const int N = static_cast<int>(atoms.size());
    const double a = p.alpha, ell = p.scale(), rate = p.spin_rate(), eps2 = p.eps * p.eps;
    if (dt <= 0) {
        double vmax = 1e-3;
        for (const auto& at : atoms) vmax = std::max(vmax, norm(at.v));
        dt = p.eps * a / (200.0 * vmax);
    }
    TrajectoryRecord rec;
    rec.level = "brute_force";
    const Conserved c0 = [&] {
        Conserved c{Y.V, 0.5 * (norm2(Y.V) + p.I * Y.Omega * Y.Omega)};
        for (const auto& at : atoms) {
            c.P += a * at.v;
            c.E += 0.5 * norm2(at.v);
        }
        return c;
    }();

    auto body_gap = [&](int i, double s) {
        const Vec2 xi = atoms[i].x + (s / a) * atoms[i].v;
        const Vec2 Xs = Y.X + s * Y.V;
        return signed_distance(p.body, Y.Theta + s * rate * Y.Omega, ell, min_image(xi - Xs), 0.5 * a).d;
    };
    auto advance = [&](double s) {
        for (auto& at : atoms) at.x = wrap_torus(at.x + (s / a) * at.v);
        Y.X = wrap_torus(Y.X + s * Y.V);
        Y.Theta = wrap_angle(Y.Theta + s * rate * Y.Omega);
    };

    double t = 0.0;
    long k = 0;
    double next_sample = 0.0;
    rec.samples.push_back({0.0, Y});
    next_sample = std::min(T, sample_dt);
    while (t < T) {
        const double h = std::min({dt, next_sample - t, T - t});
        double best = kInf;
        int kind = -1, bi = -1, bj = -1;
        for (int i = 0; i < N; ++i) {
            for (int j = i + 1; j < N; ++j) {
                const Vec2 d0 = min_image(atoms[j].x - atoms[i].x);
                const Vec2 du = (atoms[j].v - atoms[i].v) / a;
                const double b = dot(d0, du);
                if (b >= 0) continue;
                const double smin = std::min(h, -b / norm2(du));
                auto f = [&](double s) { return norm2(d0 + s * du) - eps2; };
                if (f(smin) >= 0) continue;
                double lo = 0.0, hi = smin;
                for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (f(mid) > 0 ? lo : hi) = mid;
                }
                if (lo < best) { best = lo; kind = 0; bi = i; bj = j; }
            }
            if (body_gap(i, h) < 0) {
                double lo = 0.0, hi = h;
                for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (body_gap(i, mid) > 0 ? lo : hi) = mid;
                }
                if (lo < best) { best = lo; kind = 1; bi = i; bj = -1; }
            }
        }
        if (kind < 0) {
            advance(h);
            t = (h == next_sample - t) ? next_sample : t + h;
            if (t >= next_sample) {
                rec.samples.push_back({t, Y});
                ++k;
                next_sample = std::min(T, (k + 1) * sample_dt);
                if (T - next_sample < 1e-9 * sample_dt) next_sample = T;
            }
            continue;
        }
        advance(best);
        t += best;
        if (kind == 0) {
            const Vec2 d = min_image(atoms[bj].x - atoms[bi].x);
            const auto [vi, vj] = collide_atoms(atoms[bi].v, atoms[bj].v, d / norm(d));
            atoms[bi].v = vi;
            atoms[bj].v = vj;
            ++rec.counts.atom_atom;
        } else {
            const double phi =
                signed_distance(p.body, Y.Theta, ell, min_image(atoms[bi].x - Y.X), 0.5 * a).phi;
            const BodyAtomCollision col = collide_body_atom(Y, atoms[bi].v, phi, p);
            if (col.contact.incoming()) {
                CollisionEntry e;
                e.t = t;
                e.phi = phi;
                e.pre = Y;
                e.post = col.Y;
                e.v_pre = atoms[bi].v;
                e.v_post = col.v;
                e.flags = pathology_flags(Y, atoms[bi].v, col.Y, col.v, p);
                rec.collisions.push_back(e);
                Y = col.Y;
                atoms[bi].v = col.v;
                ++rec.counts.atom_body;
            } else {
                ++rec.counts.grazing;
            }
        }
    }
    Conserved c1{Y.V, 0.5 * (norm2(Y.V) + p.I * Y.Omega * Y.Omega)};
    double ps = norm(Y.V);
    for (const auto& at : atoms) {
        c1.P += a * at.v;
        c1.E += 0.5 * norm2(at.v);
        ps += a * norm(at.v);
    }
    rec.energy_drift = c0.E > 0 ? std::abs(c1.E - c0.E) / c0.E : 0.0;
    rec.momentum_drift = ps > 0 ? norm(c1.P - c0.P) / ps : 0.0;
    if (final_state) {
        final_state->body = Y;
        final_state->atoms = atoms;
    }
    return rec;
}

}  // namespace rigidgas
