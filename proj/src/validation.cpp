#include "rigidgas/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "rigidgas/boltzmann.hpp"
#include "rigidgas/md_engine.hpp"
#include "rigidgas/ou.hpp"
#include "rigidgas/parallel.hpp"

namespace rigidgas {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool full(const SuiteOptions& o) { return o.scale == SuiteScale::full; }

Rng stream(const SuiteOptions& o, int criterion, std::uint64_t sub) {
    return Rng(o.seed).split(static_cast<std::uint64_t>(criterion) << 40 | sub);
}

std::string num(double x, int prec = 3) {
    std::ostringstream s;
    s.precision(prec);
    s << x;
    return s.str();
}

double angle_diff(double a, double b) { return std::abs(wrap_angle(a - b + kPi) - kPi); }

const BodySpec kEllipse = BodySpec::ellipse(0.5, 0.3);
// smooth body without central symmetry, so that Gamma does not vanish
const BodySpec kAsymmetric = BodySpec::fourier({1.0, 0.0, 0.0, 0.12, 0.05, 0.04, -0.03});

// slope of log y against log x by least squares
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(x[i]) / n;
        my += std::log(y[i]) / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxy / sxx;
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

// Statistical gate: acceptance runs compare against the stated tolerance,
// the fast suite (too few samples for that) against a p-value floor.
bool ks_gate(const SuiteOptions& o, double D, double tol, double p_value) {
    return full(o) ? D < tol : p_value > 1e-3;
}

std::vector<TrajectoryRecord> md_ensemble(const SuiteOptions& o, int criterion, const SimParams& p, long replicas,
                                          double T, double sample_dt, bool keep_collisions) {
    std::vector<TrajectoryRecord> recs(replicas);
    parallel_for(replicas, o.workers, [&](long r) {
        Rng rng = stream(o, criterion, r);
        const Configuration init = sample_equilibrium(p, rng);
        MdOptions mo;
        mo.sample_dt = sample_dt;
        mo.log_collisions = keep_collisions;
        recs[r] = run_md(p, init, T, mo);
        recs[r].seed = o.seed;
        recs[r].replica = r;
    });
    return recs;
}

std::vector<TrajectoryRecord> jump_ensemble(const SuiteOptions& o, int criterion, std::uint64_t offset,
                                            const SimParams& p, long replicas, double T, double sample_dt,
                                            RunMode mode = RunMode::plain) {
    std::vector<TrajectoryRecord> recs(replicas);
    parallel_for(replicas, o.workers, [&](long r) {
        Rng rng = stream(o, criterion, offset + r);
        const BodyState Y0 = sample_body(p, rng);
        recs[r] = run_jump_process(Y0, T, mode, p, rng, sample_dt);
        recs[r].collisions.clear();
        recs[r].collisions.shrink_to_fit();
        recs[r].seed = o.seed;
        recs[r].replica = r;
    });
    return recs;
}

CriterionResult conservation(const SuiteOptions& o) {
    CriterionResult res;
    const SimParams p = SimParams::make(500, 0.1, 1.0, kEllipse);
    const long replicas = full(o) ? 3 : 1;
    const double T = full(o) ? 5.0 : 1.0;
    double e_max = 0, p_max = 0, l_max = 0, slowest = 0;
    long collisions = 0;
    for (long r = 0; r < replicas; ++r) {
        Rng rng = stream(o, 1, r);
        const Configuration init = sample_equilibrium(p, rng);
        const auto t0 = Clock::now();
        const TrajectoryRecord rec = run_md(p, init, T);
        slowest = std::max(slowest, since(t0));
        e_max = std::max(e_max, rec.energy_drift);
        p_max = std::max(p_max, rec.momentum_drift);
        for (const auto& c : rec.collisions) {
            const double L0 = contact_angular_momentum(c.pre, c.phi, p);
            const double L1 = contact_angular_momentum(c.post, c.phi, p);
            l_max = std::max(l_max, std::abs(L1 - L0) / std::max(1.0, std::abs(L0)));
            ++collisions;
        }
    }
    res.pass = e_max < 1e-9 && p_max < 1e-9 && l_max < 1e-12 && slowest < 120.0 && collisions > 0;
    res.detail = "energy drift " + num(e_max) + ", momentum drift " + num(p_max) +
                 ", contact angular momentum " + num(l_max) + " over " + std::to_string(collisions) +
                 " body collisions, slowest replica " + num(slowest) + " s";
    res.metrics = {{"replicas", replicas},     {"T", T},          {"max_energy_drift", e_max},
                   {"max_momentum_drift", p_max}, {"max_contact_L_error", l_max}, {"body_collisions", collisions},
                   {"slowest_replica_seconds", slowest}, {"seed", o.seed}};
    return res;
}

CriterionResult disk_degeneracy(const SuiteOptions& o) {
    CriterionResult res;
    const BodySpec disk = BodySpec::disk(0.5);
    bool md_ok = true, jump_ok = true, ou_ok = true;
    long md_events = 0, jumps = 0;

    const SimParams p = SimParams::make(500, 0.1, 1.0, disk);
    const long md_reps = full(o) ? 3 : 1;
    const double T_md = full(o) ? 2.0 : 0.5;
    for (long r = 0; r < md_reps; ++r) {
        Rng rng = stream(o, 2, r);
        const Configuration init = sample_equilibrium(p, rng);
        const TrajectoryRecord rec = run_md(p, init, T_md);
        for (const auto& s : rec.samples) md_ok = md_ok && s.Y.Omega == init.body.Omega;
        for (const auto& c : rec.collisions) md_ok = md_ok && c.post.Omega == init.body.Omega;
        md_events += static_cast<long>(rec.collisions.size());
    }

    const SimParams pj = SimParams::make(0, 0.1, 1.0, disk, 0.1, std::nullopt, 1e-4);
    const long jump_reps = full(o) ? 100 : 20;
    for (long r = 0; r < jump_reps; ++r) {
        Rng rng = stream(o, 2, 1000 + r);
        const BodyState Y0 = sample_body(pj, rng);
        const TrajectoryRecord rec = run_jump_process(Y0, 5.0, RunMode::plain, pj, rng, 0.1);
        for (const auto& s : rec.samples) jump_ok = jump_ok && s.Y.Omega == Y0.Omega;
        for (const auto& c : rec.collisions) jump_ok = jump_ok && c.post.Omega == Y0.Omega;
        jumps += rec.counts.atom_body;
    }

    const OUParams q = params_from_sim(pj);
    ou_ok = q.theta_O == 0.0 && q.sigma2_O == 0.0;
    Rng rng = stream(o, 2, 5000);
    OUState W;
    W.O = 0.9;
    for (const auto& s : run_ou(W, 5.0, 0.1, q, rng).samples) ou_ok = ou_ok && s.Y.Omega == W.O;

    res.pass = md_ok && jump_ok && ou_ok && md_events > 0 && jumps > 0;
    res.detail = std::string("Omega constant in MD (") + std::to_string(md_events) + " body collisions) " +
                 (md_ok ? "yes" : "NO") + ", in the jump process (" + std::to_string(jumps) + " jumps) " +
                 (jump_ok ? "yes" : "NO") + ", OU theta_O = sigma_O = 0 " + (ou_ok ? "yes" : "NO");
    res.metrics = {{"md_ok", md_ok},     {"md_body_collisions", md_events}, {"jump_ok", jump_ok},
                   {"jumps", jumps},     {"ou_ok", ou_ok},                  {"seed", o.seed}};
    return res;
}

CriterionResult geometric_identities(const SuiteOptions&) {
    CriterionResult res;
    double closure = 0.0;
    for (const BodySpec& spec : {BodySpec::disk(1.0), kEllipse}) {
        const SupportBody body = make_support_body(spec);
        for (double alpha : {0.0, 0.1, 0.2}) {
            const ShapeConstants c = shape_constants(body, alpha);
            closure = std::max(closure, norm(c.closure_n) / c.L_alpha);
            closure = std::max(closure, std::abs(c.closure_r) / (c.L_alpha * c.r_max_alpha));
        }
    }
    double moments = 0.0;
    for (double beta : {0.5, 1.0, 2.0, 4.0})
        for (const auto& m : moment_identity_check(beta)) moments = std::max(moments, m.residual);

    const std::vector<double> alphas{0.2, 0.1, 0.05, 0.025};
    Json orders = Json::object();
    double worst_order = 1e9;
    bool monotone = true;
    auto fit = [&](const std::string& name, const std::vector<double>& d) {
        const double s = loglog_slope(alphas, d);
        orders[name] = {{"errors", d}, {"order", s}};
        worst_order = std::min(worst_order, s);
        monotone = monotone && strictly_decreasing(d);
    };
    for (const auto& [label, spec] : {std::pair{"ellipse", kEllipse}, std::pair{"asymmetric", kAsymmetric}}) {
        const SupportBody body = make_support_body(spec);
        const ShapeConstants c0 = shape_constants(body, 0.0);
        std::vector<double> dK, dN, dG;
        for (double a : alphas) {
            const ShapeConstants c = shape_constants(body, a);
            dK.push_back(std::abs(c.K_alpha - c0.K));
            dN.push_back(std::hypot(c.N_alpha.xx - c0.N.xx, std::sqrt(2.0) * (c.N_alpha.xy - c0.N.xy),
                                    c.N_alpha.yy - c0.N.yy));
            dG.push_back(norm(c.Gamma_alpha - c0.Gamma));
        }
        fit(std::string(label) + ".K", dK);
        fit(std::string(label) + ".N", dN);
        // Gamma vanishes identically for centrally symmetric bodies
        if (std::string(label) == "asymmetric") fit(std::string(label) + ".Gamma", dG);
    }
    res.pass = closure < 1e-9 && moments < 1e-10 && worst_order >= 0.9 && monotone;
    res.detail = "closure " + num(closure) + ", Gaussian moment residual " + num(moments) +
                 ", smallest fitted order " + num(worst_order);
    res.metrics = {{"closure_max_relative", closure}, {"moment_residual_max", moments}, {"orders", orders}};
    return res;
}

CriterionResult oracle_equivalence(const SuiteOptions& o) {
    CriterionResult res;
    const SimParams p = SimParams::make(5, 0.5, 1.0, kEllipse);
    SamplerOptions so;
    so.packing_limit = 0.5;
    const long seeds = full(o) ? 20 : 3;
    double worst = 0.0;
    long body_collisions = 0, pair_collisions = 0;
    for (long s = 0; s < seeds; ++s) {
        Rng rng = stream(o, 4, s);
        const Configuration init = sample_equilibrium(p, rng, so);
        MdEngine eng(p, init);
        const auto rec = eng.run(0.2);
        Configuration fin;
        brute_force_run(p, init, 0.2, -1.0, 0.1, &fin);
        const BodyState a = eng.body_at(0.2);
        worst = std::max({worst, norm(min_image(a.X - fin.body.X)), norm(a.V - fin.body.V),
                          std::abs(a.Omega - fin.body.Omega), angle_diff(a.Theta, fin.body.Theta)});
        body_collisions += rec.counts.atom_body;
        pair_collisions += rec.counts.atom_atom;
    }
    res.pass = worst < 1e-6 && body_collisions > 0;
    res.detail = "largest body coordinate difference " + num(worst) + " over " + std::to_string(seeds) +
                 " seeds (" + std::to_string(body_collisions) + " body, " + std::to_string(pair_collisions) +
                 " pair collisions)";
    res.metrics = {{"seeds", seeds},
                   {"max_difference", worst},
                   {"body_collisions", body_collisions},
                   {"pair_collisions", pair_collisions},
                   {"seed", o.seed}};
    return res;
}

CriterionResult scattering_carleman(const SuiteOptions& o) {
    CriterionResult res;
    const long configs = full(o) ? 100000 : 10000;
    double worst = 0.0;
    for (double alpha : {0.05, 0.1, 0.3}) {
        const SimParams p = SimParams::make(1000, alpha, 1.0, kEllipse);
        Rng rng = stream(o, 5, static_cast<std::uint64_t>(alpha * 1000));
        for (long k = 0; k < configs / 3 + 1; ++k) {
            BodyState Y;
            Y.X = {rng.uniform(), rng.uniform()};
            Y.V = {rng.normal(), rng.normal()};
            Y.Theta = kTwoPi * rng.uniform();
            Y.Omega = 3.0 * rng.normal();
            const Vec2 v{rng.normal(), rng.normal()};
            const double phi = kTwoPi * rng.uniform();
            const auto once = collide_body_atom(Y, v, phi, p);
            const auto twice = collide_body_atom(once.Y, once.v, phi, p);
            worst = std::max({worst, norm(twice.Y.V - Y.V) / std::max(1.0, norm(Y.V)),
                              std::abs(twice.Y.Omega - Y.Omega) / std::max(1.0, std::abs(Y.Omega)),
                              norm(twice.v - v) / std::max(1.0, norm(v))});
        }
    }

    const long n = full(o) ? 1000000 : 200000;
    ChiSquareReport disk, ellipse, control;
    {
        const SimParams p = SimParams::make(1000, 0.1, 1.0, BodySpec::disk(1.0));
        Rng rng = stream(o, 5, 1001);
        disk = carleman_chi_square(p, BodyState{}, n, rng);
    }
    {
        const SimParams p = SimParams::make(1000, 0.1, 1.0, kEllipse);
        Rng rng = stream(o, 5, 1002);
        BodyState Y;
        Y.V = {2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
        Y.V = Y.V * (rng.uniform() / std::max(1.0, norm(Y.V)));
        Y.Omega = 2 * rng.uniform() - 1;
        Y.Theta = kTwoPi * rng.uniform();
        ellipse = carleman_chi_square(p, Y, n, rng);
    }
    {
        const SimParams p = SimParams::make(0, 0.5, 1.0, kEllipse, 0.1, std::nullopt, 1e-3);
        Rng rng = stream(o, 5, 1003);
        control = carleman_chi_square(p, BodyState{}, n, rng, true);
    }
    res.pass = worst < 1e-12 && disk.p_value > 0.01 && ellipse.p_value > 0.01 && control.p_value < 1e-6;
    res.detail = "involution error " + num(worst) + " on " + std::to_string(3 * (configs / 3 + 1)) +
                 " configs; push-forward p = " + num(disk.p_value) + " (disk), " + num(ellipse.p_value) +
                 " (ellipse); dropped Jacobian p = " + num(control.p_value);
    auto chi = [](const ChiSquareReport& r) {
        return Json{{"chi2", r.chi2}, {"dof", r.dof}, {"p_value", r.p_value}, {"samples", r.samples}};
    };
    res.metrics = {{"involution_max_relative_error", worst},
                   {"carleman_disk", chi(disk)},
                   {"carleman_ellipse", chi(ellipse)},
                   {"negative_control", chi(control)},
                   {"seed", o.seed}};
    return res;
}

CriterionResult invariant_measure(const SuiteOptions& o) {
    CriterionResult res;
    Json metrics = Json::object();
    bool pass = true;
    std::ostringstream detail;
    auto check = [&](const std::string& level, const std::vector<TrajectoryRecord>& recs,
                     const std::vector<double>& times, const SimParams& p, double tol) {
        double worst = 0.0;
        for (Component c : {Component::V1, Component::V2, Component::Omega}) {
            const auto x = slice_values(recs, c, times);
            const double sd = c == Component::Omega ? 1.0 / std::sqrt(p.beta * p.I) : 1.0 / std::sqrt(p.beta);
            const double D = ks_distance(x, [sd](double v) { return normal_cdf(v, 0.0, sd); });
            const double pv = ks_pvalue(D, static_cast<double>(x.size()));
            pass = pass && ks_gate(o, D, tol, pv);
            worst = std::max(worst, D);
            metrics[level][component_name(c)] = {{"ks", D}, {"p_value", pv}, {"samples", x.size()}};
        }
        metrics[level]["replicas"] = recs.size();
        detail << level << " KS " << num(worst) << " (" << recs.size() << " x " << times.size() << ")";
    };

    const SimParams pj = SimParams::make(0, 0.1, 1.0, kEllipse, 0.1, std::nullopt, 1e-3);
    {
        const long reps = full(o) ? 1000 : 200;
        const auto recs = jump_ensemble(o, 6, 0, pj, reps, 10.0, 1.0);
        std::vector<double> times;
        for (int k = 1; k <= 10; ++k) times.push_back(k);
        check("jump", recs, times, pj, 0.02);
    }
    detail << "; ";
    {
        const SimParams pm = SimParams::make(500, 0.1, 1.0, kEllipse);
        const long reps = full(o) ? 1000 : 8;
        const auto recs = md_ensemble(o, 6, pm, reps, 5.0, 0.5, false);
        std::vector<double> times;
        for (int k = 1; k <= 10; ++k) times.push_back(0.5 * k);
        check("md", recs, times, pm, 0.03);
    }
    metrics["seed"] = o.seed;
    res.pass = pass;
    res.detail = detail.str();
    res.metrics = metrics;
    return res;
}

CriterionResult ou_limit(const SuiteOptions& o) {
    CriterionResult res;
    const std::vector<double> alphas{0.2, 0.1, 0.05};
    const long reps = full(o) ? 500 : 40;
    const double T = 100.0, dt = 0.02;
    std::vector<double> errV, errO;
    Json rows = Json::array();
    double theta_V = 0, theta_O = 0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        // the body angle has to rotate fast between jumps for the limit to apply
        const SimParams p = SimParams::make(0, alphas[i], 1.0, kEllipse, 0.1, std::nullopt, 1e-4);
        const OUParams q = params_from_sim(p);
        theta_V = q.theta_V;
        theta_O = q.theta_O;
        const auto recs = jump_ensemble(o, 7, i << 20, p, reps, T, dt);
        const auto fv = autocovariance(recs, {Component::V1, Component::V2}, 60);
        const auto fo = autocovariance(recs, {Component::Omega}, 60);
        errV.push_back(std::abs(fv.theta / q.theta_V - 1));
        errO.push_back(std::abs(fo.theta / q.theta_O - 1));
        rows.push_back({{"alpha", alphas[i]},
                        {"theta_V", fv.theta},
                        {"theta_V_se", fv.theta_se},
                        {"theta_Omega", fo.theta},
                        {"theta_Omega_se", fo.theta_se},
                        {"relative_error_V", errV.back()},
                        {"relative_error_Omega", errO.back()}});
    }
    res.pass = strictly_decreasing(errV) && strictly_decreasing(errO) && errV.back() < 0.10 && errO.back() < 0.15;
    std::ostringstream d;
    d << "V decay error";
    for (double e : errV) d << ' ' << num(100 * e, 2) << '%';
    d << ", Omega decay error";
    for (double e : errO) d << ' ' << num(100 * e, 2) << '%';
    d << " over alpha 0.2, 0.1, 0.05";
    res.detail = d.str();
    res.metrics = {{"limit_theta_V", theta_V}, {"limit_theta_Omega", theta_O}, {"replicas", reps},
                   {"T", T},                   {"rows", rows},                 {"seed", o.seed}};
    return res;
}

CriterionResult no_recollision(const SuiteOptions& o) {
    CriterionResult res;
    const SimParams p = SimParams::make(1000, 0.1, 1.0, kEllipse);
    const long target = full(o) ? 10000 : 1000;
    Rng rng = stream(o, 8, 0);
    long tested = 0, drawn = 0, violations = 0;
    Json witnesses = Json::array();
    while (tested < target) {
        const BodyState Y = sample_body(p, rng);
        const auto jump = sample_jump(Y, p, rng);
        ++drawn;
        if (!jump) continue;
        const auto& out = jump->out;
        if (pathology_flags(Y, jump->v, out.Y, out.v, p).any()) continue;
        ++tested;
        const bool after = backward_recollides(out.Y, out.v, jump->phi, p);
        const bool before = backward_recollides(Y, jump->v, jump->phi, p);
        if (after || before) {
            ++violations;
            if (witnesses.size() < 10)
                witnesses.push_back({{"phi", jump->phi},
                                     {"Theta", Y.Theta},
                                     {"V", {Y.V.x, Y.V.y}},
                                     {"Omega", Y.Omega},
                                     {"v", {jump->v.x, jump->v.y}},
                                     {"direction", after ? "post" : "pre"}});
        }
    }
    res.pass = violations == 0;
    res.detail = std::to_string(violations) + " recollisions among " + std::to_string(tested) +
                 " good post-collisional configurations";
    res.metrics = {{"tested", tested}, {"proposals", drawn}, {"violations", violations},
                   {"witnesses", witnesses}, {"eta", p.eta}, {"seed", o.seed}};
    return res;
}

CriterionResult killing_negligible(const SuiteOptions& o) {
    CriterionResult res;
    const std::vector<double> alphas{0.3, 0.2, 0.1};
    const long reps = full(o) ? 4000 : 300;
    const double T = 1.0, eta = 0.1;
    std::vector<double> kill, dec;
    Json rows = Json::array();
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        // beta = 2 and I = 1 keep the large-speed threshold |log alpha| above typical |Omega|
        const SimParams p = SimParams::make(0, alphas[i], 2.0, kEllipse, eta, 1.0, 1e-4);
        std::vector<char> killed(reps), decoupled(reps);
        parallel_for(reps, o.workers, [&](long r) {
            Rng rng = stream(o, 9, (i << 32) | static_cast<std::uint64_t>(r));
            const BodyState Y0 = sample_body(p, rng);
            Rng rc = rng.split(1);
            killed[r] = run_jump_process(Y0, T, RunMode::killed, p, rng, T).killed.has_value();
            decoupled[r] = coupled_run(Y0, T, p, rc, T).decouple_time.has_value();
        });
        const long k = std::count(killed.begin(), killed.end(), 1);
        const long d = std::count(decoupled.begin(), decoupled.end(), 1);
        const WilsonInterval wk = wilson(k, reps), wd = wilson(d, reps);
        kill.push_back(wk.p);
        dec.push_back(wd.p);
        rows.push_back({{"alpha", alphas[i]}, {"kill", to_json(wk)}, {"decouple", to_json(wd)}});
    }
    const bool positive = std::all_of(kill.begin(), kill.end(), [](double x) { return x > 0; }) &&
                          std::all_of(dec.begin(), dec.end(), [](double x) { return x > 0; });
    const double sk = positive ? loglog_slope(alphas, kill) : 0.0;
    const double sd = positive ? loglog_slope(alphas, dec) : 0.0;
    res.pass = positive && strictly_decreasing(kill) && strictly_decreasing(dec) && sk >= eta && sd >= eta;
    res.detail = "kill probability " + num(kill[0]) + ", " + num(kill[1]) + ", " + num(kill[2]) +
                 " (slope " + num(sk) + "); decouple probability " + num(dec[0]) + ", " + num(dec[1]) + ", " +
                 num(dec[2]) + " (slope " + num(sd) + ")";
    res.metrics = {{"rows", rows}, {"kill_slope", sk}, {"decouple_slope", sd}, {"eta", eta},
                   {"replicas", reps}, {"T", T},       {"seed", o.seed}};
    return res;
}

CriterionResult cross_level(const SuiteOptions& o) {
    CriterionResult res;
    const double alpha = 0.15, T = 3.0, window = 0.5, dt = 0.05;
    const SimParams pm = SimParams::make(1000, alpha, 1.0, kEllipse);
    SimParams pj = pm;
    const long md_reps = full(o) ? 500 : 8;
    const long jump_reps = full(o) ? 5000 : 200;

    const auto md = md_ensemble(o, 10, pm, md_reps, T, dt, false);
    const auto jp = jump_ensemble(o, 10, 1 << 20, pj, jump_reps, T, dt);

    // one window per block of five relaxation times, rounded up to the sample grid
    const double relax = 1.0 / params_from_sim(pm).theta_V;
    const double block = std::ceil(5 * relax / dt - 1e-9) * dt;
    const auto starts = block_starts(T, window, block);

    auto pooled = [&](const std::vector<TrajectoryRecord>& recs) {
        auto a = window_increments(recs, Component::V1, window, starts);
        const auto b = window_increments(recs, Component::V2, window, starts);
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };
    const auto dv_md = pooled(md), dv_jump = pooled(jp);
    const double D = ks_distance(dv_md, dv_jump);
    const double pv = ks_two_sample_pvalue(D, dv_md.size(), dv_jump.size());
    const auto do_md = window_increments(md, Component::Omega, window, starts);
    const auto do_jump = window_increments(jp, Component::Omega, window, starts);
    const double DO = ks_distance(do_md, do_jump);
    const double pO = ks_two_sample_pvalue(DO, do_md.size(), do_jump.size());

    const std::vector<double> etas{0.1, 0.25, 0.5}, xis{2.0, 4.0, 6.0};
    const std::vector<TrajectoryRecord> jp_matched(jp.begin(), jp.begin() + std::min(md_reps, jump_reps));
    const ModulusTable tm = modulus_of_continuity(md, etas, xis);
    const ModulusTable tj = modulus_of_continuity(jp_matched, etas, xis);
    int disjoint = 0;
    Json cells = Json::array();
    for (std::size_t i = 0; i < etas.size(); ++i)
        for (std::size_t j = 0; j < xis.size(); ++j) {
            const bool ok = intervals_overlap(tm.p[i][j], tj.p[i][j]);
            disjoint += !ok;
            cells.push_back({{"eta", etas[i]}, {"xi", xis[j]}, {"md", to_json(tm.p[i][j])},
                             {"jump", to_json(tj.p[i][j])}, {"overlap", ok}});
        }

    res.pass = ks_gate(o, D, 0.05, pv) && disjoint == 0;
    res.detail = "velocity increment KS " + num(D) + " (" + std::to_string(dv_md.size()) + " vs " +
                 std::to_string(dv_jump.size()) + "), Omega increment KS " + num(DO) + ", " +
                 std::to_string(disjoint) + " of " + std::to_string(cells.size()) +
                 " modulus cells without overlap";
    res.metrics = {{"md_replicas", md_reps},
                   {"jump_replicas", jump_reps},
                   {"window", window},
                   {"block", block},
                   {"window_starts", starts},
                   {"velocity_increment_ks", {{"D", D}, {"p_value", pv}, {"n_md", dv_md.size()}, {"n_jump", dv_jump.size()}}},
                   {"omega_increment_ks", {{"D", DO}, {"p_value", pO}}},
                   {"modulus", cells},
                   {"seed", o.seed}};
    return res;
}

}  // namespace

const std::vector<CriterionInfo>& criteria() {
    static const std::vector<CriterionInfo> list{
        {1, "exact conservation", conservation},
        {2, "disk degeneracy", disk_degeneracy},
        {3, "geometric identities", geometric_identities},
        {4, "event-driven vs time-stepped", oracle_equivalence},
        {5, "scattering involution and push-forward", scattering_carleman},
        {6, "invariant measure", invariant_measure},
        {7, "OU limit of the jump process", ou_limit},
        {8, "no recollision after good collisions", no_recollision},
        {9, "killing is negligible as alpha decreases", killing_negligible},
        {10, "MD vs jump process", cross_level},
    };
    return list;
}

std::vector<CriterionResult> run_suite(const SuiteOptions& opts, const std::vector<int>& only,
                                       const std::function<void(const CriterionResult&)>& done) {
    std::vector<CriterionResult> out;
    for (const auto& c : criteria()) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto t0 = Clock::now();
        CriterionResult r;
        try {
            r = c.run(opts);
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("error: ") + e.what();
        }
        r.id = c.id;
        r.name = c.name;
        r.seconds = since(t0);
        if (done) done(r);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace rigidgas
