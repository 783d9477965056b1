#include "rigidgas/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rigidgas/boltzmann.hpp"
#include "rigidgas/errors.hpp"
#include "rigidgas/parallel.hpp"
#include "rigidgas/validation.hpp"

namespace rigidgas {

namespace fs = std::filesystem;

namespace {

const std::vector<std::pair<std::string, std::string>> kCommands{
    {"simulate-md", "event-driven molecular dynamics of the body and N atoms"},
    {"simulate-boltzmann", "linear Boltzmann jump process for the body"},
    {"simulate-ou", "limiting Ornstein-Uhlenbeck process"},
    {"compare", "all three levels at matched parameters, with a comparison report"},
    {"geometry-report", "shape constants and a boundary table for the body"},
    {"validate", "invariant and acceptance suite (--fast for the short version)"},
};

bool known_command(const std::string& c) {
    return std::any_of(kCommands.begin(), kCommands.end(), [&](const auto& k) { return k.first == c; });
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: " + path + " is not valid JSON (" + e.what() + ")");
    }
}

std::string replica_file(const std::string& level, long r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "trajectory_%s_%04ld.csv", level.c_str(), r);
    return buf;
}

class Artifacts {
public:
    explicit Artifacts(const RunConfig& cfg) : dir_(cfg.out) { fs::create_directories(dir_); }

    std::ofstream open(const std::string& name) {
        std::ofstream f(dir_ / name, std::ios::binary);
        if (!f) throw Error("cannot write " + (dir_ / name).string());
        files_.push_back(name);
        return f;
    }
    // for files written from worker threads; record names in index order afterwards
    fs::path path(const std::string& name) const { return dir_ / name; }
    void record(const std::string& name) { files_.push_back(name); }

    void manifest(const RunConfig& cfg) {
        Json m;
        m["program"] = "rigidgas";
        m["command"] = cfg.command;
        m["config"] = to_json(cfg);
        m["outputs"] = files_;
        std::ofstream(dir_ / "manifest.json", std::ios::binary) << m.dump(2) << '\n';
    }

private:
    fs::path dir_;
    std::vector<std::string> files_;
};

// Runs `replicas` trajectories, writes each one as it finishes and keeps them.
template <class Run>
std::vector<TrajectoryRecord> ensemble(const RunConfig& cfg, Artifacts& art, const std::string& level,
                                       std::uint64_t stream, Run run) {
    std::vector<TrajectoryRecord> recs(cfg.replicas);
    parallel_for(cfg.replicas, cfg.workers, [&](long r) {
        Rng rng = Rng(cfg.seed).split(stream << 32 | static_cast<std::uint64_t>(r));
        recs[r] = run(rng);
        recs[r].seed = cfg.seed;
        recs[r].replica = static_cast<std::uint64_t>(r);
        if (cfg.trajectories) {
            std::ofstream f(art.path(replica_file(level, r)), std::ios::binary);
            write_trajectory_csv(recs[r], f);
        }
    });
    if (cfg.trajectories)
        for (long r = 0; r < cfg.replicas; ++r) art.record(replica_file(level, r));
    return recs;
}

std::vector<TrajectoryRecord> md_level(const RunConfig& cfg, Artifacts& art, const SimParams& p) {
    return ensemble(cfg, art, "md", 1, [&](Rng& rng) {
        const Configuration init = sample_equilibrium(p, rng);
        MdOptions mo;
        mo.mode = cfg.mode;
        mo.sample_dt = cfg.sample_dt;
        return run_md(p, init, cfg.T, mo);
    });
}

std::vector<TrajectoryRecord> jump_level(const RunConfig& cfg, Artifacts& art, const SimParams& p) {
    return ensemble(cfg, art, "jump", 2, [&](Rng& rng) {
        const BodyState Y0 = sample_body(p, rng);
        return run_jump_process(Y0, cfg.T, cfg.mode, p, rng, cfg.sample_dt);
    });
}

std::vector<TrajectoryRecord> ou_level(const RunConfig& cfg, Artifacts& art, const SimParams& p) {
    const OUParams q = params_from_sim(p, cfg.ou_variant);
    return ensemble(cfg, art, "ou", 3, [&](Rng& rng) {
        const BodyState Y0 = sample_body(p, rng);
        OUState W;
        W.X = Y0.X;
        W.V = Y0.V;
        W.O = Y0.Omega;
        return run_ou(W, cfg.T, cfg.sample_dt, q, rng);
    });
}

double grid_round_up(double x, double dt) { return std::max(1.0, std::ceil(x / dt - 1e-9)) * dt; }

// sample times spaced by about five relaxation times of V
std::vector<double> stationary_slices(const RunConfig& cfg, const SimParams& p) {
    const double block = grid_round_up(5.0 / params_from_sim(p).theta_V, cfg.sample_dt);
    std::vector<double> out;
    for (long k = 1; k * block <= cfg.T + 1e-9; ++k) out.push_back(k * block);
    return out;
}

void add_level_statistics(ComparisonReport& rep, const RunConfig& cfg, const SimParams& p, const std::string& level,
                          const std::vector<TrajectoryRecord>& recs) {
    const OUParams q = params_from_sim(p, cfg.ou_variant);
    const auto slices = stationary_slices(cfg, p);
    if (!slices.empty()) {
        for (Component c : {Component::V1, Component::V2, Component::Omega}) {
            const auto x = slice_values(recs, c, slices);
            const double sd = c == Component::Omega ? 1 / std::sqrt(p.beta * p.I) : 1 / std::sqrt(p.beta);
            const double D = ks_distance(x, [sd](double v) { return normal_cdf(v, 0.0, sd); });
            rep.ks.push_back({std::string("marginal ") + component_name(c), level, "closed_form", D,
                              ks_pvalue(D, static_cast<double>(x.size())), static_cast<long>(x.size()), 0});
        }
    }
    const int max_lag = std::max(2, static_cast<int>(std::lround(1.0 / cfg.sample_dt)));
    for (const auto& [name, comps, target] :
         {std::tuple{"V", std::vector<Component>{Component::V1, Component::V2}, q.theta_V},
          std::tuple{"Omega", std::vector<Component>{Component::Omega}, q.theta_O}}) {
        try {
            rep.autocov.push_back({level, name, autocovariance(recs, comps, max_lag), target});
        } catch (const InsufficientData&) {
            // too short for a fit; the text report simply omits it
        }
    }
    const std::vector<double> etas{grid_round_up(0.1, cfg.sample_dt), grid_round_up(0.25, cfg.sample_dt),
                                   grid_round_up(0.5, cfg.sample_dt)};
    rep.modulus.push_back({level, modulus_of_continuity(recs, etas, {1.0, 2.0, 4.0})});
}

void add_pathology(ComparisonReport& rep, const RunConfig& cfg, const std::string& level,
                   const std::vector<TrajectoryRecord>& recs) {
    rep.pathology.push_back({level, cfg.T, pathology_frequency(recs, cfg.T)});
}

void add_drift(ComparisonReport& rep, const SimParams& p, const std::vector<TrajectoryRecord>& recs) {
    DriftEntry d;
    d.level = "md";
    d.replicas = static_cast<long>(recs.size());
    for (const auto& r : recs) {
        d.max_energy_drift = std::max(d.max_energy_drift, r.energy_drift);
        d.max_momentum_drift = std::max(d.max_momentum_drift, r.momentum_drift);
        for (const auto& c : r.collisions) {
            const double L0 = contact_angular_momentum(c.pre, c.phi, p);
            const double L1 = contact_angular_momentum(c.post, c.phi, p);
            d.max_contact_angular_momentum_error =
                std::max(d.max_contact_angular_momentum_error, std::abs(L1 - L0) / std::max(1.0, std::abs(L0)));
        }
    }
    rep.drift.push_back(d);
}

ComparisonReport base_report(const RunConfig& cfg, const std::string& title) {
    ComparisonReport rep;
    rep.title = title;
    rep.seed = cfg.seed;
    rep.replicas = cfg.replicas;
    rep.params = to_json(cfg);
    return rep;
}

void write_report(Artifacts& art, const ComparisonReport& rep) {
    art.open("report.json") << to_json(rep).dump(2) << '\n';
    art.open("report.txt") << to_text(rep);
    for (const auto& a : rep.autocov) {
        auto f = art.open("autocov_" + a.level + "_" + a.component + ".csv");
        write_autocov_csv(a, f);
    }
    for (const auto& m : rep.modulus) {
        auto f = art.open("modulus_" + m.level + ".csv");
        write_modulus_csv(m, f);
    }
}

int simulate(const RunConfig& cfg, std::ostream& out) {
    Artifacts art(cfg);
    const SimParams p = cfg.sim_params();
    std::vector<TrajectoryRecord> recs;
    std::string level;
    if (cfg.command == "simulate-md") {
        level = "md";
        recs = md_level(cfg, art, p);
    } else if (cfg.command == "simulate-boltzmann") {
        level = "jump";
        recs = jump_level(cfg, art, p);
    } else {
        level = "ou";
        recs = ou_level(cfg, art, p);
    }
    ComparisonReport rep = base_report(cfg, cfg.command);
    add_level_statistics(rep, cfg, p, level, recs);
    if (level != "ou") add_pathology(rep, cfg, level, recs);
    if (level == "md") add_drift(rep, p, recs);
    write_report(art, rep);
    art.manifest(cfg);
    out << to_text(rep);
    return 0;
}

void add_increment_ks(ComparisonReport& rep, const RunConfig& cfg, const SimParams& p, const std::string& a,
                      const std::vector<TrajectoryRecord>& ra, const std::string& b,
                      const std::vector<TrajectoryRecord>& rb) {
    const double window = grid_round_up(cfg.window, cfg.sample_dt);
    const double block = grid_round_up(5.0 / params_from_sim(p).theta_V, cfg.sample_dt);
    const auto starts = block_starts(cfg.T, window, block);
    if (starts.empty()) return;
    auto pooled_v = [&](const std::vector<TrajectoryRecord>& r) {
        auto x = window_increments(r, Component::V1, window, starts);
        const auto y = window_increments(r, Component::V2, window, starts);
        x.insert(x.end(), y.begin(), y.end());
        return x;
    };
    const auto va = pooled_v(ra), vb = pooled_v(rb);
    const auto oa = window_increments(ra, Component::Omega, window, starts);
    const auto ob = window_increments(rb, Component::Omega, window, starts);
    const double Dv = ks_distance(va, vb), Do = ks_distance(oa, ob);
    rep.ks.push_back({"velocity increment", a, b, Dv, ks_two_sample_pvalue(Dv, va.size(), vb.size()),
                      static_cast<long>(va.size()), static_cast<long>(vb.size())});
    rep.ks.push_back({"Omega increment", a, b, Do, ks_two_sample_pvalue(Do, oa.size(), ob.size()),
                      static_cast<long>(oa.size()), static_cast<long>(ob.size())});
}

int compare(const RunConfig& cfg, std::ostream& out) {
    Artifacts art(cfg);
    const SimParams p = cfg.sim_params();
    const auto md = md_level(cfg, art, p);
    const auto jump = jump_level(cfg, art, p);
    const auto ou = ou_level(cfg, art, p);

    ComparisonReport rep = base_report(cfg, "comparison of MD, jump process and OU limit");
    add_level_statistics(rep, cfg, p, "md", md);
    add_level_statistics(rep, cfg, p, "jump", jump);
    add_level_statistics(rep, cfg, p, "ou", ou);
    add_increment_ks(rep, cfg, p, "md", md, "jump", jump);
    add_increment_ks(rep, cfg, p, "jump", jump, "ou", ou);
    add_increment_ks(rep, cfg, p, "md", md, "ou", ou);
    add_pathology(rep, cfg, "md", md);
    add_pathology(rep, cfg, "jump", jump);
    add_drift(rep, p, md);
    {
        Rng rng = Rng(cfg.seed).split(4ULL << 32);
        rep.chi_square.push_back({"push-forward at rest", carleman_chi_square(p, BodyState{}, 100000, rng)});
        rep.chi_square.push_back(
            {"push-forward, Jacobian dropped", carleman_chi_square(p, BodyState{}, 100000, rng, true)});
    }

    // simple checks at the configured sample sizes
    int id = 0;
    for (const auto& k : rep.ks) {
        if (k.level_a != "md" || k.level_b != "jump") continue;
        CriterionResult c;
        c.id = ++id;
        c.name = k.label + " md vs jump";
        c.pass = k.p_value > 1e-3;
        c.detail = "KS " + std::to_string(k.statistic) + ", p " + std::to_string(k.p_value);
        rep.criteria.push_back(c);
    }
    {
        const auto& tm = rep.modulus[0].table;
        const auto& tj = rep.modulus[1].table;
        int disjoint = 0, cells = 0;
        for (std::size_t i = 0; i < tm.eta.size(); ++i)
            for (std::size_t j = 0; j < tm.xi.size(); ++j, ++cells) disjoint += !intervals_overlap(tm.p[i][j], tj.p[i][j]);
        CriterionResult c;
        c.id = ++id;
        c.name = "modulus tables md vs jump";
        c.pass = disjoint == 0;
        c.detail = std::to_string(disjoint) + " of " + std::to_string(cells) + " cells without overlap";
        rep.criteria.push_back(c);
    }
    {
        CriterionResult c;
        c.id = ++id;
        c.name = "conservation";
        const auto& d = rep.drift[0];
        c.pass = d.max_energy_drift < 1e-9 && d.max_momentum_drift < 1e-9 && d.max_contact_angular_momentum_error < 1e-12;
        c.detail = "energy " + std::to_string(d.max_energy_drift) + ", momentum " + std::to_string(d.max_momentum_drift);
        rep.criteria.push_back(c);
    }
    write_report(art, rep);
    art.manifest(cfg);
    out << to_text(rep);
    return 0;
}

int geometry_report(const RunConfig& cfg, std::ostream& out) {
    Artifacts art(cfg);
    const SimParams p = cfg.sim_params();
    const ShapeConstants& c = p.consts;
    Json j;
    j["body"] = body_to_json(cfg.body);
    j["alpha"] = c.alpha;
    j["L"] = c.L;
    j["L_alpha"] = c.L_alpha;
    j["area"] = c.area;
    j["I"] = c.I;
    j["I_used"] = p.I;
    j["K"] = c.K;
    j["K_alpha"] = c.K_alpha;
    j["N"] = {{"xx", c.N.xx}, {"xy", c.N.xy}, {"yy", c.N.yy}};
    j["N_alpha"] = {{"xx", c.N_alpha.xx}, {"xy", c.N_alpha.xy}, {"yy", c.N_alpha.yy}};
    j["Gamma"] = {c.Gamma.x, c.Gamma.y};
    j["Gamma_alpha"] = {c.Gamma_alpha.x, c.Gamma_alpha.y};
    j["kappa_min"] = c.kappa_min;
    j["kappa_max"] = c.kappa_max;
    j["r_max"] = c.r_max;
    j["r_max_alpha"] = c.r_max_alpha;
    j["dh_max"] = c.dh_max;
    j["closure_n"] = {c.closure_n.x, c.closure_n.y};
    j["closure_r"] = c.closure_r;
    const OUParams q = params_from_sim(p, cfg.ou_variant);
    j["ou"] = {{"a", q.a},
               {"theta_V", q.theta_V},
               {"sigma2_V", q.sigma2_V},
               {"theta_Omega", q.theta_O},
               {"sigma2_Omega", q.sigma2_O},
               {"variant", cfg.ou_variant == OUVariant::printed ? "printed" : "generator"}};
    art.open("report.json") << j.dump(2) << '\n';
    {
        auto f = art.open("geometry.csv");
        f << "phi,r1,r2,n1,n2,kappa\n";
        const int n = cfg.body.quadrature_order;
        char buf[256];
        for (int k = 0; k < n; ++k) {
            const double phi = kTwoPi * k / n;
            const BoundaryPoint b = boundary(p.body, phi);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", phi, b.r.x, b.r.y, b.n.x, b.n.y,
                          b.kappa);
            f << buf;
        }
    }
    std::ostringstream txt;
    txt << "perimeter L = " << c.L << " (enlarged " << c.L_alpha << ")\n"
        << "K = " << c.K << " (enlarged " << c.K_alpha << ")\n"
        << "I = " << c.I << ", curvature in [" << c.kappa_min << ", " << c.kappa_max << "]\n"
        << "OU rates: theta_V = " << q.theta_V << ", theta_Omega = " << q.theta_O << "\n";
    art.open("report.txt") << txt.str();
    art.manifest(cfg);
    out << txt.str();
    return 0;
}

int validate(const RunConfig& cfg, std::ostream& out, const std::vector<int>& only) {
    Artifacts art(cfg);
    SuiteOptions o;
    o.scale = cfg.fast ? SuiteScale::fast : SuiteScale::full;
    o.seed = cfg.seed;
    o.workers = cfg.workers;
    ComparisonReport rep = base_report(cfg, cfg.fast ? "validation (fast)" : "validation");
    rep.criteria = run_suite(o, only, [&](const CriterionResult& r) { out << criterion_line(r) << std::endl; });
    write_report(art, rep);
    art.manifest(cfg);
    return rep.all_pass() ? 0 : 1;
}

}  // namespace

std::string usage() {
    std::ostringstream s;
    s << "usage: rigidgas <command> [--config PATH] [--seed U64] [--out DIR] [--workers K] [physics flags]\n\n"
         "commands:\n";
    for (const auto& [name, what] : kCommands) {
        s << "  " << name;
        for (std::size_t k = name.size(); k < 20; ++k) s << ' ';
        s << what << '\n';
    }
    s << "\nphysics flags: --N --alpha --beta --eta --eps --inertia --body {disk,ellipse,fourier}\n"
         "  --radius --a --b --coeffs c0,a1,b1,... --quadrature-order --mode {plain,killed}\n"
         "  --ou-variant {generator,printed} --T --sample-dt --window --replicas\n"
         "other flags: --fast, --only 1,2,... (validate), --no-trajectories\n"
         "Flags override values from the --config JSON file.\n";
    return s.str();
}

RunConfig parse_config(const std::vector<std::string>& args, std::vector<int>* only) {
    if (args.empty() || !known_command(args[0])) throw ConfigError("command: unknown or missing command");
    CLI::App app{"rigidgas " + args[0]};
    app.set_help_flag();
    // a repeated flag takes its last value
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string config, body, mode, variant, out;
    std::uint64_t seed = 0;
    int workers = 1, N = 0, order = 0;
    double alpha = 0, beta = 0, eta = 0, eps = 0, inertia = 0, radius = 0, a = 0, b = 0, T = 0, sample_dt = 0,
           window = 0;
    long replicas = 0;
    std::vector<double> coeffs;
    std::vector<int> only_ids;
    bool fast = false, no_traj = false;
    app.add_option("--config", config);
    auto* o_seed = app.add_option("--seed", seed);
    auto* o_out = app.add_option("--out", out);
    auto* o_workers = app.add_option("--workers", workers);
    auto* o_N = app.add_option("--N", N);
    auto* o_alpha = app.add_option("--alpha", alpha);
    auto* o_beta = app.add_option("--beta", beta);
    auto* o_eta = app.add_option("--eta", eta);
    auto* o_eps = app.add_option("--eps", eps);
    auto* o_inertia = app.add_option("--inertia", inertia);
    auto* o_body = app.add_option("--body", body);
    auto* o_radius = app.add_option("--radius", radius);
    auto* o_a = app.add_option("--a", a);
    auto* o_b = app.add_option("--b", b);
    auto* o_coeffs = app.add_option("--coeffs", coeffs)->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    auto* o_order = app.add_option("--quadrature-order", order);
    auto* o_mode = app.add_option("--mode", mode);
    auto* o_variant = app.add_option("--ou-variant", variant);
    auto* o_T = app.add_option("--T", T);
    auto* o_dt = app.add_option("--sample-dt", sample_dt);
    auto* o_window = app.add_option("--window", window);
    auto* o_reps = app.add_option("--replicas", replicas);
    auto* o_fast = app.add_flag("--fast", fast);
    auto* o_notraj = app.add_flag("--no-trajectories", no_traj);
    app.add_option("--only", only_ids)->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

    std::vector<const char*> argv{args[0].c_str()};
    for (std::size_t k = 1; k < args.size(); ++k) argv.push_back(args[k].c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        throw ConfigError(std::string("flags: ") + e.what());
    }

    Json j = config.empty() ? Json::object() : read_json_file(config);
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    j["command"] = args[0];
    auto set = [&](CLI::Option* o, const char* key, const auto& v) {
        if (o->count()) j[key] = v;
    };
    set(o_seed, "seed", seed);
    set(o_out, "out", out);
    set(o_workers, "workers", workers);
    set(o_N, "N", N);
    set(o_alpha, "alpha", alpha);
    set(o_beta, "beta", beta);
    set(o_eta, "eta", eta);
    set(o_eps, "eps", eps);
    set(o_inertia, "inertia", inertia);
    set(o_mode, "mode", mode);
    set(o_variant, "ou_variant", variant);
    set(o_T, "T", T);
    set(o_dt, "sample_dt", sample_dt);
    set(o_window, "window", window);
    set(o_reps, "replicas", replicas);
    if (o_fast->count()) j["fast"] = fast;
    if (o_notraj->count()) j["trajectories"] = false;
    // eps follows a new N unless it is given as well
    if (o_N->count() && !o_eps->count()) j.erase("eps");
    // switching the body kind drops parameters of the old kind
    if (o_body->count()) {
        Json nb{{"kind", body}};
        if (j.contains("body") && j["body"].is_object() && j["body"].value("kind", "disk") == body) nb = j["body"];
        j["body"] = nb;
    }
    if (o_radius->count() || o_a->count() || o_b->count() || o_coeffs->count() || o_order->count()) {
        if (!j.contains("body")) j["body"] = Json::object();
        Json& jb = j["body"];
        if (o_radius->count()) jb["radius"] = radius;
        if (o_a->count()) jb["a"] = a;
        if (o_b->count()) jb["b"] = b;
        if (o_coeffs->count()) jb["coeffs"] = coeffs;
        if (o_order->count()) jb["quadrature_order"] = order;
    }
    if (only) *only = only_ids;
    return config_from_json(j);
}

int dispatch(const RunConfig& cfg, std::ostream& out, const std::vector<int>& only) {
    if (cfg.command == "simulate-md" || cfg.command == "simulate-boltzmann" || cfg.command == "simulate-ou")
        return simulate(cfg, out);
    if (cfg.command == "compare") return compare(cfg, out);
    if (cfg.command == "geometry-report") return geometry_report(cfg, out);
    if (cfg.command == "validate") return validate(cfg, out, only);
    throw ConfigError("command: unknown command " + cfg.command);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty()) {
        err << usage();
        return 2;
    }
    if (std::find_if(args.begin(), args.end(), [](const std::string& a) { return a == "-h" || a == "--help"; }) !=
        args.end()) {
        out << usage();
        return 0;
    }
    if (!known_command(args[0])) {
        err << "unknown command '" << args[0] << "'\n\n" << usage();
        return 2;
    }
    std::vector<int> only;
    RunConfig cfg;
    try {
        cfg = parse_config(args, &only);
    } catch (const ConfigError& e) {
        err << e.what() << '\n';
        return 2;
    }
    try {
        return dispatch(cfg, out, only);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace rigidgas
