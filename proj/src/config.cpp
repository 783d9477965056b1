#include "rigidgas/config.hpp"

#include <cmath>
#include <set>

#include "rigidgas/errors.hpp"

namespace rigidgas {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) { throw ConfigError(field + ": " + why); }

template <class T>
T get(const Json& j, const std::string& field) {
    try {
        return j.at(field).get<T>();
    } catch (const nlohmann::json::exception&) {
        bad(field, "expected a value of the right type, got " + j.at(field).dump());
    }
}

const char* mode_name(RunMode m) { return m == RunMode::killed ? "killed" : "plain"; }
const char* variant_name(OUVariant v) { return v == OUVariant::printed ? "printed" : "generator"; }

}  // namespace

Json body_to_json(const BodySpec& b) {
    Json j;
    switch (b.kind) {
    case BodyKind::disk:
        j = {{"kind", "disk"}, {"radius", b.radius}};
        break;
    case BodyKind::ellipse:
        j = {{"kind", "ellipse"}, {"a", b.a}, {"b", b.b}};
        break;
    case BodyKind::fourier:
        j = {{"kind", "fourier"}, {"coeffs", b.coeffs}};
        break;
    }
    j["quadrature_order"] = b.quadrature_order;
    return j;
}

BodySpec body_from_json(const Json& j) {
    if (!j.is_object()) bad("body", "expected an object");
    static const std::set<std::string> known{"kind", "radius", "a", "b", "coeffs", "quadrature_order"};
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) bad("body." + k, "unknown field");
    const std::string kind = j.contains("kind") ? get<std::string>(j, "kind") : "disk";
    const int order = j.contains("quadrature_order") ? get<int>(j, "quadrature_order") : 512;
    BodySpec b;
    if (kind == "disk") {
        b = BodySpec::disk(j.contains("radius") ? get<double>(j, "radius") : 1.0, order);
    } else if (kind == "ellipse") {
        if (!j.contains("a") || !j.contains("b")) bad("body", "ellipse needs semi-axes a and b");
        b = BodySpec::ellipse(get<double>(j, "a"), get<double>(j, "b"), order);
    } else if (kind == "fourier") {
        if (!j.contains("coeffs")) bad("body.coeffs", "fourier body needs coefficients");
        b = BodySpec::fourier(get<std::vector<double>>(j, "coeffs"), order);
    } else {
        bad("body.kind", "expected disk, ellipse or fourier, got " + kind);
    }
    try {
        SupportBody check(b);
    } catch (const Error& e) {
        bad("body", e.what());
    }
    return b;
}

RunConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    static const std::set<std::string> known{"command", "N",         "alpha",     "beta",     "eta",
                                             "eps",     "inertia",   "body",      "mode",     "ou_variant",
                                             "T",       "sample_dt", "window",    "replicas", "seed",
                                             "out",     "workers",   "fast",      "trajectories"};
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) bad(k, "unknown field");

    RunConfig c;
    if (j.contains("command")) c.command = get<std::string>(j, "command");
    if (j.contains("N")) c.N = get<int>(j, "N");
    if (j.contains("alpha")) c.alpha = get<double>(j, "alpha");
    if (j.contains("beta")) c.beta = get<double>(j, "beta");
    if (j.contains("eta")) c.eta = get<double>(j, "eta");
    if (j.contains("eps") && !j["eps"].is_null()) c.eps = get<double>(j, "eps");
    if (j.contains("inertia") && !j["inertia"].is_null()) c.inertia = get<double>(j, "inertia");
    if (j.contains("body")) c.body = body_from_json(j["body"]);
    if (j.contains("mode")) {
        const auto m = get<std::string>(j, "mode");
        if (m == "plain")
            c.mode = RunMode::plain;
        else if (m == "killed")
            c.mode = RunMode::killed;
        else
            bad("mode", "expected plain or killed, got " + m);
    }
    if (j.contains("ou_variant")) {
        const auto v = get<std::string>(j, "ou_variant");
        if (v == "generator")
            c.ou_variant = OUVariant::generator;
        else if (v == "printed")
            c.ou_variant = OUVariant::printed;
        else
            bad("ou_variant", "expected generator or printed, got " + v);
    }
    if (j.contains("T")) c.T = get<double>(j, "T");
    if (j.contains("sample_dt")) c.sample_dt = get<double>(j, "sample_dt");
    if (j.contains("window")) c.window = get<double>(j, "window");
    if (j.contains("replicas")) c.replicas = get<long>(j, "replicas");
    if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed");
    if (j.contains("out")) c.out = get<std::string>(j, "out");
    if (j.contains("workers")) c.workers = get<int>(j, "workers");
    if (j.contains("fast")) c.fast = get<bool>(j, "fast");
    if (j.contains("trajectories")) c.trajectories = get<bool>(j, "trajectories");

    if (c.N < 1) bad("N", "must be at least 1");
    if (!c.eps) c.eps = 1.0 / c.N;
    if (!(std::abs(c.N * *c.eps - 1.0) <= 1e-12)) bad("eps", "Boltzmann-Grad scaling requires N*eps = 1");
    if (!(c.alpha > 0 && c.alpha < 1)) bad("alpha", "must lie in (0, 1)");
    if (!(*c.eps < c.alpha)) bad("eps", "must be smaller than alpha");
    if (!(c.beta > 0)) bad("beta", "must be positive");
    if (!(c.eta > 0 && c.eta < 1.0 / 6.0)) bad("eta", "must satisfy 0 < eta < 1/6");
    if (c.inertia && !(*c.inertia > 0)) bad("inertia", "must be positive");
    if (!(c.T > 0)) bad("T", "must be positive");
    if (!(c.sample_dt > 0)) bad("sample_dt", "must be positive");
    if (!(c.window > 0)) bad("window", "must be positive");
    if (c.replicas < 1) bad("replicas", "must be at least 1");
    if (c.workers < 1) bad("workers", "must be at least 1");
    if (c.out.empty()) bad("out", "must not be empty");
    try {
        c.sim_params();
    } catch (const Error& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }
    return c;
}

Json to_json(const RunConfig& c) {
    Json j;
    j["command"] = c.command;
    j["N"] = c.N;
    j["alpha"] = c.alpha;
    j["beta"] = c.beta;
    j["eta"] = c.eta;
    j["eps"] = c.eps ? Json(*c.eps) : Json(nullptr);
    j["inertia"] = c.inertia ? Json(*c.inertia) : Json(nullptr);
    j["body"] = body_to_json(c.body);
    j["mode"] = mode_name(c.mode);
    j["ou_variant"] = variant_name(c.ou_variant);
    j["T"] = c.T;
    j["sample_dt"] = c.sample_dt;
    j["window"] = c.window;
    j["replicas"] = c.replicas;
    j["seed"] = c.seed;
    j["out"] = c.out;
    j["workers"] = c.workers;
    j["fast"] = c.fast;
    j["trajectories"] = c.trajectories;
    return j;
}

SimParams RunConfig::sim_params() const { return SimParams::make(N, alpha, beta, body, eta, inertia, eps); }

}  // namespace rigidgas
