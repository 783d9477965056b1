#include "rigidgas/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace rigidgas {

bool ComparisonReport::all_pass() const {
    for (const auto& c : criteria)
        if (!c.pass) return false;
    return true;
}

Json to_json(const WilsonInterval& w) {
    return Json{{"k", w.k}, {"n", w.n}, {"p", w.p}, {"lo", w.lo}, {"hi", w.hi}};
}

Json to_json(const CriterionResult& c) {
    // runtime is left out so that reports are reproducible byte for byte
    return Json{{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}, {"metrics", c.metrics}};
}

namespace {

Json fit_json(const AutocovarianceFit& f) {
    return Json{{"theta", f.theta}, {"theta_se", f.theta_se}, {"amplitude", f.amplitude},
                {"band", f.band},   {"samples", f.samples},   {"lags", f.lags},
                {"C", f.C}};
}

Json modulus_json(const ModulusTable& t) {
    Json cells = Json::array();
    for (std::size_t i = 0; i < t.eta.size(); ++i)
        for (std::size_t j = 0; j < t.xi.size(); ++j) {
            Json c = to_json(t.p[i][j]);
            c["eta"] = t.eta[i];
            c["xi"] = t.xi[j];
            cells.push_back(c);
        }
    return cells;
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

}  // namespace

Json to_json(const ComparisonReport& r) {
    Json j;
    j["title"] = r.title;
    j["seed"] = r.seed;
    j["replicas"] = r.replicas;
    j["params"] = r.params;
    j["all_pass"] = r.all_pass();
    Json& ks = j["ks"] = Json::array();
    for (const auto& e : r.ks)
        ks.push_back({{"label", e.label},
                      {"level_a", e.level_a},
                      {"level_b", e.level_b},
                      {"statistic", e.statistic},
                      {"p_value", e.p_value},
                      {"n_a", e.n_a},
                      {"n_b", e.n_b}});
    Json& ac = j["autocovariance"] = Json::array();
    for (const auto& e : r.autocov)
        ac.push_back({{"level", e.level}, {"component", e.component}, {"target_theta", e.target_theta},
                      {"fit", fit_json(e.fit)}});
    Json& pa = j["pathology"] = Json::array();
    for (const auto& e : r.pathology)
        pa.push_back({{"level", e.level},
                      {"T", e.T},
                      {"records", e.freq.records},
                      {"contacts", e.freq.contacts},
                      {"a1", to_json(e.freq.a1)},
                      {"a2", to_json(e.freq.a2)},
                      {"kill", to_json(e.freq.kill)},
                      {"small_deflection_contacts", to_json(e.freq.small_deflection_contacts)},
                      {"large_speed_contacts", to_json(e.freq.large_speed_contacts)},
                      {"slow_relative_contacts", to_json(e.freq.slow_relative_contacts)}});
    Json& dr = j["drift"] = Json::array();
    for (const auto& e : r.drift)
        dr.push_back({{"level", e.level},
                      {"replicas", e.replicas},
                      {"max_energy_drift", e.max_energy_drift},
                      {"max_momentum_drift", e.max_momentum_drift},
                      {"max_contact_angular_momentum_error", e.max_contact_angular_momentum_error}});
    Json& cs = j["chi_square"] = Json::array();
    for (const auto& e : r.chi_square)
        cs.push_back({{"label", e.label},
                      {"chi2", e.result.chi2},
                      {"dof", e.result.dof},
                      {"p_value", e.result.p_value},
                      {"samples", e.result.samples},
                      {"in_grid", e.result.in_grid}});
    Json& mo = j["modulus"] = Json::array();
    for (const auto& e : r.modulus) mo.push_back({{"level", e.level}, {"cells", modulus_json(e.table)}});
    Json& cr = j["criteria"] = Json::array();
    for (const auto& c : r.criteria) cr.push_back(to_json(c));
    return j;
}

std::string criterion_line(const CriterionResult& c) {
    std::ostringstream s;
    s << (c.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << c.detail << " ("
      << fmt("%.1f", c.seconds) << " s)";
    return s.str();
}

std::string to_text(const ComparisonReport& r) {
    std::ostringstream s;
    s << r.title << "\nseed " << r.seed << ", replicas " << r.replicas << "\n";
    if (!r.ks.empty()) {
        s << "\nKolmogorov-Smirnov\n";
        for (const auto& e : r.ks)
            s << "  " << e.label << "  " << e.level_a << " vs " << e.level_b << "  D=" << fmt("%.4f", e.statistic)
              << "  p=" << fmt("%.3g", e.p_value) << "  n=" << e.n_a << "/" << e.n_b << "\n";
    }
    if (!r.autocov.empty()) {
        s << "\nAutocovariance decay rates\n";
        for (const auto& e : r.autocov)
            s << "  " << e.level << " " << e.component << "  theta=" << fmt("%.4f", e.fit.theta) << " +- "
              << fmt("%.4f", e.fit.theta_se) << "  limit=" << fmt("%.4f", e.target_theta)
              << "  samples=" << e.fit.samples << "\n";
    }
    if (!r.pathology.empty()) {
        s << "\nPathology frequencies (per trajectory)\n";
        for (const auto& e : r.pathology)
            s << "  " << e.level << "  A1=" << fmt("%.4f", e.freq.a1.p) << "  A2=" << fmt("%.4f", e.freq.a2.p)
              << "  kill=" << fmt("%.4f", e.freq.kill.p) << "  records=" << e.freq.records
              << "  contacts=" << e.freq.contacts << "\n";
    }
    if (!r.drift.empty()) {
        s << "\nConservation\n";
        for (const auto& e : r.drift)
            s << "  " << e.level << "  energy " << fmt("%.3g", e.max_energy_drift) << "  momentum "
              << fmt("%.3g", e.max_momentum_drift) << "  contact angular momentum "
              << fmt("%.3g", e.max_contact_angular_momentum_error) << "  replicas=" << e.replicas << "\n";
    }
    if (!r.chi_square.empty()) {
        s << "\nChi-square\n";
        for (const auto& e : r.chi_square)
            s << "  " << e.label << "  chi2=" << fmt("%.1f", e.result.chi2) << " dof=" << e.result.dof
              << "  p=" << fmt("%.3g", e.result.p_value) << "  samples=" << e.result.samples << "\n";
    }
    for (const auto& e : r.modulus) {
        s << "\nModulus of continuity, " << e.level << " (rows eta, columns xi)\n       ";
        for (double xi : e.table.xi) s << fmt("%9.2f", xi);
        s << "\n";
        for (std::size_t i = 0; i < e.table.eta.size(); ++i) {
            s << fmt("  %5.2f", e.table.eta[i]);
            for (std::size_t j = 0; j < e.table.xi.size(); ++j) s << fmt("%9.4f", e.table.p[i][j].p);
            s << "\n";
        }
    }
    if (!r.criteria.empty()) {
        s << "\nChecks\n";
        for (const auto& c : r.criteria) s << "  " << criterion_line(c) << "\n";
    }
    return s.str();
}

void write_autocov_csv(const AutocovEntry& e, std::ostream& out) {
    out << "lag,C,fit\n";
    for (std::size_t k = 0; k < e.fit.lags.size(); ++k) {
        const double fit = e.fit.amplitude * std::exp(-e.fit.theta * e.fit.lags[k]);
        out << fmt("%.17g", e.fit.lags[k]) << ',' << fmt("%.17g", e.fit.C[k]) << ',' << fmt("%.17g", fit) << '\n';
    }
}

void write_modulus_csv(const ModulusEntry& e, std::ostream& out) {
    out << "eta,xi,k,n,p,lo,hi\n";
    for (std::size_t i = 0; i < e.table.eta.size(); ++i)
        for (std::size_t j = 0; j < e.table.xi.size(); ++j) {
            const auto& w = e.table.p[i][j];
            out << fmt("%.17g", e.table.eta[i]) << ',' << fmt("%.17g", e.table.xi[j]) << ',' << w.k << ',' << w.n
                << ',' << fmt("%.17g", w.p) << ',' << fmt("%.17g", w.lo) << ',' << fmt("%.17g", w.hi) << '\n';
        }
}

}  // namespace rigidgas
