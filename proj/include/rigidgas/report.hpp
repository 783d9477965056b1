#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "rigidgas/analysis.hpp"

namespace rigidgas {

using Json = nlohmann::ordered_json;

struct KsEntry {
    std::string label;
    std::string level_a, level_b;  // level_b is "closed_form" for one-sample tests
    double statistic = 0.0;
    double p_value = 0.0;
    long n_a = 0, n_b = 0;
};

struct AutocovEntry {
    std::string level;
    std::string component;
    AutocovarianceFit fit;
    double target_theta = 0.0;
};

struct PathologyEntry {
    std::string level;
    double T = 0.0;
    PathologyFrequency freq;
};

struct DriftEntry {
    std::string level;
    long replicas = 0;
    double max_energy_drift = 0.0;
    double max_momentum_drift = 0.0;
    double max_contact_angular_momentum_error = 0.0;
};

struct ChiSquareEntry {
    std::string label;
    ChiSquareReport result;
};

struct ModulusEntry {
    std::string level;
    ModulusTable table;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    Json metrics = Json::object();
};

struct ComparisonReport {
    std::string title;
    std::uint64_t seed = 0;
    long replicas = 0;
    Json params = Json::object();
    std::vector<KsEntry> ks;
    std::vector<AutocovEntry> autocov;
    std::vector<PathologyEntry> pathology;
    std::vector<DriftEntry> drift;
    std::vector<ChiSquareEntry> chi_square;
    std::vector<ModulusEntry> modulus;
    std::vector<CriterionResult> criteria;

    bool all_pass() const;
};

Json to_json(const WilsonInterval& w);
Json to_json(const CriterionResult& c);
Json to_json(const ComparisonReport& r);
std::string to_text(const ComparisonReport& r);
std::string criterion_line(const CriterionResult& c);  // "PASS [3] name: detail"

void write_autocov_csv(const AutocovEntry& e, std::ostream& out);
void write_modulus_csv(const ModulusEntry& e, std::ostream& out);

}  // namespace rigidgas
