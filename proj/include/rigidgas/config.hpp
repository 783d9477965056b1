#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rigidgas/md_engine.hpp"
#include "rigidgas/ou.hpp"
#include "rigidgas/report.hpp"

namespace rigidgas {

struct RunConfig {
    std::string command;
    int N = 500;
    double alpha = 0.1;
    double beta = 1.0;
    double eta = 0.1;
    std::optional<double> eps;  // filled with 1/N by validation
    std::optional<double> inertia;
    BodySpec body = BodySpec::disk(1.0);
    RunMode mode = RunMode::plain;
    OUVariant ou_variant = OUVariant::generator;
    double T = 5.0;
    double sample_dt = 0.1;
    double window = 0.5;  // increment window for comparisons
    long replicas = 1;
    std::uint64_t seed = 0;
    std::string out = "out";
    int workers = 1;
    bool fast = false;          // validate: reduced suite
    bool trajectories = true;   // write trajectory CSVs

    bool operator==(const RunConfig&) const = default;

    SimParams sim_params() const;
};

// Builds and validates a config; unknown keys and bad values raise
// ConfigError naming the field.
RunConfig config_from_json(const Json& j);
Json to_json(const RunConfig& c);

Json body_to_json(const BodySpec& b);
BodySpec body_from_json(const Json& j);

}  // namespace rigidgas
