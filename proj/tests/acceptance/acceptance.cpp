// Runs the acceptance criteria at full size and prints one line per criterion.
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "rigidgas/validation.hpp"

int main(int argc, char** argv) {
    using namespace rigidgas;
    CLI::App app{"acceptance suite"};
    SuiteOptions opts;
    bool fast = false;
    std::vector<int> only;
    std::string json_path;
    app.add_flag("--fast", fast, "reduced sample sizes");
    app.add_option("--only", only, "criterion ids to run")->delimiter(',');
    app.add_option("--seed", opts.seed, "base seed");
    app.add_option("--workers", opts.workers, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--json", json_path, "write results as JSON");
    CLI11_PARSE(app, argc, argv);
    opts.scale = fast ? SuiteScale::fast : SuiteScale::full;

    const auto results = run_suite(opts, only, [](const CriterionResult& r) {
        std::cout << criterion_line(r) << std::endl;
    });
    int failed = 0;
    Json all = Json::array();
    for (const auto& r : results) {
        failed += !r.pass;
        Json j = to_json(r);
        j["seconds"] = r.seconds;
        all.push_back(j);
    }
    if (!json_path.empty()) std::ofstream(json_path) << all.dump(2) << '\n';
    std::cout << (failed ? "FAILED: " : "ALL PASSED: ") << results.size() - failed << "/" << results.size()
              << " criteria passed" << std::endl;
    return failed ? 1 : 0;
}
