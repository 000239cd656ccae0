// Batch front-end: read a JSON scenario, run it, emit CSV/JSON artifacts and
// a summary with a machine-readable outcome.

#include "deco/scenario.hpp"
#include "deco/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <clocale>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");

    CLI::App app{"decoherence model toolbox"};
    app.set_version_flag("--version", std::string(deco::version));

    std::string scenario_path;
    deco::run_options opt;
    double tolerance = -1.0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    std::string out_dir = "out";

    app.add_option("--scenario", scenario_path, "path to the scenario JSON")->required();
    app.add_option("--out", out_dir, "output directory (default: out)");
    app.add_option("--tolerance", tolerance, "override the comparison tolerance");
    auto* seed_opt = app.add_option("--seed", seed, "override the scenario RNG seed");
    app.add_option("--threads", threads, "cap the number of worker threads");

    CLI11_PARSE(app, argc, argv);
    seed_set = seed_opt->count() > 0;

    std::ifstream in(scenario_path);
    if (!in) {
        std::cerr << "error: cannot open scenario file " << scenario_path << "\n";
        return 1;
    }
    nlohmann::ordered_json scenario;
    try {
        in >> scenario;
    } catch (const std::exception& e) {
        std::cerr << "error: scenario is not valid JSON: " << e.what() << "\n";
        return 1;
    }

    opt.out_dir = out_dir;
    if (tolerance > 0.0) opt.tolerance = tolerance;
    if (seed_set) opt.seed = seed;
    opt.threads = threads;

    return deco::run_scenario(scenario, opt, std::cerr);
}
