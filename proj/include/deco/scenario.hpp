#ifndef DECO_SCENARIO_HPP
#define DECO_SCENARIO_HPP

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>

namespace deco {

struct run_options {
    std::filesystem::path out_dir = "out";
    std::optional<double> tolerance;        // overrides tolerances.compare
    std::optional<std::uint64_t> seed;      // overrides the scenario seed
    int threads = 0;                        // 0 = runtime default
};

/// Validates the scenario without executing it. Throws std::invalid_argument
/// with a JSON-pointer path to the offending field.
void validate_scenario(const nlohmann::ordered_json& scenario);

/// Executes one scenario: writes the command's artifacts plus summary.json
/// into out_dir. Returns the process exit code: 0 success, 1 input error,
/// 2 assertion-type failure (bound violation, oracle mismatch beyond
/// tolerance). Diagnostics go to `diag`.
int run_scenario(const nlohmann::ordered_json& scenario, const run_options& opt,
                 std::ostream& diag);

} // namespace deco

#endif
