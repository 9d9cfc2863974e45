#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srm/io.hpp"
#include "srm/spectrum.hpp"

namespace srm::cli {

inline constexpr const char* kVersion = SRM_VERSION;

struct RunConfig {
    std::string command;               // eval | dual-check | infrep | convert | optimize
    std::vector<std::string> inputs;   // positional input paths
    std::optional<std::string> spectrum_path;
    std::optional<double> alpha;       // AVaR shorthand
    double tol = 1e-9;
    std::optional<std::string> out;
    std::uint64_t seed = 0;
    bool returns = false;
    bool oracle = false;
    double oracle_step = 1e-3;
    std::size_t knots = io::kDefaultKnots;
    bool order_knots = false;
    std::vector<double> lower;
    std::vector<double> upper;
};

nlohmann::json to_json(const RunConfig& c);

/// FNV-1a 64-bit hash of the canonical config JSON, as 16 hex digits.
std::string config_hash(const RunConfig& c);

struct Report {
    nlohmann::json body;
    std::string summary;  // one human-readable line for stderr
};

/// Resolves --spectrum / --alpha into a step spectrum.
StepSpectrum load_spectrum(const RunConfig& c);

Report cmd_eval(const RunConfig& c);
Report cmd_dual_check(const RunConfig& c);
Report cmd_infrep(const RunConfig& c);
Report cmd_convert(const RunConfig& c);
Report cmd_optimize(const RunConfig& c);

/// Dispatches on c.command and wraps the result with command, version and
/// config hash.
Report run(const RunConfig& c);

}  // namespace srm::cli
