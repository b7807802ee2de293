#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dgmorl/curriculum.hpp"
#include "dgmorl/demo_gen.hpp"

namespace dgmorl {

enum class EnvKind { dst, lock };

enum class BaselineKind { dg_morl, epsilon_greedy_0init };

/// Where the initial demonstrations come from: generated built-ins
/// ("builtin:<quality>:<count>", count may be "all") or a saved repository
/// file ("file:<path>").
struct DemoSource {
    enum class Kind { builtin, file };

    Kind kind = Kind::builtin;
    DemoQuality quality = DemoQuality::optimal;
    std::size_t count = 0; // 0 means every available outcome
    std::string path;
};

DemoSource parse_demo_source(const std::string& text);
std::string demo_source_string(const DemoSource& src);

struct EnvConfig {
    EnvKind kind = EnvKind::dst;
    std::string map = "builtin"; // dst: builtin or a map file path
    int horizon = 100;
    double gamma = 0.99;
    int action_o1 = 1; // lock action roles
    int action_o2 = 2;
    int action_bal = 0;
};

/// Full description of one experiment: environment, curriculum and learner
/// settings, plus the run block (seeds, demo source, baseline, output root).
struct RunConfig {
    EnvConfig env;
    CurriculumConfig curriculum;
    std::vector<std::uint64_t> seeds{2, 7, 15, 42, 78};
    DemoSource demos;
    BaselineKind baseline = BaselineKind::dg_morl;
    std::string output = "out";
    std::vector<std::string> overrides; // applied environment overrides, for the snapshot
};

/// Parses the INI-style config text. Unknown sections or keys, malformed
/// values and out-of-range settings all raise ConfigError with the offending
/// line number. After the file, DGMORL_<SECTION>_<KEY> environment variables
/// override single keys; applied overrides are recorded in the result.
RunConfig parse_run_config(const std::string& text);

/// Loads and parses a config file; a relative [env] map path is resolved
/// against the config file's directory.
RunConfig load_run_config(const std::string& path);

/// Canonical snapshot of every setting, fixed key order, 17 significant
/// digits. Parsing the snapshot reproduces the config.
std::string serialize_run_config(const RunConfig& cfg);

} // namespace dgmorl
