#pragma once

// Config-driven scenario runner behind the gwphase command line tool.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gwphase/errors.hpp"

namespace gwphase::cli {

/// Malformed config: bad JSON, unknown keys, wrong types or ranges.
class ConfigError : public ContractViolation {
public:
    using ContractViolation::ContractViolation;
};

/// Unreadable config or unwritable output.
class IoError : public Error {
public:
    using Error::Error;
};

struct Resolution {
    std::size_t samples = 2001;  // loop samples
    std::size_t steps = 20;      // RK4 steps per unit time
    std::size_t grid = 128;      // surface intervals per direction, or ring points
};

struct RunConfig {
    std::string scenario;
    nlohmann::json params = nlohmann::json::object();
    Resolution resolution;
    std::string output_path;  // empty: standard output
    std::string format = "csv";
    bool timing = false;      // adds wall_time_s, which breaks byte-identical reruns
};

/// Flat JSON object; key order is the emitted column order.
using RunRecord = nlohmann::ordered_json;

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

/// Checks the scenario parameters without running anything.
void validate(const RunConfig& config);

std::vector<std::pair<std::string, std::string>> scenario_catalog();

/// Records in a fixed order for a given config.
std::vector<RunRecord> run(const RunConfig& config, unsigned threads = 1);

std::string render(const std::vector<RunRecord>& records, const std::string& format);
/// Writes render(...) to `path`, or to standard output when `path` is empty.
void emit(const std::vector<RunRecord>& records, const std::string& format, const std::string& path);

/// Worker budget from GWPHASE_THREADS, else the hardware concurrency.
unsigned thread_budget();

/// Machine-readable description of a numerical failure.
nlohmann::ordered_json diagnostic(const std::exception& e);

}  // namespace gwphase::cli
