#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gsr/expression.hpp"
#include "gsr/gp.hpp"
#include "gsr/recovery.hpp"

namespace gsr::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::vector<std::string> benchmarks;
    std::optional<std::string> suite;
    int runs = 1;
    std::optional<std::uint64_t> seed;
    GpConfig gp;
    bool ablation = false;
    std::filesystem::path out = "gsr-out";
    int workers = 1;
};

// Flat "key = value" lines. '#' starts a comment. Throws ConfigError.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

// Applies one setting to a RunConfig. Keys are the GpConfig field names plus
// benchmark, suite, runs, seed, out, workers and ablation. Throws ConfigError
// on an unknown key or a value of the wrong type.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

// Seeds used by a suite: the given seed onwards, or 0..runs-1.
std::vector<std::uint64_t> run_seeds(const RunConfig& cfg);

nlohmann::json record_to_json(const RunRecord& r);
std::string suite_csv_header(bool ablation);
std::string suite_csv_row(const SuiteReport& gsr, const SuiteReport* sgsr);

struct RunOutput {
    RunRecord record;
    std::string trace_jsonl;
};

RunOutput execute_run(const std::string& benchmark, std::uint64_t seed, const GpConfig& gp, bool sgsr);

// Writes runs.jsonl, expressions/ and traces/ under cfg.out.
int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err);
// Adds summary.csv with one row per benchmark.
int cmd_suite(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Reads "g(y) = f(x)" text and checks it against a benchmark. Throws
// std::invalid_argument for malformed or degenerate relations.
EquivalenceReport verify_relation(const std::string& text, const std::string& benchmark, std::uint64_t seed = 0);
int cmd_verify(const std::filesystem::path& file, const std::string& benchmark, std::ostream& out, std::ostream& err);

nlohmann::json registry_json();

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace gsr::cli
