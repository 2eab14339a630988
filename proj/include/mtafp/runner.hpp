#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mtafp/predictions.hpp"
#include "mtafp/variants.hpp"

namespace mtafp {

// Captured tool diagnostics are truncated to this many bytes.
constexpr std::size_t kDiagnosticsByteBudget = 16 * 1024;

struct SubprocessMode {
    // Must contain {input_fasta} and {output_file} exactly once each.
    std::string command_template;
    std::chrono::milliseconds timeout{std::chrono::seconds(60)};
    std::filesystem::path working_dir = ".";
    std::vector<std::string> env_allowlist = {"PATH"};
};

struct OfflineMode {
    // TSV manifest: record_id <TAB> prediction file path (relative paths
    // resolve against the manifest's directory).
    std::filesystem::path manifest_path;
};

struct ToolAdapter {
    std::string tool_id;
    std::variant<SubprocessMode, OfflineMode> mode;
    PredictionFormat prediction_format = PredictionFormat::PlainTSV;

    bool is_subprocess() const { return std::holds_alternative<SubprocessMode>(mode); }
    const SubprocessMode& subprocess() const { return std::get<SubprocessMode>(mode); }
    const OfflineMode& offline() const { return std::get<OfflineMode>(mode); }

    void validate() const; // placeholder arity, timeout > 0
};

struct RunOk {
    std::filesystem::path prediction_path;
    bool operator==(const RunOk&) const = default;
};
struct RunToolError {
    int exit_code = 0;
    std::string diagnostics;
    bool operator==(const RunToolError&) const = default;
};
struct RunTimeout {
    bool operator==(const RunTimeout&) const = default;
};

struct RunResult {
    std::string tool_id;
    std::string record_id;
    std::variant<RunOk, RunToolError, RunTimeout> status;

    bool ok() const { return std::holds_alternative<RunOk>(status); }
    bool timed_out() const { return std::holds_alternative<RunTimeout>(status); }
    const RunOk& as_ok() const { return std::get<RunOk>(status); }
    const RunToolError& as_error() const { return std::get<RunToolError>(status); }
};

// Low-level process launch with wall-clock timeout and output capture.
// The child runs in its own process group; on timeout the whole group is
// killed. Environment is restricted to the allow-list.
struct SpawnOutcome {
    int exit_code = -1;
    bool timed_out = false;
    std::string captured_output; // stdout+stderr, truncated to the budget
};
SpawnOutcome spawn_with_timeout(const std::string& command,
                                const std::filesystem::path& working_dir,
                                std::chrono::milliseconds timeout,
                                const std::vector<std::string>& env_allowlist);

// Runs one tool on one record. Subprocess mode writes the record to a
// single-record FASTA under out_dir, expands the template, enforces the
// timeout and validates that the output file exists and parses. Offline
// mode resolves the record through the manifest; a manifest miss becomes a
// ToolError with reason "missing-output" so it flows to Inconclusive
// downstream.
RunResult run_tool(const ToolAdapter& adapter, const ProteinRecord& record,
                   const std::filesystem::path& out_dir);

struct CampaignOptions {
    std::filesystem::path out_dir;
    std::size_t max_workers = 0; // 0 -> hardware concurrency
    bool cache = true;
};

using RunKey = std::pair<std::string, std::string>; // (tool_id, record_id)

struct CampaignRun {
    std::map<RunKey, RunResult> results;
    std::size_t subprocess_launches = 0; // cache hits do not launch
};

// Runs every adapter over every distinct record of the pairs (a canonical
// shared by several pairs runs once per tool). Prediction artifacts are
// cached under out_dir keyed by (tool, record, sequence digest); with the
// cache enabled an unchanged rerun launches no subprocesses. Individual
// failures are recorded per key and never abort the campaign. Work is
// spread over a bounded worker pool; the result map is deterministic
// regardless of completion order.
CampaignRun execute_campaign(const std::vector<TestCasePair>& pairs,
                             const std::vector<ToolAdapter>& adapters,
                             const CampaignOptions& options);

// The distinct records of a campaign: deduplicated sources first, then
// follow-ups, in deterministic id order. Throws ValidationError when one id
// maps to two different sequences.
std::vector<ProteinRecord> distinct_records(const std::vector<TestCasePair>& pairs);

// File-name-safe form of a record id ('|' -> "__").
std::string sanitize_record_id(const std::string& record_id);

} // namespace mtafp
