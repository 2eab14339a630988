#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mtafp/mr_engine.hpp"
#include "mtafp/runner.hpp"

namespace mtafp {

// Campaign configuration file (JSON):
//
//   {
//     "ontology": ["data/go_fixture.obo", "data/go_overlay.obo"],
//     "threshold": 0.0,
//     "namespaces": ["molecular_function", "biological_process"],
//     "out_dir": "out",
//     "max_workers": 4,
//     "cache": true,
//     "tools": [
//       { "tool_id": "mytool", "format": "plain_tsv",
//         "subprocess": { "command": "mytool {input_fasta} {output_file}",
//                         "timeout_seconds": 60, "working_dir": ".",
//                         "env": ["PATH"] } },
//       { "tool_id": "archived", "format": "cafa",
//         "offline": { "manifest": "archived/manifest.tsv" } }
//     ]
//   }
//
// "ontology" accepts a single path or a list layered in order. Relative
// paths resolve against the config file's directory.
struct CampaignConfig {
    std::vector<std::filesystem::path> ontology_paths;
    double threshold = 0.0;
    std::vector<Namespace> namespaces = {Namespace::MolecularFunction,
                                         Namespace::BiologicalProcess};
    std::filesystem::path out_dir = "out";
    std::size_t max_workers = 0;
    bool cache = true;
    std::vector<ToolAdapter> tools;

    static CampaignConfig load(const std::filesystem::path& path);
};

// Pairs manifest TSV written by `generate` and consumed by check/report:
// pair_id, protein_id, variant_id, source_id, follow_up_id, category.
std::string pairs_to_tsv(const std::vector<TestCasePair>& pairs);

struct PairRow {
    std::string pair_id;
    std::string protein_id;
    std::string variant_id;
    std::string source_id;
    std::string follow_up_id;
    std::string category;
};
std::vector<PairRow> pair_rows_from_tsv(std::string_view text);

// Reconstructs TestCasePairs from a pairs manifest plus the generated
// records (sequence content comes from the records file).
std::vector<TestCasePair> pairs_from_rows(const std::vector<PairRow>& rows,
                                          const std::vector<ProteinRecord>& records);

// Run-results TSV written by `run` and consumed by `check`:
// tool_id, record_id, status (ok|tool-error|timeout), prediction_path,
// exit_code, detail.
std::string runs_to_tsv(const CampaignRun& run);
std::map<RunKey, RunResult> runs_from_tsv(std::string_view text);

// Evaluates every (pair, tool) against the run results, loading and
// thresholding prediction files through the ontology. Returns verdicts in
// canonical order.
std::vector<MrVerdict> check_campaign(const std::vector<TestCasePair>& pairs,
                                      const std::vector<ToolAdapter>& adapters,
                                      const std::map<RunKey, RunResult>& runs,
                                      const Ontology& onto, double threshold,
                                      const std::vector<Namespace>& namespaces,
                                      Warnings* warnings = nullptr);

} // namespace mtafp
