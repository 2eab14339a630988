#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "mtafp/mr_engine.hpp"

namespace mtafp {

struct VerdictCounts {
    std::size_t pass = 0;
    std::size_t fail = 0;
    std::size_t inconclusive = 0;

    std::size_t total() const { return pass + fail + inconclusive; }
    bool operator==(const VerdictCounts&) const = default;
};

struct ReportMeta {
    std::string ontology_digest; // hex digest of the pinned snapshot
    double threshold = 0.0;
    std::string generated_at; // optional timestamp; empty keeps output reproducible

    bool operator==(const ReportMeta&) const = default;
};

// Aggregated campaign results: per-tool tallies, per-protein breakdowns and
// per-variant pass percentages. Inconclusive verdicts are counted but
// excluded from percentage denominators.
struct TestReport {
    ReportMeta meta;
    std::vector<MrVerdict> verdicts; // canonical (pair, tool, namespace) order

    std::map<std::pair<std::string, Namespace>, VerdictCounts> tool_totals;
    std::map<std::tuple<std::string, std::string, Namespace>, VerdictCounts> protein_totals;
    // Percentage rounded to one decimal (half-up); nullopt when no
    // conclusive verdict exists ("n/a").
    std::map<std::pair<std::string, Namespace>, std::optional<double>> variant_pass_pct;

    bool operator==(const TestReport&) const = default;
};

// Aggregates verdicts against the campaign's pairs. Duplicate
// (pair, tool, namespace) keys and verdicts for unknown pairs raise
// ValidationError. Output is independent of the verdicts' input order.
TestReport aggregate(const std::vector<MrVerdict>& verdicts, const std::vector<TestCasePair>& pairs,
                     const ReportMeta& meta = {});

// 100 * pass / (pass + fail) across tools for one variant and namespace,
// rounded half-up to one decimal; nullopt means "n/a". Unknown variant ->
// ValidationError.
std::optional<double> pass_percentage(const TestReport& report, const std::string& variant_id,
                                      Namespace ns);

double round_percentage(double pct); // one decimal, round-half-up

enum class ReportFormat { Json, Csv, Markdown };

// Deterministic serialization: the same report always emits identical
// bytes. JSON carries the full structure and round-trips through
// report_from_json; CSV emits the verdict rows plus the three totals
// tables; Markdown is the human summary.
std::string emit(const TestReport& report, ReportFormat format);
TestReport report_from_json(std::string_view json_text);

// Relabels tools "A", "B", ... mirroring anonymized presentation. Labels
// follow tool_order (the caller's input order); tools absent from it are
// labelled afterwards in order of first appearance in the report.
TestReport anonymize_tools(const TestReport& report,
                           const std::vector<std::string>& tool_order = {});

// Verdict TSV (pair_id, tool_id, namespace, outcome, reason) — the
// check/report interchange format.
std::string verdicts_to_tsv(const std::vector<MrVerdict>& verdicts);
std::vector<MrVerdict> verdicts_from_tsv(std::string_view text);

} // namespace mtafp
