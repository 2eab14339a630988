#include "mtafp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mtafp {

using ordered_json = nlohmann::ordered_json;

double round_percentage(double pct) {
    return std::floor(pct * 10.0 + 0.5) / 10.0;
}

namespace {

std::string format_pct(double pct) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", pct);
    return buf;
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
    std::string quoted = "\"";
    for (char c : value) {
        if (c == '"') quoted += "\"\"";
        else quoted.push_back(c);
    }
    quoted.push_back('"');
    return quoted;
}

// Spreadsheet-style labels: A..Z, AA, AB, ...
std::string anonymous_label(std::size_t index) {
    std::string label;
    std::size_t n = index;
    while (true) {
        label.insert(label.begin(), static_cast<char>('A' + n % 26));
        if (n < 26) break;
        n = n / 26 - 1;
    }
    return label;
}

} // namespace

TestReport aggregate(const std::vector<MrVerdict>& verdicts, const std::vector<TestCasePair>& pairs,
                     const ReportMeta& meta) {
    std::map<std::string, std::pair<std::string, std::string>> pair_info; // id -> (protein, variant)
    for (const auto& pair : pairs)
        pair_info[pair.pair_id()] = {pair.source.id, pair.variant.variant_id};

    TestReport report;
    report.meta = meta;
    report.verdicts = verdicts;
    sort_verdicts(report.verdicts);

    std::set<std::tuple<std::string, std::string, Namespace>> seen;
    std::map<std::pair<std::string, Namespace>, VerdictCounts> variant_counts;

    for (const auto& v : report.verdicts) {
        if (!seen.insert({v.pair_id, v.tool_id, v.ns}).second)
            throw ValidationError("duplicate verdict key: (" + v.pair_id + ", " + v.tool_id + ", " +
                                  to_string(v.ns) + ")");
        auto info = pair_info.find(v.pair_id);
        if (info == pair_info.end())
            throw ValidationError("verdict references unknown pair: " + v.pair_id);
        const auto& [protein_id, variant_id] = info->second;

        auto bump = [&](VerdictCounts& c) {
            switch (v.outcome.kind) {
                case MrOutcomeKind::Pass: ++c.pass; break;
                case MrOutcomeKind::Fail: ++c.fail; break;
                case MrOutcomeKind::Inconclusive: ++c.inconclusive; break;
            }
        };
        bump(report.tool_totals[{v.tool_id, v.ns}]);
        bump(report.protein_totals[{v.tool_id, protein_id, v.ns}]);
        bump(variant_counts[{variant_id, v.ns}]);
    }

    for (const auto& [key, counts] : variant_counts) {
        std::size_t conclusive = counts.pass + counts.fail;
        report.variant_pass_pct[key] =
            conclusive == 0
                ? std::nullopt
                : std::optional<double>(round_percentage(
                      100.0 * static_cast<double>(counts.pass) / static_cast<double>(conclusive)));
    }
    return report;
}

std::optional<double> pass_percentage(const TestReport& report, const std::string& variant_id,
                                      Namespace ns) {
    bool variant_known = false;
    for (const auto& [key, pct] : report.variant_pass_pct)
        if (key.first == variant_id) variant_known = true;
    if (!variant_known) throw ValidationError("unknown variant: " + variant_id);
    auto it = report.variant_pass_pct.find({variant_id, ns});
    if (it == report.variant_pass_pct.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------
// Verdict TSV
// ---------------------------------------------------------------------------

std::string verdicts_to_tsv(const std::vector<MrVerdict>& verdicts) {
    std::vector<MrVerdict> ordered = verdicts;
    sort_verdicts(ordered);
    std::string out = "pair_id\ttool_id\tnamespace\toutcome\treason\n";
    for (const auto& v : ordered) {
        out += v.pair_id + "\t" + v.tool_id + "\t" + to_string(v.ns) + "\t" +
               to_string(v.outcome.kind) + "\t" + v.outcome.reason + "\n";
    }
    return out;
}

std::vector<MrVerdict> verdicts_from_tsv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::vector<MrVerdict> verdicts;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("pair_id\t", 0) == 0) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            if (tab == std::string::npos) {
                f.push_back(line.substr(start));
                break;
            }
            f.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        if (f.size() != 5)
            throw ParseError("verdicts TSV line " + std::to_string(line_no) +
                             ": expected 5 fields");
        MrVerdict v;
        v.pair_id = f[0];
        v.tool_id = f[1];
        v.ns = namespace_from_string(f[2]);
        v.outcome.kind = mr_outcome_kind_from_string(f[3]);
        v.outcome.reason = f[4];
        if (v.outcome.kind == MrOutcomeKind::Inconclusive && v.outcome.reason.empty())
            throw ParseError("verdicts TSV line " + std::to_string(line_no) +
                             ": inconclusive verdict without a reason");
        verdicts.push_back(std::move(v));
    }
    return verdicts;
}

// ---------------------------------------------------------------------------
// Emitters
// ---------------------------------------------------------------------------

namespace {

ordered_json report_to_json(const TestReport& report) {
    ordered_json j;
    j["meta"] = {{"ontology_digest", report.meta.ontology_digest},
                 {"threshold", report.meta.threshold},
                 {"generated_at", report.meta.generated_at}};

    auto& verdicts = j["verdicts"] = ordered_json::array();
    for (const auto& v : report.verdicts)
        verdicts.push_back({{"pair_id", v.pair_id},
                            {"tool_id", v.tool_id},
                            {"namespace", to_string(v.ns)},
                            {"outcome", to_string(v.outcome.kind)},
                            {"reason", v.outcome.reason}});

    auto& tool_totals = j["tool_totals"] = ordered_json::array();
    for (const auto& [key, c] : report.tool_totals)
        tool_totals.push_back({{"tool_id", key.first},
                               {"namespace", to_string(key.second)},
                               {"pass", c.pass},
                               {"fail", c.fail},
                               {"inconclusive", c.inconclusive}});

    auto& protein_totals = j["protein_totals"] = ordered_json::array();
    for (const auto& [key, c] : report.protein_totals)
        protein_totals.push_back({{"tool_id", std::get<0>(key)},
                                  {"protein_id", std::get<1>(key)},
                                  {"namespace", to_string(std::get<2>(key))},
                                  {"pass", c.pass},
                                  {"fail", c.fail},
                                  {"inconclusive", c.inconclusive}});

    auto& pct = j["variant_pass_pct"] = ordered_json::array();
    for (const auto& [key, value] : report.variant_pass_pct) {
        ordered_json row = {{"variant_id", key.first}, {"namespace", to_string(key.second)}};
        if (value)
            row["pct"] = *value;
        else
            row["pct"] = nullptr;
        pct.push_back(row);
    }
    return j;
}

std::string emit_csv(const TestReport& report) {
    std::string out;
    out += "# verdicts\n";
    out += "pair_id,tool_id,namespace,outcome,reason\n";
    for (const auto& v : report.verdicts)
        out += csv_field(v.pair_id) + "," + csv_field(v.tool_id) + "," + to_string(v.ns) + "," +
               to_string(v.outcome.kind) + "," + csv_field(v.outcome.reason) + "\n";

    out += "\n# tool_totals\n";
    out += "tool_id,namespace,pass,fail,inconclusive\n";
    for (const auto& [key, c] : report.tool_totals)
        out += csv_field(key.first) + "," + to_string(key.second) + "," +
               std::to_string(c.pass) + "," + std::to_string(c.fail) + "," +
               std::to_string(c.inconclusive) + "\n";

    out += "\n# protein_totals\n";
    out += "tool_id,protein_id,namespace,pass,fail,inconclusive\n";
    for (const auto& [key, c] : report.protein_totals)
        out += csv_field(std::get<0>(key)) + "," + csv_field(std::get<1>(key)) + "," +
               to_string(std::get<2>(key)) + "," + std::to_string(c.pass) + "," +
               std::to_string(c.fail) + "," + std::to_string(c.inconclusive) + "\n";

    out += "\n# variant_pass_pct\n";
    out += "variant_id,namespace,pass_pct\n";
    for (const auto& [key, value] : report.variant_pass_pct)
        out += csv_field(key.first) + "," + to_string(key.second) + "," +
               (value ? format_pct(*value) : "n/a") + "\n";
    return out;
}

std::string emit_markdown(const TestReport& report) {
    std::string out = "# Metamorphic campaign report\n\n";
    out += "- Ontology digest: `" +
           (report.meta.ontology_digest.empty() ? "(unset)" : report.meta.ontology_digest) + "`\n";
    {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%g", report.meta.threshold);
        out += "- Score threshold: " + std::string(buf) + "\n";
    }
    if (!report.meta.generated_at.empty())
        out += "- Generated: " + report.meta.generated_at + "\n";
    out += "- Verdicts: " + std::to_string(report.verdicts.size()) + "\n";

    std::set<Namespace> namespaces;
    for (const auto& [key, c] : report.tool_totals) namespaces.insert(key.second);

    for (Namespace ns : namespaces) {
        out += "\n## Per-tool results — " + display_name(ns) + "\n\n";
        out += "| Tool | Pass | Fail | Inconclusive |\n";
        out += "|------|-----:|-----:|-------------:|\n";
        for (const auto& [key, c] : report.tool_totals) {
            if (key.second != ns) continue;
            out += "| " + key.first + " | " + std::to_string(c.pass) + " | " +
                   std::to_string(c.fail) + " | " + std::to_string(c.inconclusive) + " |\n";
        }
    }

    std::set<std::string> proteins;
    for (const auto& [key, c] : report.protein_totals) proteins.insert(std::get<1>(key));
    if (!proteins.empty()) {
        out += "\n## Per-protein results\n\n";
        out += "| Tool | Protein | Namespace | Pass | Fail | Inconclusive |\n";
        out += "|------|---------|-----------|-----:|-----:|-------------:|\n";
        for (const auto& [key, c] : report.protein_totals)
            out += "| " + std::get<0>(key) + " | " + std::get<1>(key) + " | " +
                   display_name(std::get<2>(key)) + " | " + std::to_string(c.pass) + " | " +
                   std::to_string(c.fail) + " | " + std::to_string(c.inconclusive) + " |\n";
    }

    std::set<std::string> variants;
    for (const auto& [key, value] : report.variant_pass_pct) variants.insert(key.first);
    if (!variants.empty()) {
        out += "\n## Per-variant pass percentage (tools passing, of conclusive verdicts)\n\n";
        out += "| Variant |";
        for (Namespace ns : namespaces) out += " " + display_name(ns) + " |";
        out += "\n|---------|";
        for (std::size_t i = 0; i < namespaces.size(); ++i) out += "---:|";
        out += "\n";
        for (const auto& variant : variants) {
            out += "| " + variant + " |";
            for (Namespace ns : namespaces) {
                auto it = report.variant_pass_pct.find({variant, ns});
                if (it == report.variant_pass_pct.end() || !it->second)
                    out += " n/a |";
                else
                    out += " " + format_pct(*it->second) + "% |";
            }
            out += "\n";
        }
    }
    return out;
}

} // namespace

std::string emit(const TestReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json: return report_to_json(report).dump(2) + "\n";
        case ReportFormat::Csv: return emit_csv(report);
        case ReportFormat::Markdown: return emit_markdown(report);
    }
    throw Error("unknown report format");
}

TestReport report_from_json(std::string_view json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid report JSON: ") + e.what());
    }
    TestReport report;
    const auto& meta = j.at("meta");
    report.meta.ontology_digest = meta.at("ontology_digest").get<std::string>();
    report.meta.threshold = meta.at("threshold").get<double>();
    report.meta.generated_at = meta.at("generated_at").get<std::string>();

    for (const auto& row : j.at("verdicts")) {
        MrVerdict v;
        v.pair_id = row.at("pair_id").get<std::string>();
        v.tool_id = row.at("tool_id").get<std::string>();
        v.ns = namespace_from_string(row.at("namespace").get<std::string>());
        v.outcome.kind = mr_outcome_kind_from_string(row.at("outcome").get<std::string>());
        v.outcome.reason = row.at("reason").get<std::string>();
        report.verdicts.push_back(std::move(v));
    }
    for (const auto& row : j.at("tool_totals")) {
        VerdictCounts c{row.at("pass").get<std::size_t>(), row.at("fail").get<std::size_t>(),
                        row.at("inconclusive").get<std::size_t>()};
        report.tool_totals[{row.at("tool_id").get<std::string>(),
                            namespace_from_string(row.at("namespace").get<std::string>())}] = c;
    }
    for (const auto& row : j.at("protein_totals")) {
        VerdictCounts c{row.at("pass").get<std::size_t>(), row.at("fail").get<std::size_t>(),
                        row.at("inconclusive").get<std::size_t>()};
        report.protein_totals[{row.at("tool_id").get<std::string>(),
                               row.at("protein_id").get<std::string>(),
                               namespace_from_string(row.at("namespace").get<std::string>())}] = c;
    }
    for (const auto& row : j.at("variant_pass_pct")) {
        std::optional<double> pct;
        if (!row.at("pct").is_null()) pct = row.at("pct").get<double>();
        report.variant_pass_pct[{row.at("variant_id").get<std::string>(),
                                 namespace_from_string(row.at("namespace").get<std::string>())}] =
            pct;
    }
    return report;
}

TestReport anonymize_tools(const TestReport& report, const std::vector<std::string>& tool_order) {
    std::map<std::string, std::string> relabel;
    for (const auto& tool : tool_order)
        if (!relabel.count(tool)) relabel[tool] = anonymous_label(relabel.size());
    for (const auto& v : report.verdicts)
        if (!relabel.count(v.tool_id))
            relabel[v.tool_id] = anonymous_label(relabel.size());
    for (const auto& [key, c] : report.tool_totals)
        if (!relabel.count(key.first)) relabel[key.first] = anonymous_label(relabel.size());

    TestReport out;
    out.meta = report.meta;
    out.verdicts = report.verdicts;
    for (auto& v : out.verdicts) v.tool_id = relabel.at(v.tool_id);
    sort_verdicts(out.verdicts);
    for (const auto& [key, c] : report.tool_totals)
        out.tool_totals[{relabel.at(key.first), key.second}] = c;
    for (const auto& [key, c] : report.protein_totals)
        out.protein_totals[{relabel.at(std::get<0>(key)), std::get<1>(key), std::get<2>(key)}] = c;
    out.variant_pass_pct = report.variant_pass_pct;
    return out;
}

} // namespace mtafp
