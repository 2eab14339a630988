#include "mtafp/campaign.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mtafp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path resolve_relative(const fs::path& base_dir, const fs::path& p) {
    return p.is_absolute() ? p : base_dir / p;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

} // namespace

CampaignConfig CampaignConfig::load(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open campaign config: " + path.string());
    json j;
    try {
        j = json::parse(in, nullptr, /*allow_exceptions=*/true, /*ignore_comments=*/true);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    const fs::path base_dir = path.parent_path();

    CampaignConfig config;
    try {
        if (j.contains("ontology")) {
            if (j["ontology"].is_array())
                for (const auto& p : j["ontology"])
                    config.ontology_paths.push_back(
                        resolve_relative(base_dir, p.get<std::string>()));
            else
                config.ontology_paths.push_back(
                    resolve_relative(base_dir, j["ontology"].get<std::string>()));
        }
        config.threshold = j.value("threshold", 0.0);
        if (config.threshold < 0.0 || config.threshold > 1.0)
            throw ValidationError("threshold must lie in [0,1]");
        if (j.contains("namespaces")) {
            config.namespaces.clear();
            for (const auto& ns : j["namespaces"])
                config.namespaces.push_back(namespace_from_string(ns.get<std::string>()));
        }
        if (j.contains("out_dir"))
            config.out_dir = resolve_relative(base_dir, j["out_dir"].get<std::string>());
        config.max_workers = j.value("max_workers", std::size_t{0});
        config.cache = j.value("cache", true);

        for (const auto& tool : j.value("tools", json::array())) {
            ToolAdapter adapter;
            adapter.tool_id = tool.at("tool_id").get<std::string>();
            adapter.prediction_format =
                prediction_format_from_string(tool.value("format", "plain_tsv"));
            if (tool.contains("subprocess") == tool.contains("offline"))
                throw ValidationError("tool " + adapter.tool_id +
                                      ": exactly one of subprocess/offline is required");
            if (tool.contains("subprocess")) {
                const auto& sp = tool["subprocess"];
                SubprocessMode mode;
                mode.command_template = sp.at("command").get<std::string>();
                double seconds = sp.value("timeout_seconds", 60.0);
                mode.timeout = std::chrono::milliseconds(
                    static_cast<std::int64_t>(seconds * 1000.0));
                mode.working_dir =
                    resolve_relative(base_dir, sp.value("working_dir", std::string(".")));
                if (sp.contains("env")) {
                    mode.env_allowlist.clear();
                    for (const auto& e : sp["env"])
                        mode.env_allowlist.push_back(e.get<std::string>());
                }
                adapter.mode = mode;
            } else {
                OfflineMode mode;
                mode.manifest_path =
                    resolve_relative(base_dir, tool.at("offline").at("manifest").get<std::string>());
                adapter.mode = mode;
            }
            adapter.validate();
            config.tools.push_back(std::move(adapter));
        }
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }

    std::set<std::string> ids;
    for (const auto& t : config.tools)
        if (!ids.insert(t.tool_id).second)
            throw ValidationError("duplicate tool_id in config: " + t.tool_id);
    return config;
}

// ---------------------------------------------------------------------------
// Pairs manifest
// ---------------------------------------------------------------------------

std::string pairs_to_tsv(const std::vector<TestCasePair>& pairs) {
    std::string out = "pair_id\tprotein_id\tvariant_id\tsource_id\tfollow_up_id\tcategory\n";
    for (const auto& pair : pairs)
        out += pair.pair_id() + "\t" + pair.source.id + "\t" + pair.variant.variant_id + "\t" +
               pair.source.id + "\t" + pair.follow_up.id + "\t" +
               to_string(pair.variant.category) + "\n";
    return out;
}

std::vector<PairRow> pair_rows_from_tsv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::vector<PairRow> rows;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("pair_id\t", 0) == 0) continue;
        auto f = split_tabs(line);
        if (f.size() != 6)
            throw ParseError("pairs TSV line " + std::to_string(line_no) + ": expected 6 fields");
        rows.push_back({f[0], f[1], f[2], f[3], f[4], f[5]});
    }
    return rows;
}

std::vector<TestCasePair> pairs_from_rows(const std::vector<PairRow>& rows,
                                          const std::vector<ProteinRecord>& records) {
    std::map<std::string, const ProteinRecord*> by_id;
    for (const auto& rec : records) by_id[rec.id] = &rec;

    std::vector<TestCasePair> pairs;
    for (const auto& row : rows) {
        auto src = by_id.find(row.source_id);
        auto fup = by_id.find(row.follow_up_id);
        if (src == by_id.end())
            throw ValidationError("pair " + row.pair_id + ": source record " + row.source_id +
                                  " not found in records");
        if (fup == by_id.end())
            throw ValidationError("pair " + row.pair_id + ": follow-up record " +
                                  row.follow_up_id + " not found in records");
        TestCasePair pair;
        pair.source = *src->second;
        pair.follow_up = *fup->second;
        if (pair.source.sequence == pair.follow_up.sequence)
            throw ValidationError("pair " + row.pair_id +
                                  ": source and follow-up sequences are identical");
        pair.variant.variant_id = row.variant_id;
        pair.variant.protein_id = row.protein_id;
        pair.variant.category = variant_category_from_string(row.category);
        // Kind is irrelevant downstream of generation; keep the sequences.
        pair.variant.kind = FullSequence{row.variant_id, pair.follow_up.sequence};
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

// ---------------------------------------------------------------------------
// Run results
// ---------------------------------------------------------------------------

namespace {

std::string sanitize_field(std::string s) {
    for (char& c : s)
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    return s;
}

} // namespace

std::string runs_to_tsv(const CampaignRun& run) {
    std::string out = "tool_id\trecord_id\tstatus\tprediction_path\texit_code\tdetail\n";
    for (const auto& [key, result] : run.results) {
        std::string status, path, exit_code, detail;
        if (result.ok()) {
            status = "ok";
            path = result.as_ok().prediction_path.string();
            exit_code = "0";
        } else if (result.timed_out()) {
            status = "timeout";
            exit_code = "";
        } else {
            status = "tool-error";
            exit_code = std::to_string(result.as_error().exit_code);
            detail = sanitize_field(result.as_error().diagnostics.substr(0, 512));
        }
        out += key.first + "\t" + key.second + "\t" + status + "\t" + path + "\t" + exit_code +
               "\t" + detail + "\n";
    }
    return out;
}

std::map<RunKey, RunResult> runs_from_tsv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::map<RunKey, RunResult> runs;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("tool_id\t", 0) == 0) continue;
        auto f = split_tabs(line);
        if (f.size() != 6)
            throw ParseError("runs TSV line " + std::to_string(line_no) + ": expected 6 fields");
        RunResult result;
        result.tool_id = f[0];
        result.record_id = f[1];
        if (f[2] == "ok")
            result.status = RunOk{fs::path(f[3])};
        else if (f[2] == "timeout")
            result.status = RunTimeout{};
        else if (f[2] == "tool-error")
            result.status = RunToolError{f[4].empty() ? 0 : std::stoi(f[4]), f[5]};
        else
            throw ParseError("runs TSV line " + std::to_string(line_no) + ": unknown status '" +
                             f[2] + "'");
        runs.emplace(RunKey{result.tool_id, result.record_id}, std::move(result));
    }
    return runs;
}

// ---------------------------------------------------------------------------
// Verdict computation
// ---------------------------------------------------------------------------

std::vector<MrVerdict> check_campaign(const std::vector<TestCasePair>& pairs,
                                      const std::vector<ToolAdapter>& adapters,
                                      const std::map<RunKey, RunResult>& runs,
                                      const Ontology& onto, double threshold,
                                      const std::vector<Namespace>& namespaces,
                                      Warnings* warnings) {
    // Prediction formats vary per tool.
    std::map<std::string, PredictionFormat> formats;
    for (const auto& adapter : adapters) formats[adapter.tool_id] = adapter.prediction_format;

    // Annotation sets are per (tool, record); a record shared by several
    // pairs is loaded once.
    std::map<RunKey, std::optional<AnnotationSet>> cache;
    auto annotations_for = [&](const std::string& tool_id,
                               const std::string& record_id) -> const std::optional<AnnotationSet>& {
        RunKey key{tool_id, record_id};
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;

        std::optional<AnnotationSet> loaded;
        auto run_it = runs.find(key);
        if (run_it != runs.end() && run_it->second.ok()) {
            try {
                auto preds =
                    parse_predictions_file(run_it->second.as_ok().prediction_path.string(),
                                           formats.at(tool_id), warnings);
                loaded = to_annotation_set(preds, onto, record_id, threshold, warnings);
            } catch (const Error& e) {
                warn(warnings, tool_id + "/" + record_id + ": " + e.what());
            }
        }
        return cache.emplace(key, std::move(loaded)).first->second;
    };

    std::vector<MrVerdict> verdicts;
    for (const auto& adapter : adapters) {
        for (const auto& pair : pairs) {
            const auto& source = annotations_for(adapter.tool_id, pair.source.id);
            const auto& follow_up = annotations_for(adapter.tool_id, pair.follow_up.id);
            auto pair_verdicts =
                evaluate_pair(pair, adapter.tool_id, source, follow_up, namespaces);
            verdicts.insert(verdicts.end(), pair_verdicts.begin(), pair_verdicts.end());
        }
    }
    sort_verdicts(verdicts);
    return verdicts;
}

} // namespace mtafp
