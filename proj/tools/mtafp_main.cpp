// mtafp — metamorphic-testing harness for protein function prediction tools.
//
// Subcommands:
//   generate      build source/follow-up FASTA records and the pairs manifest
//   run           execute the configured tools over the generated records
//   check         evaluate the metamorphic relation and write verdicts
//   report        aggregate verdicts into report.{json,csv,md}
//   mock-predict  (hidden) deterministic mock predictor used by the test bench
//
// Exit codes: 0 success, 1 configuration/input error, 2 at least one Fail
// verdict (CI gate; disable with --exit-zero).

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "mtafp/campaign.hpp"
#include "mtafp/digest.hpp"
#include "mtafp/mockbench.hpp"
#include "mtafp/mr_engine.hpp"
#include "mtafp/ontology.hpp"
#include "mtafp/report.hpp"
#include "mtafp/runner.hpp"
#include "mtafp/sequence.hpp"
#include "mtafp/variants.hpp"

namespace fs = std::filesystem;
using namespace mtafp;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spill(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path.string());
    out << content;
}

void print_warnings(const Warnings& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::string now_utc() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

struct GenerateArgs {
    std::vector<std::string> canonical_fastas;
    std::string variants_tsv;
    std::string out_dir = "out";
    bool strict = false;
};

int cmd_generate(const GenerateArgs& args) {
    std::vector<ProteinRecord> canonicals;
    for (const auto& path : args.canonical_fastas) {
        auto records = read_fasta_file(path, args.strict);
        canonicals.insert(canonicals.end(), records.begin(), records.end());
    }
    auto specs = load_variants_tsv(args.variants_tsv);
    auto pairs = generate_pairs(canonicals, specs);

    fs::path out_dir = args.out_dir;
    fs::create_directories(out_dir / "records");
    auto records = distinct_records(pairs);
    write_fasta_file((out_dir / "records.fasta").string(), records);
    for (const auto& rec : records)
        write_fasta_file((out_dir / "records" / (sanitize_record_id(rec.id) + ".fasta")).string(),
                         {rec});
    spill(out_dir / "pairs.tsv", pairs_to_tsv(pairs));

    std::cout << "generated " << pairs.size() << " test-case pairs over " << records.size()
              << " records -> " << out_dir.string() << "\n";
    return 0;
}

struct RunArgs {
    std::string config_path;
    std::string records_fasta;
    std::string pairs_tsv;
};

int cmd_run(const RunArgs& args) {
    auto config = CampaignConfig::load(args.config_path);
    if (config.tools.empty()) {
        std::cerr << "error: config lists no tools\n";
        return 1;
    }
    auto records = read_fasta_file(args.records_fasta);
    auto rows = pair_rows_from_tsv(slurp(args.pairs_tsv));
    auto pairs = pairs_from_rows(rows, records);

    CampaignOptions options{config.out_dir, config.max_workers, config.cache};
    CampaignRun run = execute_campaign(pairs, config.tools, options);
    spill(config.out_dir / "runs.tsv", runs_to_tsv(run));

    std::size_t ok = 0, errors = 0, timeouts = 0;
    for (const auto& [key, result] : run.results) {
        if (result.ok())
            ++ok;
        else if (result.timed_out())
            ++timeouts;
        else
            ++errors;
    }
    std::cout << "ran " << config.tools.size() << " tool(s) x " << records.size() << " record(s): "
              << ok << " ok, " << errors << " tool-error, " << timeouts << " timeout ("
              << run.subprocess_launches << " subprocess launches)\n";
    return 0;
}

struct CheckArgs {
    std::string config_path;
    std::string records_fasta;
    std::string pairs_tsv;
    std::string runs_tsv;
    bool exit_zero = false;
    bool include_cc = false;
};

int cmd_check(const CheckArgs& args) {
    auto config = CampaignConfig::load(args.config_path);
    if (config.ontology_paths.empty()) {
        std::cerr << "error: config has no ontology paths\n";
        return 1;
    }
    std::vector<std::string> onto_paths;
    for (const auto& p : config.ontology_paths) onto_paths.push_back(p.string());
    Ontology onto = Ontology::parse_obo_files(onto_paths);

    auto records = read_fasta_file(args.records_fasta);
    auto pairs = pairs_from_rows(pair_rows_from_tsv(slurp(args.pairs_tsv)), records);
    fs::path runs_path =
        args.runs_tsv.empty() ? config.out_dir / "runs.tsv" : fs::path(args.runs_tsv);
    auto runs = runs_from_tsv(slurp(runs_path));

    auto namespaces = config.namespaces;
    if (args.include_cc &&
        std::find(namespaces.begin(), namespaces.end(), Namespace::CellularComponent) ==
            namespaces.end())
        namespaces.push_back(Namespace::CellularComponent);

    Warnings warnings;
    auto verdicts =
        check_campaign(pairs, config.tools, runs, onto, config.threshold, namespaces, &warnings);
    print_warnings(warnings);
    spill(config.out_dir / "verdicts.tsv", verdicts_to_tsv(verdicts));

    std::size_t pass = 0, fail = 0, inconclusive = 0;
    for (const auto& v : verdicts) {
        switch (v.outcome.kind) {
            case MrOutcomeKind::Pass: ++pass; break;
            case MrOutcomeKind::Fail: ++fail; break;
            case MrOutcomeKind::Inconclusive: ++inconclusive; break;
        }
    }
    std::cout << "verdicts: " << pass << " pass, " << fail << " fail, " << inconclusive
              << " inconclusive -> " << (config.out_dir / "verdicts.tsv").string() << "\n";
    if (fail > 0 && !args.exit_zero) return 2;
    return 0;
}

struct ReportArgs {
    std::string config_path;
    std::string pairs_tsv;
    std::string records_fasta;
    std::string verdicts_tsv;
    std::string format = "all";
    bool anonymize = false;
    bool timestamp = false;
    bool exit_zero = false;
};

int cmd_report(const ReportArgs& args) {
    auto config = CampaignConfig::load(args.config_path);
    auto records = read_fasta_file(args.records_fasta);
    auto pairs = pairs_from_rows(pair_rows_from_tsv(slurp(args.pairs_tsv)), records);
    fs::path verdicts_path =
        args.verdicts_tsv.empty() ? config.out_dir / "verdicts.tsv" : fs::path(args.verdicts_tsv);
    auto verdicts = verdicts_from_tsv(slurp(verdicts_path));

    ReportMeta meta;
    meta.threshold = config.threshold;
    if (!config.ontology_paths.empty()) {
        std::vector<std::string> onto_paths;
        for (const auto& p : config.ontology_paths) onto_paths.push_back(p.string());
        meta.ontology_digest = to_hex(Ontology::parse_obo_files(onto_paths).source_digest());
    }
    if (args.timestamp) meta.generated_at = now_utc();

    TestReport report = aggregate(verdicts, pairs, meta);
    if (args.anonymize) {
        // Input order: first appearance in the verdict file as supplied.
        std::vector<std::string> tool_order;
        for (const auto& v : verdicts)
            if (std::find(tool_order.begin(), tool_order.end(), v.tool_id) == tool_order.end())
                tool_order.push_back(v.tool_id);
        report = anonymize_tools(report, tool_order);
    }

    bool all = args.format == "all";
    if (all || args.format == "json")
        spill(config.out_dir / "report.json", emit(report, ReportFormat::Json));
    if (all || args.format == "csv")
        spill(config.out_dir / "report.csv", emit(report, ReportFormat::Csv));
    if (all || args.format == "md")
        spill(config.out_dir / "report.md", emit(report, ReportFormat::Markdown));
    std::cout << "report written to " << config.out_dir.string() << "/report.{json,csv,md}\n";

    bool any_fail = false;
    for (const auto& v : report.verdicts)
        if (v.outcome.kind == MrOutcomeKind::Fail) any_fail = true;
    if (any_fail && !args.exit_zero) return 2;
    return 0;
}

struct MockArgs {
    std::string behavior = "variant-blind";
    std::string base_json;
    std::string ontology_path;
    std::uint64_t seed = 0;
    std::string input_fasta;
    std::string output_file;
};

int cmd_mock_predict(const MockArgs& args) {
    MockSpec spec;
    spec.behavior = mock_behavior_from_string(args.behavior);
    if (spec.behavior != MockBehavior::Empty) spec.base_annotations = load_mock_base(args.base_json);
    spec.seed = args.seed;

    std::optional<Ontology> onto;
    if (!args.ontology_path.empty()) {
        onto = Ontology::parse_obo_file(args.ontology_path);
        spec.ontology = &*onto;
    }

    auto records = read_fasta_file(args.input_fasta);
    std::string out;
    for (const auto& record : records) {
        for (const auto& p : mock_predict(spec, record)) {
            char score[16];
            std::snprintf(score, sizeof(score), "%.3f", p.score);
            out += p.protein_id + "\t" + p.term.str() + "\t" + score + "\n";
        }
    }
    spill(args.output_file, out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Metamorphic-testing harness for protein function prediction tools"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Build test-case records and pairs manifest");
    generate->add_option("--canonical", gen.canonical_fastas, "Canonical FASTA file(s)")
        ->required()
        ->check(CLI::ExistingFile);
    generate->add_option("--variants", gen.variants_tsv, "Variant-spec TSV")
        ->required()
        ->check(CLI::ExistingFile);
    generate->add_option("--out-dir", gen.out_dir, "Output directory");
    generate->add_flag("--strict", gen.strict, "Restrict to the 20 standard residues");

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Execute the configured tools over the records");
    run_cmd->add_option("--config", run.config_path, "Campaign config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    run_cmd->add_option("--records", run.records_fasta, "records.fasta from generate")
        ->required()
        ->check(CLI::ExistingFile);
    run_cmd->add_option("--pairs", run.pairs_tsv, "pairs.tsv from generate")
        ->required()
        ->check(CLI::ExistingFile);

    CheckArgs check;
    auto* check_cmd = app.add_subcommand("check", "Evaluate the metamorphic relation");
    check_cmd->add_option("--config", check.config_path, "Campaign config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    check_cmd->add_option("--records", check.records_fasta, "records.fasta from generate")
        ->required()
        ->check(CLI::ExistingFile);
    check_cmd->add_option("--pairs", check.pairs_tsv, "pairs.tsv from generate")
        ->required()
        ->check(CLI::ExistingFile);
    check_cmd->add_option("--runs", check.runs_tsv, "runs.tsv (default: <out_dir>/runs.tsv)");
    check_cmd->add_flag("--exit-zero", check.exit_zero, "Do not gate the exit code on failures");
    check_cmd->add_flag("--include-cc", check.include_cc,
                        "Also evaluate the Cellular Component namespace");

    ReportArgs report;
    auto* report_cmd = app.add_subcommand("report", "Aggregate verdicts into reports");
    report_cmd->add_option("--config", report.config_path, "Campaign config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    report_cmd->add_option("--records", report.records_fasta, "records.fasta from generate")
        ->required()
        ->check(CLI::ExistingFile);
    report_cmd->add_option("--pairs", report.pairs_tsv, "pairs.tsv from generate")
        ->required()
        ->check(CLI::ExistingFile);
    report_cmd->add_option("--verdicts", report.verdicts_tsv,
                           "verdicts.tsv (default: <out_dir>/verdicts.tsv)");
    report_cmd->add_option("--format", report.format, "json|csv|md|all")
        ->check(CLI::IsMember({"json", "csv", "md", "all"}));
    report_cmd->add_flag("--anonymize", report.anonymize, "Relabel tools A, B, C, ...");
    report_cmd->add_flag("--timestamp", report.timestamp, "Stamp the report with the current time");
    report_cmd->add_flag("--exit-zero", report.exit_zero, "Do not gate the exit code on failures");

    MockArgs mock;
    auto* mock_cmd = app.add_subcommand("mock-predict", "Deterministic mock predictor");
    mock_cmd->group(""); // hidden from help
    mock_cmd->add_option("--behavior", mock.behavior, "variant-blind|variant-aware|ancestor-shift|empty");
    mock_cmd->add_option("--base", mock.base_json, "Base-annotation JSON");
    mock_cmd->add_option("--ontology", mock.ontology_path, "Ontology for ancestor-shift");
    mock_cmd->add_option("--seed", mock.seed, "Probe-term seed");
    mock_cmd->add_option("input", mock.input_fasta, "Input FASTA")->required();
    mock_cmd->add_option("output", mock.output_file, "Output prediction file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (generate->parsed()) return cmd_generate(gen);
        if (run_cmd->parsed()) return cmd_run(run);
        if (check_cmd->parsed()) return cmd_check(check);
        if (report_cmd->parsed()) return cmd_report(report);
        if (mock_cmd->parsed()) return cmd_mock_predict(mock);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
