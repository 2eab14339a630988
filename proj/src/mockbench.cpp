#include "mtafp/mockbench.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mtafp/digest.hpp"

namespace mtafp {

std::string to_string(MockBehavior b) {
    switch (b) {
        case MockBehavior::VariantBlind: return "variant-blind";
        case MockBehavior::VariantAware: return "variant-aware";
        case MockBehavior::AncestorShift: return "ancestor-shift";
        case MockBehavior::Empty: return "empty";
    }
    return "?";
}

MockBehavior mock_behavior_from_string(std::string_view s) {
    if (s == "variant-blind") return MockBehavior::VariantBlind;
    if (s == "variant-aware") return MockBehavior::VariantAware;
    if (s == "ancestor-shift") return MockBehavior::AncestorShift;
    if (s == "empty") return MockBehavior::Empty;
    throw ParseError("unknown mock behavior: '" + std::string(s) + "'");
}

void MockSpec::validate() const {
    if (behavior != MockBehavior::Empty && base_annotations.empty())
        throw ValidationError("mock spec requires base annotations for behavior " +
                              to_string(behavior));
    if (behavior == MockBehavior::AncestorShift && !ontology)
        throw ValidationError("ancestor-shift mock requires an ontology");
}

std::map<std::string, MockBaseEntry> load_mock_base(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open mock base file: " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }

    std::map<std::string, MockBaseEntry> base;
    for (const auto& [canonical_id, entry] : j.items()) {
        MockBaseEntry e{AminoAcidSequence::from_string(entry.at("sequence").get<std::string>()),
                        {},
                        {}};
        for (const auto& t : entry.value("molecular_function", nlohmann::json::array()))
            e.mf_terms.insert(GoTermId::parse(t.get<std::string>()));
        for (const auto& t : entry.value("biological_process", nlohmann::json::array()))
            e.bp_terms.insert(GoTermId::parse(t.get<std::string>()));
        base.emplace(canonical_id, std::move(e));
    }
    return base;
}

GoTermId mock_probe_term(const AminoAcidSequence& seq, Namespace ns, std::uint64_t seed) {
    std::uint32_t index =
        static_cast<std::uint32_t>(fnv1a64(seq.str(), seed) % kMockProbeRangeSize);
    std::uint32_t base = ns == Namespace::MolecularFunction ? kMockProbeMfBase : kMockProbeBpBase;
    return GoTermId::from_number(base + index);
}

namespace {

std::string canonical_prefix(const std::string& record_id) {
    std::size_t sep = record_id.find('|');
    return sep == std::string::npos ? record_id : record_id.substr(0, sep);
}

// Nearest ancestor: the lexicographically smallest non-obsolete direct
// parent; root terms stay put.
GoTermId nearest_ancestor(const Ontology& onto, GoTermId term) {
    const auto& parents = onto.parents_of(term);
    for (const auto& [parent, rel] : parents)
        if (!onto.is_obsolete(parent)) return parent; // parents are sorted by id
    return term;
}

} // namespace

std::vector<Prediction> mock_predict(const MockSpec& spec, const ProteinRecord& record) {
    spec.validate();
    if (spec.behavior == MockBehavior::Empty) return {};

    const std::string canonical_id = canonical_prefix(record.id);
    auto it = spec.base_annotations.find(canonical_id);
    if (it == spec.base_annotations.end())
        throw ValidationError("mock: unknown canonical id '" + canonical_id + "' (from record '" +
                              record.id + "')");
    const MockBaseEntry& base = it->second;

    std::vector<Prediction> preds;
    auto emit_term = [&](GoTermId term) { preds.push_back({record.id, term, 1.0}); };

    switch (spec.behavior) {
        case MockBehavior::VariantBlind:
            // Canonical annotations no matter what the sequence says.
            for (GoTermId t : base.mf_terms) emit_term(t);
            for (GoTermId t : base.bp_terms) emit_term(t);
            break;
        case MockBehavior::VariantAware:
            for (GoTermId t : base.mf_terms) emit_term(t);
            for (GoTermId t : base.bp_terms) emit_term(t);
            emit_term(mock_probe_term(record.sequence, Namespace::MolecularFunction, spec.seed));
            emit_term(mock_probe_term(record.sequence, Namespace::BiologicalProcess, spec.seed));
            break;
        case MockBehavior::AncestorShift: {
            bool shifted = !(record.sequence == base.canonical_sequence);
            for (GoTermId t : base.mf_terms)
                emit_term(shifted ? nearest_ancestor(*spec.ontology, t) : t);
            for (GoTermId t : base.bp_terms)
                emit_term(shifted ? nearest_ancestor(*spec.ontology, t) : t);
            break;
        }
        case MockBehavior::Empty: break;
    }
    return preds;
}

ToolAdapter mock_as_adapter(MockBehavior behavior, const std::string& tool_id,
                            const std::filesystem::path& harness_binary,
                            const std::filesystem::path& base_json,
                            const std::optional<std::filesystem::path>& ontology_path,
                            std::uint64_t seed, std::chrono::milliseconds timeout) {
    std::string command = "\"" + std::filesystem::absolute(harness_binary).string() +
                          "\" mock-predict --behavior " + to_string(behavior) + " --base \"" +
                          std::filesystem::absolute(base_json).string() + "\"";
    if (ontology_path)
        command += " --ontology \"" + std::filesystem::absolute(*ontology_path).string() + "\"";
    if (seed != 0) command += " --seed " + std::to_string(seed);
    command += " {input_fasta} {output_file}";

    ToolAdapter adapter;
    adapter.tool_id = tool_id;
    SubprocessMode mode;
    mode.command_template = command;
    mode.timeout = timeout;
    adapter.mode = mode;
    adapter.prediction_format = PredictionFormat::PlainTSV;
    return adapter;
}

} // namespace mtafp
