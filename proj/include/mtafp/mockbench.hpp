#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mtafp/ontology.hpp"
#include "mtafp/predictions.hpp"
#include "mtafp/runner.hpp"

namespace mtafp {

// Deterministic mock predictors used to test the harness itself.
//
//   VariantBlind  — canonical annotations regardless of sequence content;
//                   a variant-insensitive tool, so every pair must Fail.
//   VariantAware  — canonical annotations plus a sequence-hash probe term
//                   per evaluated namespace; any sequence change moves the
//                   probes, so every pair must Pass.
//   AncestorShift — swaps each base term for its nearest ancestor once the
//                   sequence differs from the canonical fixture; pins the
//                   strict set semantics (a child/parent swap is a change).
//   Empty         — no predictions at all.
enum class MockBehavior { VariantBlind, VariantAware, AncestorShift, Empty };

std::string to_string(MockBehavior b);
MockBehavior mock_behavior_from_string(std::string_view s);

// Probe terms live in a reserved synthetic id range registered by the
// ontology overlay fixture, keeping real GO snapshots untouched.
constexpr std::uint32_t kMockProbeRangeSize = 500;
constexpr std::uint32_t kMockProbeMfBase = 999000; // GO:0999000..GO:0999499
constexpr std::uint32_t kMockProbeBpBase = 999500; // GO:0999500..GO:0999999

struct MockBaseEntry {
    AminoAcidSequence canonical_sequence;
    TermSet mf_terms;
    TermSet bp_terms;
};

struct MockSpec {
    MockBehavior behavior = MockBehavior::VariantBlind;
    std::map<std::string, MockBaseEntry> base_annotations; // canonical id -> entry
    std::uint64_t seed = 0;
    // Required by AncestorShift to find each term's nearest ancestor.
    const Ontology* ontology = nullptr;

    void validate() const;
};

// Base-annotation JSON: { "<canonical id>": { "sequence": ...,
// "molecular_function": [...], "biological_process": [...] }, ... }
std::map<std::string, MockBaseEntry> load_mock_base(const std::filesystem::path& path);

GoTermId mock_probe_term(const AminoAcidSequence& seq, Namespace ns, std::uint64_t seed);

// The record's canonical id is the prefix before the '|' separator; an id
// absent from base_annotations raises ValidationError.
std::vector<Prediction> mock_predict(const MockSpec& spec, const ProteinRecord& record);

// Wraps a mock as a Subprocess adapter that self-execs the harness binary
// through the hidden mock-predict subcommand, so the real runner path is
// exercised rather than an in-process shortcut.
ToolAdapter mock_as_adapter(MockBehavior behavior, const std::string& tool_id,
                            const std::filesystem::path& harness_binary,
                            const std::filesystem::path& base_json,
                            const std::optional<std::filesystem::path>& ontology_path,
                            std::uint64_t seed = 0,
                            std::chrono::milliseconds timeout = std::chrono::seconds(30));

} // namespace mtafp
