#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mtafp/predictions.hpp"
#include "mtafp/variants.hpp"

namespace mtafp {

enum class MrOutcomeKind { Pass, Fail, Inconclusive };

struct MrOutcome {
    MrOutcomeKind kind = MrOutcomeKind::Fail;
    std::string reason; // non-empty iff Inconclusive

    static MrOutcome pass() { return {MrOutcomeKind::Pass, {}}; }
    static MrOutcome fail() { return {MrOutcomeKind::Fail, {}}; }
    static MrOutcome inconclusive(std::string reason) {
        return {MrOutcomeKind::Inconclusive, std::move(reason)};
    }

    bool operator==(const MrOutcome&) const = default;
};

std::string to_string(MrOutcomeKind k);
MrOutcomeKind mr_outcome_kind_from_string(std::string_view s);

struct MrVerdict {
    std::string pair_id;
    std::string tool_id;
    Namespace ns = Namespace::MolecularFunction;
    MrOutcome outcome;

    bool operator==(const MrVerdict&) const = default;
};

// The variant-change relation: the follow-up term set must differ from the
// source term set. Strict set semantics; a term matches only itself, never
// an ancestor or descendant, so the ontology plays no role here.
bool check_mr_change(const TermSet& source_terms, const TermSet& follow_up_terms);

// Named relation registry so future relations can slot in without engine
// changes. "mr-variant-change" is registered by default.
using MrCheckFn = std::function<bool(const TermSet&, const TermSet&)>;
const std::map<std::string, MrCheckFn>& mr_registry();
constexpr const char* kDefaultMrName = "mr-variant-change";

// One verdict per requested namespace, in namespace order. A missing
// annotation set on either side yields Inconclusive("missing-output");
// two empty sets for a namespace yield Inconclusive("empty-both").
std::vector<MrVerdict> evaluate_pair(const TestCasePair& pair, const std::string& tool_id,
                                     const std::optional<AnnotationSet>& source_annotations,
                                     const std::optional<AnnotationSet>& follow_up_annotations,
                                     const std::vector<Namespace>& namespaces,
                                     const std::string& mr_name = kDefaultMrName);

// Diagnostic decomposition of a set change. The hierarchical notes flag
// removed/added term pairs related through ancestry; they are for human
// inspection only and never alter verdicts.
enum class HierarchicalRelation { AddedIsAncestorOfRemoved, AddedIsDescendantOfRemoved };

struct HierarchicalNote {
    GoTermId removed_term;
    GoTermId added_term;
    HierarchicalRelation relation;

    auto operator<=>(const HierarchicalNote&) const = default;
};

struct DiagnosticDifference {
    TermSet added;   // follow-up \ source
    TermSet removed; // source \ follow-up
    std::set<HierarchicalNote> hierarchical_notes;
};

DiagnosticDifference diagnostic_difference(const TermSet& source_terms,
                                           const TermSet& follow_up_terms, const Ontology& onto,
                                           Warnings* warnings = nullptr);

// Canonical (pair_id, tool_id, namespace) ordering used everywhere verdicts
// are stored or emitted.
void sort_verdicts(std::vector<MrVerdict>& verdicts);

} // namespace mtafp
