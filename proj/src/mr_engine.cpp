#include "mtafp/mr_engine.hpp"

#include <algorithm>

namespace mtafp {

std::string to_string(MrOutcomeKind k) {
    switch (k) {
        case MrOutcomeKind::Pass: return "pass";
        case MrOutcomeKind::Fail: return "fail";
        case MrOutcomeKind::Inconclusive: return "inconclusive";
    }
    return "?";
}

MrOutcomeKind mr_outcome_kind_from_string(std::string_view s) {
    if (s == "pass") return MrOutcomeKind::Pass;
    if (s == "fail") return MrOutcomeKind::Fail;
    if (s == "inconclusive") return MrOutcomeKind::Inconclusive;
    throw ParseError("unknown verdict outcome: '" + std::string(s) + "'");
}

bool check_mr_change(const TermSet& source_terms, const TermSet& follow_up_terms) {
    return source_terms != follow_up_terms;
}

const std::map<std::string, MrCheckFn>& mr_registry() {
    static const std::map<std::string, MrCheckFn> registry = {
        {kDefaultMrName, check_mr_change},
    };
    return registry;
}

std::vector<MrVerdict> evaluate_pair(const TestCasePair& pair, const std::string& tool_id,
                                     const std::optional<AnnotationSet>& source_annotations,
                                     const std::optional<AnnotationSet>& follow_up_annotations,
                                     const std::vector<Namespace>& namespaces,
                                     const std::string& mr_name) {
    auto reg_it = mr_registry().find(mr_name);
    if (reg_it == mr_registry().end())
        throw ValidationError("unknown metamorphic relation: '" + mr_name + "'");
    const MrCheckFn& changed = reg_it->second;

    std::vector<Namespace> ordered = namespaces;
    std::sort(ordered.begin(), ordered.end());
    ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

    std::vector<MrVerdict> verdicts;
    for (Namespace ns : ordered) {
        MrVerdict v;
        v.pair_id = pair.pair_id();
        v.tool_id = tool_id;
        v.ns = ns;
        if (!source_annotations || !follow_up_annotations) {
            v.outcome = MrOutcome::inconclusive("missing-output");
        } else {
            const TermSet& src = source_annotations->terms(ns);
            const TermSet& fup = follow_up_annotations->terms(ns);
            if (src.empty() && fup.empty())
                v.outcome = MrOutcome::inconclusive("empty-both");
            else
                v.outcome = changed(src, fup) ? MrOutcome::pass() : MrOutcome::fail();
        }
        verdicts.push_back(std::move(v));
    }
    return verdicts;
}

DiagnosticDifference diagnostic_difference(const TermSet& source_terms,
                                           const TermSet& follow_up_terms, const Ontology& onto,
                                           Warnings* warnings) {
    DiagnosticDifference diff;
    std::set_difference(follow_up_terms.begin(), follow_up_terms.end(), source_terms.begin(),
                        source_terms.end(), std::inserter(diff.added, diff.added.begin()));
    std::set_difference(source_terms.begin(), source_terms.end(), follow_up_terms.begin(),
                        follow_up_terms.end(), std::inserter(diff.removed, diff.removed.begin()));

    auto keep_known = [&](const TermSet& terms) {
        TermSet known;
        for (GoTermId t : terms) {
            if (onto.contains(t))
                known.insert(t);
            else
                warn(warnings, "diagnostic: term " + t.str() + " unknown to the ontology, skipped");
        }
        return known;
    };
    const TermSet known_removed = keep_known(diff.removed);
    const TermSet known_added = keep_known(diff.added);

    for (GoTermId removed : known_removed) {
        TermSet removed_ancestors = onto.ancestors(removed);
        for (GoTermId added : known_added) {
            if (removed_ancestors.count(added)) {
                diff.hierarchical_notes.insert(
                    {removed, added, HierarchicalRelation::AddedIsAncestorOfRemoved});
            } else if (onto.ancestors(added).count(removed)) {
                diff.hierarchical_notes.insert(
                    {removed, added, HierarchicalRelation::AddedIsDescendantOfRemoved});
            }
        }
    }
    return diff;
}

void sort_verdicts(std::vector<MrVerdict>& verdicts) {
    std::sort(verdicts.begin(), verdicts.end(), [](const MrVerdict& a, const MrVerdict& b) {
        return std::tie(a.pair_id, a.tool_id, a.ns) < std::tie(b.pair_id, b.tool_id, b.ns);
    });
}

} // namespace mtafp
