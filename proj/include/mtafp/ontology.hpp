#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mtafp/errors.hpp"

namespace mtafp {

// "GO:" followed by exactly seven digits, stored numerically.
class GoTermId {
public:
    GoTermId() = default; // GO:0000000, a placeholder no release assigns
    static GoTermId parse(std::string_view text); // throws ParseError
    static bool looks_valid(std::string_view text);
    static GoTermId from_number(std::uint32_t value);

    std::uint32_t number() const { return value_; }
    std::string str() const;

    auto operator<=>(const GoTermId&) const = default;

private:
    explicit GoTermId(std::uint32_t value) : value_(value) {}
    std::uint32_t value_ = 0;
};

using TermSet = std::set<GoTermId>;

enum class Namespace { MolecularFunction, BiologicalProcess, CellularComponent };
constexpr std::size_t kNamespaceCount = 3;

std::string to_string(Namespace ns);            // "molecular_function" etc.
std::string display_name(Namespace ns);         // "Molecular Function" etc.
Namespace namespace_from_string(std::string_view s);

enum class Relation { IsA, PartOf };

// The GO term DAG. Immutable after parsing; queries are read-only and the
// ancestor memo is guarded internally, so a parsed Ontology may be shared
// across threads.
class Ontology {
public:
    struct TermInfo {
        std::string name;
        Namespace ns = Namespace::MolecularFunction;
        bool obsolete = false;
        std::vector<GoTermId> alt_ids;
    };

    // Parses a subset of the OBO flat format: [Term] stanzas with id, name,
    // namespace, alt_id, is_a, "relationship: part_of" and is_obsolete
    // lines. Unknown stanza lines and relationship types other than part_of
    // are ignored. Throws ParseError on duplicate primary ids, edges to
    // undefined ids (all dangling references are listed), an alt_id that
    // collides with a primary id, or a cycle (one cycle is named).
    static Ontology parse_obo(std::string_view text);
    static Ontology parse_obo_file(const std::string& path);

    // Concatenates several OBO files before parsing; later files may extend
    // the term set of earlier ones (overlay layering).
    static Ontology parse_obo_files(const std::vector<std::string>& paths);

    bool contains(GoTermId term) const;

    // All terms reachable from `term` over IsA/PartOf edges, excluding the
    // term itself. Alt ids resolve to their primary id first; obsolete terms
    // are never traversed or returned. Unknown term -> ValidationError.
    TermSet ancestors(GoTermId term) const;

    Namespace namespace_of(GoTermId term) const;
    bool is_obsolete(GoTermId term) const;
    const std::string& name_of(GoTermId term) const;

    // Input set unioned with every member's ancestors (true-path closure).
    TermSet propagate(const TermSet& terms) const;

    // Resolves an alt_id to its primary id; primary ids map to themselves.
    // Returns false when the id is unknown entirely.
    bool resolve(GoTermId term, GoTermId& primary) const;

    std::size_t term_count() const { return terms_.size(); } // primary ids only
    std::uint64_t source_digest() const { return source_digest_; }

    std::vector<GoTermId> term_ids_sorted() const;
    const std::vector<std::pair<GoTermId, Relation>>& parents_of(GoTermId term) const;

private:
    Ontology();

    const TermInfo& info(GoTermId primary) const;
    GoTermId require_primary(GoTermId term) const;

    std::map<GoTermId, TermInfo> terms_;
    std::map<GoTermId, std::vector<std::pair<GoTermId, Relation>>> parents_;
    std::map<GoTermId, GoTermId> alt_to_primary_;
    std::uint64_t source_digest_ = 0;

    // Memoized ancestor sets, guarded so concurrent readers stay safe.
    struct Memo {
        std::mutex mutex;
        std::map<GoTermId, std::shared_ptr<const TermSet>> cache;
    };
    mutable std::unique_ptr<Memo> memo_;
};

} // namespace mtafp
