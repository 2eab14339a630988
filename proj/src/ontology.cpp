#include "mtafp/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mtafp/digest.hpp"

namespace mtafp {

// ---------------------------------------------------------------------------
// GoTermId
// ---------------------------------------------------------------------------

bool GoTermId::looks_valid(std::string_view text) {
    if (text.size() != 10 || text.substr(0, 3) != "GO:") return false;
    for (char c : text.substr(3))
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

GoTermId GoTermId::parse(std::string_view text) {
    if (!looks_valid(text))
        throw ParseError("malformed GO id: '" + std::string(text) +
                         "' (expected GO: followed by 7 digits)");
    std::uint32_t value = 0;
    for (char c : text.substr(3)) value = value * 10 + static_cast<std::uint32_t>(c - '0');
    return GoTermId(value);
}

GoTermId GoTermId::from_number(std::uint32_t value) {
    if (value > 9999999) throw ValidationError("GO id number out of range");
    return GoTermId(value);
}

std::string GoTermId::str() const {
    char buf[12];
    std::snprintf(buf, sizeof(buf), "GO:%07u", value_);
    return buf;
}

// ---------------------------------------------------------------------------
// Namespace
// ---------------------------------------------------------------------------

std::string to_string(Namespace ns) {
    switch (ns) {
        case Namespace::MolecularFunction: return "molecular_function";
        case Namespace::BiologicalProcess: return "biological_process";
        case Namespace::CellularComponent: return "cellular_component";
    }
    return "?";
}

std::string display_name(Namespace ns) {
    switch (ns) {
        case Namespace::MolecularFunction: return "Molecular Function";
        case Namespace::BiologicalProcess: return "Biological Process";
        case Namespace::CellularComponent: return "Cellular Component";
    }
    return "?";
}

Namespace namespace_from_string(std::string_view s) {
    if (s == "molecular_function") return Namespace::MolecularFunction;
    if (s == "biological_process") return Namespace::BiologicalProcess;
    if (s == "cellular_component") return Namespace::CellularComponent;
    throw ParseError("unknown GO namespace: '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// OBO parsing
// ---------------------------------------------------------------------------

Ontology::Ontology() : memo_(std::make_unique<Memo>()) {}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

// OBO values may carry a trailing comment: "GO:0003674 ! molecular_function".
std::string strip_obo_comment(const std::string& value) {
    std::size_t bang = value.find('!');
    return trim(bang == std::string::npos ? value : value.substr(0, bang));
}

struct RawStanza {
    std::string id;
    Ontology::TermInfo info;
    std::vector<std::pair<std::string, Relation>> parents; // unresolved ids
    std::vector<std::string> alt_ids;
    bool has_namespace = false;
};

} // namespace

Ontology Ontology::parse_obo(std::string_view text) {
    Ontology onto;
    onto.source_digest_ = fnv1a64(text);

    std::istringstream in{std::string(text)};
    std::string line;
    std::vector<RawStanza> stanzas;
    RawStanza* current = nullptr;
    bool in_term_stanza = false;

    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            in_term_stanza = (t == "[Term]");
            if (in_term_stanza) {
                stanzas.emplace_back();
                current = &stanzas.back();
            } else {
                current = nullptr; // [Typedef] etc. are skipped wholesale
            }
            continue;
        }
        if (!in_term_stanza || !current) continue;

        std::size_t colon = t.find(':');
        if (colon == std::string::npos) continue;
        std::string key = t.substr(0, colon);
        std::string value = trim(t.substr(colon + 1));

        if (key == "id") {
            current->id = strip_obo_comment(value);
        } else if (key == "name") {
            current->info.name = value;
        } else if (key == "namespace") {
            current->info.ns = namespace_from_string(strip_obo_comment(value));
            current->has_namespace = true;
        } else if (key == "is_a") {
            current->parents.emplace_back(strip_obo_comment(value), Relation::IsA);
        } else if (key == "alt_id") {
            current->alt_ids.push_back(strip_obo_comment(value));
        } else if (key == "is_obsolete") {
            current->info.obsolete = (strip_obo_comment(value) == "true");
        } else if (key == "relationship") {
            std::istringstream rel(value);
            std::string rel_type, target;
            rel >> rel_type >> target;
            if (rel_type == "part_of")
                current->parents.emplace_back(strip_obo_comment(target), Relation::PartOf);
            // other relationship types (regulates, ...) are ignored
        }
        // every other stanza line (def, xref, synonym, ...) is ignored
    }

    // First pass: register primary ids.
    for (auto& s : stanzas) {
        if (s.id.empty()) throw ParseError("[Term] stanza without an id");
        GoTermId id = GoTermId::parse(s.id);
        if (!s.has_namespace)
            throw ParseError("term " + s.id + " is missing a namespace");
        if (!onto.terms_.emplace(id, s.info).second)
            throw ParseError("duplicate primary id: " + s.id);
    }

    // Second pass: alt ids and edges.
    std::vector<std::string> dangling;
    for (auto& s : stanzas) {
        GoTermId id = GoTermId::parse(s.id);
        for (const auto& alt_text : s.alt_ids) {
            GoTermId alt = GoTermId::parse(alt_text);
            if (onto.terms_.count(alt))
                throw ParseError("alt_id " + alt_text + " of " + s.id +
                                 " collides with a primary id");
            auto [it, inserted] = onto.alt_to_primary_.emplace(alt, id);
            if (!inserted && it->second != id)
                throw ParseError("alt_id " + alt_text + " is claimed by two terms");
            onto.terms_.at(id).alt_ids.push_back(alt);
        }
        auto& plist = onto.parents_[id];
        for (const auto& [parent_text, rel] : s.parents) {
            GoTermId parent = GoTermId::parse(parent_text);
            if (!onto.terms_.count(parent)) {
                dangling.push_back(s.id + " -> " + parent_text);
                continue;
            }
            plist.emplace_back(parent, rel);
        }
        std::sort(plist.begin(), plist.end());
        plist.erase(std::unique(plist.begin(), plist.end()), plist.end());
    }
    if (!dangling.empty()) {
        std::string msg = "edges reference undefined ids:";
        for (const auto& d : dangling) msg += " " + d;
        throw ParseError(msg);
    }

    // Cycle check over the non-obsolete subgraph (iterative DFS, three-color).
    enum class Color { White, Grey, Black };
    std::map<GoTermId, Color> color;
    for (const auto& [id, info] : onto.terms_)
        if (!info.obsolete) color[id] = Color::White;

    for (const auto& [start, c0] : color) {
        if (c0 != Color::White) continue;
        std::vector<std::pair<GoTermId, std::size_t>> stack{{start, 0}};
        color[start] = Color::Grey;
        while (!stack.empty()) {
            auto& [node, next_index] = stack.back();
            const auto& parents = onto.parents_.at(node);
            bool advanced = false;
            while (next_index < parents.size()) {
                GoTermId parent = parents[next_index++].first;
                auto it = color.find(parent);
                if (it == color.end()) continue; // obsolete parent: dead end
                if (it->second == Color::Grey) {
                    std::string cycle = parent.str();
                    for (auto rit = stack.rbegin(); rit != stack.rend(); ++rit) {
                        cycle += " -> " + rit->first.str();
                        if (rit->first == parent) break;
                    }
                    throw ParseError("ontology contains a cycle: " + cycle);
                }
                if (it->second == Color::White) {
                    it->second = Color::Grey;
                    stack.emplace_back(parent, 0);
                    advanced = true;
                    break;
                }
            }
            if (!advanced && (stack.back().second >= parents.size())) {
                color[node] = Color::Black;
                stack.pop_back();
            }
        }
    }

    return onto;
}

Ontology Ontology::parse_obo_file(const std::string& path) {
    return parse_obo_files({path});
}

Ontology Ontology::parse_obo_files(const std::vector<std::string>& paths) {
    std::string combined;
    for (const auto& path : paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ParseError("cannot open OBO file: " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        combined += buf.str();
        combined += "\n";
    }
    return parse_obo(combined);
}

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

bool Ontology::resolve(GoTermId term, GoTermId& primary) const {
    if (terms_.count(term)) {
        primary = term;
        return true;
    }
    auto it = alt_to_primary_.find(term);
    if (it != alt_to_primary_.end()) {
        primary = it->second;
        return true;
    }
    return false;
}

bool Ontology::contains(GoTermId term) const {
    GoTermId primary = term;
    return resolve(term, primary);
}

GoTermId Ontology::require_primary(GoTermId term) const {
    GoTermId primary = term;
    if (!resolve(term, primary))
        throw ValidationError("unknown GO term: " + term.str());
    return primary;
}

const Ontology::TermInfo& Ontology::info(GoTermId primary) const {
    return terms_.at(primary);
}

Namespace Ontology::namespace_of(GoTermId term) const {
    return info(require_primary(term)).ns;
}

bool Ontology::is_obsolete(GoTermId term) const {
    return info(require_primary(term)).obsolete;
}

const std::string& Ontology::name_of(GoTermId term) const {
    return info(require_primary(term)).name;
}

const std::vector<std::pair<GoTermId, Relation>>& Ontology::parents_of(GoTermId term) const {
    return parents_.at(require_primary(term));
}

TermSet Ontology::ancestors(GoTermId term) const {
    GoTermId primary = require_primary(term);
    {
        std::lock_guard<std::mutex> lock(memo_->mutex);
        auto it = memo_->cache.find(primary);
        if (it != memo_->cache.end()) return *it->second;
    }

    TermSet result;
    std::vector<GoTermId> frontier{primary};
    while (!frontier.empty()) {
        GoTermId node = frontier.back();
        frontier.pop_back();
        for (const auto& [parent, rel] : parents_.at(node)) {
            if (info(parent).obsolete) continue;
            if (result.insert(parent).second) frontier.push_back(parent);
        }
    }

    auto shared = std::make_shared<const TermSet>(result);
    std::lock_guard<std::mutex> lock(memo_->mutex);
    memo_->cache.emplace(primary, std::move(shared));
    return result;
}

TermSet Ontology::propagate(const TermSet& terms) const {
    TermSet result;
    for (GoTermId t : terms) {
        GoTermId primary = require_primary(t);
        if (info(primary).obsolete) continue;
        result.insert(primary);
        TermSet anc = ancestors(primary);
        result.insert(anc.begin(), anc.end());
    }
    return result;
}

std::vector<GoTermId> Ontology::term_ids_sorted() const {
    std::vector<GoTermId> ids;
    ids.reserve(terms_.size());
    for (const auto& [id, info] : terms_) ids.push_back(id);
    return ids;
}

} // namespace mtafp
