#pragma once

// Shared generators and brute-force oracles for the property tests. The
// oracles deliberately take the dumbest correct route (repeated relaxation,
// linear scans, exact integer arithmetic) so they stay independent of the
// library implementations they check.

#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mtafp/ontology.hpp"
#include "mtafp/sequence.hpp"
#include "mtafp/variants.hpp"

namespace testutil {

inline constexpr const char* kDataDir = MTAFP_DATA_DIR;

inline std::string data_path(const std::string& name) {
    return std::string(kDataDir) + "/" + name;
}

using Rng = std::mt19937_64;

inline std::string random_residues(Rng& rng, std::size_t length) {
    static constexpr std::string_view alphabet = "ACDEFGHIKLMNPQRSTVWY";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::string s;
    s.reserve(length);
    for (std::size_t i = 0; i < length; ++i) s.push_back(alphabet[pick(rng)]);
    return s;
}

inline std::string random_token(Rng& rng, std::size_t length) {
    static constexpr std::string_view alphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::string s;
    for (std::size_t i = 0; i < length; ++i) s.push_back(alphabet[pick(rng)]);
    return s;
}

inline mtafp::ProteinRecord random_record(Rng& rng, std::size_t index) {
    std::uniform_int_distribution<std::size_t> len(1, 200);
    std::uniform_int_distribution<int> with_desc(0, 1);
    mtafp::ProteinRecord rec;
    rec.id = "R" + std::to_string(index) + "_" + random_token(rng, 6);
    rec.description = with_desc(rng) ? "desc " + random_token(rng, 8) : "";
    rec.sequence = mtafp::AminoAcidSequence::from_string(random_residues(rng, len(rng)));
    return rec;
}

inline std::size_t hamming(const std::string& a, const std::string& b) {
    std::size_t d = a.size() == b.size() ? 0 : SIZE_MAX;
    if (a.size() != b.size()) return d;
    d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) ++d;
    return d;
}

// --------------------------------------------------------------------------
// Random DAG generation + transitive-closure oracle
// --------------------------------------------------------------------------

struct ToyDag {
    std::string obo_text;
    std::size_t term_count = 0;
    // edges child -> parents (indices)
    std::vector<std::vector<std::size_t>> parents;
};

inline mtafp::GoTermId toy_term(std::size_t index) {
    return mtafp::GoTermId::from_number(static_cast<std::uint32_t>(100000 + index));
}

// Terms 0..n-1; edges only from higher to lower indices, so the graph is a
// DAG by construction. Mixes is_a and part_of relations.
inline ToyDag random_dag(Rng& rng, std::size_t max_terms) {
    std::uniform_int_distribution<std::size_t> n_dist(1, max_terms);
    std::size_t n = n_dist(rng);
    ToyDag dag;
    dag.term_count = n;
    dag.parents.resize(n);

    std::string obo = "format-version: 1.2\n";
    std::uniform_int_distribution<int> ns_dist(0, 2);
    std::uniform_int_distribution<int> rel_dist(0, 1);
    for (std::size_t i = 0; i < n; ++i) {
        obo += "\n[Term]\nid: " + toy_term(i).str() + "\nname: toy term " + std::to_string(i) +
               "\nnamespace: ";
        switch (ns_dist(rng)) {
            case 0: obo += "molecular_function"; break;
            case 1: obo += "biological_process"; break;
            default: obo += "cellular_component"; break;
        }
        obo += "\n";
        if (i > 0) {
            std::uniform_int_distribution<std::size_t> parent_count(0, std::min<std::size_t>(3, i));
            std::set<std::size_t> chosen;
            std::uniform_int_distribution<std::size_t> pick(0, i - 1);
            std::size_t want = parent_count(rng);
            while (chosen.size() < want) chosen.insert(pick(rng));
            for (std::size_t p : chosen) {
                dag.parents[i].push_back(p);
                if (rel_dist(rng) == 0)
                    obo += "is_a: " + toy_term(p).str() + "\n";
                else
                    obo += "relationship: part_of " + toy_term(p).str() + "\n";
            }
        }
    }
    dag.obo_text = obo;
    return dag;
}

// Oracle: reachability by repeated edge relaxation until fixpoint.
inline std::set<std::size_t> closure_oracle(const ToyDag& dag, std::size_t start) {
    std::set<std::size_t> reach;
    bool changed = true;
    while (changed) {
        changed = false;
        std::set<std::size_t> frontier = reach;
        frontier.insert(start);
        for (std::size_t node : frontier)
            for (std::size_t p : dag.parents[node])
                if (reach.insert(p).second) changed = true;
    }
    reach.erase(start);
    return reach;
}

// --------------------------------------------------------------------------
// Apportionment oracle (largest remainder, exact integers, linear scans)
// --------------------------------------------------------------------------

inline std::map<std::string, std::size_t>
apportion_oracle(const std::vector<std::pair<std::string, std::size_t>>& proteins,
                 std::size_t budget) {
    std::size_t total_len = 0;
    for (const auto& [id, len] : proteins) total_len += len;

    std::map<std::string, std::size_t> counts;
    std::map<std::string, std::size_t> remainders;
    std::size_t handed_out = 0;
    for (const auto& [id, len] : proteins) {
        counts[id] = budget * len / total_len;
        remainders[id] = budget * len % total_len;
        handed_out += counts[id];
    }
    std::set<std::string> awarded;
    for (std::size_t seat = handed_out; seat < budget; ++seat) {
        std::string best;
        for (const auto& [id, rem] : remainders) {
            if (awarded.count(id)) continue;
            if (best.empty() || rem > remainders[best] ||
                (rem == remainders[best] && id < best))
                best = id;
        }
        counts[best] += 1;
        awarded.insert(best);
    }
    // Positivity repair: fund zero-count entries from the current maximum
    // (lexicographically smallest donor on ties).
    for (auto& [id, count] : counts) {
        if (count > 0) continue;
        std::string donor;
        for (const auto& [cand, c] : counts)
            if (donor.empty() || c > counts[donor]) donor = cand;
        counts[donor] -= 1;
        count = 1;
    }
    return counts;
}

// --------------------------------------------------------------------------
// Segment-selection oracle (enumerate segments, scan all candidates)
// --------------------------------------------------------------------------

inline std::vector<mtafp::VariantSpec>
select_oracle(std::size_t length, const std::vector<mtafp::VariantSpec>& candidates,
              std::size_t count) {
    // Segment lengths: first (length mod count) segments get one extra.
    std::vector<std::pair<std::size_t, std::size_t>> segments; // [lo, hi] inclusive
    std::size_t base = length / count, extra = length % count, lo = 1;
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t seg_len = base + (i < extra ? 1 : 0);
        segments.push_back({lo, lo + seg_len - 1});
        lo += seg_len;
    }

    std::vector<mtafp::VariantSpec> picked;
    for (const auto& [seg_lo, seg_hi] : segments) {
        const mtafp::VariantSpec* best = nullptr;
        for (const auto& c : candidates) {
            std::size_t pos = c.point().position;
            if (pos < seg_lo || pos > seg_hi) continue;
            if (!best) {
                best = &c;
                continue;
            }
            bool wins = c.publication_count > best->publication_count ||
                        (c.publication_count == best->publication_count &&
                         (c.point().position < best->point().position ||
                          (c.point().position == best->point().position &&
                           c.variant_id < best->variant_id)));
            if (wins) best = &c;
        }
        if (best) picked.push_back(*best);
    }
    return picked;
}

// Scratch directory under the system temp root, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path();
        std::random_device rd;
        dir_ = base / (tag + "-" + std::to_string(rd()) + "-" + std::to_string(::getpid()));
        std::filesystem::create_directories(dir_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }
    const std::filesystem::path& path() const { return dir_; }

private:
    std::filesystem::path dir_;
};

} // namespace testutil
