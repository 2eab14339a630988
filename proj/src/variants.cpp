#include "mtafp/variants.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace mtafp {

namespace fs = std::filesystem;

std::string to_string(VariantCategory c) {
    switch (c) {
        case VariantCategory::Disease: return "disease";
        case VariantCategory::Natural: return "natural";
        case VariantCategory::Splice: return "splice";
    }
    return "?";
}

VariantCategory variant_category_from_string(std::string_view s) {
    if (s == "disease") return VariantCategory::Disease;
    if (s == "natural") return VariantCategory::Natural;
    if (s == "splice") return VariantCategory::Splice;
    throw ParseError("unknown variant category: '" + std::string(s) + "'");
}

void VariantSpec::validate() const {
    if (variant_id.empty()) throw ValidationError("variant spec with empty variant_id");
    if (protein_id.empty())
        throw ValidationError("variant " + variant_id + ": empty protein_id");
    if (is_point()) {
        const auto& p = point();
        if (p.position < 1)
            throw ValidationError("variant " + variant_id + ": position must be >= 1");
        if (p.ref_residue == p.alt_residue)
            throw ValidationError("variant " + variant_id +
                                  ": ref and alt residues must differ");
    }
}

std::string follow_up_record_id(const std::string& canonical_id, const std::string& variant_id) {
    return canonical_id + "|" + variant_id;
}

ProteinRecord apply_variant(const ProteinRecord& canonical, const VariantSpec& spec) {
    spec.validate();
    if (spec.protein_id != canonical.id)
        throw ValidationError("variant " + spec.variant_id + " targets protein " +
                              spec.protein_id + ", not " + canonical.id);

    ProteinRecord out;
    out.id = follow_up_record_id(canonical.id, spec.variant_id);
    out.description = canonical.description;

    if (spec.is_point()) {
        const auto& p = spec.point();
        const std::string& seq = canonical.sequence.str();
        if (p.position > seq.size())
            throw ValidationError("variant " + spec.variant_id + ": position " +
                                  std::to_string(p.position) + " beyond sequence length " +
                                  std::to_string(seq.size()));
        char found = seq[p.position - 1];
        if (found != p.ref_residue)
            throw ValidationError("variant " + spec.variant_id + ": reference mismatch at position " +
                                  std::to_string(p.position) + ": expected '" +
                                  std::string(1, p.ref_residue) + "', found '" +
                                  std::string(1, found) + "'");
        std::string mutated = seq;
        mutated[p.position - 1] = p.alt_residue;
        out.sequence = AminoAcidSequence::from_string(mutated);
    } else {
        const auto& f = spec.full_sequence();
        if (f.sequence == canonical.sequence)
            throw ValidationError("variant " + spec.variant_id +
                                  ": isoform sequence is identical to the canonical");
        out.sequence = f.sequence;
    }
    return out;
}

std::vector<TestCasePair> generate_pairs(const std::vector<ProteinRecord>& canonicals,
                                         const std::vector<VariantSpec>& specs) {
    std::map<std::string, const ProteinRecord*> by_id;
    for (const auto& rec : canonicals) {
        if (!by_id.emplace(rec.id, &rec).second)
            throw ValidationError("duplicate canonical record id: " + rec.id);
    }

    std::vector<std::string> orphans;
    for (const auto& spec : specs)
        if (!by_id.count(spec.protein_id)) orphans.push_back(spec.variant_id);
    if (!orphans.empty()) {
        std::string msg = "variant specs reference unknown proteins:";
        for (const auto& v : orphans) msg += " " + v;
        throw ValidationError(msg);
    }

    std::vector<VariantSpec> ordered = specs;
    std::sort(ordered.begin(), ordered.end(), [](const VariantSpec& a, const VariantSpec& b) {
        return std::tie(a.protein_id, a.variant_id) < std::tie(b.protein_id, b.variant_id);
    });

    std::vector<TestCasePair> pairs;
    pairs.reserve(ordered.size());
    std::set<std::string> seen_ids;
    for (const auto& spec : ordered) {
        const ProteinRecord& canonical = *by_id.at(spec.protein_id);
        TestCasePair pair{canonical, apply_variant(canonical, spec), spec};
        if (!seen_ids.insert(pair.pair_id()).second)
            throw ValidationError("duplicate pair id: " + pair.pair_id());
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

std::map<std::string, std::size_t>
allocate_variant_counts(const std::vector<std::pair<std::string, std::size_t>>& proteins,
                        std::size_t total_budget) {
    if (total_budget < proteins.size())
        throw ValidationError("variant budget " + std::to_string(total_budget) +
                              " is smaller than the protein count " +
                              std::to_string(proteins.size()));
    std::map<std::string, std::size_t> counts;
    if (proteins.empty()) return counts;

    std::size_t total_len = 0;
    for (const auto& [id, len] : proteins) {
        if (len == 0) throw ValidationError("protein " + id + " has zero length");
        if (counts.count(id)) throw ValidationError("duplicate protein id: " + id);
        counts[id] = 0;
        total_len += len;
    }

    // Floor quotas, then hand out the leftover seats by largest remainder
    // (exact integer remainders; ties to the lexicographically smaller id).
    struct Entry {
        std::string id;
        std::size_t base;
        std::size_t remainder;
    };
    std::vector<Entry> entries;
    std::size_t assigned = 0;
    for (const auto& [id, len] : proteins) {
        std::size_t numer = total_budget * len;
        entries.push_back({id, numer / total_len, numer % total_len});
        assigned += numer / total_len;
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.remainder != b.remainder) return a.remainder > b.remainder;
        return a.id < b.id;
    });
    std::size_t extras = total_budget - assigned;
    for (std::size_t i = 0; i < entries.size(); ++i)
        counts[entries[i].id] = entries[i].base + (i < extras ? 1 : 0);

    // Positivity repair: every protein gets at least one slot, funded by the
    // current maximum (ties to the lexicographically smallest donor).
    for (auto& [id, count] : counts) {
        if (count > 0) continue;
        auto donor = counts.end();
        for (auto it = counts.begin(); it != counts.end(); ++it)
            if (donor == counts.end() || it->second > donor->second) donor = it;
        --donor->second;
        count = 1;
    }
    return counts;
}

std::vector<VariantSpec> select_variants(const ProteinRecord& canonical,
                                         const std::vector<VariantSpec>& candidates,
                                         std::size_t count) {
    const std::size_t length = canonical.sequence.length();
    if (count < 1) throw ValidationError("segment count must be >= 1");
    if (count > length)
        throw ValidationError("segment count " + std::to_string(count) +
                              " exceeds sequence length " + std::to_string(length));

    for (const auto& c : candidates) {
        if (!c.is_point())
            throw ValidationError("variant " + c.variant_id +
                                  ": select_variants expects point substitutions only");
        if (c.protein_id != canonical.id)
            throw ValidationError("variant " + c.variant_id + " targets protein " + c.protein_id +
                                  ", not " + canonical.id);
        if (c.point().position > length)
            throw ValidationError("variant " + c.variant_id + ": position " +
                                  std::to_string(c.point().position) +
                                  " beyond sequence length " + std::to_string(length));
    }

    // Segment i (1-based) ends at i*(L/k) + min(i, L%k): the first L mod k
    // segments are one residue longer.
    auto segment_end = [&](std::size_t i) {
        return i * (length / count) + std::min<std::size_t>(i, length % count);
    };
    auto segment_of = [&](std::size_t position) {
        std::size_t lo = 1, hi = count;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (position <= segment_end(mid))
                hi = mid;
            else
                lo = mid + 1;
        }
        return lo;
    };

    std::vector<const VariantSpec*> best(count + 1, nullptr);
    for (const auto& c : candidates) {
        std::size_t seg = segment_of(c.point().position);
        const VariantSpec* cur = best[seg];
        if (!cur) {
            best[seg] = &c;
            continue;
        }
        // Higher publication count wins; then lower position; then the
        // lexicographically smaller variant_id.
        if (c.publication_count > cur->publication_count ||
            (c.publication_count == cur->publication_count &&
             (c.point().position < cur->point().position ||
              (c.point().position == cur->point().position && c.variant_id < cur->variant_id))))
            best[seg] = &c;
    }

    std::vector<VariantSpec> selected;
    for (std::size_t seg = 1; seg <= count; ++seg)
        if (best[seg]) selected.push_back(*best[seg]);
    return selected;
}

namespace {

std::vector<std::string> split_tsv_line(const std::string& line) {
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

std::vector<VariantSpec> parse_variants_tsv(std::string_view text, const std::string& base_dir) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::vector<VariantSpec> specs;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen && line.rfind("variant_id\t", 0) == 0) {
            header_seen = true;
            continue;
        }
        auto f = split_tsv_line(line);
        if (f.size() != 9)
            throw ParseError("variants TSV line " + std::to_string(line_no) + ": expected 9 fields, got " +
                             std::to_string(f.size()));
        VariantSpec spec;
        spec.variant_id = f[0];
        spec.protein_id = f[1];
        spec.category = variant_category_from_string(f[6]);
        spec.publication_count = static_cast<std::size_t>(std::stoull(f[7]));
        if (f[2] == "point") {
            PointSubstitution p;
            p.position = static_cast<std::size_t>(std::stoull(f[3]));
            if (f[4].size() != 1 || f[5].size() != 1)
                throw ParseError("variants TSV line " + std::to_string(line_no) +
                                 ": ref/alt must be single residues");
            p.ref_residue = f[4][0];
            p.alt_residue = f[5][0];
            spec.kind = p;
        } else if (f[2] == "isoform") {
            if (f[8].empty())
                throw ParseError("variants TSV line " + std::to_string(line_no) +
                                 ": isoform row without isoform_fasta_path");
            fs::path iso_path = fs::path(f[8]);
            if (iso_path.is_relative()) iso_path = fs::path(base_dir) / iso_path;
            auto records = read_fasta_file(iso_path.string());
            spec.kind = FullSequence{records.front().id, records.front().sequence};
        } else {
            throw ParseError("variants TSV line " + std::to_string(line_no) + ": unknown kind '" +
                             f[2] + "'");
        }
        spec.validate();
        specs.push_back(std::move(spec));
    }
    return specs;
}

std::vector<VariantSpec> load_variants_tsv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open variants TSV: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_variants_tsv(buf.str(), fs::path(path).parent_path().string());
}

} // namespace mtafp
