#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "mtafp/sequence.hpp"

namespace mtafp {

enum class VariantCategory { Disease, Natural, Splice };

std::string to_string(VariantCategory c);
VariantCategory variant_category_from_string(std::string_view s);

// Single-residue substitution at a 1-based position.
struct PointSubstitution {
    std::size_t position = 0;
    char ref_residue = 0;
    char alt_residue = 0;

    bool operator==(const PointSubstitution&) const = default;
};

// Full replacement sequence (splice isoform).
struct FullSequence {
    std::string isoform_id;
    AminoAcidSequence sequence;

    bool operator==(const FullSequence&) const = default;
};

struct VariantSpec {
    std::string variant_id;
    std::string protein_id; // accession of the canonical record
    std::variant<PointSubstitution, FullSequence> kind;
    VariantCategory category = VariantCategory::Disease;
    std::size_t publication_count = 0;

    bool is_point() const { return std::holds_alternative<PointSubstitution>(kind); }
    const PointSubstitution& point() const { return std::get<PointSubstitution>(kind); }
    const FullSequence& full_sequence() const { return std::get<FullSequence>(kind); }

    void validate() const; // enforces ref != alt, position >= 1

    bool operator==(const VariantSpec&) const = default;
};

// A source/follow-up pair. The follow-up record id is
// "<canonical_id>|<variant_id>".
struct TestCasePair {
    ProteinRecord source;
    ProteinRecord follow_up;
    VariantSpec variant;

    const std::string& pair_id() const { return follow_up.id; }
};

std::string follow_up_record_id(const std::string& canonical_id, const std::string& variant_id);

// Applies a variant to its canonical record. For point substitutions the
// residue at the given position must equal ref_residue; a mismatch raises
// ValidationError naming the expected and found residues.
ProteinRecord apply_variant(const ProteinRecord& canonical, const VariantSpec& spec);

// One pair per spec, ordered by (protein_id, variant_id). Unresolvable
// protein ids raise ValidationError listing every orphan spec.
std::vector<TestCasePair> generate_pairs(const std::vector<ProteinRecord>& canonicals,
                                         const std::vector<VariantSpec>& specs);

// Largest-remainder apportionment of a variant budget over sequence lengths.
// Every protein receives at least one slot; remainder ties break on the
// lexicographically smaller id. Requires budget >= protein count.
std::map<std::string, std::size_t>
allocate_variant_counts(const std::vector<std::pair<std::string, std::size_t>>& proteins,
                        std::size_t total_budget);

// The variant-selection procedure: partition [1..L] into `count` contiguous
// near-equal segments (the first L mod count segments are one residue
// longer) and pick from each segment the candidate with the most associated
// publications. Ties break on lowest position, then variant_id. Segments
// with no candidate contribute nothing, so the result may be shorter than
// `count`.
std::vector<VariantSpec> select_variants(const ProteinRecord& canonical,
                                         const std::vector<VariantSpec>& candidates,
                                         std::size_t count);

// Variant-spec TSV: variant_id, protein_id, kind (point|isoform), position,
// ref, alt, category, publication_count, isoform_fasta_path. Isoform FASTA
// paths are resolved relative to the TSV location.
std::vector<VariantSpec> load_variants_tsv(const std::string& path);
std::vector<VariantSpec> parse_variants_tsv(std::string_view text, const std::string& base_dir);

} // namespace mtafp
