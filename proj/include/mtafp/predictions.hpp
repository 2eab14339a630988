#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "mtafp/ontology.hpp"

namespace mtafp {

struct Prediction {
    std::string protein_id;
    GoTermId term;
    double score = 1.0; // in [0,1]

    bool operator==(const Prediction&) const = default;
};

enum class PredictionFormat { PlainTSV, CafaSubmission };

PredictionFormat prediction_format_from_string(std::string_view s);
std::string to_string(PredictionFormat f);

// Parses tool output. Data lines are "protein_id  GO_term  [score]"
// separated by tabs or spaces; the score defaults to 1.0. Blank lines and
// '#' comments are skipped. The CAFA flavour additionally skips
// AUTHOR/MODEL/KEYWORDS headers and stops at the END trailer. Duplicate
// (protein, term) rows keep the maximum score and emit a warning; a
// malformed GO id or an out-of-range score raises ParseError naming the
// line.
std::vector<Prediction> parse_predictions(std::string_view text, PredictionFormat format,
                                          Warnings* warnings = nullptr);
std::vector<Prediction> parse_predictions_file(const std::string& path, PredictionFormat format,
                                               Warnings* warnings = nullptr);

// A tool's retained terms for one record, split by sub-ontology.
struct AnnotationSet {
    std::string protein_id;
    std::array<TermSet, kNamespaceCount> terms_by_namespace;

    const TermSet& terms(Namespace ns) const {
        return terms_by_namespace[static_cast<std::size_t>(ns)];
    }
    TermSet& terms(Namespace ns) { return terms_by_namespace[static_cast<std::size_t>(ns)]; }
    bool empty() const;

    bool operator==(const AnnotationSet&) const = default;
};

// Keeps predictions for `protein_id` scoring >= threshold, resolves alt
// ids, and files each term under its namespace. Terms unknown to the
// ontology and obsolete terms are dropped with a warning; nothing here is
// fatal, mirroring how heterogeneous tool outputs are tolerated.
AnnotationSet to_annotation_set(const std::vector<Prediction>& preds, const Ontology& onto,
                                const std::string& protein_id, double threshold = 0.0,
                                Warnings* warnings = nullptr);

} // namespace mtafp
