#include "mtafp/predictions.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace mtafp {

PredictionFormat prediction_format_from_string(std::string_view s) {
    if (s == "plain_tsv") return PredictionFormat::PlainTSV;
    if (s == "cafa") return PredictionFormat::CafaSubmission;
    throw ParseError("unknown prediction format: '" + std::string(s) + "'");
}

std::string to_string(PredictionFormat f) {
    return f == PredictionFormat::PlainTSV ? "plain_tsv" : "cafa";
}

bool AnnotationSet::empty() const {
    for (const auto& s : terms_by_namespace)
        if (!s.empty()) return false;
    return true;
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) fields.push_back(tok);
    return fields;
}

bool is_cafa_header(const std::vector<std::string>& fields) {
    if (fields.empty()) return false;
    const std::string& k = fields.front();
    return k == "AUTHOR" || k == "MODEL" || k == "KEYWORDS" || k == "ACCURACY";
}

} // namespace

std::vector<Prediction> parse_predictions(std::string_view text, PredictionFormat format,
                                          Warnings* warnings) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;

    // (protein, term) -> index into preds; duplicates keep the max score.
    std::vector<Prediction> preds;
    std::map<std::pair<std::string, GoTermId>, std::size_t> seen;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        if (trimmed.find_first_not_of(" \t") == std::string::npos) continue;
        if (trimmed[trimmed.find_first_not_of(" \t")] == '#') continue;

        auto fields = split_ws(line);
        if (format == PredictionFormat::CafaSubmission) {
            if (is_cafa_header(fields)) continue;
            if (fields.size() == 1 && fields[0] == "END") break;
        }
        if (fields.size() < 2 || fields.size() > 3)
            throw ParseError("prediction line " + std::to_string(line_no) +
                             ": expected 'protein_id term [score]', got " +
                             std::to_string(fields.size()) + " fields");

        Prediction p;
        p.protein_id = fields[0];
        if (!GoTermId::looks_valid(fields[1]))
            throw ParseError("prediction line " + std::to_string(line_no) + ": malformed GO id '" +
                             fields[1] + "'");
        p.term = GoTermId::parse(fields[1]);
        if (fields.size() == 3) {
            try {
                std::size_t consumed = 0;
                p.score = std::stod(fields[2], &consumed);
                if (consumed != fields[2].size()) throw std::invalid_argument("trailing junk");
            } catch (const std::exception&) {
                throw ParseError("prediction line " + std::to_string(line_no) +
                                 ": unparseable score '" + fields[2] + "'");
            }
            if (p.score < 0.0 || p.score > 1.0)
                throw ParseError("prediction line " + std::to_string(line_no) + ": score " +
                                 fields[2] + " outside [0,1]");
        }

        auto key = std::make_pair(p.protein_id, p.term);
        auto it = seen.find(key);
        if (it != seen.end()) {
            warn(warnings, "duplicate prediction (" + p.protein_id + ", " + p.term.str() +
                               ") at line " + std::to_string(line_no) + "; keeping max score");
            if (p.score > preds[it->second].score) preds[it->second].score = p.score;
            continue;
        }
        seen.emplace(key, preds.size());
        preds.push_back(std::move(p));
    }
    return preds;
}

std::vector<Prediction> parse_predictions_file(const std::string& path, PredictionFormat format,
                                               Warnings* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open prediction file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_predictions(buf.str(), format, warnings);
    } catch (const Error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

AnnotationSet to_annotation_set(const std::vector<Prediction>& preds, const Ontology& onto,
                                const std::string& protein_id, double threshold,
                                Warnings* warnings) {
    if (threshold < 0.0 || threshold > 1.0)
        throw ValidationError("threshold must lie in [0,1]");

    AnnotationSet set;
    set.protein_id = protein_id;
    for (const auto& p : preds) {
        if (p.protein_id != protein_id) continue;
        if (p.score < threshold) continue;
        GoTermId primary = p.term;
        if (!onto.resolve(p.term, primary)) {
            warn(warnings, protein_id + ": dropping term " + p.term.str() +
                               " unknown to the campaign ontology");
            continue;
        }
        if (onto.is_obsolete(primary)) {
            warn(warnings, protein_id + ": dropping obsolete term " + primary.str());
            continue;
        }
        set.terms(onto.namespace_of(primary)).insert(primary);
    }
    return set;
}

} // namespace mtafp
