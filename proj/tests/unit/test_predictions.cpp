#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "mtafp/predictions.hpp"

using namespace mtafp;

namespace {

Ontology fixture_ontology() {
    return Ontology::parse_obo_file(testutil::data_path("go_fixture.obo"));
}

} // namespace

TEST_CASE("parse_predictions reads plain TSV lines") {
    auto preds = parse_predictions("P14679\tGO:0016491\t0.9", PredictionFormat::PlainTSV);
    REQUIRE(preds.size() == 1);
    CHECK(preds[0].protein_id == "P14679");
    CHECK(preds[0].term.str() == "GO:0016491");
    CHECK(preds[0].score == doctest::Approx(0.9));

    auto defaulted = parse_predictions("P1\tGO:0000001", PredictionFormat::PlainTSV);
    CHECK(defaulted[0].score == doctest::Approx(1.0));
}

TEST_CASE("CAFA headers and END trailer are skipped") {
    std::string cafa =
        "AUTHOR team_x\nMODEL 1\nKEYWORDS sequence alignment.\n"
        "P14679\tGO:0016491\t0.9\n"
        "END\n"
        "this junk is never parsed\n";
    auto plain = parse_predictions("P14679\tGO:0016491\t0.9", PredictionFormat::PlainTSV);
    CHECK(parse_predictions(cafa, PredictionFormat::CafaSubmission) == plain);
}

TEST_CASE("duplicate (protein, term) rows keep the max score and warn") {
    Warnings warnings;
    auto preds = parse_predictions("P1\tGO:0000001\t0.3\nP1\tGO:0000001\t0.7",
                                   PredictionFormat::PlainTSV, &warnings);
    REQUIRE(preds.size() == 1);
    CHECK(preds[0].score == doctest::Approx(0.7));
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("duplicate") != std::string::npos);
}

TEST_CASE("parse_predictions rejects malformed input with line numbers") {
    CHECK_THROWS_WITH_AS(parse_predictions("P1\tGO:12\t0.5", PredictionFormat::PlainTSV),
                         doctest::Contains("line 1"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_predictions("P1\tGO:0000001\t0.5\nP1\tGO:0000002\t1.5", PredictionFormat::PlainTSV),
        doctest::Contains("line 2"), ParseError);
    CHECK_THROWS_AS(parse_predictions("P1\tGO:0000001\tnope", PredictionFormat::PlainTSV),
                    ParseError);
    CHECK_THROWS_AS(parse_predictions("P1", PredictionFormat::PlainTSV), ParseError);
    CHECK_THROWS_AS(parse_predictions("a\tb\tc\td", PredictionFormat::PlainTSV), ParseError);
}

TEST_CASE("blank lines and comments are ignored; order does not matter") {
    auto a = parse_predictions("# comment\n\nP1\tGO:0000001\t0.2\nP1\tGO:0000002\t0.4\n",
                               PredictionFormat::PlainTSV);
    auto b = parse_predictions("P1\tGO:0000002\t0.4\nP1\tGO:0000001\t0.2\n",
                               PredictionFormat::PlainTSV);
    auto key = [](const Prediction& p) { return std::make_pair(p.term, p.score); };
    std::vector<std::pair<GoTermId, double>> ka, kb;
    for (const auto& p : a) ka.push_back(key(p));
    for (const auto& p : b) kb.push_back(key(p));
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    CHECK(ka == kb);
}

TEST_CASE("to_annotation_set files terms under their namespace") {
    auto onto = fixture_ontology();
    std::vector<Prediction> preds = {{"P1", GoTermId::parse("GO:0016491"), 0.9}};
    auto set = to_annotation_set(preds, onto, "P1", 0.5);
    CHECK(set.terms(Namespace::MolecularFunction) == TermSet{GoTermId::parse("GO:0016491")});
    CHECK(set.terms(Namespace::BiologicalProcess).empty());
    CHECK(set.terms(Namespace::CellularComponent).empty());
}

TEST_CASE("threshold boundaries") {
    auto onto = fixture_ontology();
    std::vector<Prediction> preds = {{"P1", GoTermId::parse("GO:0016491"), 0.99},
                                     {"P1", GoTermId::parse("GO:0042438"), 0.7}};
    auto all_dropped = to_annotation_set(preds, onto, "P1", 1.0);
    CHECK(all_dropped.empty());

    auto at_threshold = to_annotation_set(preds, onto, "P1", 0.7);
    CHECK(at_threshold.terms(Namespace::BiologicalProcess).size() == 1); // >= keeps 0.7
    CHECK_THROWS_AS(to_annotation_set(preds, onto, "P1", 1.5), ValidationError);
}

TEST_CASE("unknown and obsolete terms drop with warnings, never fatally") {
    auto onto = fixture_ontology();
    Warnings warnings;
    std::vector<Prediction> preds = {
        {"P1", GoTermId::parse("GO:0016491"), 1.0}, // known MF
        {"P1", GoTermId::parse("GO:0765432"), 1.0}, // unknown
        {"P1", GoTermId::parse("GO:0004872"), 1.0}, // obsolete
    };
    auto set = to_annotation_set(preds, onto, "P1", 0.0, &warnings);
    CHECK(set.terms(Namespace::MolecularFunction).size() == 1);
    REQUIRE(warnings.size() == 2);
    CHECK(warnings[0].find("unknown") != std::string::npos);
    CHECK(warnings[1].find("obsolete") != std::string::npos);
}

TEST_CASE("alt ids resolve before filing") {
    auto onto = fixture_ontology();
    std::vector<Prediction> preds = {{"P1", GoTermId::parse("GO:0004501"), 1.0}};
    auto set = to_annotation_set(preds, onto, "P1", 0.0);
    CHECK(set.terms(Namespace::MolecularFunction) == TermSet{GoTermId::parse("GO:0004503")});
}

TEST_CASE("namespace partition matches a per-term classification oracle") {
    auto onto = fixture_ontology();
    std::vector<Prediction> preds = {
        {"P1", GoTermId::parse("GO:0004503"), 1.0}, {"P1", GoTermId::parse("GO:0016491"), 0.8},
        {"P1", GoTermId::parse("GO:0042438"), 0.9}, {"P1", GoTermId::parse("GO:0006955"), 0.7},
        {"P1", GoTermId::parse("GO:0042470"), 0.6}, {"P1", GoTermId::parse("GO:0005886"), 1.0},
    };
    auto set = to_annotation_set(preds, onto, "P1", 0.0);

    // oracle: classify each term independently through namespace_of
    std::array<TermSet, kNamespaceCount> want;
    for (const auto& p : preds)
        want[static_cast<std::size_t>(onto.namespace_of(p.term))].insert(p.term);
    CHECK(set.terms_by_namespace == want);

    // union equals retained terms; namespaces pairwise disjoint
    TermSet unioned, all;
    std::size_t total = 0;
    for (const auto& s : set.terms_by_namespace) {
        unioned.insert(s.begin(), s.end());
        total += s.size();
    }
    for (const auto& p : preds) all.insert(p.term);
    CHECK(unioned == all);
    CHECK(total == unioned.size());
}

TEST_CASE("raising the threshold never adds a term (monotone retention)") {
    auto onto = fixture_ontology();
    testutil::Rng rng(555);
    std::vector<GoTermId> pool = onto.term_ids_sorted();
    std::uniform_real_distribution<double> score(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);

    for (int iter = 0; iter < 100; ++iter) {
        std::vector<Prediction> preds;
        for (int k = 0; k < 12; ++k) preds.push_back({"P1", pool[pick(rng)], score(rng)});
        double lo = score(rng), hi = score(rng);
        if (lo > hi) std::swap(lo, hi);
        auto low_set = to_annotation_set(preds, onto, "P1", lo);
        auto high_set = to_annotation_set(preds, onto, "P1", hi);
        for (std::size_t ns = 0; ns < kNamespaceCount; ++ns)
            for (GoTermId t : high_set.terms_by_namespace[ns])
                CHECK(low_set.terms_by_namespace[ns].count(t) == 1);
    }
}
