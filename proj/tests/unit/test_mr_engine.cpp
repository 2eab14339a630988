#include <doctest.h>

#include "helpers.hpp"
#include "mtafp/mr_engine.hpp"

using namespace mtafp;

namespace {

GoTermId go(std::uint32_t n) { return GoTermId::from_number(n); }

TestCasePair toy_pair() {
    TestCasePair pair;
    pair.source = {"P1", "", AminoAcidSequence::from_string("ACDG")};
    pair.variant.variant_id = "V1";
    pair.variant.protein_id = "P1";
    pair.variant.kind = PointSubstitution{4, 'G', 'S'};
    pair.follow_up = apply_variant(pair.source, pair.variant);
    return pair;
}

AnnotationSet ann(const std::string& id, TermSet mf, TermSet bp) {
    AnnotationSet a;
    a.protein_id = id;
    a.terms(Namespace::MolecularFunction) = std::move(mf);
    a.terms(Namespace::BiologicalProcess) = std::move(bp);
    return a;
}

} // namespace

TEST_CASE("check_mr_change is strict set inequality") {
    TermSet x{go(16491)};
    CHECK_FALSE(check_mr_change(x, x)); // identical sets: no change, Fail
    CHECK(check_mr_change(x, TermSet{go(16491), go(4503)}));
    CHECK_FALSE(check_mr_change({}, {}));
}

TEST_CASE("hierarchy never collapses a difference: parent vs child is a change") {
    // C is_a P in any ontology; exact matching must still see a change.
    TermSet parent_only{go(100)};
    TermSet child_only{go(101)};
    CHECK(check_mr_change(parent_only, child_only));
}

TEST_CASE("change detection is symmetric and a set never differs from itself") {
    testutil::Rng rng(9001);
    std::uniform_int_distribution<std::uint32_t> term(1, 40);
    std::uniform_int_distribution<std::size_t> size(0, 8);
    for (int iter = 0; iter < 300; ++iter) {
        TermSet a, b;
        for (std::size_t i = 0; i < size(rng); ++i) a.insert(go(term(rng)));
        for (std::size_t i = 0; i < size(rng); ++i) b.insert(go(term(rng)));
        CHECK(check_mr_change(a, b) == check_mr_change(b, a));
        CHECK_FALSE(check_mr_change(a, a));
    }
}

TEST_CASE("evaluate_pair reports each namespace independently") {
    auto pair = toy_pair();
    auto source = ann(pair.source.id, {go(1)}, {go(3)});
    auto follow = ann(pair.follow_up.id, {go(1), go(2)}, {go(3)});
    auto verdicts = evaluate_pair(pair, "toolX", source, follow,
                                  {Namespace::MolecularFunction, Namespace::BiologicalProcess});
    REQUIRE(verdicts.size() == 2);
    CHECK(verdicts[0].ns == Namespace::MolecularFunction);
    CHECK(verdicts[0].outcome == MrOutcome::pass());
    CHECK(verdicts[1].ns == Namespace::BiologicalProcess);
    CHECK(verdicts[1].outcome == MrOutcome::fail());
    for (const auto& v : verdicts) {
        CHECK(v.pair_id == pair.pair_id());
        CHECK(v.tool_id == "toolX");
    }
}

TEST_CASE("missing output on either side is Inconclusive per namespace") {
    auto pair = toy_pair();
    auto source = ann(pair.source.id, {go(1)}, {go(3)});
    auto verdicts = evaluate_pair(pair, "toolX", source, std::nullopt,
                                  {Namespace::MolecularFunction, Namespace::BiologicalProcess});
    REQUIRE(verdicts.size() == 2);
    for (const auto& v : verdicts)
        CHECK(v.outcome == MrOutcome::inconclusive("missing-output"));
}

TEST_CASE("empty sets on both sides are Inconclusive, one-sided emptiness is not") {
    auto pair = toy_pair();
    auto source = ann(pair.source.id, {}, {go(3)});
    auto follow = ann(pair.follow_up.id, {}, {});
    auto verdicts = evaluate_pair(pair, "toolX", source, follow,
                                  {Namespace::MolecularFunction, Namespace::BiologicalProcess});
    CHECK(verdicts[0].outcome == MrOutcome::inconclusive("empty-both")); // MF empty on both
    CHECK(verdicts[1].outcome == MrOutcome::pass());                     // BP {3} vs {}
}

TEST_CASE("the relation registry carries the default relation") {
    CHECK(mr_registry().count(kDefaultMrName) == 1);
    auto pair = toy_pair();
    CHECK_THROWS_AS(evaluate_pair(pair, "t", std::nullopt, std::nullopt,
                                  {Namespace::MolecularFunction}, "mr-unknown"),
                    ValidationError);
}

TEST_CASE("diagnostic_difference decomposes additions, deletions and hierarchy") {
    auto onto = Ontology::parse_obo(
        "\n[Term]\nid: GO:0000001\nname: P\nnamespace: molecular_function\n"
        "\n[Term]\nid: GO:0000002\nname: C\nnamespace: molecular_function\nis_a: GO:0000001\n"
        "\n[Term]\nid: GO:0000003\nname: other\nnamespace: molecular_function\n");

    SUBCASE("pure addition") {
        auto d = diagnostic_difference({go(3)}, {go(3), go(1)}, onto);
        CHECK(d.added == TermSet{go(1)});
        CHECK(d.removed.empty());
        CHECK(d.hierarchical_notes.empty());
    }
    SUBCASE("parent replaced by child is annotated") {
        auto d = diagnostic_difference({go(1)}, {go(2)}, onto);
        CHECK(d.added == TermSet{go(2)});
        CHECK(d.removed == TermSet{go(1)});
        REQUIRE(d.hierarchical_notes.size() == 1);
        const auto& note = *d.hierarchical_notes.begin();
        CHECK(note.removed_term == go(1));
        CHECK(note.added_term == go(2));
        CHECK(note.relation == HierarchicalRelation::AddedIsDescendantOfRemoved);
    }
    SUBCASE("child replaced by parent is annotated the other way") {
        auto d = diagnostic_difference({go(2)}, {go(1)}, onto);
        REQUIRE(d.hierarchical_notes.size() == 1);
        CHECK(d.hierarchical_notes.begin()->relation ==
              HierarchicalRelation::AddedIsAncestorOfRemoved);
    }
    SUBCASE("identical sets decompose to nothing") {
        auto d = diagnostic_difference({go(1), go(2)}, {go(1), go(2)}, onto);
        CHECK(d.added.empty());
        CHECK(d.removed.empty());
        CHECK(d.hierarchical_notes.empty());
    }
    SUBCASE("unknown terms are excluded with a warning") {
        Warnings warnings;
        auto d = diagnostic_difference({go(77)}, {go(1)}, onto, &warnings);
        CHECK(d.removed == TermSet{go(77)});
        CHECK(d.hierarchical_notes.empty());
        REQUIRE(warnings.size() == 1);
    }
}

TEST_CASE("sort_verdicts canonicalizes (pair, tool, namespace) order") {
    std::vector<MrVerdict> vs = {
        {"p2", "t1", Namespace::MolecularFunction, MrOutcome::pass()},
        {"p1", "t2", Namespace::BiologicalProcess, MrOutcome::fail()},
        {"p1", "t1", Namespace::BiologicalProcess, MrOutcome::pass()},
        {"p1", "t1", Namespace::MolecularFunction, MrOutcome::pass()},
    };
    sort_verdicts(vs);
    CHECK(vs[0].pair_id == "p1");
    CHECK(vs[0].tool_id == "t1");
    CHECK(vs[0].ns == Namespace::MolecularFunction);
    CHECK(vs[1].ns == Namespace::BiologicalProcess);
    CHECK(vs[2].tool_id == "t2");
    CHECK(vs[3].pair_id == "p2");
}
