// Python bindings for the harness core. GO term ids and namespaces cross
// the boundary as plain strings; file-driven campaign orchestration stays
// with the CLI.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mtafp/campaign.hpp"
#include "mtafp/digest.hpp"
#include "mtafp/mockbench.hpp"
#include "mtafp/mr_engine.hpp"
#include "mtafp/ontology.hpp"
#include "mtafp/predictions.hpp"
#include "mtafp/report.hpp"
#include "mtafp/sequence.hpp"
#include "mtafp/variants.hpp"

namespace py = pybind11;
using namespace mtafp;

namespace {

TermSet term_set(const std::set<std::string>& ids) {
    TermSet set;
    for (const auto& id : ids) set.insert(GoTermId::parse(id));
    return set;
}

std::set<std::string> term_strings(const TermSet& terms) {
    std::set<std::string> out;
    for (GoTermId t : terms) out.insert(t.str());
    return out;
}

std::vector<Namespace> namespaces_from(const std::vector<std::string>& names) {
    std::vector<Namespace> out;
    for (const auto& n : names) out.push_back(namespace_from_string(n));
    return out;
}

ReportFormat format_from(const std::string& name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "md" || name == "markdown") return ReportFormat::Markdown;
    throw ValidationError("unknown report format: '" + name + "'");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Metamorphic-testing harness for protein function prediction tools";

    // Translators run newest-first, so the base goes in first as a fallback.
    py::register_exception<Error>(m, "HarnessError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

    // ---- sequences ----
    py::class_<ProteinRecord>(m, "ProteinRecord")
        .def(py::init([](const std::string& id, const std::string& description,
                         const std::string& sequence, bool strict) {
                 return ProteinRecord{id, description,
                                      AminoAcidSequence::from_string(sequence, strict)};
             }),
             py::arg("id"), py::arg("description"), py::arg("sequence"),
             py::arg("strict") = false)
        .def_readonly("id", &ProteinRecord::id)
        .def_readonly("description", &ProteinRecord::description)
        .def_property_readonly("sequence",
                               [](const ProteinRecord& r) { return r.sequence.str(); })
        .def("__eq__", [](const ProteinRecord& a, const ProteinRecord& b) { return a == b; })
        .def("__repr__", [](const ProteinRecord& r) {
            return "ProteinRecord(id='" + r.id + "', length=" +
                   std::to_string(r.sequence.length()) + ")";
        });

    m.def(
        "parse_fasta",
        [](const std::string& text, bool strict) { return parse_fasta(text, strict); },
        py::arg("text"), py::arg("strict") = false);
    m.def("write_fasta", &write_fasta, py::arg("records"));
    m.def("read_fasta_file", &read_fasta_file, py::arg("path"), py::arg("strict") = false);

    // ---- variants ----
    py::class_<VariantSpec>(m, "VariantSpec")
        .def_static(
            "point",
            [](const std::string& variant_id, const std::string& protein_id, std::size_t position,
               const std::string& ref, const std::string& alt, const std::string& category,
               std::size_t publications) {
                if (ref.size() != 1 || alt.size() != 1)
                    throw ValidationError("ref/alt must be single residues");
                VariantSpec spec;
                spec.variant_id = variant_id;
                spec.protein_id = protein_id;
                spec.kind = PointSubstitution{position, ref[0], alt[0]};
                spec.category = variant_category_from_string(category);
                spec.publication_count = publications;
                spec.validate();
                return spec;
            },
            py::arg("variant_id"), py::arg("protein_id"), py::arg("position"), py::arg("ref"),
            py::arg("alt"), py::arg("category") = "disease", py::arg("publications") = 0)
        .def_static(
            "isoform",
            [](const std::string& variant_id, const std::string& protein_id,
               const std::string& isoform_id, const std::string& sequence,
               const std::string& category, std::size_t publications) {
                VariantSpec spec;
                spec.variant_id = variant_id;
                spec.protein_id = protein_id;
                spec.kind = FullSequence{isoform_id, AminoAcidSequence::from_string(sequence)};
                spec.category = variant_category_from_string(category);
                spec.publication_count = publications;
                spec.validate();
                return spec;
            },
            py::arg("variant_id"), py::arg("protein_id"), py::arg("isoform_id"),
            py::arg("sequence"), py::arg("category") = "splice", py::arg("publications") = 0)
        .def_readonly("variant_id", &VariantSpec::variant_id)
        .def_readonly("protein_id", &VariantSpec::protein_id)
        .def_readonly("publication_count", &VariantSpec::publication_count)
        .def_property_readonly("category",
                               [](const VariantSpec& s) { return to_string(s.category); })
        .def_property_readonly("is_point", &VariantSpec::is_point)
        .def_property_readonly("position",
                               [](const VariantSpec& s) -> std::optional<std::size_t> {
                                   if (!s.is_point()) return std::nullopt;
                                   return s.point().position;
                               })
        .def("__repr__", [](const VariantSpec& s) {
            return "VariantSpec('" + s.variant_id + "' on " + s.protein_id + ")";
        });

    py::class_<TestCasePair>(m, "TestCasePair")
        .def_readonly("source", &TestCasePair::source)
        .def_readonly("follow_up", &TestCasePair::follow_up)
        .def_readonly("variant", &TestCasePair::variant)
        .def_property_readonly("pair_id", &TestCasePair::pair_id)
        .def("__repr__",
             [](const TestCasePair& p) { return "TestCasePair('" + p.pair_id() + "')"; });

    m.def("apply_variant", &apply_variant, py::arg("canonical"), py::arg("spec"));
    m.def("generate_pairs", &generate_pairs, py::arg("canonicals"), py::arg("specs"));
    m.def(
        "allocate_variant_counts",
        [](const std::map<std::string, std::size_t>& proteins, std::size_t budget) {
            std::vector<std::pair<std::string, std::size_t>> list(proteins.begin(),
                                                                  proteins.end());
            return allocate_variant_counts(list, budget);
        },
        py::arg("protein_lengths"), py::arg("total_budget"));
    m.def("select_variants", &select_variants, py::arg("canonical"), py::arg("candidates"),
          py::arg("count"));
    m.def("load_variants_tsv", &load_variants_tsv, py::arg("path"));

    // ---- ontology ----
    py::class_<Ontology>(m, "Ontology")
        .def_static("from_obo", [](const std::string& text) { return Ontology::parse_obo(text); },
                    py::arg("text"))
        .def_static("from_file", &Ontology::parse_obo_file, py::arg("path"))
        .def_static("from_files", &Ontology::parse_obo_files, py::arg("paths"))
        .def("ancestors",
             [](const Ontology& o, const std::string& id) {
                 return term_strings(o.ancestors(GoTermId::parse(id)));
             },
             py::arg("term"))
        .def("namespace_of",
             [](const Ontology& o, const std::string& id) {
                 return to_string(o.namespace_of(GoTermId::parse(id)));
             },
             py::arg("term"))
        .def("propagate",
             [](const Ontology& o, const std::set<std::string>& terms) {
                 return term_strings(o.propagate(term_set(terms)));
             },
             py::arg("terms"))
        .def("contains",
             [](const Ontology& o, const std::string& id) {
                 return o.contains(GoTermId::parse(id));
             },
             py::arg("term"))
        .def("is_obsolete",
             [](const Ontology& o, const std::string& id) {
                 return o.is_obsolete(GoTermId::parse(id));
             },
             py::arg("term"))
        .def("name_of",
             [](const Ontology& o, const std::string& id) {
                 return o.name_of(GoTermId::parse(id));
             },
             py::arg("term"))
        .def_property_readonly("term_count", &Ontology::term_count)
        .def_property_readonly("digest",
                               [](const Ontology& o) { return to_hex(o.source_digest()); })
        .def("__contains__", [](const Ontology& o, const std::string& id) {
            return GoTermId::looks_valid(id) && o.contains(GoTermId::parse(id));
        });

    // ---- predictions ----
    py::class_<Prediction>(m, "Prediction")
        .def(py::init([](const std::string& protein_id, const std::string& term, double score) {
                 return Prediction{protein_id, GoTermId::parse(term), score};
             }),
             py::arg("protein_id"), py::arg("term"), py::arg("score") = 1.0)
        .def_readonly("protein_id", &Prediction::protein_id)
        .def_property_readonly("term", [](const Prediction& p) { return p.term.str(); })
        .def_readonly("score", &Prediction::score)
        .def("__repr__", [](const Prediction& p) {
            return "Prediction(" + p.protein_id + ", " + p.term.str() + ", " +
                   std::to_string(p.score) + ")";
        });

    m.def(
        "parse_predictions",
        [](const std::string& text, const std::string& format) {
            Warnings warnings;
            auto preds =
                parse_predictions(text, prediction_format_from_string(format), &warnings);
            return py::make_tuple(preds, warnings);
        },
        py::arg("text"), py::arg("format") = "plain_tsv",
        "Returns (predictions, warnings).");

    py::class_<AnnotationSet>(m, "AnnotationSet")
        .def_readonly("protein_id", &AnnotationSet::protein_id)
        .def("terms",
             [](const AnnotationSet& a, const std::string& ns) {
                 return term_strings(a.terms(namespace_from_string(ns)));
             },
             py::arg("namespace"))
        .def_property_readonly("empty", &AnnotationSet::empty);

    m.def(
        "to_annotation_set",
        [](const std::vector<Prediction>& preds, const Ontology& onto,
           const std::string& protein_id, double threshold) {
            Warnings warnings;
            auto set = to_annotation_set(preds, onto, protein_id, threshold, &warnings);
            return py::make_tuple(set, warnings);
        },
        py::arg("predictions"), py::arg("ontology"), py::arg("protein_id"),
        py::arg("threshold") = 0.0, "Returns (annotation_set, warnings).");

    // ---- relation engine ----
    py::class_<MrVerdict>(m, "MrVerdict")
        .def(py::init([](const std::string& pair_id, const std::string& tool_id,
                         const std::string& ns, const std::string& outcome,
                         const std::string& reason) {
                 MrVerdict v;
                 v.pair_id = pair_id;
                 v.tool_id = tool_id;
                 v.ns = namespace_from_string(ns);
                 v.outcome.kind = mr_outcome_kind_from_string(outcome);
                 v.outcome.reason = reason;
                 if (v.outcome.kind == MrOutcomeKind::Inconclusive && reason.empty())
                     throw ValidationError("inconclusive verdicts carry a reason");
                 return v;
             }),
             py::arg("pair_id"), py::arg("tool_id"), py::arg("namespace"), py::arg("outcome"),
             py::arg("reason") = "")
        .def_readonly("pair_id", &MrVerdict::pair_id)
        .def_readonly("tool_id", &MrVerdict::tool_id)
        .def_property_readonly("namespace", [](const MrVerdict& v) { return to_string(v.ns); })
        .def_property_readonly("outcome",
                               [](const MrVerdict& v) { return to_string(v.outcome.kind); })
        .def_property_readonly("reason", [](const MrVerdict& v) { return v.outcome.reason; })
        .def("__repr__", [](const MrVerdict& v) {
            return "MrVerdict(" + v.pair_id + ", " + v.tool_id + ", " + to_string(v.ns) + ", " +
                   to_string(v.outcome.kind) + ")";
        });

    m.def(
        "check_mr_change",
        [](const std::set<std::string>& source, const std::set<std::string>& follow_up) {
            return check_mr_change(term_set(source), term_set(follow_up));
        },
        py::arg("source_terms"), py::arg("follow_up_terms"),
        "True when the two term sets differ (strict set semantics).");

    m.def(
        "evaluate_pair",
        [](const TestCasePair& pair, const std::string& tool_id,
           const std::optional<AnnotationSet>& source,
           const std::optional<AnnotationSet>& follow_up,
           const std::vector<std::string>& namespaces) {
            return evaluate_pair(pair, tool_id, source, follow_up, namespaces_from(namespaces));
        },
        py::arg("pair"), py::arg("tool_id"), py::arg("source_annotations"),
        py::arg("follow_up_annotations"),
        py::arg("namespaces") =
            std::vector<std::string>{"molecular_function", "biological_process"});

    m.def(
        "diagnostic_difference",
        [](const std::set<std::string>& source, const std::set<std::string>& follow_up,
           const Ontology& onto) {
            auto diff = diagnostic_difference(term_set(source), term_set(follow_up), onto);
            py::list notes;
            for (const auto& note : diff.hierarchical_notes)
                notes.append(py::make_tuple(
                    note.removed_term.str(), note.added_term.str(),
                    note.relation == HierarchicalRelation::AddedIsAncestorOfRemoved
                        ? "added-is-ancestor"
                        : "added-is-descendant"));
            py::dict out;
            out["added"] = term_strings(diff.added);
            out["removed"] = term_strings(diff.removed);
            out["hierarchical_notes"] = notes;
            return out;
        },
        py::arg("source_terms"), py::arg("follow_up_terms"), py::arg("ontology"));

    // ---- reporting ----
    py::class_<TestReport>(m, "TestReport")
        .def_property_readonly("verdicts", [](const TestReport& r) { return r.verdicts; })
        .def("tool_total",
             [](const TestReport& r, const std::string& tool, const std::string& ns) {
                 auto it = r.tool_totals.find({tool, namespace_from_string(ns)});
                 if (it == r.tool_totals.end())
                     throw ValidationError("no totals for (" + tool + ", " + ns + ")");
                 return py::make_tuple(it->second.pass, it->second.fail,
                                       it->second.inconclusive);
             },
             py::arg("tool_id"), py::arg("namespace"))
        .def("pass_percentage",
             [](const TestReport& r, const std::string& variant, const std::string& ns) {
                 return pass_percentage(r, variant, namespace_from_string(ns));
             },
             py::arg("variant_id"), py::arg("namespace"))
        .def("emit",
             [](const TestReport& r, const std::string& format) {
                 return emit(r, format_from(format));
             },
             py::arg("format") = "json");

    m.def(
        "aggregate",
        [](const std::vector<MrVerdict>& verdicts, const std::vector<TestCasePair>& pairs,
           const std::string& ontology_digest, double threshold) {
            return aggregate(verdicts, pairs, ReportMeta{ontology_digest, threshold, ""});
        },
        py::arg("verdicts"), py::arg("pairs"), py::arg("ontology_digest") = "",
        py::arg("threshold") = 0.0);
    m.def("report_from_json", &report_from_json, py::arg("json_text"));
    m.def("anonymize_tools", &anonymize_tools, py::arg("report"),
          py::arg("tool_order") = std::vector<std::string>{});

    // ---- mock predictors ----
    m.def(
        "mock_predict",
        [](const std::string& behavior, const std::filesystem::path& base_json,
           const ProteinRecord& record, std::uint64_t seed,
           const std::optional<std::reference_wrapper<const Ontology>>& ontology) {
            MockSpec spec;
            spec.behavior = mock_behavior_from_string(behavior);
            if (spec.behavior != MockBehavior::Empty)
                spec.base_annotations = load_mock_base(base_json);
            spec.seed = seed;
            if (ontology) spec.ontology = &ontology->get();
            return mock_predict(spec, record);
        },
        py::arg("behavior"), py::arg("base_json"), py::arg("record"), py::arg("seed") = 0,
        py::arg("ontology") = py::none());

    m.attr("NAMESPACES") =
        std::vector<std::string>{"molecular_function", "biological_process",
                                 "cellular_component"};
#ifdef MTAFP_VERSION
    m.attr("__version__") = MTAFP_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
