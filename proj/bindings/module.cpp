#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "iagree/elicitation.hpp"
#include "iagree/moderation.hpp"
#include "iagree/numeric.hpp"

namespace py = pybind11;
using namespace iagree;

namespace {

std::string interval_repr(const Interval& iv) {
    std::ostringstream out;
    out << "Interval(" << iv.lo << ", " << iv.hi << ")";
    return out.str();
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Interval-agreement fuzzy modelling and risk-score moderation";

    py::class_<RatingScale>(m, "RatingScale")
        .def(py::init<>())
        .def(py::init<double, double>(), py::arg("min"), py::arg("max"))
        .def_readonly("min", &RatingScale::min)
        .def_readonly("max", &RatingScale::max)
        .def("contains", &RatingScale::contains)
        .def("midpoint", &RatingScale::midpoint)
        .def("__eq__", [](const RatingScale& a, const RatingScale& b) { return a == b; });

    py::class_<Interval>(m, "Interval")
        .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
        .def_readonly("lo", &Interval::lo)
        .def_readonly("hi", &Interval::hi)
        .def("width", &Interval::width)
        .def("midpoint", &Interval::midpoint)
        .def("degenerate", &Interval::degenerate)
        .def("__repr__", &interval_repr);

    py::class_<PointOverride>(m, "PointOverride")
        .def_readonly("x", &PointOverride::x)
        .def_readonly("grade", &PointOverride::grade);

    py::class_<MembershipFunction>(m, "MembershipFunction")
        .def(py::init<RatingScale, std::vector<double>, std::vector<double>,
                      std::vector<PointOverride>>(),
             py::arg("scale"), py::arg("breakpoints"), py::arg("cell_grades"),
             py::arg("overrides") = std::vector<PointOverride>{})
        .def_static("zero", &MembershipFunction::zero)
        .def_static("indicator", &MembershipFunction::indicator)
        .def("membership", &MembershipFunction::membership, py::arg("x"),
             "Membership grade at x; raises ValueError outside the scale.")
        .def("__call__", &MembershipFunction::membership, py::arg("x"))
        .def_property_readonly("scale", &MembershipFunction::scale)
        .def_property_readonly("breakpoints", &MembershipFunction::breakpoints)
        .def_property_readonly("cell_grades", &MembershipFunction::cell_grades)
        .def_property_readonly("overrides", &MembershipFunction::overrides)
        .def("area", &MembershipFunction::area);

    py::class_<AgreementT1>(m, "AgreementT1")
        .def_readonly("fn", &AgreementT1::fn)
        .def_readonly("source_count", &AgreementT1::source_count);

    py::class_<ZSliceSet>(m, "ZSliceSet")
        .def(py::init<std::vector<ZSliceSet::Group>>(), py::arg("groups"))
        .def_property_readonly("groups", &ZSliceSet::groups)
        .def("group_count", &ZSliceSet::group_count)
        .def("z_levels", &ZSliceSet::z_levels)
        .def("secondary_grade", &ZSliceSet::secondary_grade, py::arg("x"), py::arg("y"),
             "Fraction of groups whose membership at x reaches y.")
        .def("zslice", &ZSliceSet::zslice, py::arg("j"))
        .def("mean_membership", &ZSliceSet::mean_membership);

    m.def("build_iaa", &build_iaa, py::arg("intervals"), py::arg("scale") = RatingScale{},
          "Interval-agreement T1 set: membership is the covering fraction.");
    m.def("aggregate_zgt2", &aggregate_zgt2, py::arg("groups"));
    m.def("jaccard", &jaccard, py::arg("a"), py::arg("b"),
          "Integral intersection over union of two membership functions.");
    m.def("centroid_t1", &centroid_t1, py::arg("fs"));
    m.def("centroid_zgt2", &centroid_zgt2, py::arg("z"));
    m.def(
        "sample_t1",
        [](const MembershipFunction& fn, double step) {
            std::vector<std::pair<double, double>> rows;
            for (const auto& s : sample(fn, step)) rows.emplace_back(s.x, s.grade);
            return rows;
        },
        py::arg("fs"), py::arg("step"), "Rows (x, grade) on a regular grid.");
    m.def(
        "sample_zgt2",
        [](const ZSliceSet& z, double step) {
            std::vector<std::tuple<double, double, double>> rows;
            for (const auto& s : sample(z, step)) rows.emplace_back(s.x, s.y, s.z);
            return rows;
        },
        py::arg("z"), py::arg("step"), "Rows (x, y, z_level) on a regular grid.");

    py::class_<ResponseRecord>(m, "ResponseRecord")
        .def(py::init([](std::string expert, std::string profession, std::string factor,
                         Interval response, std::optional<double> experience) {
                 return ResponseRecord{std::move(expert), std::move(profession),
                                       std::move(factor), response, experience};
             }),
             py::arg("expert_id"), py::arg("profession"), py::arg("factor_id"),
             py::arg("response"), py::arg("experience_years") = std::nullopt)
        .def_readonly("expert_id", &ResponseRecord::expert_id)
        .def_readonly("profession", &ResponseRecord::profession)
        .def_readonly("factor_id", &ResponseRecord::factor_id)
        .def_readonly("response", &ResponseRecord::response)
        .def_readonly("experience_years", &ResponseRecord::experience_years);

    py::class_<ResponsePanel>(m, "ResponsePanel")
        .def_static("from_records", &ResponsePanel::from_records, py::arg("records"),
                    py::arg("scale") = RatingScale{})
        .def_property_readonly("records", &ResponsePanel::records)
        .def_property_readonly("scale", &ResponsePanel::scale)
        .def("intervals", &ResponsePanel::intervals, py::arg("factor"), py::arg("profession"))
        .def("has_group", &ResponsePanel::has_group)
        .def("factors", &ResponsePanel::factors)
        .def("professions", &ResponsePanel::professions)
        .def("professions_for", &ResponsePanel::professions_for);

    m.def(
        "parse_responses",
        [](const std::string& csv, const RatingScale& scale) {
            std::istringstream in(csv);
            return parse_responses(in, scale);
        },
        py::arg("csv"), py::arg("scale") = RatingScale{},
        "Parse the response CSV format from a string.");
    m.def("parse_responses_file", &parse_responses_file, py::arg("path"),
          py::arg("scale") = RatingScale{});
    m.def(
        "serialize_responses",
        [](const ResponsePanel& panel) {
            std::ostringstream out;
            serialize_responses(panel, out);
            return out.str();
        },
        py::arg("panel"));
    m.def("build_group_fs", &build_group_fs, py::arg("panel"), py::arg("factor"),
          py::arg("profession"));

    py::class_<SimilarityMatrix>(m, "SimilarityMatrix")
        .def_readonly("factor_id", &SimilarityMatrix::factor_id)
        .def_readonly("professions", &SimilarityMatrix::professions)
        .def_readonly("values", &SimilarityMatrix::values);
    m.def("similarity_matrix", &similarity_matrix, py::arg("panel"), py::arg("factor"));

    py::class_<GroupSummary>(m, "GroupSummary")
        .def_readonly("factor_id", &GroupSummary::factor_id)
        .def_readonly("profession", &GroupSummary::profession)
        .def_readonly("count", &GroupSummary::count)
        .def_readonly("midpoint_min", &GroupSummary::midpoint_min)
        .def_readonly("q1", &GroupSummary::q1)
        .def_readonly("median", &GroupSummary::median)
        .def_readonly("q3", &GroupSummary::q3)
        .def_readonly("midpoint_max", &GroupSummary::midpoint_max)
        .def_readonly("mode", &GroupSummary::mode)
        .def_readonly("mean_width", &GroupSummary::mean_width);
    py::class_<PanelSummary>(m, "PanelSummary")
        .def_readonly("groups", &PanelSummary::groups);
    m.def("summarize", &summarize, py::arg("panel"));

    py::class_<FactorInfo>(m, "FactorInfo")
        .def_readonly("factor_id", &FactorInfo::factor_id)
        .def_readonly("category", &FactorInfo::category)
        .def_readonly("display_name", &FactorInfo::display_name);
    m.def(
        "load_factor_manifest",
        [](const std::string& csv) {
            std::istringstream in(csv);
            return load_factor_manifest(in);
        },
        py::arg("csv"));
    m.def("load_factor_manifest_file", &load_factor_manifest_file, py::arg("path"));

    py::enum_<EnsembleStrategy>(m, "EnsembleStrategy")
        .value("mean", EnsembleStrategy::mean)
        .value("min", EnsembleStrategy::min)
        .value("weighted_mean", EnsembleStrategy::weighted_mean)
        .value("fuzzy_rules", EnsembleStrategy::fuzzy_rules)
        .value("bayes", EnsembleStrategy::bayes);

    py::class_<ModerationConfig>(m, "ModerationConfig")
        .def(py::init<>())
        .def_readwrite("scale", &ModerationConfig::scale)
        .def_readwrite("ensemble", &ModerationConfig::ensemble)
        .def_readwrite("weights", &ModerationConfig::weights)
        .def_readwrite("norm_lo", &ModerationConfig::norm_lo)
        .def_readwrite("norm_hi", &ModerationConfig::norm_hi)
        .def_readwrite("round_impacts_dp", &ModerationConfig::round_impacts_dp)
        .def_readwrite("round_multiplier_dp", &ModerationConfig::round_multiplier_dp)
        .def_readwrite("round_score_dp", &ModerationConfig::round_score_dp)
        .def_readwrite("clamp_lo", &ModerationConfig::clamp_lo)
        .def_readwrite("clamp_hi", &ModerationConfig::clamp_hi);

    py::class_<ImpactRegistry>(m, "ImpactRegistry")
        .def(py::init<RatingScale>(), py::arg("scale") = RatingScale{})
        .def("add", &ImpactRegistry::add, py::arg("condition"), py::arg("impact"))
        .def("at", &ImpactRegistry::at, py::arg("condition"))
        .def("contains", &ImpactRegistry::contains)
        .def_property_readonly("scores", &ImpactRegistry::scores)
        .def_static(
            "load_csv",
            [](const std::string& csv, const RatingScale& scale) {
                std::istringstream in(csv);
                return ImpactRegistry::load_csv(in, scale);
            },
            py::arg("csv"), py::arg("scale") = RatingScale{})
        .def_static("load_csv_file", &ImpactRegistry::load_csv_file, py::arg("path"),
                    py::arg("scale") = RatingScale{})
        .def("save_csv", [](const ImpactRegistry& r) {
            std::ostringstream out;
            r.save_csv(out);
            return out.str();
        });

    m.def("defuzzify_factor", &defuzzify_factor, py::arg("z"),
          py::arg("cfg") = ModerationConfig{});
    m.def("merge_impacts", &merge_impacts, py::arg("scores"), py::arg("cfg") = ModerationConfig{});
    m.def("normalize_multiplier", &normalize_multiplier, py::arg("joint"),
          py::arg("cfg") = ModerationConfig{},
          "Linear map of a joint effect onto the multiplier range.");
    m.def("round_dp", &round_dp, py::arg("value"), py::arg("dp"),
          "Decimal rounding with half-to-odd ties.");

    py::class_<ModerationResult>(m, "ModerationResult")
        .def_readonly("base_score", &ModerationResult::base_score)
        .def_readonly("conditions", &ModerationResult::conditions)
        .def_readonly("impact_scores", &ModerationResult::impact_scores)
        .def_readonly("joint_effect", &ModerationResult::joint_effect)
        .def_readonly("multiplier", &ModerationResult::multiplier)
        .def_readonly("moderated_score", &ModerationResult::moderated_score)
        .def_readonly("audit", &ModerationResult::audit);
    m.def("moderate", &moderate, py::arg("base_score"), py::arg("conditions"),
          py::arg("registry"), py::arg("cfg") = ModerationConfig{},
          "Moderate one base risk score under the given conditions.");

    py::class_<BatchRow>(m, "BatchRow")
        .def(py::init([](std::string driver, double base, std::vector<std::string> conditions) {
                 return BatchRow{std::move(driver), base, std::move(conditions)};
             }),
             py::arg("driver_id"), py::arg("base_score"), py::arg("conditions"))
        .def_readonly("driver_id", &BatchRow::driver_id)
        .def_readonly("base_score", &BatchRow::base_score)
        .def_readonly("conditions", &BatchRow::conditions);
    py::class_<DriverModeration>(m, "DriverModeration")
        .def_readonly("driver_id", &DriverModeration::driver_id)
        .def_readonly("result", &DriverModeration::result);
    m.def(
        "load_batch_csv",
        [](const std::string& csv) {
            std::istringstream in(csv);
            return load_batch_csv(in);
        },
        py::arg("csv"));
    m.def("load_batch_csv_file", &load_batch_csv_file, py::arg("path"));
    m.def("moderate_batch", &moderate_batch, py::arg("rows"), py::arg("registry"),
          py::arg("cfg") = ModerationConfig{});

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
