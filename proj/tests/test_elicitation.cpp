#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "iagree/elicitation.hpp"
#include "oracle.hpp"

using namespace iagree;

namespace {

const RatingScale kScale{};

constexpr const char* kSampleCsv =
    "expert_id,profession,factor_id,lo,hi\n"
    "# three HGV drivers on feeling_sad, wider fleet-manager answers\n"
    "E1,HD,feeling_sad,1,2\n"
    "E2,HD,feeling_sad,1,3\n"
    "E3,HD,feeling_sad,2,4\n"
    "E4,FM,feeling_sad,1,5\n"
    "E5,FM,feeling_sad,1.5,4\n"
    "E6,FM,feeling_sad,1,6\n"
    "E1,HD,rainy,3,5\n"
    "E4,FM,rainy,2,4\n";

ResponsePanel sample_panel() {
    std::istringstream in(kSampleCsv);
    return parse_responses(in, kScale);
}

} // namespace

TEST_CASE("parse_responses maps rows to validated intervals") {
    auto panel = sample_panel();
    CHECK(panel.records().size() == 8);
    CHECK(panel.intervals("feeling_sad", "HD") ==
          std::vector<Interval>{{1, 2}, {1, 3}, {2, 4}});
    CHECK(panel.intervals("feeling_sad", "FM") ==
          std::vector<Interval>{{1, 5}, {1.5, 4}, {1, 6}});
    CHECK(panel.factors() == std::vector<std::string>{"feeling_sad", "rainy"});
    CHECK(panel.professions() == std::vector<std::string>{"FM", "HD"});
    CHECK(panel.intervals("rainy", "HD") == std::vector<Interval>{{3, 5}});
}

TEST_CASE("empty hi means a certain single-score response") {
    std::istringstream in(
        "expert_id,profession,factor_id,lo,hi\n"
        "E2,FM,feeling_happy,9,\n");
    auto panel = parse_responses(in, kScale);
    CHECK(panel.intervals("feeling_happy", "FM") == std::vector<Interval>{{9, 9}});
}

TEST_CASE("parse_responses errors carry line numbers") {
    auto expect_throw = [](const char* csv, const char* needle) {
        std::istringstream in(csv);
        try {
            parse_responses(in, RatingScale{});
            FAIL_CHECK("expected ValidationError for: " << csv);
        } catch (const ValidationError& err) {
            CHECK(std::string(err.what()).find(needle) != std::string::npos);
        }
    };
    expect_throw("expert_id,profession,factor_id,lo,hi\nE3,R,rainy,6,4\n", "line 2");
    expect_throw("expert_id,profession,factor_id,lo,hi\nE3,R,rainy,0,4\n", "outside scale");
    expect_throw("expert_id,profession,factor_id,lo,hi\nE3,R,rainy,abc,4\n", "not a number");
    expect_throw("expert_id,profession,factor_id,lo,hi\nE3,R,rainy,4\n", "expected 5 fields");
    expect_throw("bad,header\n", "expected header");
    expect_throw("", "empty panel");
    expect_throw("expert_id,profession,factor_id,lo,hi\n", "empty panel");
    expect_throw(
        "expert_id,profession,factor_id,lo,hi\nE1,HD,rainy,1,2\nE1,R,rainy,2,3\n",
        "duplicate (expert, factor)");
}

TEST_CASE("experience years column is optional but validated") {
    std::istringstream in(
        "expert_id,profession,factor_id,lo,hi,experience_years\n"
        "E1,HD,rainy,3,5,22.5\n"
        "E2,HD,rainy,4,,\n");
    auto panel = parse_responses(in, kScale);
    CHECK(panel.records()[0].experience_years == 22.5);
    CHECK_FALSE(panel.records()[1].experience_years.has_value());
    CHECK(panel.records()[1].response == Interval{4, 4});

    std::istringstream bad(
        "expert_id,profession,factor_id,lo,hi,experience_years\n"
        "E1,HD,rainy,3,5,-1\n");
    CHECK_THROWS_AS(parse_responses(bad, kScale), ValidationError);
}

TEST_CASE("panel_intervals reports unknown groups with available keys") {
    auto panel = sample_panel();
    try {
        panel.intervals("sunny", "HD");
        FAIL_CHECK("expected ValidationError");
    } catch (const ValidationError& err) {
        std::string msg = err.what();
        CHECK(msg.find("sunny") != std::string::npos);
        CHECK(msg.find("(feeling_sad, HD)") != std::string::npos);
    }
}

TEST_CASE("build_group_fs delegates to the IAA construction") {
    auto panel = sample_panel();
    auto hd = build_group_fs(panel, "feeling_sad", "HD");
    CHECK(hd.source_count == 3);
    CHECK(hd.fn.membership(2.0) == 1.0);
    CHECK(hd.fn.membership(3.5) == 1.0 / 3.0);

    auto fm = build_group_fs(panel, "feeling_sad", "FM");
    CHECK(fm.fn.membership(2.0) == 1.0);
    CHECK(fm.fn.membership(5.5) == 1.0 / 3.0);
}

TEST_CASE("similarity_matrix is symmetric with unit diagonal") {
    auto panel = sample_panel();
    auto matrix = similarity_matrix(panel, "feeling_sad");
    CHECK(matrix.professions == std::vector<std::string>{"FM", "HD"});
    CHECK(matrix.values[0][0] == 1.0);
    CHECK(matrix.values[1][1] == 1.0);
    CHECK(matrix.values[0][1] == matrix.values[1][0]);
    double expected = oracle::riemann_jaccard({{1, 5}, {1.5, 4}, {1, 6}},
                                              {{1, 2}, {1, 3}, {2, 4}}, kScale, 100000);
    CHECK(std::fabs(matrix.values[0][1] - expected) < 1e-4);
}

TEST_CASE("similarity_matrix trivial panels") {
    std::istringstream in(
        "expert_id,profession,factor_id,lo,hi\n"
        "E1,HD,q,2,4\n"
        "E2,FM,q,2,4\n"
        "E3,HD,w,1,2\n"
        "E4,FM,w,5,6\n");
    auto panel = parse_responses(in, kScale);
    CHECK(similarity_matrix(panel, "q").values[0][1] == 1.0);
    CHECK(similarity_matrix(panel, "w").values[0][1] == 0.0);

    std::istringstream lone(
        "expert_id,profession,factor_id,lo,hi\nE1,HD,q,2,4\n");
    CHECK_THROWS_AS(similarity_matrix(parse_responses(lone, kScale), "q"), ValidationError);
}

TEST_CASE("summarize per-group statistics") {
    std::istringstream in(
        "expert_id,profession,factor_id,lo,hi\n"
        "E1,HD,q,4,6\n"   // midpoint 5
        "E2,HD,q,5,5\n"   // midpoint 5
        "E3,HD,q,6,8\n"   // midpoint 7
        "E4,FM,w,2,4\n");
    auto panel = parse_responses(in, kScale);
    auto summary = summarize(panel);
    REQUIRE(summary.groups.size() == 2);

    const auto& hd = summary.groups[0];
    CHECK(hd.factor_id == "q");
    CHECK(hd.profession == "HD");
    CHECK(hd.count == 3);
    CHECK(hd.midpoint_min == 5.0);
    CHECK(hd.midpoint_max == 7.0);
    CHECK(hd.q1 == 5.0);
    CHECK(hd.median == 5.0);
    CHECK(hd.q3 == 6.0);
    CHECK(hd.mode == 5);
    CHECK(std::fabs(hd.mean_width - 4.0 / 3.0) < 1e-12);

    const auto& fm = summary.groups[1];
    CHECK(fm.count == 1);
    CHECK(fm.midpoint_min == 3.0);
    CHECK(fm.q1 == 3.0);
    CHECK(fm.median == 3.0);
    CHECK(fm.q3 == 3.0);
    CHECK(fm.midpoint_max == 3.0);
    CHECK(fm.mode == 3);
    CHECK(fm.mean_width == 2.0);
}

TEST_CASE("summarize mean width of the wide sample group") {
    auto panel = sample_panel();
    auto summary = summarize(panel);
    auto it = std::find_if(summary.groups.begin(), summary.groups.end(), [](const auto& g) {
        return g.factor_id == "feeling_sad" && g.profession == "FM";
    });
    REQUIRE(it != summary.groups.end());
    CHECK(std::fabs(it->mean_width - 11.5 / 3.0) < 1e-12);  // (4 + 2.5 + 5) / 3
}

TEST_CASE("summarize modal ties lean toward the scale midpoint") {
    std::istringstream in(
        "expert_id,profession,factor_id,lo,hi\n"
        "E1,HD,q,3,3\n"
        "E2,HD,q,6,6\n"
        "E3,HD,q,4,5\n");  // midpoint 4.5 rounds toward the midpoint -> 5
    auto panel = parse_responses(in, kScale);
    // counts: {3:1, 6:1, 5:1} -> tie of three, 5 is closest to the midpoint
    CHECK(summarize(panel).groups[0].mode == 5);
}

TEST_CASE("serialize/parse round-trip preserves records") {
    auto panel = sample_panel();
    std::ostringstream out;
    serialize_responses(panel, out);
    std::istringstream in(out.str());
    auto again = parse_responses(in, kScale);
    CHECK(again.records() == panel.records());
}

TEST_CASE("index completeness and order invariance") {
    std::mt19937 rng(2024);
    auto panel = sample_panel();

    std::size_t indexed = 0;
    for (const auto& [key, ivs] : panel.index()) indexed += ivs.size();
    CHECK(indexed == panel.records().size());

    auto shuffled_records = panel.records();
    std::shuffle(shuffled_records.begin(), shuffled_records.end(), rng);
    auto shuffled = ResponsePanel::from_records(shuffled_records, kScale);

    for (const auto& factor : panel.factors()) {
        for (const auto& prof : panel.professions_for(factor)) {
            auto a = build_group_fs(panel, factor, prof);
            auto b = build_group_fs(shuffled, factor, prof);
            CHECK(a.fn.breakpoints() == b.fn.breakpoints());
            CHECK(a.fn.cell_grades() == b.fn.cell_grades());
        }
        auto ma = similarity_matrix(panel, factor);
        auto mb = similarity_matrix(shuffled, factor);
        CHECK(ma.values == mb.values);
    }

    auto sa = summarize(panel);
    auto sb = summarize(shuffled);
    REQUIRE(sa.groups.size() == sb.groups.size());
    for (std::size_t i = 0; i < sa.groups.size(); ++i) {
        CHECK(sa.groups[i].median == sb.groups[i].median);
        CHECK(sa.groups[i].mode == sb.groups[i].mode);
        CHECK(sa.groups[i].mean_width == sb.groups[i].mean_width);
    }
}

TEST_CASE("factor manifest parsing") {
    std::istringstream in(
        "factor_id,category,display_name\n"
        "rainy,weather,Rainy weather\n"
        "feeling_sad,affective,Feeling sad\n");
    auto manifest = load_factor_manifest(in);
    REQUIRE(manifest.size() == 2);
    CHECK(manifest[0].factor_id == "rainy");
    CHECK(manifest[1].category == "affective");

    std::istringstream bad_cat(
        "factor_id,category,display_name\nrainy,climate,Rainy\n");
    CHECK_THROWS_AS(load_factor_manifest(bad_cat), ValidationError);
    std::istringstream dup(
        "factor_id,category,display_name\nrainy,weather,A\nrainy,weather,B\n");
    CHECK_THROWS_AS(load_factor_manifest(dup), ValidationError);
}
