#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "crashtopics/corpus.hpp"
#include "crashtopics/csv.hpp"
#include "crashtopics/errors.hpp"
#include "crashtopics/lda.hpp"
#include "crashtopics/report.hpp"

using namespace crashtopics;

namespace {

// Hand-built K=2 model over vocab {brake, bumper, lane} and three documents.
TopicModel tiny_model() {
    TopicModel model;
    model.config.K = 2;
    model.num_terms = 3;
    model.vocab_terms = {"brake", "bumper", "lane"};
    model.doc_ids = {"R1", "R2", "R3"};
    model.phi = {{0.1, 0.7, 0.2}, {0.5, 0.2, 0.3}};
    model.theta = {{0.9, 0.1}, {0.2, 0.8}, {0.6, 0.4}};
    return model;
}

NarrativeRecord make_record(const std::string& id, Mode mode, std::optional<Motion> motion,
                            const std::string& narrative) {
    NarrativeRecord r;
    r.report_id = id;
    r.mode = mode;
    r.motion = motion;
    r.narrative = narrative;
    return r;
}

std::vector<NarrativeRecord> tiny_records() {
    std::vector<NarrativeRecord> recs;
    recs.push_back(make_record("R1", Mode::Autonomous, Motion::Stopped, "Struck from behind."));
    recs.push_back(make_record("R2", Mode::Transition, Motion::Moving, "Driver took over."));
    recs.push_back(make_record("R3", Mode::Autonomous, std::nullopt, "Side contact in lane."));
    recs[0].crash_date = Date{2016, 9, 14};
    recs[1].crash_type = CrashType::RearEnd;
    recs[2].object_struck = ObjectStruck::Vehicle;
    return recs;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("top_terms: weights ordered, ties lexicographic") {
    const TopicModel model = tiny_model();
    const auto terms = top_terms(model, 3);
    REQUIRE(terms.size() == 2);
    CHECK(terms[0][0].term == "bumper");
    CHECK(terms[0][0].weight == doctest::Approx(0.7));
    CHECK(terms[0][1].term == "lane");
    CHECK(terms[0][2].term == "brake");
    CHECK(terms[1][0].term == "brake");

    // uniform row: lexicographic order decides everything
    TopicModel flat = model;
    flat.phi[0] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    const auto tied = top_terms(flat, 2);
    CHECK(tied[0][0].term == "brake");
    CHECK(tied[0][1].term == "bumper");
}

TEST_CASE("top_terms: one-hot row and the full-vocabulary case") {
    TopicModel model = tiny_model();
    model.phi[1] = {0.0, 0.0, 1.0};
    const auto single = top_terms(model, 1);
    CHECK(single[1][0].term == "lane");
    CHECK(single[1][0].weight == doctest::Approx(1.0));

    const auto all = top_terms(model, 3);
    for (const auto& topic : all) {
        std::vector<std::string> seen;
        for (const auto& tw : topic) seen.push_back(tw.term);
        std::sort(seen.begin(), seen.end());
        CHECK(seen == std::vector<std::string>{"brake", "bumper", "lane"});
    }
}

TEST_CASE("top_terms: n beyond V rejected, detached model rejected") {
    const TopicModel model = tiny_model();
    CHECK_THROWS_AS(top_terms(model, 4), InputError);
    TopicModel detached = model;
    detached.vocab_terms.clear();
    CHECK_THROWS_AS(top_terms(detached, 1), AlignmentError);
}

TEST_CASE("narrative_topic_matrix: grouped ordering contract") {
    const auto rows = narrative_topic_matrix(tiny_model(), tiny_records());
    REQUIRE(rows.size() == 3);
    // transition first, then autonomous with stopped before unannotated
    CHECK(rows[0].report_id == "R2");
    CHECK(rows[1].report_id == "R1");
    CHECK(rows[2].report_id == "R3");
    CHECK(rows[1].theta == std::vector<double>{0.9, 0.1});

    double sum = 0.0;
    for (double x : rows[0].theta) sum += x;
    CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("narrative_topic_matrix: ties within a group fall back to report_id") {
    TopicModel model = tiny_model();
    std::vector<NarrativeRecord> recs;
    recs.push_back(make_record("R3", Mode::Autonomous, Motion::Moving, "c"));
    recs.push_back(make_record("R1", Mode::Autonomous, Motion::Moving, "a"));
    recs.push_back(make_record("R2", Mode::Autonomous, Motion::Moving, "b"));
    const auto rows = narrative_topic_matrix(model, recs);
    CHECK(rows[0].report_id == "R1");
    CHECK(rows[1].report_id == "R2");
    CHECK(rows[2].report_id == "R3");
}

TEST_CASE("narrative_topic_matrix: missing records all named") {
    TopicModel model = tiny_model();
    std::vector<NarrativeRecord> recs = {tiny_records()[0]};  // only R1
    try {
        narrative_topic_matrix(model, recs);
        FAIL("expected AlignmentError");
    } catch (const AlignmentError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("R2") != std::string::npos);
        CHECK(msg.find("R3") != std::string::npos);
    }
}

TEST_CASE("dominant_topic: argmax with lowest-index ties") {
    CHECK(dominant_topic({0.2, 0.8}) == 1);
    CHECK(dominant_topic({0.5, 0.5}) == 0);
    CHECK(dominant_topic({1.0}) == 0);
    CHECK(dominant_topic({0.1, 0.45, 0.45}) == 1);
    CHECK_THROWS_AS(dominant_topic({}), InputError);
}

TEST_CASE("crosstab: single narrative is a 100 percent cell") {
    TopicModel model = tiny_model();
    model.doc_ids = {"R2"};
    model.theta = {{0.9, 0.1}};
    std::vector<NarrativeRecord> recs = {tiny_records()[1]};  // transition
    const auto rows = validate_crosstab(recs, model, "mode");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].topic == 0);
    CHECK(rows[0].field == "mode");
    CHECK(rows[0].value == "transition");
    CHECK(rows[0].pct == doctest::Approx(100.0));
    CHECK(rows[0].num == 1);
    CHECK(rows[0].den == 1);
}

TEST_CASE("crosstab: percentages sum to 100 per populated topic") {
    const TopicModel model = tiny_model();  // dominant topics: R1->0, R2->1, R3->0
    const auto recs = tiny_records();
    for (const std::string field : {"mode", "motion", "crash_type", "object_struck"}) {
        const auto rows = validate_crosstab(recs, model, field);
        std::map<std::size_t, double> sums;
        for (const auto& row : rows) {
            sums[row.topic] += row.pct;
            CHECK(row.num <= row.den);
        }
        REQUIRE(sums.size() == 2);
        for (const auto& [topic, total] : sums) CHECK(total == doctest::Approx(100.0));
    }
}

TEST_CASE("crosstab: absent values group under unknown, empty topics emit nothing") {
    const TopicModel model = tiny_model();
    const auto recs = tiny_records();
    const auto rows = validate_crosstab(recs, model, "motion");
    bool saw_unknown = false;
    for (const auto& row : rows) {
        if (row.topic == 0 && row.value == "unknown") {
            saw_unknown = true;
            CHECK(row.num == 1);
            CHECK(row.den == 2);
            CHECK(row.pct == doctest::Approx(50.0));
        }
    }
    CHECK(saw_unknown);

    // a model where topic 1 never dominates
    TopicModel lopsided = tiny_model();
    lopsided.theta = {{0.9, 0.1}, {0.8, 0.2}, {0.6, 0.4}};
    for (const auto& row : validate_crosstab(recs, lopsided, "mode")) {
        CHECK(row.topic == 0);
    }
}

TEST_CASE("crosstab: unknown field rejected") {
    CHECK_THROWS_AS(validate_crosstab(tiny_records(), tiny_model(), "city"), InputError);
}

TEST_CASE("exemplars: theta ranking with stable ties and date formatting") {
    const TopicModel model = tiny_model();
    const auto recs = tiny_records();
    const auto ex = topic_exemplars(model, recs, 2);
    REQUIRE(ex.size() == 2);
    REQUIRE(ex[0].size() == 2);
    CHECK(ex[0][0].report_id == "R1");  // theta 0.9 on topic 0
    CHECK(ex[0][0].crash_date == "14 Sep 2016");
    CHECK(ex[0][0].mode == "autonomous");
    CHECK(ex[0][0].motion == "stopped");
    CHECK(ex[0][0].theta == doctest::Approx(0.9));
    CHECK(ex[0][1].report_id == "R3");
    CHECK(ex[1][0].report_id == "R2");
    CHECK(ex[1][0].crash_date.empty());
    CHECK(ex[0][0].narrative == "Struck from behind.");

    // tie on theta: earlier model document wins
    TopicModel tied = tiny_model();
    tied.theta = {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}};
    const auto stable = topic_exemplars(tied, recs, 1);
    CHECK(stable[0][0].report_id == "R1");
    CHECK(stable[1][0].report_id == "R1");
}

TEST_CASE("exemplars: m beyond corpus size clips with a warning") {
    std::vector<std::string> warnings;
    const auto ex = topic_exemplars(tiny_model(), tiny_records(), 10, &warnings);
    CHECK(ex[0].size() == 3);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("clipped") != std::string::npos);
    CHECK_THROWS_AS(topic_exemplars(tiny_model(), tiny_records(), 0), InputError);
}

TEST_CASE("build_report assembles every section with the method notes") {
    const TopicReport report = build_report(tiny_model(), tiny_records(), {3, 1});
    CHECK(report.num_topics == 2);
    CHECK(report.top_terms.size() == 2);
    CHECK(report.associations.size() == 3);
    CHECK(report.exemplars.size() == 2);
    CHECK(!report.crosstabs.empty());
    REQUIRE(report.notes.size() == 2);
    CHECK(report.notes[0].find("dominant topic") != std::string::npos);
}

TEST_CASE("report format names") {
    CHECK(parse_report_format("json") == ReportFormat::Json);
    CHECK(parse_report_format("csv_bundle") == ReportFormat::CsvBundle);
    CHECK(parse_report_format("markdown") == ReportFormat::Markdown);
    CHECK_THROWS_AS(parse_report_format("pdf"), ConfigError);
}

TEST_CASE("markdown: one section per topic plus cross-tab table") {
    const TopicReport report = build_report(tiny_model(), tiny_records(), {2, 1});
    const std::string md = report_to_markdown(report);
    CHECK(md.find("## Topic 1") != std::string::npos);
    CHECK(md.find("## Topic 2") != std::string::npos);
    CHECK(md.find("## Topic 3") == std::string::npos);
    CHECK(md.find("## Validation cross-tabs") != std::string::npos);
    CHECK(md.find("14 Sep 2016") != std::string::npos);
}

TEST_CASE("emit_report: json and csv bundle round trip within 1e-12") {
    const TopicReport report = build_report(tiny_model(), tiny_records(), {3, 2});
    const std::string dir = "report_emit_test";
    std::filesystem::remove_all(dir);

    const auto json_files = emit_report(report, ReportFormat::Json, dir);
    REQUIRE(json_files.size() == 1);
    const auto csv_files = emit_report(report, ReportFormat::CsvBundle, dir);
    REQUIRE(csv_files.size() == 4);
    const auto md_files = emit_report(report, ReportFormat::Markdown, dir);
    REQUIRE(md_files.size() == 1);

    // parse associations.csv back and compare against the in-memory thetas
    std::istringstream assoc(slurp(dir + "/associations.csv"));
    const auto rows = csv::read(assoc);
    REQUIRE(rows.size() == 1 + report.associations.size() * 2);  // header + D*K
    CHECK(rows[0] == csv::Row{"report_id", "mode", "motion", "topic", "theta"});
    for (std::size_t d = 0; d < report.associations.size(); ++d) {
        for (std::size_t k = 0; k < 2; ++k) {
            const auto& row = rows[1 + d * 2 + k];
            CHECK(row[0] == report.associations[d].report_id);
            const double theta = std::strtod(row[4].c_str(), nullptr);
            CHECK(std::abs(theta - report.associations[d].theta[k]) < 1e-12);
        }
    }

    // top_terms.csv weights match phi-derived weights exactly
    std::istringstream terms(slurp(dir + "/top_terms.csv"));
    const auto term_rows = csv::read(terms);
    CHECK(term_rows[0] == csv::Row{"topic", "rank", "term", "weight"});
    const double w = std::strtod(term_rows[1][3].c_str(), nullptr);
    CHECK(std::abs(w - report.top_terms[0][0].weight) < 1e-12);

    // crosstabs.csv numerators/denominators survive
    std::istringstream cross(slurp(dir + "/crosstabs.csv"));
    const auto cross_rows = csv::read(cross);
    CHECK(cross_rows[0] == csv::Row{"topic", "field", "value", "pct", "num", "den"});
    REQUIRE(cross_rows.size() == 1 + report.crosstabs.size());

    // exemplars.csv columns
    std::istringstream ex(slurp(dir + "/exemplars.csv"));
    const auto ex_rows = csv::read(ex);
    CHECK(ex_rows[0] == csv::Row{"topic", "rank", "report_id", "crash_date", "mode", "motion",
                                 "theta", "narrative"});

    // emission is deterministic byte for byte
    const std::string json_once = slurp(dir + "/report.json");
    emit_report(report, ReportFormat::Json, dir);
    CHECK(slurp(dir + "/report.json") == json_once);
    CHECK(json_once.find("\"schema_version\": 1") != std::string::npos);

    std::filesystem::remove_all(dir);
}

TEST_CASE("emit_report: empty crosstabs still produce valid files") {
    TopicReport report;
    report.num_topics = 1;
    report.top_terms = {{{"brake", 1.0}}};
    const std::string dir = "report_empty_test";
    std::filesystem::remove_all(dir);
    const auto files = emit_report(report, ReportFormat::CsvBundle, dir);
    REQUIRE(files.size() == 4);
    std::istringstream cross(slurp(dir + "/crosstabs.csv"));
    const auto rows = csv::read(cross);
    REQUIRE(rows.size() == 1);  // header only
    CHECK_NOTHROW(emit_report(report, ReportFormat::Markdown, dir));
    std::filesystem::remove_all(dir);
}
