#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "crashtopics/lda.hpp"
#include "crashtopics/records.hpp"

namespace crashtopics {

struct TermWeight {
    std::string term;
    double weight = 0.0;
};

struct AssociationRow {
    std::string report_id;
    Mode mode = Mode::Autonomous;
    std::optional<Motion> motion;
    std::vector<double> theta;  // K values, row-stochastic
};

struct ExemplarRow {
    std::size_t topic = 0;
    std::string report_id;
    std::string crash_date;  // "14 Sep 2016" style; empty when unknown
    std::string mode;
    std::string motion;  // "unknown" when unannotated
    double theta = 0.0;
    std::string narrative;
};

struct CrosstabRow {
    std::size_t topic = 0;
    std::string field;
    std::string value;
    double pct = 0.0;
    std::size_t num = 0;
    std::size_t den = 0;
};

struct TopicReport {
    std::size_t num_topics = 0;
    std::vector<std::vector<TermWeight>> top_terms;   // K x N, weights non-increasing
    std::vector<AssociationRow> associations;         // grouped ordering, see below
    std::vector<std::vector<ExemplarRow>> exemplars;  // K x M
    std::vector<CrosstabRow> crosstabs;
    std::vector<std::string> notes;
    std::vector<std::string> warnings;
};

// Largest-phi terms per topic; ties broken lexicographically. The model must
// carry vocab_terms (fit output or attach_vocab). n > V is an input error.
std::vector<std::vector<TermWeight>> top_terms(const TopicModel& model, std::size_t n = 10);

// One row per model document with its theta row and mode/motion annotations.
// Grouped ordering: transition before autonomous before conventional; within a
// mode, stopped before moving before unannotated; then by report_id.
// Missing records for model doc_ids -> AlignmentError listing every offender.
std::vector<AssociationRow> narrative_topic_matrix(const TopicModel& model,
                                                   const std::vector<NarrativeRecord>& records);

// Argmax with lowest-index tie-break.
std::size_t dominant_topic(const std::vector<double>& theta_row);

// Frequency cross-tab of a record field against dominant topics.
// field is one of mode, motion, crash_type, object_struck; absent values group
// under "unknown". Topics with no documents emit no rows.
std::vector<CrosstabRow> validate_crosstab(const std::vector<NarrativeRecord>& records,
                                           const TopicModel& model, const std::string& field);

// Top-m documents per topic by theta, ties to the earlier model document.
// m > D is clipped to D with a warning (appended when warnings is non-null).
std::vector<std::vector<ExemplarRow>> topic_exemplars(const TopicModel& model,
                                                      const std::vector<NarrativeRecord>& records,
                                                      std::size_t m = 1,
                                                      std::vector<std::string>* warnings = nullptr);

struct ReportOptions {
    std::size_t top_n = 10;
    std::size_t exemplars_per_topic = 1;
};

TopicReport build_report(const TopicModel& model, const std::vector<NarrativeRecord>& records,
                         const ReportOptions& options = {});

enum class ReportFormat { Json, CsvBundle, Markdown };

ReportFormat parse_report_format(const std::string& name);  // ConfigError on unknown

std::string report_to_json(const TopicReport& report);
std::string report_to_markdown(const TopicReport& report);

// json -> <out_dir>/report.json; csv_bundle -> top_terms.csv, associations.csv,
// crosstabs.csv, exemplars.csv; markdown -> report.md. Creates out_dir.
std::vector<std::string> emit_report(const TopicReport& report, ReportFormat format,
                                     const std::string& out_dir);

}  // namespace crashtopics
