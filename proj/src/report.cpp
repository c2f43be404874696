#include "crashtopics/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "crashtopics/csv.hpp"
#include "crashtopics/errors.hpp"

namespace crashtopics {

std::vector<std::vector<TermWeight>> top_terms(const TopicModel& model, std::size_t n) {
    const std::size_t V = model.num_terms;
    if (n > V) throw InputError("top_terms n exceeds vocabulary size");
    if (model.vocab_terms.size() != V) {
        throw AlignmentError("model has no attached vocabulary");
    }
    std::vector<std::vector<TermWeight>> out(model.num_topics());
    std::vector<std::size_t> order(V);
    for (std::size_t k = 0; k < model.num_topics(); ++k) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (model.phi[k][a] != model.phi[k][b]) return model.phi[k][a] > model.phi[k][b];
            return model.vocab_terms[a] < model.vocab_terms[b];
        });
        out[k].reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            out[k].push_back({model.vocab_terms[order[i]], model.phi[k][order[i]]});
        }
    }
    return out;
}

namespace {

// Model documents joined to their records, in model doc order.
std::vector<const NarrativeRecord*> align_records(const TopicModel& model,
                                                  const std::vector<NarrativeRecord>& records) {
    std::unordered_map<std::string, const NarrativeRecord*> by_id;
    for (const auto& r : records) by_id.emplace(r.report_id, &r);
    std::vector<const NarrativeRecord*> aligned;
    aligned.reserve(model.doc_ids.size());
    std::string missing;
    for (const auto& id : model.doc_ids) {
        auto it = by_id.find(id);
        if (it == by_id.end()) {
            missing += missing.empty() ? id : ", " + id;
            continue;
        }
        aligned.push_back(it->second);
    }
    if (!missing.empty()) {
        throw AlignmentError("model documents without a matching record: " + missing);
    }
    return aligned;
}

int mode_rank(Mode m) {
    switch (m) {
        case Mode::Transition: return 0;
        case Mode::Autonomous: return 1;
        case Mode::Conventional: return 2;
    }
    return 3;
}

int motion_rank(const std::optional<Motion>& m) {
    if (!m) return 2;
    return *m == Motion::Stopped ? 0 : 1;
}

}  // namespace

std::vector<AssociationRow> narrative_topic_matrix(const TopicModel& model,
                                                   const std::vector<NarrativeRecord>& records) {
    const auto aligned = align_records(model, records);
    std::vector<AssociationRow> rows;
    rows.reserve(aligned.size());
    for (std::size_t d = 0; d < aligned.size(); ++d) {
        rows.push_back({aligned[d]->report_id, aligned[d]->mode, aligned[d]->motion,
                        model.theta[d]});
    }
    std::sort(rows.begin(), rows.end(), [](const AssociationRow& a, const AssociationRow& b) {
        if (mode_rank(a.mode) != mode_rank(b.mode)) return mode_rank(a.mode) < mode_rank(b.mode);
        if (motion_rank(a.motion) != motion_rank(b.motion)) {
            return motion_rank(a.motion) < motion_rank(b.motion);
        }
        return a.report_id < b.report_id;
    });
    return rows;
}

std::size_t dominant_topic(const std::vector<double>& theta_row) {
    if (theta_row.empty()) throw InputError("dominant_topic on an empty row");
    std::size_t best = 0;
    for (std::size_t k = 1; k < theta_row.size(); ++k) {
        if (theta_row[k] > theta_row[best]) best = k;
    }
    return best;
}

namespace {

void require_crosstab_field(const std::string& field) {
    if (field != "mode" && field != "motion" && field != "crash_type" &&
        field != "object_struck") {
        throw InputError("unknown crosstab field: " + field);
    }
}

std::string field_value(const NarrativeRecord& r, const std::string& field) {
    if (field == "mode") return to_string(r.mode);
    if (field == "motion") return r.motion ? to_string(*r.motion) : "unknown";
    if (field == "crash_type") return r.crash_type ? to_string(*r.crash_type) : "unknown";
    return r.object_struck ? to_string(*r.object_struck) : "unknown";
}

}  // namespace

std::vector<CrosstabRow> validate_crosstab(const std::vector<NarrativeRecord>& records,
                                           const TopicModel& model, const std::string& field) {
    require_crosstab_field(field);
    const auto aligned = align_records(model, records);
    const std::size_t K = model.num_topics();
    std::vector<std::map<std::string, std::size_t>> counts(K);
    std::vector<std::size_t> totals(K, 0);
    for (std::size_t d = 0; d < aligned.size(); ++d) {
        const std::size_t t = dominant_topic(model.theta[d]);
        ++counts[t][field_value(*aligned[d], field)];
        ++totals[t];
    }
    std::vector<CrosstabRow> rows;
    for (std::size_t t = 0; t < K; ++t) {
        for (const auto& [value, num] : counts[t]) {
            rows.push_back({t, field, value,
                            100.0 * static_cast<double>(num) / static_cast<double>(totals[t]),
                            num, totals[t]});
        }
    }
    return rows;
}

std::vector<std::vector<ExemplarRow>> topic_exemplars(const TopicModel& model,
                                                      const std::vector<NarrativeRecord>& records,
                                                      std::size_t m,
                                                      std::vector<std::string>* warnings) {
    if (m < 1) throw InputError("topic_exemplars needs m >= 1");
    const auto aligned = align_records(model, records);
    const std::size_t D = aligned.size();
    std::size_t take = m;
    if (take > D) {
        take = D;
        if (warnings) {
            warnings->push_back("exemplars per topic clipped from " + std::to_string(m) +
                                " to the corpus size " + std::to_string(D));
        }
    }
    std::vector<std::vector<ExemplarRow>> out(model.num_topics());
    std::vector<std::size_t> order(D);
    for (std::size_t k = 0; k < model.num_topics(); ++k) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return model.theta[a][k] > model.theta[b][k];
        });
        out[k].reserve(take);
        for (std::size_t i = 0; i < take; ++i) {
            const auto& r = *aligned[order[i]];
            out[k].push_back({k, r.report_id,
                              r.crash_date ? format_date(*r.crash_date) : std::string(),
                              to_string(r.mode),
                              r.motion ? to_string(*r.motion) : "unknown",
                              model.theta[order[i]][k], r.narrative});
        }
    }
    return out;
}

TopicReport build_report(const TopicModel& model, const std::vector<NarrativeRecord>& records,
                         const ReportOptions& options) {
    TopicReport report;
    report.num_topics = model.num_topics();
    report.top_terms = top_terms(model, options.top_n);
    report.associations = narrative_topic_matrix(model, records);
    report.exemplars = topic_exemplars(model, records, options.exemplars_per_topic,
                                       &report.warnings);
    for (const char* field : {"mode", "motion", "crash_type", "object_struck"}) {
        auto rows = validate_crosstab(records, model, field);
        report.crosstabs.insert(report.crosstabs.end(), rows.begin(), rows.end());
    }
    report.notes.push_back(
        "Cross-tab percentages assign each narrative to its dominant topic "
        "(argmax of its theta row); rows expose raw numerators and denominators.");
    report.notes.push_back(
        "Association strength is the narrative's theta weight for the topic.");
    return report;
}

ReportFormat parse_report_format(const std::string& name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv_bundle") return ReportFormat::CsvBundle;
    if (name == "markdown") return ReportFormat::Markdown;
    throw ConfigError("unknown report format: " + name);
}

std::string report_to_json(const TopicReport& report) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["num_topics"] = report.num_topics;
    auto& terms = j["top_terms"] = nlohmann::json::array();
    for (const auto& topic : report.top_terms) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& tw : topic) {
            list.push_back({{"term", tw.term}, {"weight", tw.weight}});
        }
        terms.push_back(std::move(list));
    }
    auto& assoc = j["associations"] = nlohmann::json::array();
    for (const auto& row : report.associations) {
        assoc.push_back({{"report_id", row.report_id},
                         {"mode", to_string(row.mode)},
                         {"motion", row.motion ? to_string(*row.motion) : "unknown"},
                         {"theta", row.theta}});
    }
    auto& ex = j["exemplars"] = nlohmann::json::array();
    for (const auto& topic : report.exemplars) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& e : topic) {
            list.push_back({{"topic", e.topic},
                            {"report_id", e.report_id},
                            {"crash_date", e.crash_date},
                            {"mode", e.mode},
                            {"motion", e.motion},
                            {"theta", e.theta},
                            {"narrative", e.narrative}});
        }
        ex.push_back(std::move(list));
    }
    auto& cross = j["crosstabs"] = nlohmann::json::array();
    for (const auto& row : report.crosstabs) {
        cross.push_back({{"topic", row.topic},
                         {"field", row.field},
                         {"value", row.value},
                         {"pct", row.pct},
                         {"num", row.num},
                         {"den", row.den}});
    }
    j["notes"] = report.notes;
    j["warnings"] = report.warnings;
    return j.dump(2) + "\n";
}

std::string report_to_markdown(const TopicReport& report) {
    std::ostringstream out;
    out << "# Topic model report\n";
    for (std::size_t k = 0; k < report.num_topics; ++k) {
        out << "\n## Topic " << (k + 1) << "\n\n";
        out << "| rank | term | weight |\n|---:|---|---:|\n";
        if (k < report.top_terms.size()) {
            for (std::size_t i = 0; i < report.top_terms[k].size(); ++i) {
                const auto& tw = report.top_terms[k][i];
                out << "| " << (i + 1) << " | " << tw.term << " | "
                    << csv::format_double(tw.weight) << " |\n";
            }
        }
        if (k < report.exemplars.size() && !report.exemplars[k].empty()) {
            out << "\nExemplar narratives:\n\n";
            for (const auto& e : report.exemplars[k]) {
                out << "- [" << e.report_id << "] ";
                if (!e.crash_date.empty()) out << e.crash_date << ", ";
                out << e.mode << ", " << e.motion << " (theta "
                    << csv::format_double(e.theta) << "): " << e.narrative << "\n";
            }
        }
    }
    out << "\n## Validation cross-tabs\n\n";
    out << "| topic | field | value | pct | num | den |\n|---:|---|---|---:|---:|---:|\n";
    for (const auto& row : report.crosstabs) {
        out << "| " << (row.topic + 1) << " | " << row.field << " | " << row.value << " | "
            << csv::format_double(row.pct) << " | " << row.num << " | " << row.den << " |\n";
    }
    if (!report.notes.empty()) {
        out << "\n## Notes\n\n";
        for (const auto& n : report.notes) out << "- " << n << "\n";
    }
    if (!report.warnings.empty()) {
        out << "\n## Warnings\n\n";
        for (const auto& w : report.warnings) out << "- " << w << "\n";
    }
    return out.str();
}

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failure: " + path);
}

std::string csv_top_terms(const TopicReport& report) {
    std::ostringstream out;
    csv::write_row(out, {"topic", "rank", "term", "weight"});
    for (std::size_t k = 0; k < report.top_terms.size(); ++k) {
        for (std::size_t i = 0; i < report.top_terms[k].size(); ++i) {
            csv::write_row(out, {std::to_string(k), std::to_string(i + 1),
                                 report.top_terms[k][i].term,
                                 csv::format_double(report.top_terms[k][i].weight)});
        }
    }
    return out.str();
}

std::string csv_associations(const TopicReport& report) {
    std::ostringstream out;
    csv::write_row(out, {"report_id", "mode", "motion", "topic", "theta"});
    for (const auto& row : report.associations) {
        for (std::size_t k = 0; k < row.theta.size(); ++k) {
            csv::write_row(out, {row.report_id, to_string(row.mode),
                                 row.motion ? to_string(*row.motion) : "unknown",
                                 std::to_string(k), csv::format_double(row.theta[k])});
        }
    }
    return out.str();
}

std::string csv_crosstabs(const TopicReport& report) {
    std::ostringstream out;
    csv::write_row(out, {"topic", "field", "value", "pct", "num", "den"});
    for (const auto& row : report.crosstabs) {
        csv::write_row(out, {std::to_string(row.topic), row.field, row.value,
                             csv::format_double(row.pct), std::to_string(row.num),
                             std::to_string(row.den)});
    }
    return out.str();
}

std::string csv_exemplars(const TopicReport& report) {
    std::ostringstream out;
    csv::write_row(out, {"topic", "rank", "report_id", "crash_date", "mode", "motion", "theta",
                         "narrative"});
    for (const auto& topic : report.exemplars) {
        for (std::size_t i = 0; i < topic.size(); ++i) {
            const auto& e = topic[i];
            csv::write_row(out, {std::to_string(e.topic), std::to_string(i + 1), e.report_id,
                                 e.crash_date, e.mode, e.motion, csv::format_double(e.theta),
                                 e.narrative});
        }
    }
    return out.str();
}

}  // namespace

std::vector<std::string> emit_report(const TopicReport& report, ReportFormat format,
                                     const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);
    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        const std::string path = (std::filesystem::path(out_dir) / name).string();
        write_file(path, content);
        written.push_back(path);
    };
    switch (format) {
        case ReportFormat::Json:
            emit("report.json", report_to_json(report));
            break;
        case ReportFormat::CsvBundle:
            emit("top_terms.csv", csv_top_terms(report));
            emit("associations.csv", csv_associations(report));
            emit("crosstabs.csv", csv_crosstabs(report));
            emit("exemplars.csv", csv_exemplars(report));
            break;
        case ReportFormat::Markdown:
            emit("report.md", report_to_markdown(report));
            break;
    }
    return written;
}

}  // namespace crashtopics
