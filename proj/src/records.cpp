#include "crashtopics/records.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "crashtopics/csv.hpp"
#include "crashtopics/errors.hpp"

namespace crashtopics {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// lowercase, collapse spaces/hyphens to underscores: "Rear-End" -> "rear_end"
std::string normalize_token(const std::string& s) {
    std::string out;
    for (unsigned char c : trim(s)) {
        if (c == ' ' || c == '-') out.push_back('_');
        else out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

Mode parse_mode(const std::string& raw, const std::string& report_id) {
    const std::string v = normalize_token(raw);
    if (v == "autonomous") return Mode::Autonomous;
    if (v == "conventional") return Mode::Conventional;
    if (v == "transition") return Mode::Transition;
    throw DataError("unrecognized mode value \"" + raw + "\" for report " + report_id);
}

std::optional<Motion> parse_motion(const std::string& raw, const std::string& report_id) {
    const std::string v = normalize_token(raw);
    if (v.empty()) return std::nullopt;
    if (v == "moving") return Motion::Moving;
    if (v == "stopped") return Motion::Stopped;
    throw DataError("unrecognized motion value \"" + raw + "\" for report " + report_id);
}

std::optional<ObjectStruck> parse_object_struck(const std::string& raw) {
    const std::string v = normalize_token(raw);
    if (v.empty()) return std::nullopt;
    if (v == "vehicle") return ObjectStruck::Vehicle;
    if (v == "cyclist" || v == "bicycle" || v == "bicyclist") return ObjectStruck::Cyclist;
    if (v == "pedestrian") return ObjectStruck::Pedestrian;
    if (v == "motorcycle" || v == "motorcyclist") return ObjectStruck::Motorcycle;
    return ObjectStruck::Other;
}

std::optional<CrashType> parse_crash_type(const std::string& raw) {
    const std::string v = normalize_token(raw);
    if (v.empty()) return std::nullopt;
    if (v == "rear_end" || v == "rear_ended") return CrashType::RearEnd;
    if (v == "sideswipe" || v == "side_swipe") return CrashType::Sideswipe;
    if (v == "cut_in") return CrashType::CutIn;
    if (v == "left_turn") return CrashType::LeftTurn;
    if (v == "right_side") return CrashType::RightSide;
    return CrashType::Other;
}

std::optional<Date> parse_date(const std::string& raw, const std::string& report_id) {
    const std::string v = trim(raw);
    if (v.empty()) return std::nullopt;
    Date d;
    char sep1 = 0;
    char sep2 = 0;
    int a = 0;
    int b = 0;
    int c = 0;
    std::istringstream in(v);
    if ((in >> a >> sep1 >> b >> sep2 >> c) && sep1 == sep2 && (sep1 == '-' || sep1 == '/')) {
        if (sep1 == '-') {
            d = Date{a, b, c};  // YYYY-MM-DD
        } else {
            d = Date{c, a, b};  // M/D/YYYY
        }
        if (d.month >= 1 && d.month <= 12 && d.day >= 1 && d.day <= 31 && d.year >= 1900) {
            return d;
        }
    }
    throw DataError("unparseable crash_date \"" + raw + "\" for report " + report_id);
}

std::optional<std::string> opt_string(const std::string& raw) {
    std::string v = trim(raw);
    if (v.empty()) return std::nullopt;
    return v;
}

}  // namespace

std::string to_string(Mode m) {
    switch (m) {
        case Mode::Autonomous: return "autonomous";
        case Mode::Conventional: return "conventional";
        case Mode::Transition: return "transition";
    }
    return "?";
}

std::string to_string(Motion m) {
    return m == Motion::Moving ? "moving" : "stopped";
}

std::string to_string(ObjectStruck o) {
    switch (o) {
        case ObjectStruck::Vehicle: return "vehicle";
        case ObjectStruck::Cyclist: return "cyclist";
        case ObjectStruck::Pedestrian: return "pedestrian";
        case ObjectStruck::Motorcycle: return "motorcycle";
        case ObjectStruck::Other: return "other";
    }
    return "?";
}

std::string to_string(CrashType c) {
    switch (c) {
        case CrashType::RearEnd: return "rear_end";
        case CrashType::Sideswipe: return "sideswipe";
        case CrashType::CutIn: return "cut_in";
        case CrashType::LeftTurn: return "left_turn";
        case CrashType::RightSide: return "right_side";
        case CrashType::Other: return "other";
    }
    return "?";
}

std::string format_date(const Date& d) {
    static const char* kMonths[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    std::ostringstream out;
    out << d.day << ' ' << kMonths[(d.month - 1) % 12] << ' ' << d.year;
    return out.str();
}

std::vector<NarrativeRecord> parse_reports(std::istream& csv_bytes, const ColumnMap& schema) {
    const auto rows = csv::read(csv_bytes);
    if (rows.empty()) throw SchemaError("empty input: no header row");

    std::map<std::string, std::size_t> header;
    for (std::size_t i = 0; i < rows[0].size(); ++i) header.emplace(trim(rows[0][i]), i);

    auto col = [&](const std::string& name) -> std::optional<std::size_t> {
        auto it = header.find(name);
        if (it == header.end()) return std::nullopt;
        return it->second;
    };
    auto required_col = [&](const std::string& name, const char* logical) {
        auto c = col(name);
        if (!c) throw SchemaError(std::string("missing required column: ") + logical +
                                  " (mapped to \"" + name + "\")");
        return *c;
    };

    const std::size_t id_col = required_col(schema.report_id, "report_id");
    const std::size_t mode_col = required_col(schema.mode, "mode");
    const std::size_t narrative_col = required_col(schema.narrative, "narrative");

    auto cell = [&](const csv::Row& row, std::optional<std::size_t> c) -> std::string {
        if (!c || *c >= row.size()) return {};
        return row[*c];
    };

    std::vector<NarrativeRecord> records;
    records.reserve(rows.size() - 1);
    std::map<std::string, int> id_count;

    for (std::size_t r = 1; r < rows.size(); ++r) {
        const csv::Row& row = rows[r];
        if (row.size() == 1 && trim(row[0]).empty()) continue;  // blank line

        NarrativeRecord rec;
        rec.report_id = trim(cell(row, id_col));
        if (rec.report_id.empty()) {
            throw DataError("row " + std::to_string(r + 1) + " has an empty report_id");
        }
        ++id_count[rec.report_id];

        rec.mode = parse_mode(cell(row, mode_col), rec.report_id);
        rec.narrative = trim(cell(row, narrative_col));
        if (rec.narrative.empty()) {
            throw DataError("report " + rec.report_id + " has an empty narrative");
        }

        rec.crash_date = parse_date(cell(row, col(schema.crash_date)), rec.report_id);
        rec.crash_time = opt_string(cell(row, col(schema.crash_time)));
        rec.manufacturer = opt_string(cell(row, col(schema.manufacturer)));
        rec.make = opt_string(cell(row, col(schema.make)));
        rec.model = opt_string(cell(row, col(schema.model)));
        if (auto y = opt_string(cell(row, col(schema.year)))) {
            try {
                rec.year = std::stoi(*y);
            } catch (const std::exception&) {
                throw DataError("unparseable year \"" + *y + "\" for report " + rec.report_id);
            }
        }
        rec.city = opt_string(cell(row, col(schema.city)));
        rec.street = opt_string(cell(row, col(schema.street)));
        rec.movement_preceding = opt_string(cell(row, col(schema.movement_preceding)));
        rec.weather = opt_string(cell(row, col(schema.weather)));
        rec.lighting = opt_string(cell(row, col(schema.lighting)));
        rec.roadway = opt_string(cell(row, col(schema.roadway)));
        rec.object_struck = parse_object_struck(cell(row, col(schema.object_struck)));
        rec.injuries = opt_string(cell(row, col(schema.injuries)));
        rec.motion = parse_motion(cell(row, col(schema.motion)), rec.report_id);
        rec.crash_type = parse_crash_type(cell(row, col(schema.crash_type)));

        records.push_back(std::move(rec));
    }

    std::vector<std::string> dups;
    for (const auto& [id, n] : id_count) {
        if (n > 1) dups.push_back(id);
    }
    if (!dups.empty()) {
        std::string msg = "duplicate report_id values:";
        for (const auto& id : dups) msg += " " + id;
        throw DataError(msg);
    }
    return records;
}

FilterResult filter_in_scope(const std::vector<NarrativeRecord>& records) {
    FilterResult out;
    for (const auto& rec : records) {
        switch (rec.mode) {
            case Mode::Autonomous:
                ++out.kept_autonomous;
                out.records.push_back(rec);
                break;
            case Mode::Transition:
                ++out.kept_transition;
                out.records.push_back(rec);
                break;
            case Mode::Conventional:
                ++out.dropped_conventional;
                break;
        }
    }
    if (out.records.empty()) {
        out.warnings.push_back("no in-scope records: every report is in conventional mode");
    }
    return out;
}

}  // namespace crashtopics
