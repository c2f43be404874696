#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace crashtopics {

enum class Mode { Autonomous, Conventional, Transition };
enum class Motion { Moving, Stopped };
enum class ObjectStruck { Vehicle, Cyclist, Pedestrian, Motorcycle, Other };
enum class CrashType { RearEnd, Sideswipe, CutIn, LeftTurn, RightSide, Other };

std::string to_string(Mode m);
std::string to_string(Motion m);
std::string to_string(ObjectStruck o);
std::string to_string(CrashType c);

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    bool operator==(const Date&) const = default;
};

// "14 Sep 2016" style: day without leading zero, three-letter month.
std::string format_date(const Date& d);

// One crash report row. report_id, mode and the narrative always exist;
// everything else is whatever the source file provides.
struct NarrativeRecord {
    std::string report_id;
    std::optional<Date> crash_date;
    std::optional<std::string> crash_time;
    std::optional<std::string> manufacturer;
    std::optional<std::string> make;
    std::optional<std::string> model;
    std::optional<int> year;
    std::optional<std::string> city;
    std::optional<std::string> street;
    std::optional<std::string> movement_preceding;
    std::optional<std::string> weather;
    std::optional<std::string> lighting;
    std::optional<std::string> roadway;
    std::optional<ObjectStruck> object_struck;
    std::optional<std::string> injuries;
    Mode mode = Mode::Autonomous;  // input annotation, never inferred from text
    std::optional<Motion> motion;
    std::optional<CrashType> crash_type;  // analyst annotation used for validation
    std::string narrative;
};

// Maps logical fields to CSV header names. An optional field whose mapped
// column is missing from the header is simply absent on every record.
struct ColumnMap {
    std::string report_id = "report_id";
    std::string crash_date = "crash_date";
    std::string crash_time = "crash_time";
    std::string manufacturer = "manufacturer";
    std::string make = "make";
    std::string model = "model";
    std::string year = "year";
    std::string city = "city";
    std::string street = "street";
    std::string movement_preceding = "movement_preceding";
    std::string weather = "weather";
    std::string lighting = "lighting";
    std::string roadway = "roadway";
    std::string object_struck = "object_struck";
    std::string injuries = "injuries";
    std::string mode = "mode";
    std::string motion = "motion";
    std::string crash_type = "crash_type";
    std::string narrative = "narrative";
};

// Parses a header-rowed CSV into records.
//
// Throws SchemaError naming the logical column when report_id, mode or
// narrative cannot be found; DataError for duplicate report_ids (all listed),
// unparseable mode/motion values, or narratives empty after trimming.
std::vector<NarrativeRecord> parse_reports(std::istream& csv_bytes, const ColumnMap& schema);

struct FilterResult {
    std::vector<NarrativeRecord> records;  // input order preserved
    int kept_autonomous = 0;
    int kept_transition = 0;
    int dropped_conventional = 0;
    std::vector<std::string> warnings;
};

// Keeps mode in {autonomous, transition}; drops conventional-mode reports.
FilterResult filter_in_scope(const std::vector<NarrativeRecord>& records);

}  // namespace crashtopics
