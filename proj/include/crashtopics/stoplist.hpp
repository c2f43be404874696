#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace crashtopics {

// Tiered stop list. Tier names are fixed; each tier can be toggled per run.
// Entries are lowercase tokens; the locations tier may also hold multi-word
// phrases ("mountain view"), matched as contiguous token sequences.
struct StopList {
    static const std::vector<std::string>& tier_names();

    std::vector<std::string> english;
    std::vector<std::string> crash_descriptive;
    std::vector<std::string> av_descriptive;
    std::vector<std::string> police_involvement;
    std::vector<std::string> make_model;
    std::vector<std::string> locations;

    const std::vector<std::string>& tier(const std::string& name) const;
    std::vector<std::string>& tier(const std::string& name);
};

// Sectioned plain-text format: one "[tier_name]" header per tier, one entry
// per line, '#' starts a comment. Entries are lowercased on load; multi-word
// entries outside [locations] are rejected.
StopList parse_stoplist(std::istream& in);
StopList load_stoplist(const std::string& path);

// Drops tokens found in any enabled tier; unknown tier names are a
// configuration error. Survivors keep their relative order.
std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const StopList& stops,
                                          const std::set<std::string>& enabled_tiers);

}  // namespace crashtopics
