#include "crashtopics/stoplist.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_set>

#include "crashtopics/errors.hpp"
#include "crashtopics/tokenize.hpp"

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

}  // namespace

const std::vector<std::string>& StopList::tier_names() {
    static const std::vector<std::string> names = {
        "english",           "crash_descriptive", "av_descriptive",
        "police_involvement", "make_model",        "locations"};
    return names;
}

const std::vector<std::string>& StopList::tier(const std::string& name) const {
    return const_cast<StopList*>(this)->tier(name);
}

std::vector<std::string>& StopList::tier(const std::string& name) {
    if (name == "english") return english;
    if (name == "crash_descriptive") return crash_descriptive;
    if (name == "av_descriptive") return av_descriptive;
    if (name == "police_involvement") return police_involvement;
    if (name == "make_model") return make_model;
    if (name == "locations") return locations;
    throw ConfigError("unknown stop tier: " + name);
}

StopList parse_stoplist(std::istream& in) {
    StopList stops;
    std::string line;
    std::string current_tier;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("stoplist line " + std::to_string(line_no) +
                                  ": malformed section header " + line);
            }
            current_tier = lower(trim(line.substr(1, line.size() - 2)));
            stops.tier(current_tier);  // validates the name
            continue;
        }
        if (current_tier.empty()) {
            throw ConfigError("stoplist line " + std::to_string(line_no) +
                              ": entry before any [tier] header");
        }
        std::string entry = lower(line);
        const bool multi_word = entry.find(' ') != std::string::npos;
        if (multi_word && current_tier != "locations") {
            throw ConfigError("stoplist line " + std::to_string(line_no) +
                              ": multi-word entry \"" + entry +
                              "\" only allowed in [locations]");
        }
        stops.tier(current_tier).push_back(std::move(entry));
    }
    return stops;
}

StopList load_stoplist(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open stoplist file: " + path);
    return parse_stoplist(in);
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const StopList& stops,
                                          const std::set<std::string>& enabled_tiers) {
    const auto& known = StopList::tier_names();
    for (const auto& name : enabled_tiers) {
        if (std::find(known.begin(), known.end(), name) == known.end()) {
            throw ConfigError("unknown stop tier: " + name);
        }
    }

    std::unordered_set<std::string> single;
    std::vector<std::vector<std::string>> phrases;
    for (const auto& name : enabled_tiers) {
        for (const auto& entry : stops.tier(name)) {
            auto parts = tokenize(entry);
            if (parts.empty()) continue;
            if (parts.size() == 1) single.insert(parts[0]);
            else phrases.push_back(std::move(parts));
        }
    }
    // longest phrase first so "el camino real" wins over "el camino"
    std::sort(phrases.begin(), phrases.end(),
              [](const auto& a, const auto& b) { return a.size() > b.size(); });

    std::vector<std::string> out;
    out.reserve(tokens.size());
    std::size_t i = 0;
    while (i < tokens.size()) {
        std::size_t matched = 0;
        for (const auto& phrase : phrases) {
            if (phrase.size() > tokens.size() - i) continue;
            if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + i)) {
                matched = phrase.size();
                break;
            }
        }
        if (matched) {
            i += matched;
            continue;
        }
        if (!single.count(tokens[i])) out.push_back(tokens[i]);
        ++i;
    }
    return out;
}

}  // namespace crashtopics
