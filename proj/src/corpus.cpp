#include "crashtopics/corpus.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "crashtopics/errors.hpp"
#include "crashtopics/hash.hpp"

namespace crashtopics {

std::size_t Vocabulary::id(const std::string& term) const {
    auto it = index.find(term);
    if (it == index.end()) throw DataError("term not in vocabulary: " + term);
    return it->second;
}

std::size_t TermDocumentMatrix::total_tokens() const {
    std::size_t total = 0;
    for (std::size_t len : doc_lengths) total += len;
    return total;
}

std::size_t TermDocumentMatrix::count(std::size_t term, std::size_t doc) const {
    if (doc >= doc_entries.size()) throw DataError("document index out of range");
    for (const auto& e : doc_entries[doc]) {
        if (e.term == term) return e.count;
    }
    return 0;
}

void TermDocumentMatrix::validate() const {
    const std::size_t V = vocab.size();
    const std::size_t D = doc_ids.size();
    if (vocab.terms.size() != vocab.corpus_frequency.size() ||
        vocab.terms.size() != vocab.index.size()) {
        throw DataError("vocabulary arrays misaligned");
    }
    for (std::size_t v = 0; v < V; ++v) {
        auto it = vocab.index.find(vocab.terms[v]);
        if (it == vocab.index.end() || it->second != v) {
            throw DataError("vocabulary index is not a bijection");
        }
        if (v + 1 < V && !(vocab.terms[v] < vocab.terms[v + 1])) {
            throw DataError("vocabulary terms not in lexicographic order");
        }
    }
    if (doc_entries.size() != D || doc_lengths.size() != D) {
        throw DataError("document arrays misaligned");
    }
    for (std::size_t d = 0; d < D; ++d) {
        std::set<std::size_t> seen;
        std::size_t sum = 0;
        for (const auto& e : doc_entries[d]) {
            if (e.term >= V) throw DataError("term index out of range in doc " + doc_ids[d]);
            if (e.count == 0) throw DataError("zero count entry in doc " + doc_ids[d]);
            if (!seen.insert(e.term).second) {
                throw DataError("duplicate term entry in doc " + doc_ids[d]);
            }
            sum += e.count;
        }
        if (sum != doc_lengths[d]) {
            throw DataError("column sum does not match doc_length for doc " + doc_ids[d]);
        }
        if (sum == 0) throw DataError("all-zero column for doc " + doc_ids[d]);
    }
}

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& docs,
                            std::size_t min_count) {
    std::map<std::string, std::size_t> freq;
    for (const auto& doc : docs) {
        for (const auto& tok : doc) ++freq[tok];
    }
    Vocabulary vocab;
    for (const auto& [term, f] : freq) {
        if (f < min_count) continue;
        vocab.index.emplace(term, vocab.terms.size());
        vocab.terms.push_back(term);
        vocab.corpus_frequency.push_back(f);
    }
    if (vocab.terms.empty()) throw DataError("vocabulary is empty after frequency filtering");
    return vocab;
}

TdmBuildResult build_tdm(const std::vector<std::vector<std::string>>& docs,
                         const std::vector<std::string>& doc_ids,
                         const Vocabulary& vocab) {
    if (docs.size() != doc_ids.size()) {
        throw DataError("docs and doc_ids are not aligned");
    }
    TdmBuildResult result;
    result.tdm.vocab = vocab;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        std::vector<TdmEntry> entries;
        std::unordered_map<std::size_t, std::size_t> pos;
        std::size_t length = 0;
        for (const auto& tok : docs[d]) {
            auto it = vocab.index.find(tok);
            if (it == vocab.index.end()) continue;
            auto [slot, fresh] = pos.emplace(it->second, entries.size());
            if (fresh) entries.push_back({it->second, 1});
            else ++entries[slot->second].count;
            ++length;
        }
        if (entries.empty()) {
            result.dropped_doc_ids.push_back(doc_ids[d]);
            continue;
        }
        result.tdm.doc_ids.push_back(doc_ids[d]);
        result.tdm.doc_entries.push_back(std::move(entries));
        result.tdm.doc_lengths.push_back(length);
    }
    if (!result.dropped_doc_ids.empty()) {
        std::string msg = "dropped documents with no in-vocabulary tokens:";
        for (const auto& id : result.dropped_doc_ids) msg += " " + id;
        result.warnings.push_back(msg);
    }
    result.tdm.validate();
    return result;
}

std::string vocab_hash(const Vocabulary& vocab) {
    std::uint64_t h = fnv1a64("");
    for (const auto& term : vocab.terms) {
        h = fnv1a64(term, h);
        h = fnv1a64("\n", h);
    }
    return to_hex(h);
}

std::string corpus_to_json(const TermDocumentMatrix& tdm) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["vocab"] = tdm.vocab.terms;
    j["corpus_frequency"] = tdm.vocab.corpus_frequency;
    j["doc_ids"] = tdm.doc_ids;
    j["doc_lengths"] = tdm.doc_lengths;
    std::vector<std::array<std::size_t, 3>> triples;
    for (std::size_t d = 0; d < tdm.doc_entries.size(); ++d) {
        for (const auto& e : tdm.doc_entries[d]) triples.push_back({e.term, d, e.count});
    }
    std::sort(triples.begin(), triples.end());
    j["counts"] = triples;
    return j.dump(2) + "\n";
}

TermDocumentMatrix corpus_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("corpus JSON parse failure: ") + e.what());
    }
    try {
        if (!j.contains("schema_version") || j.at("schema_version").get<int>() != 1) {
            throw SchemaError("corpus JSON: unsupported schema_version");
        }
        TermDocumentMatrix tdm;
        tdm.vocab.terms = j.at("vocab").get<std::vector<std::string>>();
        tdm.vocab.corpus_frequency = j.at("corpus_frequency").get<std::vector<std::size_t>>();
        for (std::size_t v = 0; v < tdm.vocab.terms.size(); ++v) {
            tdm.vocab.index.emplace(tdm.vocab.terms[v], v);
        }
        tdm.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
        tdm.doc_lengths = j.at("doc_lengths").get<std::vector<std::size_t>>();
        tdm.doc_entries.resize(tdm.doc_ids.size());
        for (const auto& triple : j.at("counts")) {
            if (!triple.is_array() || triple.size() != 3) {
                throw SchemaError("corpus JSON: counts entries must be [term, doc, count]");
            }
            std::size_t term = triple[0].get<std::size_t>();
            std::size_t doc = triple[1].get<std::size_t>();
            std::size_t count = triple[2].get<std::size_t>();
            if (doc >= tdm.doc_entries.size()) {
                throw SchemaError("corpus JSON: doc index out of range");
            }
            tdm.doc_entries[doc].push_back({term, count});
        }
        tdm.validate();
        return tdm;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("corpus JSON: ") + e.what());
    }
}

void save_corpus(const TermDocumentMatrix& tdm, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << corpus_to_json(tdm);
    if (!out) throw IoError("write failure: " + path);
}

TermDocumentMatrix load_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open corpus file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return corpus_from_json(buf.str());
}

}  // namespace crashtopics
