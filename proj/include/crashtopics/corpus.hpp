#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

namespace crashtopics {

struct Vocabulary {
    std::vector<std::string> terms;  // lexicographic order
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::size_t> corpus_frequency;

    std::size_t size() const { return terms.size(); }
    bool contains(const std::string& term) const { return index.count(term) != 0; }
    std::size_t id(const std::string& term) const;  // DataError if absent
};

struct TdmEntry {
    std::size_t term;
    std::size_t count;
};

// Sparse V-terms x D-docs count matrix. Each document keeps its (term, count)
// entries in stored order; Gibbs sweeps iterate that order, so it is part of
// the deterministic contract.
struct TermDocumentMatrix {
    Vocabulary vocab;
    std::vector<std::string> doc_ids;
    std::vector<std::vector<TdmEntry>> doc_entries;
    std::vector<std::size_t> doc_lengths;

    std::size_t num_terms() const { return vocab.size(); }
    std::size_t num_docs() const { return doc_ids.size(); }
    std::size_t total_tokens() const;
    std::size_t count(std::size_t term, std::size_t doc) const;
    void validate() const;  // DataError on any broken invariant
};

struct TdmBuildResult {
    TermDocumentMatrix tdm;
    std::vector<std::string> dropped_doc_ids;
    std::vector<std::string> warnings;
};

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& docs,
                            std::size_t min_count = 1);

TdmBuildResult build_tdm(const std::vector<std::vector<std::string>>& docs,
                         const std::vector<std::string>& doc_ids,
                         const Vocabulary& vocab);

// Hex fingerprint of the term list; models carry it so a report run can
// refuse a vocabulary that does not match the one the model was fit on.
std::string vocab_hash(const Vocabulary& vocab);

std::string corpus_to_json(const TermDocumentMatrix& tdm);
TermDocumentMatrix corpus_from_json(const std::string& text);
void save_corpus(const TermDocumentMatrix& tdm, const std::string& path);
TermDocumentMatrix load_corpus(const std::string& path);

}  // namespace crashtopics
