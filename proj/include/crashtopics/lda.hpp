#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crashtopics/corpus.hpp"
#include "crashtopics/rng.hpp"

namespace crashtopics {

struct FitConfig {
    std::size_t K = 1;
    std::optional<double> alpha;  // absent means 50/K
    double beta = 0.1;
    std::size_t iterations = 1000;
    std::size_t burn_in = 200;
    std::size_t sample_lag = 10;
    std::uint64_t seed = 1;

    double effective_alpha() const {
        return alpha ? *alpha : 50.0 / static_cast<double>(K);
    }
    void validate() const;  // ConfigError
};

struct GibbsState {
    FitConfig config;
    const TermDocumentMatrix* tdm = nullptr;
    // token stream flattened in (document, stored entry, repetition) order
    std::vector<std::size_t> token_doc;
    std::vector<std::size_t> token_term;
    std::vector<std::size_t> z;
    std::vector<std::vector<std::size_t>> n_dk;  // D x K
    std::vector<std::vector<std::size_t>> n_kv;  // K x V
    std::vector<std::size_t> n_k;
    Rng rng{0};

    std::size_t num_tokens() const { return z.size(); }
    void check_invariants() const;  // DataError on violation
};

struct TopicModel {
    FitConfig config;  // alpha resolved to its effective value
    std::string vocab_fingerprint;
    std::size_t num_terms = 0;
    // Filled by fit(); deserialized models carry only the fingerprint until
    // attach_vocab() re-binds them to a corpus.
    std::vector<std::string> vocab_terms;
    std::vector<std::string> doc_ids;
    std::vector<std::vector<double>> phi;    // K x V, rows sum to 1
    std::vector<std::vector<double>> theta;  // D x K, rows sum to 1
    std::vector<std::pair<std::size_t, double>> loglik_trace;

    std::size_t num_topics() const { return phi.size(); }
    std::size_t num_docs() const { return theta.size(); }
};

GibbsState init_state(const TermDocumentMatrix& tdm, const FitConfig& config);

// Full conditional P(z_i = k | z_-i, w) with token i excluded, normalized.
std::vector<double> collapsed_conditional(const GibbsState& state, std::size_t token);

void gibbs_sweep(GibbsState& state);

// log P(w | z, beta) in closed form from the topic-term counts.
double log_likelihood(const GibbsState& state);

TopicModel fit(const TermDocumentMatrix& tdm, const FitConfig& config);

// Re-binds a deserialized model to its vocabulary; AlignmentError when the
// fingerprint or dimensions disagree.
void attach_vocab(TopicModel& model, const Vocabulary& vocab);

struct SyntheticData {
    TermDocumentMatrix tdm;
    std::vector<std::vector<double>> phi;    // planted K x V
    std::vector<std::vector<double>> theta;  // planted D x K
};

SyntheticData generate_synthetic(std::size_t K, std::size_t V, std::size_t D,
                                 std::size_t doc_len, double alpha,
                                 double beta_concentration, std::uint64_t seed);

std::string model_to_json(const TopicModel& model);
TopicModel model_from_json(const std::string& text);
void save_model(const TopicModel& model, const std::string& path);
TopicModel load_model(const std::string& path);

}  // namespace crashtopics
