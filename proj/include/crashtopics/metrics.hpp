#pragma once

#include <cstddef>
#include <vector>

namespace crashtopics {

// Harmonic-mean estimate of log P(w | K): log S - logsumexp(-ll_s).
// Maximize-type.
double metric_griffiths(const std::vector<double>& loglik_samples);

// Mean pairwise cosine similarity between topic rows of phi. Minimize-type.
double metric_cao_juan(const std::vector<std::vector<double>>& phi);

// Symmetric KL between the normalized singular-value spectrum of phi and the
// normalized corpus topic mass doc_lengths' * theta. Minimize-type.
double metric_arun(const std::vector<std::vector<double>>& phi,
                   const std::vector<std::vector<double>>& theta,
                   const std::vector<std::size_t>& doc_lengths);

// Mean pairwise Jensen-Shannon divergence (natural log) between topic rows.
// Maximize-type.
double metric_deveaud(const std::vector<std::vector<double>>& phi);

}  // namespace crashtopics
