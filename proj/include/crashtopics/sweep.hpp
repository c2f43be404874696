#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "crashtopics/errors.hpp"
#include "crashtopics/lda.hpp"

namespace crashtopics {

struct SweepConfig {
    std::size_t k_min = 2;
    std::size_t k_max = 15;
    std::size_t seeds_per_k = 1;
    FitConfig fit;  // template; K is overwritten per sweep point
    std::size_t threads = 1;

    void validate() const;  // ConfigError
};

struct MetricRow {
    std::size_t K = 0;
    double griffiths = 0.0;
    double cao_juan = 0.0;
    double arun = 0.0;
    double deveaud = 0.0;
};

struct SweepResult {
    std::vector<std::size_t> ks;
    std::vector<MetricRow> raw;         // one row per K, replicate-averaged
    std::vector<MetricRow> normalized;  // min-max scaled, min = best for all
    std::vector<TopicModel> models;     // replicate-0 model per K
    std::vector<std::string> vocab_terms;
    std::vector<std::string> warnings;
};

std::vector<MetricRow> normalize_metrics(const std::vector<MetricRow>& raw);

SweepResult sweep(const TermDocumentMatrix& tdm, const SweepConfig& config);

std::string sweep_to_csv(const SweepResult& result);
void save_sweep_csv(const SweepResult& result, const std::string& path);

struct CandidateRecord {
    std::size_t K = 0;
    std::vector<std::string> proposed_by;  // metric names, canonical order
    bool accepted = false;
    std::string reason;
};

struct SelectionRationale {
    std::size_t k_floor = 0;
    std::vector<CandidateRecord> candidates;  // sorted by K
    std::optional<std::size_t> selected;
};

class SelectionError : public Error {
public:
    SelectionError(const std::string& msg, SelectionRationale r)
        : Error(msg), rationale(std::move(r)) {}
    SelectionRationale rationale;
};

struct SelectionResult {
    std::size_t K = 0;
    SelectionRationale rationale;
};

// Codified selection rule: per-metric argmin candidates, reject K < k_floor,
// reject models where two topics share the same top-1 term, pick the smallest
// survivor. Throws SelectionError (rationale attached) when nothing survives.
SelectionResult select_k(const SweepResult& sweep, std::size_t k_floor = 3);

std::string rationale_to_json(const SelectionRationale& rationale);
void save_rationale(const SelectionRationale& rationale, const std::string& path);

}  // namespace crashtopics
