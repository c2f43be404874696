#include "crashtopics/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "crashtopics/csv.hpp"
#include "crashtopics/metrics.hpp"
#include "crashtopics/rng.hpp"

namespace crashtopics {

void SweepConfig::validate() const {
    if (k_min < 2) throw ConfigError("k_min must be at least 2");
    if (k_min > k_max) throw ConfigError("k_min must not exceed k_max");
    if (seeds_per_k < 1) throw ConfigError("seeds_per_k must be at least 1");
    if (threads < 1) throw ConfigError("threads must be at least 1");
    FitConfig probe = fit;
    probe.K = k_min;
    probe.validate();
    if (fit.iterations - fit.burn_in < fit.sample_lag) {
        throw ConfigError("fit template yields no post-burn-in likelihood samples");
    }
}

namespace {

struct JobResult {
    MetricRow metrics;
    TopicModel model;  // kept only for replicate 0
    bool keep_model = false;
};

std::vector<double> trace_values(const TopicModel& model) {
    std::vector<double> values;
    values.reserve(model.loglik_trace.size());
    for (const auto& [iter, value] : model.loglik_trace) values.push_back(value);
    return values;
}

[[noreturn]] void rethrow_with_k(std::exception_ptr ep, std::size_t K) {
    const std::string prefix = "K=" + std::to_string(K) + ": ";
    try {
        std::rethrow_exception(ep);
    } catch (const ConfigError& e) {
        throw ConfigError(prefix + e.what());
    } catch (const DataError& e) {
        throw DataError(prefix + e.what());
    } catch (const InputError& e) {
        throw InputError(prefix + e.what());
    } catch (const Error& e) {
        throw Error(prefix + e.what());
    } catch (const std::exception& e) {
        throw Error(prefix + e.what());
    }
}

}  // namespace

std::vector<MetricRow> normalize_metrics(const std::vector<MetricRow>& raw) {
    if (raw.empty()) return {};
    auto scale = [&](double MetricRow::*field, bool maximize) {
        double lo = raw[0].*field, hi = raw[0].*field;
        for (const auto& row : raw) {
            lo = std::min(lo, row.*field);
            hi = std::max(hi, row.*field);
        }
        std::vector<double> out(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (hi == lo) {
                out[i] = 0.5;
            } else {
                const double scaled = (raw[i].*field - lo) / (hi - lo);
                out[i] = maximize ? 1.0 - scaled : scaled;
            }
        }
        return out;
    };
    const auto g = scale(&MetricRow::griffiths, true);
    const auto c = scale(&MetricRow::cao_juan, false);
    const auto a = scale(&MetricRow::arun, false);
    const auto d = scale(&MetricRow::deveaud, true);
    std::vector<MetricRow> normalized(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        normalized[i] = {raw[i].K, g[i], c[i], a[i], d[i]};
    }
    return normalized;
}

SweepResult sweep(const TermDocumentMatrix& tdm, const SweepConfig& config) {
    config.validate();
    const std::size_t n_k = config.k_max - config.k_min + 1;
    const std::size_t n_jobs = n_k * config.seeds_per_k;

    std::vector<JobResult> results(n_jobs);
    std::vector<std::exception_ptr> failures(n_jobs);
    std::atomic<std::size_t> next{0};

    auto run_job = [&](std::size_t job) {
        const std::size_t K = config.k_min + job / config.seeds_per_k;
        const std::size_t replicate = job % config.seeds_per_k;
        FitConfig fc = config.fit;
        fc.K = K;
        fc.seed = derive_seed(derive_seed(config.fit.seed, K), replicate);
        TopicModel model = fit(tdm, fc);
        JobResult& slot = results[job];
        slot.metrics.K = K;
        slot.metrics.griffiths = metric_griffiths(trace_values(model));
        slot.metrics.cao_juan = metric_cao_juan(model.phi);
        slot.metrics.arun = metric_arun(model.phi, model.theta, tdm.doc_lengths);
        slot.metrics.deveaud = metric_deveaud(model.phi);
        if (replicate == 0) {
            slot.model = std::move(model);
            slot.keep_model = true;
        }
    };

    auto worker = [&] {
        for (;;) {
            const std::size_t job = next.fetch_add(1);
            if (job >= n_jobs) return;
            try {
                run_job(job);
            } catch (...) {
                failures[job] = std::current_exception();
            }
        }
    };

    const std::size_t n_threads = std::min(config.threads, n_jobs);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (std::size_t job = 0; job < n_jobs; ++job) {
        if (failures[job]) {
            rethrow_with_k(failures[job], config.k_min + job / config.seeds_per_k);
        }
    }

    SweepResult out;
    out.vocab_terms = tdm.vocab.terms;
    for (std::size_t i = 0; i < n_k; ++i) {
        const std::size_t K = config.k_min + i;
        MetricRow row;
        row.K = K;
        for (std::size_t r = 0; r < config.seeds_per_k; ++r) {
            const auto& m = results[i * config.seeds_per_k + r].metrics;
            row.griffiths += m.griffiths;
            row.cao_juan += m.cao_juan;
            row.arun += m.arun;
            row.deveaud += m.deveaud;
        }
        const double n = static_cast<double>(config.seeds_per_k);
        row.griffiths /= n;
        row.cao_juan /= n;
        row.arun /= n;
        row.deveaud /= n;
        out.ks.push_back(K);
        out.raw.push_back(row);
        out.models.push_back(std::move(results[i * config.seeds_per_k].model));
    }
    out.normalized = normalize_metrics(out.raw);
    return out;
}

std::string sweep_to_csv(const SweepResult& result) {
    std::ostringstream out;
    csv::write_row(out, {"K", "griffiths_raw", "cao_juan_raw", "arun_raw", "deveaud_raw",
                         "griffiths_norm", "cao_juan_norm", "arun_norm", "deveaud_norm"});
    for (std::size_t i = 0; i < result.raw.size(); ++i) {
        const auto& r = result.raw[i];
        const auto& n = result.normalized[i];
        csv::write_row(out, {std::to_string(r.K), csv::format_double(r.griffiths),
                             csv::format_double(r.cao_juan), csv::format_double(r.arun),
                             csv::format_double(r.deveaud), csv::format_double(n.griffiths),
                             csv::format_double(n.cao_juan), csv::format_double(n.arun),
                             csv::format_double(n.deveaud)});
    }
    return out.str();
}

void save_sweep_csv(const SweepResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << sweep_to_csv(result);
    if (!out) throw IoError("write failure: " + path);
}

namespace {

// Top-1 term per topic, lowest index on ties; vocab is lexicographic so the
// lowest index is also the lexicographically first term.
std::vector<std::size_t> top1_terms(const TopicModel& model) {
    std::vector<std::size_t> tops(model.num_topics());
    for (std::size_t k = 0; k < model.num_topics(); ++k) {
        std::size_t best = 0;
        for (std::size_t v = 1; v < model.phi[k].size(); ++v) {
            if (model.phi[k][v] > model.phi[k][best]) best = v;
        }
        tops[k] = best;
    }
    return tops;
}

}  // namespace

SelectionResult select_k(const SweepResult& sweep, std::size_t k_floor) {
    if (sweep.ks.empty()) throw InputError("select_k needs a non-empty sweep");

    static const char* metric_names[] = {"griffiths", "cao_juan", "arun", "deveaud"};
    double MetricRow::*fields[] = {&MetricRow::griffiths, &MetricRow::cao_juan,
                                   &MetricRow::arun, &MetricRow::deveaud};

    std::map<std::size_t, std::vector<std::string>> candidates;
    for (std::size_t m = 0; m < 4; ++m) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < sweep.normalized.size(); ++i) {
            if (sweep.normalized[i].*fields[m] < sweep.normalized[best].*fields[m]) {
                best = i;
            }
        }
        candidates[sweep.ks[best]].push_back(metric_names[m]);
    }

    SelectionRationale rationale;
    rationale.k_floor = k_floor;
    std::vector<std::size_t> survivors;
    for (const auto& [K, metrics] : candidates) {
        CandidateRecord rec;
        rec.K = K;
        rec.proposed_by = metrics;
        if (K < k_floor) {
            rec.accepted = false;
            rec.reason = "rejected: K below floor " + std::to_string(k_floor);
        } else {
            const auto it = std::find(sweep.ks.begin(), sweep.ks.end(), K);
            if (it == sweep.ks.end()) {
                throw InputError("no fitted model for candidate K=" + std::to_string(K));
            }
            const auto& model = sweep.models[static_cast<std::size_t>(it - sweep.ks.begin())];
            const auto tops = top1_terms(model);
            std::string clash;
            for (std::size_t a = 0; a < tops.size() && clash.empty(); ++a) {
                for (std::size_t b = a + 1; b < tops.size(); ++b) {
                    if (tops[a] == tops[b]) {
                        const std::string term = tops[a] < sweep.vocab_terms.size()
                                                     ? "\"" + sweep.vocab_terms[tops[a]] + "\""
                                                     : "index " + std::to_string(tops[a]);
                        clash = "topics " + std::to_string(a) + " and " + std::to_string(b) +
                                " share top term " + term;
                        break;
                    }
                }
            }
            if (!clash.empty()) {
                rec.accepted = false;
                rec.reason = "rejected: " + clash;
            } else {
                rec.accepted = true;
                rec.reason = "eligible";
                survivors.push_back(K);
            }
        }
        rationale.candidates.push_back(std::move(rec));
    }

    if (survivors.empty()) {
        throw SelectionError("every candidate K was rejected", rationale);
    }
    const std::size_t chosen = *std::min_element(survivors.begin(), survivors.end());
    rationale.selected = chosen;
    for (auto& rec : rationale.candidates) {
        if (rec.K == chosen) rec.reason = "selected: smallest eligible candidate";
    }
    return {chosen, std::move(rationale)};
}

std::string rationale_to_json(const SelectionRationale& rationale) {
    nlohmann::json j;
    j["k_floor"] = rationale.k_floor;
    if (rationale.selected) j["selected_k"] = *rationale.selected;
    else j["selected_k"] = nullptr;
    auto& arr = j["candidates"] = nlohmann::json::array();
    for (const auto& rec : rationale.candidates) {
        arr.push_back({{"K", rec.K},
                       {"proposed_by", rec.proposed_by},
                       {"accepted", rec.accepted},
                       {"reason", rec.reason}});
    }
    return j.dump(2) + "\n";
}

void save_rationale(const SelectionRationale& rationale, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << rationale_to_json(rationale);
    if (!out) throw IoError("write failure: " + path);
}

}  // namespace crashtopics
