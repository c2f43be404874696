#include "crashtopics/lda.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "crashtopics/errors.hpp"

namespace crashtopics {

void FitConfig::validate() const {
    if (K < 1) throw ConfigError("K must be at least 1");
    if (alpha && *alpha <= 0.0) throw ConfigError("alpha must be positive");
    if (beta <= 0.0) throw ConfigError("beta must be positive");
    if (iterations < 1) throw ConfigError("iterations must be at least 1");
    if (burn_in >= iterations) throw ConfigError("burn_in must be less than iterations");
    if (sample_lag < 1) throw ConfigError("sample_lag must be at least 1");
}

void GibbsState::check_invariants() const {
    const std::size_t K = config.K;
    const std::size_t D = tdm->num_docs();
    const std::size_t V = tdm->num_terms();
    std::size_t total = 0;
    for (std::size_t d = 0; d < D; ++d) {
        std::size_t row = 0;
        for (std::size_t k = 0; k < K; ++k) row += n_dk[d][k];
        if (row != tdm->doc_lengths[d]) throw DataError("n_dk row sum mismatch");
        total += row;
    }
    std::size_t grand = 0;
    for (std::size_t k = 0; k < K; ++k) {
        std::size_t row = 0;
        for (std::size_t v = 0; v < V; ++v) row += n_kv[k][v];
        if (row != n_k[k]) throw DataError("n_kv row sum mismatch");
        grand += n_k[k];
    }
    if (total != z.size() || grand != z.size()) throw DataError("token total mismatch");
    for (std::size_t zi : z) {
        if (zi >= K) throw DataError("topic assignment out of range");
    }
}

GibbsState init_state(const TermDocumentMatrix& tdm, const FitConfig& config) {
    config.validate();
    if (tdm.num_docs() == 0) throw ConfigError("cannot fit an empty corpus");
    const std::size_t total = tdm.total_tokens();
    if (config.K > total) {
        throw ConfigError("K exceeds the total token count");
    }

    GibbsState state;
    state.config = config;
    state.tdm = &tdm;
    state.rng = Rng(config.seed);
    state.token_doc.reserve(total);
    state.token_term.reserve(total);
    for (std::size_t d = 0; d < tdm.num_docs(); ++d) {
        for (const auto& e : tdm.doc_entries[d]) {
            for (std::size_t r = 0; r < e.count; ++r) {
                state.token_doc.push_back(d);
                state.token_term.push_back(e.term);
            }
        }
    }
    const std::size_t K = config.K;
    state.z.resize(total);
    state.n_dk.assign(tdm.num_docs(), std::vector<std::size_t>(K, 0));
    state.n_kv.assign(K, std::vector<std::size_t>(tdm.num_terms(), 0));
    state.n_k.assign(K, 0);
    for (std::size_t i = 0; i < total; ++i) {
        const std::size_t k = static_cast<std::size_t>(state.rng.next_below(K));
        state.z[i] = k;
        ++state.n_dk[state.token_doc[i]][k];
        ++state.n_kv[k][state.token_term[i]];
        ++state.n_k[k];
    }
    return state;
}

std::vector<double> collapsed_conditional(const GibbsState& state, std::size_t token) {
    const std::size_t K = state.config.K;
    const std::size_t d = state.token_doc[token];
    const std::size_t v = state.token_term[token];
    const std::size_t k_cur = state.z[token];
    const double alpha = state.config.effective_alpha();
    const double vbeta = static_cast<double>(state.tdm->num_terms()) * state.config.beta;

    std::vector<double> p(K);
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const double excl = (k == k_cur) ? 1.0 : 0.0;
        const double ndk = static_cast<double>(state.n_dk[d][k]) - excl;
        const double nkv = static_cast<double>(state.n_kv[k][v]) - excl;
        const double nk = static_cast<double>(state.n_k[k]) - excl;
        p[k] = (ndk + alpha) * (nkv + state.config.beta) / (nk + vbeta);
        total += p[k];
    }
    for (auto& x : p) x /= total;
    return p;
}

void gibbs_sweep(GibbsState& state) {
    const std::size_t K = state.config.K;
    const double alpha = state.config.effective_alpha();
    const double beta = state.config.beta;
    const double vbeta = static_cast<double>(state.tdm->num_terms()) * beta;

    std::vector<double> cum(K);
    for (std::size_t i = 0; i < state.z.size(); ++i) {
        const std::size_t d = state.token_doc[i];
        const std::size_t v = state.token_term[i];
        const std::size_t k_old = state.z[i];
        --state.n_dk[d][k_old];
        --state.n_kv[k_old][v];
        --state.n_k[k_old];

        auto& ndk = state.n_dk[d];
        double total = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            total += (static_cast<double>(ndk[k]) + alpha) *
                     (static_cast<double>(state.n_kv[k][v]) + beta) /
                     (static_cast<double>(state.n_k[k]) + vbeta);
            cum[k] = total;
        }
        const double u = state.rng.next_double() * total;
        std::size_t k_new = K - 1;
        for (std::size_t k = 0; k < K; ++k) {
            if (u < cum[k]) {
                k_new = k;
                break;
            }
        }
        state.z[i] = k_new;
        ++state.n_dk[d][k_new];
        ++state.n_kv[k_new][v];
        ++state.n_k[k_new];
    }
}

double log_likelihood(const GibbsState& state) {
    const std::size_t K = state.config.K;
    const std::size_t V = state.tdm->num_terms();
    const double beta = state.config.beta;
    const double vbeta = static_cast<double>(V) * beta;
    const double lg_vbeta = std::lgamma(vbeta);
    const double lg_beta = std::lgamma(beta);

    double ll = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        ll += lg_vbeta - static_cast<double>(V) * lg_beta;
        for (std::size_t v = 0; v < V; ++v) {
            ll += std::lgamma(static_cast<double>(state.n_kv[k][v]) + beta);
        }
        ll -= std::lgamma(static_cast<double>(state.n_k[k]) + vbeta);
    }
    return ll;
}

TopicModel fit(const TermDocumentMatrix& tdm, const FitConfig& config) {
    GibbsState state = init_state(tdm, config);
    TopicModel model;
    model.config = config;
    model.config.alpha = config.effective_alpha();

    for (std::size_t t = 1; t <= config.iterations; ++t) {
        gibbs_sweep(state);
        if (t > config.burn_in && (t - config.burn_in) % config.sample_lag == 0) {
            model.loglik_trace.emplace_back(t, log_likelihood(state));
        }
    }

    const std::size_t K = config.K;
    const std::size_t V = tdm.num_terms();
    const std::size_t D = tdm.num_docs();
    const double alpha = config.effective_alpha();
    const double beta = config.beta;
    const double vbeta = static_cast<double>(V) * beta;
    const double kalpha = static_cast<double>(K) * alpha;

    model.vocab_fingerprint = vocab_hash(tdm.vocab);
    model.num_terms = V;
    model.vocab_terms = tdm.vocab.terms;
    model.doc_ids = tdm.doc_ids;
    model.phi.assign(K, std::vector<double>(V));
    for (std::size_t k = 0; k < K; ++k) {
        const double denom = static_cast<double>(state.n_k[k]) + vbeta;
        for (std::size_t v = 0; v < V; ++v) {
            model.phi[k][v] = (static_cast<double>(state.n_kv[k][v]) + beta) / denom;
        }
    }
    model.theta.assign(D, std::vector<double>(K));
    for (std::size_t d = 0; d < D; ++d) {
        const double denom = static_cast<double>(tdm.doc_lengths[d]) + kalpha;
        for (std::size_t k = 0; k < K; ++k) {
            model.theta[d][k] = (static_cast<double>(state.n_dk[d][k]) + alpha) / denom;
        }
    }
    return model;
}

void attach_vocab(TopicModel& model, const Vocabulary& vocab) {
    if (vocab.size() != model.num_terms) {
        throw AlignmentError("vocabulary size does not match the model");
    }
    const std::string fp = vocab_hash(vocab);
    if (fp != model.vocab_fingerprint) {
        throw AlignmentError("vocabulary fingerprint mismatch: model " +
                             model.vocab_fingerprint + ", corpus " + fp);
    }
    model.vocab_terms = vocab.terms;
}

namespace {

std::string padded_label(char prefix, std::size_t i, std::size_t n) {
    std::size_t width = 1;
    for (std::size_t x = (n > 0 ? n - 1 : 0); x >= 10; x /= 10) ++width;
    std::string digits = std::to_string(i);
    std::string out(1, prefix);
    out.append(width - digits.size(), '0');
    out += digits;
    return out;
}

std::vector<double> dirichlet_row(Rng& rng, std::size_t n, double concentration) {
    std::vector<double> row(n);
    double total = 0.0;
    for (auto& x : row) {
        x = rng.next_gamma(concentration);
        total += x;
    }
    for (auto& x : row) x /= total;
    return row;
}

std::size_t draw_categorical(Rng& rng, const std::vector<double>& p) {
    const double u = rng.next_double();
    double cum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        cum += p[i];
        if (u < cum) return i;
    }
    return p.size() - 1;
}

}  // namespace

SyntheticData generate_synthetic(std::size_t K, std::size_t V, std::size_t D,
                                 std::size_t doc_len, double alpha,
                                 double beta_concentration, std::uint64_t seed) {
    if (K < 1 || V < 1 || D < 1 || doc_len < 1) {
        throw ConfigError("synthetic dimensions must be positive");
    }
    if (alpha <= 0.0 || beta_concentration <= 0.0) {
        throw ConfigError("synthetic concentrations must be positive");
    }

    Rng rng(seed);
    SyntheticData data;
    data.phi.reserve(K);
    for (std::size_t k = 0; k < K; ++k) data.phi.push_back(dirichlet_row(rng, V, beta_concentration));
    data.theta.reserve(D);
    for (std::size_t d = 0; d < D; ++d) data.theta.push_back(dirichlet_row(rng, K, alpha));

    Vocabulary vocab;
    vocab.terms.reserve(V);
    for (std::size_t v = 0; v < V; ++v) {
        vocab.terms.push_back(padded_label('w', v, V));
        vocab.index.emplace(vocab.terms.back(), v);
    }
    vocab.corpus_frequency.assign(V, 0);

    TermDocumentMatrix tdm;
    tdm.doc_ids.reserve(D);
    tdm.doc_entries.reserve(D);
    for (std::size_t d = 0; d < D; ++d) {
        std::vector<TdmEntry> entries;
        std::unordered_map<std::size_t, std::size_t> pos;
        for (std::size_t t = 0; t < doc_len; ++t) {
            const std::size_t k = draw_categorical(rng, data.theta[d]);
            const std::size_t v = draw_categorical(rng, data.phi[k]);
            auto [slot, fresh] = pos.emplace(v, entries.size());
            if (fresh) entries.push_back({v, 1});
            else ++entries[slot->second].count;
            ++vocab.corpus_frequency[v];
        }
        tdm.doc_ids.push_back(padded_label('d', d, D));
        tdm.doc_entries.push_back(std::move(entries));
        tdm.doc_lengths.push_back(doc_len);
    }
    tdm.vocab = std::move(vocab);
    tdm.validate();
    data.tdm = std::move(tdm);
    return data;
}

namespace {

void require_row_stochastic(const std::vector<std::vector<double>>& m, const char* name) {
    for (const auto& row : m) {
        double sum = 0.0;
        for (double x : row) {
            if (!(x > 0.0)) throw SchemaError(std::string(name) + " has a non-positive entry");
            sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw SchemaError(std::string(name) + " row does not sum to 1");
        }
    }
}

}  // namespace

std::string model_to_json(const TopicModel& model) {
    require_row_stochastic(model.phi, "phi");
    require_row_stochastic(model.theta, "theta");
    nlohmann::json j;
    j["schema_version"] = 1;
    j["config"] = {
        {"K", model.config.K},
        {"alpha", model.config.effective_alpha()},
        {"beta", model.config.beta},
        {"iterations", model.config.iterations},
        {"burn_in", model.config.burn_in},
        {"sample_lag", model.config.sample_lag},
        {"seed", model.config.seed},
    };
    j["vocab_hash"] = model.vocab_fingerprint;
    j["num_topics"] = model.num_topics();
    j["num_terms"] = model.num_terms;
    j["num_docs"] = model.num_docs();
    j["doc_ids"] = model.doc_ids;
    std::vector<double> phi_flat;
    phi_flat.reserve(model.num_topics() * model.num_terms);
    for (const auto& row : model.phi) phi_flat.insert(phi_flat.end(), row.begin(), row.end());
    std::vector<double> theta_flat;
    theta_flat.reserve(model.num_docs() * model.num_topics());
    for (const auto& row : model.theta) theta_flat.insert(theta_flat.end(), row.begin(), row.end());
    j["phi"] = phi_flat;
    j["theta"] = theta_flat;
    auto& trace = j["loglik_trace"] = nlohmann::json::array();
    for (const auto& [iter, value] : model.loglik_trace) {
        trace.push_back({iter, value});
    }
    return j.dump(2) + "\n";
}

TopicModel model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("model JSON parse failure: ") + e.what());
    }
    try {
        if (!j.contains("schema_version") || j.at("schema_version").get<int>() != 1) {
            throw SchemaError("model JSON: unsupported schema_version");
        }
        TopicModel model;
        const auto& c = j.at("config");
        model.config.K = c.at("K").get<std::size_t>();
        model.config.alpha = c.at("alpha").get<double>();
        model.config.beta = c.at("beta").get<double>();
        model.config.iterations = c.at("iterations").get<std::size_t>();
        model.config.burn_in = c.at("burn_in").get<std::size_t>();
        model.config.sample_lag = c.at("sample_lag").get<std::size_t>();
        model.config.seed = c.at("seed").get<std::uint64_t>();
        model.config.validate();
        model.vocab_fingerprint = j.at("vocab_hash").get<std::string>();
        const auto K = j.at("num_topics").get<std::size_t>();
        const auto V = j.at("num_terms").get<std::size_t>();
        const auto D = j.at("num_docs").get<std::size_t>();
        if (K != model.config.K) throw SchemaError("model JSON: num_topics disagrees with config K");
        model.num_terms = V;
        model.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
        if (model.doc_ids.size() != D) throw SchemaError("model JSON: doc_ids length mismatch");
        const auto phi_flat = j.at("phi").get<std::vector<double>>();
        const auto theta_flat = j.at("theta").get<std::vector<double>>();
        if (phi_flat.size() != K * V) throw SchemaError("model JSON: phi size mismatch");
        if (theta_flat.size() != D * K) throw SchemaError("model JSON: theta size mismatch");
        model.phi.assign(K, std::vector<double>(V));
        for (std::size_t k = 0; k < K; ++k) {
            for (std::size_t v = 0; v < V; ++v) model.phi[k][v] = phi_flat[k * V + v];
        }
        model.theta.assign(D, std::vector<double>(K));
        for (std::size_t d = 0; d < D; ++d) {
            for (std::size_t k = 0; k < K; ++k) model.theta[d][k] = theta_flat[d * K + k];
        }
        for (const auto& entry : j.at("loglik_trace")) {
            if (!entry.is_array() || entry.size() != 2) {
                throw SchemaError("model JSON: malformed loglik_trace entry");
            }
            model.loglik_trace.emplace_back(entry[0].get<std::size_t>(),
                                            entry[1].get<double>());
        }
        require_row_stochastic(model.phi, "phi");
        require_row_stochastic(model.theta, "theta");
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("model JSON: ") + e.what());
    }
}

void save_model(const TopicModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << model_to_json(model);
    if (!out) throw IoError("write failure: " + path);
}

TopicModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str());
}

}  // namespace crashtopics
