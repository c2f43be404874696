#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "crashtopics/corpus.hpp"
#include "crashtopics/csv.hpp"
#include "crashtopics/errors.hpp"
#include "crashtopics/hash.hpp"
#include "crashtopics/lda.hpp"
#include "crashtopics/records.hpp"
#include "crashtopics/report.hpp"
#include "crashtopics/stoplist.hpp"
#include "crashtopics/sweep.hpp"
#include "crashtopics/tokenize.hpp"
#include "crashtopics/version.hpp"

namespace ct = crashtopics;

namespace {

std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ct::IoError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ct::IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw ct::IoError("write failure: " + path);
}

std::string out_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ct::IoError("cannot create output directory: " + dir);
}

// The manifest pins everything that determines the outputs (parameters and
// input content hashes) and nothing that does not, so reruns are byte-stable.
void write_manifest(const std::string& out_dir, const std::string& command,
                    const nlohmann::json& params,
                    const std::vector<std::pair<std::string, std::string>>& inputs) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["tool"] = "crashtopics";
    j["version"] = ct::kVersion;
    j["command"] = command;
    j["params"] = params;
    j["config_hash"] = ct::fnv1a64_hex(params.dump());
    nlohmann::json in = nlohmann::json::object();
    for (const auto& [name, path] : inputs) {
        in[name] = ct::fnv1a64_hex(read_file_bytes(path));
    }
    j["inputs"] = in;
    write_file(out_path(out_dir, "manifest.json"), j.dump(2) + "\n");
}

struct ColumnFlags {
    ct::ColumnMap map;
    void attach(CLI::App* cmd) {
        cmd->add_option("--col-report-id", map.report_id, "CSV column holding the report id");
        cmd->add_option("--col-mode", map.mode, "CSV column holding the driving mode");
        cmd->add_option("--col-narrative", map.narrative, "CSV column holding the narrative");
        cmd->add_option("--col-crash-date", map.crash_date, "CSV column for the crash date");
        cmd->add_option("--col-crash-time", map.crash_time, "CSV column for the crash time");
        cmd->add_option("--col-manufacturer", map.manufacturer, "CSV column for the manufacturer");
        cmd->add_option("--col-make", map.make, "CSV column for the vehicle make");
        cmd->add_option("--col-model", map.model, "CSV column for the vehicle model");
        cmd->add_option("--col-year", map.year, "CSV column for the vehicle year");
        cmd->add_option("--col-city", map.city, "CSV column for the city");
        cmd->add_option("--col-street", map.street, "CSV column for the street");
        cmd->add_option("--col-movement-preceding", map.movement_preceding,
                        "CSV column for movement preceding the crash");
        cmd->add_option("--col-weather", map.weather, "CSV column for weather");
        cmd->add_option("--col-lighting", map.lighting, "CSV column for lighting");
        cmd->add_option("--col-roadway", map.roadway, "CSV column for roadway surface");
        cmd->add_option("--col-object-struck", map.object_struck,
                        "CSV column for the object struck");
        cmd->add_option("--col-injuries", map.injuries, "CSV column for injuries");
        cmd->add_option("--col-motion", map.motion, "CSV column for the motion annotation");
        cmd->add_option("--col-crash-type", map.crash_type,
                        "CSV column for the crash-type annotation");
    }
    nlohmann::json to_json() const {
        return {{"report_id", map.report_id},
                {"mode", map.mode},
                {"narrative", map.narrative},
                {"crash_date", map.crash_date},
                {"crash_time", map.crash_time},
                {"manufacturer", map.manufacturer},
                {"make", map.make},
                {"model", map.model},
                {"year", map.year},
                {"city", map.city},
                {"street", map.street},
                {"movement_preceding", map.movement_preceding},
                {"weather", map.weather},
                {"lighting", map.lighting},
                {"roadway", map.roadway},
                {"object_struck", map.object_struck},
                {"injuries", map.injuries},
                {"motion", map.motion},
                {"crash_type", map.crash_type}};
    }
};

struct FitFlags {
    double alpha = -1.0;  // negative means unset -> 50/K
    double beta = 0.1;
    std::size_t iterations = 1000;
    std::size_t burn_in = 200;
    std::size_t sample_lag = 10;
    std::uint64_t seed = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--alpha", alpha, "Document-topic Dirichlet parameter (default 50/K)");
        cmd->add_option("--beta", beta, "Topic-term Dirichlet parameter")
            ->capture_default_str();
        cmd->add_option("--iterations", iterations, "Total Gibbs sweeps")->capture_default_str();
        cmd->add_option("--burn-in", burn_in, "Sweeps discarded before likelihood sampling")
            ->capture_default_str();
        cmd->add_option("--sample-lag", sample_lag, "Keep every Nth post-burn-in likelihood")
            ->capture_default_str();
        cmd->add_option("--seed", seed, "Base RNG seed")->capture_default_str();
    }
    ct::FitConfig to_config() const {
        ct::FitConfig fc;
        if (alpha > 0.0) fc.alpha = alpha;
        fc.beta = beta;
        fc.iterations = iterations;
        fc.burn_in = burn_in;
        fc.sample_lag = sample_lag;
        fc.seed = seed;
        return fc;
    }
    nlohmann::json to_json() const {
        nlohmann::json j = {{"beta", beta},
                            {"iterations", iterations},
                            {"burn_in", burn_in},
                            {"sample_lag", sample_lag},
                            {"seed", seed}};
        if (alpha > 0.0) j["alpha"] = alpha;
        else j["alpha"] = nullptr;
        return j;
    }
};

int cmd_ingest(const std::string& input, const std::string& stoplist_path,
               const std::vector<std::string>& tiers, std::size_t min_count,
               const ColumnFlags& columns, const std::string& out_dir) {
    const std::string csv_bytes = read_file_bytes(input);
    std::istringstream csv_in(csv_bytes);
    const auto records = ct::parse_reports(csv_in, columns.map);
    const auto filtered = ct::filter_in_scope(records);

    const ct::StopList stops = ct::load_stoplist(stoplist_path);
    const std::set<std::string> enabled(tiers.begin(), tiers.end());

    std::vector<std::vector<std::string>> docs;
    std::vector<std::string> doc_ids;
    std::size_t tokens_before = 0, tokens_after = 0;
    for (const auto& rec : filtered.records) {
        auto tokens = ct::tokenize(rec.narrative);
        tokens_before += tokens.size();
        auto kept = ct::remove_stopwords(tokens, stops, enabled);
        tokens_after += kept.size();
        docs.push_back(std::move(kept));
        doc_ids.push_back(rec.report_id);
    }

    const auto vocab = ct::build_vocabulary(docs, min_count);
    auto built = ct::build_tdm(docs, doc_ids, vocab);

    ensure_out_dir(out_dir);
    ct::save_corpus(built.tdm, out_path(out_dir, "corpus.json"));

    nlohmann::json audit;
    audit["schema_version"] = 1;
    audit["records_in"] = records.size();
    audit["kept_autonomous"] = filtered.kept_autonomous;
    audit["kept_transition"] = filtered.kept_transition;
    audit["dropped_conventional"] = filtered.dropped_conventional;
    audit["documents_kept"] = built.tdm.num_docs();
    audit["documents_dropped_empty"] = built.dropped_doc_ids;
    audit["tokens_before_stopwords"] = tokens_before;
    audit["tokens_after_stopwords"] = tokens_after;
    audit["vocabulary_size"] = vocab.size();
    audit["enabled_tiers"] = std::vector<std::string>(enabled.begin(), enabled.end());
    std::vector<std::string> warnings = filtered.warnings;
    warnings.insert(warnings.end(), built.warnings.begin(), built.warnings.end());
    audit["warnings"] = warnings;
    write_file(out_path(out_dir, "audit.json"), audit.dump(2) + "\n");

    nlohmann::json params;
    params["tiers"] = std::vector<std::string>(enabled.begin(), enabled.end());
    params["min_count"] = min_count;
    params["columns"] = columns.to_json();
    write_manifest(out_dir, "ingest", params, {{"reports", input}, {"stoplist", stoplist_path}});

    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "ingest: " << built.tdm.num_docs() << " documents, vocabulary "
              << vocab.size() << " -> " << out_path(out_dir, "corpus.json") << "\n";
    return 0;
}

int cmd_sweep(const std::string& corpus_path, std::size_t k_min, std::size_t k_max,
              std::size_t seeds_per_k, std::size_t k_floor, const FitFlags& fit_flags,
              std::size_t threads, const std::string& out_dir) {
    const auto tdm = ct::load_corpus(corpus_path);
    ct::SweepConfig config;
    config.k_min = k_min;
    config.k_max = k_max;
    config.seeds_per_k = seeds_per_k;
    config.fit = fit_flags.to_config();
    config.threads = threads;

    const auto result = ct::sweep(tdm, config);
    ensure_out_dir(out_dir);
    ct::save_sweep_csv(result, out_path(out_dir, "sweep.csv"));

    nlohmann::json params;
    params["k_min"] = k_min;
    params["k_max"] = k_max;
    params["seeds_per_k"] = seeds_per_k;
    params["k_floor"] = k_floor;
    params["fit"] = fit_flags.to_json();
    write_manifest(out_dir, "sweep", params, {{"corpus", corpus_path}});

    try {
        const auto selection = ct::select_k(result, k_floor);
        ct::save_rationale(selection.rationale, out_path(out_dir, "selection.json"));
        std::cout << "sweep: selected K=" << selection.K << " -> "
                  << out_path(out_dir, "selection.json") << "\n";
    } catch (const ct::SelectionError& e) {
        ct::save_rationale(e.rationale, out_path(out_dir, "selection.json"));
        std::cerr << "crashtopics: selection error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int cmd_fit(const std::string& corpus_path, std::size_t K, const FitFlags& fit_flags,
            const std::string& out_dir) {
    const auto tdm = ct::load_corpus(corpus_path);
    ct::FitConfig config = fit_flags.to_config();
    config.K = K;
    const auto model = ct::fit(tdm, config);

    ensure_out_dir(out_dir);
    ct::save_model(model, out_path(out_dir, "model.json"));

    nlohmann::json params;
    params["k"] = K;
    params["fit"] = fit_flags.to_json();
    write_manifest(out_dir, "fit", params, {{"corpus", corpus_path}});
    std::cout << "fit: K=" << K << " -> " << out_path(out_dir, "model.json") << "\n";
    return 0;
}

int cmd_report(const std::string& corpus_path, const std::string& model_path,
               const std::string& reports_path, const ColumnFlags& columns,
               std::vector<std::string> formats, std::size_t top_n, std::size_t exemplars,
               const std::string& out_dir) {
    const auto tdm = ct::load_corpus(corpus_path);
    auto model = ct::load_model(model_path);
    ct::attach_vocab(model, tdm.vocab);

    const std::string csv_bytes = read_file_bytes(reports_path);
    std::istringstream csv_in(csv_bytes);
    const auto records = ct::parse_reports(csv_in, columns.map);

    ct::ReportOptions options;
    options.top_n = top_n;
    options.exemplars_per_topic = exemplars;
    const auto report = ct::build_report(model, records, options);

    if (formats.empty()) formats = {"json", "csv_bundle", "markdown"};
    ensure_out_dir(out_dir);
    std::vector<std::string> written;
    for (const auto& name : formats) {
        auto files = ct::emit_report(report, ct::parse_report_format(name), out_dir);
        written.insert(written.end(), files.begin(), files.end());
    }

    nlohmann::json params;
    params["formats"] = formats;
    params["top_n"] = top_n;
    params["exemplars"] = exemplars;
    params["columns"] = columns.to_json();
    write_manifest(out_dir, "report", params,
                   {{"corpus", corpus_path}, {"model", model_path}, {"reports", reports_path}});

    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "report: " << written.size() << " files -> " << out_dir << "\n";
    return 0;
}

int cmd_synth(std::size_t K, std::size_t V, std::size_t D, std::size_t doc_len, double alpha,
              double beta_concentration, std::uint64_t seed, const std::string& out_dir) {
    const auto data = ct::generate_synthetic(K, V, D, doc_len, alpha, beta_concentration, seed);
    ensure_out_dir(out_dir);
    ct::save_corpus(data.tdm, out_path(out_dir, "corpus.json"));

    nlohmann::json truth;
    truth["schema_version"] = 1;
    truth["k"] = K;
    truth["v"] = V;
    truth["d"] = D;
    truth["doc_len"] = doc_len;
    truth["alpha"] = alpha;
    truth["beta_concentration"] = beta_concentration;
    truth["seed"] = seed;
    truth["phi"] = data.phi;
    truth["theta"] = data.theta;
    write_file(out_path(out_dir, "truth.json"), truth.dump(2) + "\n");

    nlohmann::json params;
    params["k"] = K;
    params["v"] = V;
    params["d"] = D;
    params["doc_len"] = doc_len;
    params["alpha"] = alpha;
    params["beta_concentration"] = beta_concentration;
    params["seed"] = seed;
    write_manifest(out_dir, "synth", params, {});
    std::cout << "synth: " << D << " documents -> " << out_path(out_dir, "corpus.json") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crash-narrative topic modeling pipeline"};
    app.set_version_flag("--version", ct::kVersion);
    app.require_subcommand(1);

    std::string default_config;
    if (const char* env = std::getenv("CRASHTOPICS_CONFIG")) default_config = env;
    app.set_config("--config", default_config, "Configuration file (flags take precedence)");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Parse, filter and build the corpus");
    std::string in_input, in_stoplist, in_out = "out";
    std::vector<std::string> in_tiers = ct::StopList::tier_names();
    std::size_t in_min_count = 1;
    ColumnFlags in_columns;
    ingest->add_option("--input", in_input, "Crash reports CSV")->required();
    ingest->add_option("--stoplist", in_stoplist, "Stop-word file")->required();
    ingest->add_option("--tiers", in_tiers, "Enabled stop tiers")
        ->delimiter(',')
        ->capture_default_str();
    ingest->add_option("--min-count", in_min_count, "Minimum corpus frequency for vocabulary")
        ->capture_default_str();
    ingest->add_option("--out", in_out, "Output directory")->capture_default_str();
    in_columns.attach(ingest);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Fit models over a K range and select K");
    std::string sw_corpus, sw_out = "out";
    std::size_t sw_k_min = 2, sw_k_max = 15, sw_seeds = 1, sw_k_floor = 3, sw_threads = 1;
    FitFlags sw_fit;
    sweep_cmd->add_option("--corpus", sw_corpus, "Corpus JSON from ingest")->required();
    sweep_cmd->add_option("--k-min", sw_k_min, "Smallest K")->capture_default_str();
    sweep_cmd->add_option("--k-max", sw_k_max, "Largest K")->capture_default_str();
    sweep_cmd->add_option("--seeds-per-k", sw_seeds, "Replicate fits per K")
        ->capture_default_str();
    sweep_cmd->add_option("--k-floor", sw_k_floor, "Smallest acceptable K for selection")
        ->capture_default_str();
    sweep_cmd->add_option("--threads", sw_threads, "Parallel fits")->capture_default_str();
    sw_fit.attach(sweep_cmd);
    sweep_cmd->add_option("--out", sw_out, "Output directory")->capture_default_str();

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Fit a single model");
    std::string ft_corpus, ft_out = "out";
    std::size_t ft_k = 0;
    FitFlags ft_fit;
    fit_cmd->add_option("--corpus", ft_corpus, "Corpus JSON from ingest")->required();
    fit_cmd->add_option("--k", ft_k, "Number of topics")->required();
    ft_fit.attach(fit_cmd);
    fit_cmd->add_option("--out", ft_out, "Output directory")->capture_default_str();

    // report
    auto* report_cmd = app.add_subcommand("report", "Emit the analysis report");
    std::string rp_corpus, rp_model, rp_reports, rp_out = "out";
    std::vector<std::string> rp_formats;
    std::size_t rp_top_n = 10, rp_exemplars = 1;
    ColumnFlags rp_columns;
    report_cmd->add_option("--corpus", rp_corpus, "Corpus JSON from ingest")->required();
    report_cmd->add_option("--model", rp_model, "Model JSON from fit")->required();
    report_cmd->add_option("--reports", rp_reports, "Original crash reports CSV")->required();
    report_cmd->add_option("--format", rp_formats, "json, csv_bundle and/or markdown")
        ->delimiter(',');
    report_cmd->add_option("--top-n", rp_top_n, "Terms per topic")->capture_default_str();
    report_cmd->add_option("--exemplars", rp_exemplars, "Exemplar narratives per topic")
        ->capture_default_str();
    report_cmd->add_option("--out", rp_out, "Output directory")->capture_default_str();
    rp_columns.attach(report_cmd);

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus with known truth");
    std::size_t sy_k = 3, sy_v = 30, sy_d = 200, sy_len = 40;
    double sy_alpha = 0.1, sy_beta_conc = 0.1;
    std::uint64_t sy_seed = 1;
    std::string sy_out = "out";
    synth_cmd->add_option("--k", sy_k, "Planted topic count")->capture_default_str();
    synth_cmd->add_option("--v", sy_v, "Vocabulary size")->capture_default_str();
    synth_cmd->add_option("--d", sy_d, "Document count")->capture_default_str();
    synth_cmd->add_option("--doc-len", sy_len, "Tokens per document")->capture_default_str();
    synth_cmd->add_option("--alpha", sy_alpha, "Document-topic concentration")
        ->capture_default_str();
    synth_cmd->add_option("--beta-concentration", sy_beta_conc, "Topic-term concentration")
        ->capture_default_str();
    synth_cmd->add_option("--seed", sy_seed, "RNG seed")->capture_default_str();
    synth_cmd->add_option("--out", sy_out, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (ingest->parsed()) {
            return cmd_ingest(in_input, in_stoplist, in_tiers, in_min_count, in_columns, in_out);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(sw_corpus, sw_k_min, sw_k_max, sw_seeds, sw_k_floor, sw_fit,
                             sw_threads, sw_out);
        }
        if (fit_cmd->parsed()) {
            return cmd_fit(ft_corpus, ft_k, ft_fit, ft_out);
        }
        if (report_cmd->parsed()) {
            return cmd_report(rp_corpus, rp_model, rp_reports, rp_columns, rp_formats, rp_top_n,
                              rp_exemplars, rp_out);
        }
        if (synth_cmd->parsed()) {
            return cmd_synth(sy_k, sy_v, sy_d, sy_len, sy_alpha, sy_beta_conc, sy_seed, sy_out);
        }
    } catch (const ct::ConfigError& e) {
        std::cerr << "crashtopics: config error: " << e.what() << "\n";
        return 2;
    } catch (const ct::SchemaError& e) {
        std::cerr << "crashtopics: schema error: " << e.what() << "\n";
        return 2;
    } catch (const ct::Error& e) {
        std::cerr << "crashtopics: error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "crashtopics: unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
