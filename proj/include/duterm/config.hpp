#pragma once

// Pipeline configuration: one JSON file captures every hyperparameter of a
// run so seeded runs are reproducible end to end. Secrets never live here;
// the API key comes from the environment.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "duterm/dictionary.hpp"
#include "duterm/filtering.hpp"
#include "duterm/metrics.hpp"

namespace duterm {

class config_error : public std::runtime_error {
  public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

struct GenConfig {
    int count = 100;              // plan items per direction
    double single_term_ratio = 0.7;
    double temperature_min = 0.3;
    double temperature_max = 0.7;
    int pairs_per_prompt = 1;     // {n} in the generation templates
    int completions_per_request = 1;
    int parallelism = 4;
};

struct PosteditConfig {
    double temperature = 0.3;
    int parallelism = 4;
    int transport_retries = 3;
};

struct BackendSelection {
    bool mock = true;     // deterministic offline backend
    std::string endpoint; // used when mock is false
};

struct PipelineConfig {
    std::vector<LanguagePair> directions = supported_directions();
    std::uint64_t seed = 0;
    GenConfig gen;
    QEScorerConfig filter;
    PosteditConfig postedit;
    MetricConfig metrics;
    BackendSelection generation_backend;
    BackendSelection qe_backend;

    void validate() const {
        if (directions.empty()) throw config_error("directions must not be empty");
        for (const auto& d : directions) d.validate();
        if (gen.count < 1) throw config_error("gen.count must be >= 1");
        if (!(gen.single_term_ratio >= 0.0 && gen.single_term_ratio <= 1.0))
            throw config_error("gen.single_term_ratio must be in [0, 1]");
        if (!(gen.temperature_min >= 0.0 && gen.temperature_max <= 1.0 &&
              gen.temperature_min <= gen.temperature_max))
            throw config_error("gen temperature range must satisfy 0 <= min <= max <= 1");
        if (gen.pairs_per_prompt < 1) throw config_error("gen.pairs_per_prompt must be >= 1");
        if (gen.completions_per_request < 1)
            throw config_error("gen.completions_per_request must be >= 1");
        if (gen.parallelism < 1 || postedit.parallelism < 1)
            throw config_error("parallelism must be >= 1");
        if (!(postedit.temperature >= 0.0 && postedit.temperature <= 1.0))
            throw config_error("postedit.temperature must be in [0, 1]");
        try {
            filter.validate();
            metrics.validate();
        } catch (const std::invalid_argument& err) {
            throw config_error(err.what());
        }
        if (!generation_backend.mock && generation_backend.endpoint.empty())
            throw config_error("backends.generation.endpoint required when not in mock mode");
        if (qe_backend_kind() == QEScorerConfig::Backend::http_service &&
            qe_backend.endpoint.empty())
            throw config_error("backends.qe.endpoint required when not in stub mode");
    }

    QEScorerConfig::Backend qe_backend_kind() const {
        return qe_backend.mock ? QEScorerConfig::Backend::heuristic_stub
                               : QEScorerConfig::Backend::http_service;
    }
};

namespace config_detail {

template <typename T>
T get_or(const nlohmann::json& obj, const char* key, T fallback, const std::string& path) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw config_error("config key \"" + path + "." + key + "\" has the wrong type");
    }
}

} // namespace config_detail

inline PipelineConfig parse_config(const nlohmann::json& obj) {
    using config_detail::get_or;
    PipelineConfig cfg;
    if (obj.contains("directions")) {
        cfg.directions.clear();
        for (const auto& d : obj.at("directions")) {
            try {
                cfg.directions.push_back(LanguagePair::parse(d.get<std::string>()));
            } catch (const std::invalid_argument& err) {
                throw config_error(std::string("config key \"directions\": ") + err.what());
            }
        }
    }
    cfg.seed = get_or<std::uint64_t>(obj, "seed", cfg.seed, "");
    if (obj.contains("gen")) {
        const auto& g = obj.at("gen");
        cfg.gen.count = get_or(g, "count", cfg.gen.count, "gen");
        cfg.gen.single_term_ratio =
            get_or(g, "single_term_ratio", cfg.gen.single_term_ratio, "gen");
        cfg.gen.temperature_min = get_or(g, "temperature_min", cfg.gen.temperature_min, "gen");
        cfg.gen.temperature_max = get_or(g, "temperature_max", cfg.gen.temperature_max, "gen");
        cfg.gen.pairs_per_prompt = get_or(g, "pairs_per_prompt", cfg.gen.pairs_per_prompt, "gen");
        cfg.gen.completions_per_request =
            get_or(g, "completions_per_request", cfg.gen.completions_per_request, "gen");
        cfg.gen.parallelism = get_or(g, "parallelism", cfg.gen.parallelism, "gen");
    }
    if (obj.contains("filter")) {
        const auto& f = obj.at("filter");
        cfg.filter.threshold = get_or(f, "threshold", cfg.filter.threshold, "filter");
    }
    if (obj.contains("postedit")) {
        const auto& p = obj.at("postedit");
        cfg.postedit.temperature = get_or(p, "temperature", cfg.postedit.temperature, "postedit");
        cfg.postedit.parallelism = get_or(p, "parallelism", cfg.postedit.parallelism, "postedit");
        cfg.postedit.transport_retries =
            get_or(p, "transport_retries", cfg.postedit.transport_retries, "postedit");
    }
    if (obj.contains("metrics")) {
        const auto& m = obj.at("metrics");
        cfg.metrics.bleu_max_order = get_or(m, "bleu_max_order", cfg.metrics.bleu_max_order,
                                            "metrics");
        cfg.metrics.chrf_char_order =
            get_or(m, "chrf_char_order", cfg.metrics.chrf_char_order, "metrics");
        cfg.metrics.chrf_word_order =
            get_or(m, "chrf_word_order", cfg.metrics.chrf_word_order, "metrics");
        cfg.metrics.chrf_beta = get_or(m, "chrf_beta", cfg.metrics.chrf_beta, "metrics");
        std::string policy = get_or<std::string>(m, "term_match_policy", "exact-case", "metrics");
        if (policy == "exact-case")
            cfg.metrics.term_match_policy = MetricConfig::TermMatchPolicy::exact_case;
        else if (policy == "case-insensitive")
            cfg.metrics.term_match_policy = MetricConfig::TermMatchPolicy::case_insensitive;
        else
            throw config_error("config key \"metrics.term_match_policy\" must be "
                               "\"exact-case\" or \"case-insensitive\"");
    }
    if (obj.contains("backends")) {
        const auto& b = obj.at("backends");
        if (b.contains("generation")) {
            const auto& g = b.at("generation");
            std::string mode = get_or<std::string>(g, "mode", "mock", "backends.generation");
            if (mode != "mock" && mode != "http")
                throw config_error("backends.generation.mode must be \"mock\" or \"http\"");
            cfg.generation_backend.mock = mode == "mock";
            cfg.generation_backend.endpoint =
                get_or<std::string>(g, "endpoint", "", "backends.generation");
        }
        if (b.contains("qe")) {
            const auto& q = b.at("qe");
            std::string mode = get_or<std::string>(q, "mode", "stub", "backends.qe");
            if (mode != "stub" && mode != "http")
                throw config_error("backends.qe.mode must be \"stub\" or \"http\"");
            cfg.qe_backend.mock = mode == "stub";
            cfg.qe_backend.endpoint = get_or<std::string>(q, "endpoint", "", "backends.qe");
            cfg.filter.backend = cfg.qe_backend_kind();
            cfg.filter.endpoint = cfg.qe_backend.endpoint;
        }
    }
    cfg.validate();
    return cfg;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path.string());
    nlohmann::json obj = nlohmann::json::parse(in, nullptr, false);
    if (obj.is_discarded()) throw config_error("config file is not valid JSON: " + path.string());
    return parse_config(obj);
}

} // namespace duterm
