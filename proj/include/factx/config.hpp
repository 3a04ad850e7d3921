// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The factx Authors

#ifndef FACTX_CONFIG_HPP
#define FACTX_CONFIG_HPP

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "factx/document.hpp"
#include "factx/extract_llm.hpp"
#include "factx/extract_rules.hpp"
#include "factx/ingest.hpp"
#include "factx/pipeline.hpp"
#include "factx/sparing.hpp"

namespace factx {

/// Every effective setting of a run. Precedence, lowest first: built-in
/// defaults, config file, command-line flags, environment. The environment
/// only supplies credentials, which are never printed.
struct RunConfig {
    struct Ingest {
        int year_from = 2018;
        int year_to = 2022;
        std::string endpoint;
        int max_retries = 3;
        std::int64_t request_interval_ms = 500;
        int max_in_flight = 4;
    } ingest;

    struct Markers {
        std::string path;  // empty: built-in marker set
    } markers;

    struct Provider {
        std::string backend = "replay";  // replay | http
        std::string model_name = "gemini-2.0-flash";
        double temperature = 0.0;
        int max_output_tokens = 8192;
        std::int64_t max_input_tokens = 1'000'000;
        double input_usd_per_million_tokens = 0.10;
        double output_usd_per_million_tokens = 0.40;
        double chars_per_token = 4.0;
        std::string endpoint = "https://generativelanguage.googleapis.com/v1beta";
        std::string replay_path;
        std::string record_path;
        int timeout_s = 120;
        int max_retries = 3;
        std::string api_key_env = "FACTX_API_KEY";
    } provider;

    struct Pipeline {
        std::string method = "combined";
        double ground_threshold = kDefaultGroundThreshold;
        int concurrency_bound = 4;
        std::int64_t expected_output_chars = 1257;
    } pipeline;

    struct Evaluation {
        std::string metric = "levenshtein";
        int decimals = 2;
    } evaluation;

    std::string api_key;  // from the environment only

    ProviderConfig provider_config() const {
        ProviderConfig p;
        p.model_name = provider.model_name;
        p.temperature = provider.temperature;
        p.max_output_tokens = provider.max_output_tokens;
        p.max_input_tokens = provider.max_input_tokens;
        p.pricing = {provider.input_usd_per_million_tokens, provider.output_usd_per_million_tokens};
        p.chars_per_token = provider.chars_per_token;
        return p;
    }

    RetrievalConfig retrieval_config() const {
        return {ingest.endpoint, ingest.max_retries, std::chrono::milliseconds(ingest.request_interval_ms), ingest.max_in_flight};
    }

    MarkerSet marker_set() const { return markers.path.empty() ? default_marker_set() : load_marker_set(markers.path); }

    PipelineConfig pipeline_config() const {
        PipelineConfig c;
        c.method = parse_method(pipeline.method);
        c.markers = marker_set();
        c.provider = provider_config();
        c.ground_threshold = pipeline.ground_threshold;
        c.concurrency_bound = pipeline.concurrency_bound;
        c.expected_output_chars = pipeline.expected_output_chars;
        return c;
    }

    Metric metric() const {
        if (evaluation.metric == "levenshtein") return Metric::levenshtein;
        if (evaluation.metric == "lcs_ratio") return Metric::lcs_ratio;
        throw ConfigError("evaluation.metric must be levenshtein or lcs_ratio");
    }

    void validate() const {
        if (ingest.year_from > ingest.year_to) throw ConfigError("ingest.year_from must not exceed ingest.year_to");
        retrieval_config().validate();
        provider_config().validate();
        if (provider.backend != "replay" && provider.backend != "http") throw ConfigError("provider.backend must be replay or http");
        if (provider.timeout_s <= 0) throw ConfigError("provider.timeout_s must be positive");
        if (provider.max_retries < 0) throw ConfigError("provider.max_retries must be >= 0");
        (void)parse_method(pipeline.method);
        if (!(pipeline.ground_threshold >= 0.0 && pipeline.ground_threshold <= 1.0)) throw ConfigError("pipeline.ground_threshold must lie in [0,1]");
        if (pipeline.concurrency_bound < 1) throw ConfigError("pipeline.concurrency_bound must be >= 1");
        if (pipeline.expected_output_chars < 0) throw ConfigError("pipeline.expected_output_chars must be >= 0");
        (void)metric();
        if (evaluation.decimals < 0 || evaluation.decimals > 6) throw ConfigError("evaluation.decimals must lie in [0,6]");
    }
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RunConfig::Ingest, year_from, year_to, endpoint, max_retries, request_interval_ms, max_in_flight)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RunConfig::Markers, path)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RunConfig::Provider, backend, model_name, temperature, max_output_tokens, max_input_tokens,
                                   input_usd_per_million_tokens, output_usd_per_million_tokens, chars_per_token, endpoint, replay_path,
                                   record_path, timeout_s, max_retries, api_key_env)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RunConfig::Pipeline, method, ground_threshold, concurrency_bound, expected_output_chars)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RunConfig::Evaluation, metric, decimals)

inline nlohmann::json to_json(const RunConfig& c) {
    return {{"ingest", c.ingest}, {"markers", c.markers}, {"provider", c.provider}, {"pipeline", c.pipeline}, {"evaluation", c.evaluation}};
}

namespace detail {

// Overlay `patch` onto `base`, rejecting keys the base does not have and
// values whose JSON type differs (integers are accepted for floats).
inline void overlay(nlohmann::json& base, const nlohmann::json& patch, const std::string& where) {
    if (!patch.is_object()) throw ConfigError("config: " + (where.empty() ? std::string("root") : where) + " must be an object");
    for (auto it = patch.begin(); it != patch.end(); ++it) {
        const std::string key = where.empty() ? it.key() : where + "." + it.key();
        if (!base.contains(it.key())) throw ConfigError("config: unknown setting '" + key + "'");
        auto& slot = base[it.key()];
        if (slot.is_object()) {
            overlay(slot, it.value(), key);
            continue;
        }
        const bool numeric_ok = slot.is_number_float() && it.value().is_number();
        const bool integer_ok = slot.is_number_integer() && it.value().is_number_integer();
        if (!(numeric_ok || integer_ok || slot.type() == it.value().type())) throw ConfigError("config: wrong type for '" + key + "'");
        slot = numeric_ok ? nlohmann::json(it.value().get<double>()) : it.value();
    }
}

inline RunConfig from_merged(const nlohmann::json& j) {
    RunConfig c;
    try {
        c.ingest = j.at("ingest").get<RunConfig::Ingest>();
        c.markers = j.at("markers").get<RunConfig::Markers>();
        c.provider = j.at("provider").get<RunConfig::Provider>();
        c.pipeline = j.at("pipeline").get<RunConfig::Pipeline>();
        c.evaluation = j.at("evaluation").get<RunConfig::Evaluation>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

}  // namespace detail

/// Apply a JSON object of settings on top of `config`.
inline RunConfig apply_config_json(const RunConfig& config, const nlohmann::json& patch) {
    auto merged = to_json(config);
    detail::overlay(merged, patch, "");
    auto out = detail::from_merged(merged);
    out.api_key = config.api_key;
    return out;
}

inline RunConfig apply_config_file(const RunConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config file " + path.string() + " is not valid JSON");
    return apply_config_json(config, j);
}

/// Apply one `section.key=value` override. The value is read as JSON when it
/// parses as JSON, otherwise as a plain string.
inline RunConfig apply_override(const RunConfig& config, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) throw ConfigError("override must look like section.key=value");
    const std::string path(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));
    auto value = nlohmann::json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    nlohmann::json patch = value;
    std::size_t end = path.size();
    while (true) {
        const auto dot = path.rfind('.', end - 1);
        const std::size_t begin = dot == std::string::npos ? 0 : dot + 1;
        patch = nlohmann::json{{path.substr(begin, end - begin), patch}};
        if (dot == std::string::npos) break;
        end = dot;
    }
    return apply_config_json(config, patch);
}

/// Pick up credentials from the environment.
inline RunConfig apply_environment(RunConfig config) {
    if (const char* key = std::getenv(config.provider.api_key_env.c_str()); key != nullptr) config.api_key = key;
    return config;
}

}  // namespace factx

#endif  // FACTX_CONFIG_HPP
