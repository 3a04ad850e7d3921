// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The factx Authors

#ifndef FACTX_PIPELINE_HPP
#define FACTX_PIPELINE_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "factx/align.hpp"
#include "factx/document.hpp"
#include "factx/extract_llm.hpp"
#include "factx/extract_rules.hpp"
#include "factx/ingest.hpp"
#include "factx/prompt_defaults.hpp"
#include "factx/sparing.hpp"

namespace factx {

struct PipelineConfig {
    Method method = Method::combined;
    MarkerSet markers = default_marker_set();
    BaselinePhrases baseline = default_baseline_phrases();
    ProviderConfig provider;
    double ground_threshold = kDefaultGroundThreshold;
    int concurrency_bound = 4;
    std::int64_t expected_output_chars = 1257;  // used for the cost estimate only

    void validate() const {
        provider.validate();
        if (!(ground_threshold >= 0.0 && ground_threshold <= 1.0)) throw ConfigError("pipeline: ground_threshold must lie in [0,1]");
        if (concurrency_bound < 1) throw ConfigError("pipeline: concurrency_bound must be >= 1");
        if (expected_output_chars < 0) throw ConfigError("pipeline: expected_output_chars must be >= 0");
        if (markers.start_markers.empty() || markers.end_markers.empty()) throw ConfigError("pipeline: marker set is empty");
    }
};

/// Provider usage for one document.
struct LlmUsage {
    bool called = false;
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;
    double estimated_cost_usd = 0.0;
};

/// Immutable per-run state shared by worker threads.
class Extractor {
public:
    explicit Extractor(PipelineConfig config)
        : config_(std::move(config)), compiled_(config_.markers), prompt_(default_prompt_spec(config_.markers)) {
        config_.validate();
        const auto empty = build_prompt(VerdictDocument{}, prompt_);
        template_chars_ = empty.template_chars;
        const double budget = static_cast<double>(config_.provider.max_input_tokens) * config_.provider.chars_per_token;
        document_budget_ = budget > static_cast<double>(template_chars_) ? static_cast<std::size_t>(budget) - template_chars_ : 1;
    }

    const PipelineConfig& config() const noexcept { return config_; }
    const PromptSpec& prompt_spec() const noexcept { return prompt_; }
    const CompiledMarkers& markers() const noexcept { return compiled_; }
    std::size_t template_chars() const noexcept { return template_chars_; }
    std::size_t document_budget() const noexcept { return document_budget_; }

    /// Expected cost of sending `doc` to the provider.
    double estimated_cost(const VerdictDocument& doc) const {
        return estimate_cost(static_cast<std::int64_t>(utf8_length(doc.raw_text)), static_cast<std::int64_t>(template_chars_),
                             config_.expected_output_chars, config_.provider);
    }

    /// Prompt, call, parse and ground. Anything else than a grounded excerpt
    /// comes back as no_match (the model reports no statement) or failed.
    ExtractionOutcome llm_stage(const VerdictDocument& doc, GenerationClient& client, Method tag, LlmUsage& usage) const {
        const auto prompt = build_prompt(doc, prompt_, document_budget_);
        const auto result = llm_extract(doc, prompt, client, config_.provider);
        usage.called = true;
        usage.input_tokens = result.input_tokens;
        usage.output_tokens = result.output_tokens;
        usage.estimated_cost_usd = estimated_cost(doc);
        const std::string note = prompt.truncated ? ";prompt:truncated" : "";

        auto failed = [&](std::string reason) {
            auto o = detail::no_match(doc, tag, "llm:" + reason + note);
            o.status = Status::failed;
            return o;
        };
        if (result.status != LlmStatus::ok) return failed(to_string(result.status));
        std::optional<std::string> candidate;
        try {
            candidate = parse_model_output(*result.raw_output);
        } catch (const ModelOutputError&) {
            return failed("parse_error");
        }
        if (!candidate) return detail::no_match(doc, tag, "llm:no_fact" + note);
        const auto grounded = ground(*candidate, doc.raw_text, config_.ground_threshold);
        if (!grounded) return failed("ground_no_match");
        ExtractionOutcome o;
        o.doc_id = doc.doc_id;
        o.method = tag;
        o.status = Status::extracted;
        o.span = CharRange{grounded->match.start_offset, grounded->match.end_offset};
        o.text = grounded->text;
        o.score = grounded->match.score;
        o.diagnostics = "llm" + note;
        return o;
    }

    /// Advanced rules first; the provider only sees documents the rules cannot handle.
    ExtractionOutcome extract_combined(const VerdictDocument& doc, GenerationClient& client, LlmUsage& usage) const {
        auto ruled = advanced_extract(doc, compiled_);
        if (ruled.status == Status::extracted) {
            ruled.method = Method::combined;
            ruled.diagnostics = "rules";
            return ruled;
        }
        return llm_stage(doc, client, Method::combined, usage);
    }

    ExtractionOutcome extract(const VerdictDocument& doc, GenerationClient* client, LlmUsage& usage) const {
        switch (config_.method) {
            case Method::baseline: return baseline_extract(doc, config_.baseline);
            case Method::advanced: return advanced_extract(doc, compiled_);
            case Method::llm: return llm_stage(doc, require(client), Method::llm, usage);
            case Method::combined: return extract_combined(doc, require(client), usage);
        }
        throw std::logic_error("unknown method");
    }

private:
    static GenerationClient& require(GenerationClient* client) {
        if (!client) throw ConfigError("pipeline: this method needs a generation provider");
        return *client;
    }

    PipelineConfig config_;
    CompiledMarkers compiled_;
    PromptSpec prompt_;
    std::size_t template_chars_ = 0;
    std::size_t document_budget_ = 0;
};

inline ExtractionOutcome extract_combined(const VerdictDocument& doc, const MarkerSet& markers, GenerationClient& client, PipelineConfig config = {}) {
    config.markers = markers;
    config.method = Method::combined;
    LlmUsage usage;
    return Extractor(std::move(config)).extract_combined(doc, client, usage);
}

// ---------------------------------------------------------------------------
// Corpus runs

struct RunOptions {
    bool resume = false;
    std::size_t stop_after = SIZE_MAX;  // stop after writing this many new records (simulates an interruption)
};

struct RunSummary {
    std::string method;
    std::size_t documents = 0;        // records in the results file after the run
    std::size_t processed = 0;        // records written by this run
    std::size_t resumed = 0;          // records already present and skipped
    std::map<std::string, std::size_t> by_status;
    std::size_t rules_extracted = 0;
    std::size_t llm_extracted = 0;
    std::size_t provider_calls = 0;
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;
    double estimated_cost_usd = 0.0;
    double token_cost_usd = 0.0;      // from the token counts the provider reported
    bool complete = true;

    double extraction_rate() const {
        auto it = by_status.find("extracted");
        return documents == 0 || it == by_status.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(documents);
    }
};

inline nlohmann::json to_json(const RunSummary& s) {
    return {{"method", s.method},
            {"documents", s.documents},
            {"processed", s.processed},
            {"resumed", s.resumed},
            {"by_status", s.by_status},
            {"rules_extracted", s.rules_extracted},
            {"llm_extracted", s.llm_extracted},
            {"extraction_rate", s.extraction_rate()},
            {"provider_calls", s.provider_calls},
            {"input_tokens", s.input_tokens},
            {"output_tokens", s.output_tokens},
            {"estimated_cost_usd", s.estimated_cost_usd},
            {"token_cost_usd", s.token_cost_usd},
            {"complete", s.complete}};
}

namespace detail {

inline void count_outcome(RunSummary& s, const ExtractionOutcome& o) {
    ++s.by_status[to_string(o.status)];
    if (o.status != Status::extracted) return;
    if (o.diagnostics.rfind("llm", 0) == 0) {
        ++s.llm_extracted;
    } else {
        ++s.rules_extracted;
    }
}

// Keep every complete record of an earlier run; cut a trailing partial line.
inline std::vector<ExtractionOutcome> recover_results(const std::filesystem::path& path) {
    std::vector<ExtractionOutcome> kept;
    std::ifstream in(path, std::ios::binary);
    if (!in) return kept;
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    std::size_t good_end = 0;
    std::size_t pos = 0;
    while (pos < data.size()) {
        const auto nl = data.find('\n', pos);
        if (nl == std::string::npos) break;
        const auto j = nlohmann::json::parse(std::string_view(data).substr(pos, nl - pos), nullptr, false);
        if (j.is_discarded()) break;
        try {
            kept.push_back(outcome_from_json(j));
        } catch (const std::exception&) {
            break;
        }
        pos = nl + 1;
        good_end = pos;
    }
    if (good_end != data.size()) std::filesystem::resize_file(path, good_end);
    return kept;
}

}  // namespace detail

/// Run every document through the configured method and append one JSONL
/// record per document to `out_path`, in input order. With `resume`, records
/// already in the file are kept and their documents skipped.
inline RunSummary run_corpus(std::span<const VerdictDocument> docs, const PipelineConfig& config, GenerationClient* client,
                             const std::filesystem::path& out_path, RunOptions options = {}) {
    const Extractor extractor(config);
    if (!out_path.parent_path().empty() && !std::filesystem::is_directory(out_path.parent_path())) {
        throw SetupError("output directory does not exist: " + out_path.parent_path().string());
    }
    RunSummary summary;
    summary.method = to_string(config.method);
    std::unordered_set<std::string> done;
    if (options.resume) {
        for (const auto& o : detail::recover_results(out_path)) {
            if (!done.insert(o.doc_id).second) continue;
            detail::count_outcome(summary, o);
            ++summary.resumed;
        }
    }
    std::ofstream out(out_path, std::ios::binary | (options.resume ? std::ios::app : std::ios::trunc));
    if (!out) throw SetupError("cannot write results to " + out_path.string());

    std::vector<const VerdictDocument*> todo;
    for (const auto& d : docs) {
        if (done.insert(d.doc_id).second) todo.push_back(&d);
    }
    if (todo.size() > options.stop_after) {
        todo.resize(options.stop_after);
        summary.complete = false;
    }

    const auto workers = static_cast<std::size_t>(config.concurrency_bound);
    const std::size_t batch = std::max<std::size_t>(1, workers * 8);
    std::vector<ExtractionOutcome> outcomes;
    std::vector<LlmUsage> usage;
    for (std::size_t first = 0; first < todo.size(); first += batch) {
        const std::size_t count = std::min(batch, todo.size() - first);
        outcomes.assign(count, {});
        usage.assign(count, {});
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (std::size_t k = next++; k < count; k = next++) outcomes[k] = extractor.extract(*todo[first + k], client, usage[k]);
        };
        if (workers == 1 || count == 1) {
            work();
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < std::min(workers, count); ++w) pool.emplace_back(work);
        }
        // Single appender: records go out in input order.
        for (std::size_t k = 0; k < count; ++k) {
            out << to_json(outcomes[k]).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
            out.flush();
            if (!out) throw SetupError("write failed for " + out_path.string());
            detail::count_outcome(summary, outcomes[k]);
            ++summary.processed;
            if (usage[k].called) {
                ++summary.provider_calls;
                summary.input_tokens += usage[k].input_tokens;
                summary.output_tokens += usage[k].output_tokens;
                summary.estimated_cost_usd += usage[k].estimated_cost_usd;
            }
        }
    }
    summary.documents = summary.resumed + summary.processed;
    summary.token_cost_usd = static_cast<double>(summary.input_tokens) * config.provider.pricing.input_usd_per_million_tokens / 1e6 +
                             static_cast<double>(summary.output_tokens) * config.provider.pricing.output_usd_per_million_tokens / 1e6;
    return summary;
}

/// In-memory variant used by evaluations: outcomes in input order.
inline std::vector<ExtractionOutcome> extract_all(std::span<const VerdictDocument> docs, const Extractor& extractor, GenerationClient* client,
                                                  std::size_t* provider_calls = nullptr) {
    std::vector<ExtractionOutcome> out;
    out.reserve(docs.size());
    std::size_t calls = 0;
    for (const auto& d : docs) {
        LlmUsage usage;
        out.push_back(extractor.extract(d, client, usage));
        if (usage.called) ++calls;
    }
    if (provider_calls) *provider_calls = calls;
    return out;
}

}  // namespace factx

#endif  // FACTX_PIPELINE_HPP
