// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The factx Authors

#ifndef FACTX_EXTRACT_LLM_HPP
#define FACTX_EXTRACT_LLM_HPP

#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "factx/document.hpp"
#include "factx/sparing.hpp"
#include "factx/text.hpp"

namespace factx {

// ---------------------------------------------------------------------------
// Prompt

struct Exemplar {
    std::string excerpt;
    std::string fact_sentence;  // empty: the excerpt has no factual statement
};

/// Everything that goes into a prompt except the decision itself.
struct PromptSpec {
    std::string instruction_text;
    MarkerSet marker_hints;
    std::vector<Exemplar> exemplars;
    std::string output_schema;
};

struct RenderedPrompt {
    std::string text;
    std::size_t char_count = 0;      // code points in `text`
    std::size_t template_chars = 0;  // code points excluding the decision text
    std::size_t document_chars = 0;  // code points of the decision text actually included
    bool truncated = false;
};

/// Name of the field carrying the factual statement in the model's JSON answer.
inline constexpr std::string_view kFactField = "fact_sentence";

inline constexpr std::string_view kTruncationMark = "\n[...]\n";

/// Keep the head and tail of an over-long text, dropping the middle.
inline std::string truncate_middle(std::string_view text, std::size_t max_chars, bool& truncated) {
    const auto decoded = decode_utf8(text);
    truncated = decoded.size() > max_chars;
    if (!truncated) return std::string(text);
    const std::size_t mark = utf8_length(kTruncationMark);
    const std::size_t keep = max_chars > mark ? max_chars - mark : 0;
    const std::size_t head = keep - keep / 2;
    const std::size_t tail = keep / 2;
    std::string out(decoded.bytes(text, 0, head));
    out += kTruncationMark;
    out += decoded.bytes(text, decoded.size() - tail, decoded.size());
    return out;
}

namespace detail {

inline std::string render_template_head(const PromptSpec& spec) {
    std::string out;
    out += spec.instruction_text;
    out += "\n\n## Markers\nThe factual statement usually begins right after one of these expressions:\n";
    for (const auto& m : spec.marker_hints.start_markers) out += "- \"" + m + "\"\n";
    out += "It usually ends right before one of these expressions:\n";
    for (const auto& m : spec.marker_hints.end_markers) out += "- \"" + m + "\"\n";
    out += "\n## Examples\n";
    for (std::size_t i = 0; i < spec.exemplars.size(); ++i) {
        const auto& ex = spec.exemplars[i];
        out += "### Example " + std::to_string(i + 1) + "\nDecision excerpt:\n\"\"\"\n" + ex.excerpt + "\n\"\"\"\nExpected answer:\n";
        const nlohmann::json value = ex.fact_sentence.empty() ? nlohmann::json(nullptr) : nlohmann::json(ex.fact_sentence);
        out += nlohmann::json{{std::string(kFactField), value}}.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
        out += "\n\n";
    }
    out += "## Output format\n" + spec.output_schema + "\n\n## Decision\n\"\"\"\n";
    return out;
}

inline constexpr std::string_view kTemplateTail = "\n\"\"\"\n";

}  // namespace detail

/// Render instruction, marker hints, exemplars, output contract and then the
/// decision. `max_document_chars` (0 = unlimited) bounds the decision text;
/// longer decisions lose their middle.
inline RenderedPrompt build_prompt(const VerdictDocument& doc, const PromptSpec& spec, std::size_t max_document_chars = 0) {
    if (spec.exemplars.empty()) throw std::invalid_argument("build_prompt: at least one exemplar is required");
    if (spec.marker_hints.start_markers.empty() || spec.marker_hints.end_markers.empty()) {
        throw std::invalid_argument("build_prompt: marker hints must be non-empty");
    }
    RenderedPrompt prompt;
    const std::string head = detail::render_template_head(spec);
    std::string body = doc.raw_text;
    if (max_document_chars > 0) body = truncate_middle(doc.raw_text, max_document_chars, prompt.truncated);
    prompt.text.reserve(head.size() + body.size() + detail::kTemplateTail.size());
    prompt.text = head;
    prompt.text += body;
    prompt.text += detail::kTemplateTail;
    prompt.document_chars = utf8_length(body);
    prompt.char_count = utf8_length(prompt.text);
    prompt.template_chars = prompt.char_count - prompt.document_chars;
    return prompt;
}

// ---------------------------------------------------------------------------
// Provider configuration and cost

struct Pricing {
    double input_usd_per_million_tokens = 0.10;
    double output_usd_per_million_tokens = 0.40;
};

struct ProviderConfig {
    std::string model_name = "gemini-2.0-flash";
    double temperature = 0.0;
    int max_output_tokens = 8192;
    std::int64_t max_input_tokens = 1'000'000;
    Pricing pricing;
    double chars_per_token = 4.0;

    void validate() const {
        if (temperature < 0.0) throw ConfigError("provider: temperature must be >= 0");
        if (pricing.input_usd_per_million_tokens < 0.0 || pricing.output_usd_per_million_tokens < 0.0) {
            throw ConfigError("provider: prices must be >= 0");
        }
        if (!(chars_per_token > 0.0)) throw ConfigError("provider: chars_per_token must be > 0");
        if (max_output_tokens <= 0) throw ConfigError("provider: max_output_tokens must be > 0");
        if (max_input_tokens <= 0) throw ConfigError("provider: max_input_tokens must be > 0");
    }
};

inline std::int64_t estimate_tokens(std::int64_t chars, double chars_per_token) {
    if (chars < 0) throw std::invalid_argument("estimate_tokens: negative character count");
    if (!(chars_per_token > 0.0)) throw std::invalid_argument("estimate_tokens: chars_per_token must be > 0");
    return static_cast<std::int64_t>(std::ceil(static_cast<double>(chars) / chars_per_token));
}

/// Expected USD cost of one request: input is the decision plus the prompt
/// template, output is the expected answer; tokens are characters divided by
/// chars_per_token, rounded up.
inline double estimate_cost(std::int64_t doc_chars, std::int64_t prompt_chars, std::int64_t expected_output_chars, const ProviderConfig& config) {
    if (doc_chars < 0 || prompt_chars < 0 || expected_output_chars < 0) throw std::invalid_argument("estimate_cost: negative character count");
    const auto input_tokens = estimate_tokens(doc_chars + prompt_chars, config.chars_per_token);
    const auto output_tokens = estimate_tokens(expected_output_chars, config.chars_per_token);
    return static_cast<double>(input_tokens) * config.pricing.input_usd_per_million_tokens / 1e6 +
           static_cast<double>(output_tokens) * config.pricing.output_usd_per_million_tokens / 1e6;
}

// ---------------------------------------------------------------------------
// Generation clients

enum class LlmStatus { ok, token_limit_exceeded, safety_flagged, transport_error };

inline const char* to_string(LlmStatus s) {
    switch (s) {
        case LlmStatus::ok: return "ok";
        case LlmStatus::token_limit_exceeded: return "token_limit_exceeded";
        case LlmStatus::safety_flagged: return "safety_flagged";
        case LlmStatus::transport_error: return "transport_error";
    }
    return "unknown";
}

inline LlmStatus parse_llm_status(std::string_view s) {
    if (s == "ok") return LlmStatus::ok;
    if (s == "token_limit_exceeded") return LlmStatus::token_limit_exceeded;
    if (s == "safety_flagged") return LlmStatus::safety_flagged;
    if (s == "transport_error") return LlmStatus::transport_error;
    throw std::invalid_argument("unknown model status '" + std::string(s) + "'");
}

struct LlmResult {
    LlmStatus status = LlmStatus::transport_error;
    std::optional<std::string> raw_output;  // present iff status == ok
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;
    std::string detail;
};

struct GenerationRequest {
    std::string prompt;
    std::string model;
    double temperature = 0.0;
    int max_output_tokens = 0;
};

/// Text-generation backend: prompt in, text and token counts out.
/// Implementations must be safe to call concurrently.
class GenerationClient {
public:
    virtual ~GenerationClient() = default;
    virtual LlmResult generate(const GenerationRequest& request) = 0;
};

inline std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

/// Deterministic in-process backend driven by a callback; counts calls.
class StubProvider final : public GenerationClient {
public:
    using Script = std::function<LlmResult(const GenerationRequest&)>;

    explicit StubProvider(Script script) : script_(std::move(script)) {}

    /// Always answers with `fact` in the declared JSON format.
    static StubProvider echo(std::string fact) {
        return StubProvider([fact = std::move(fact)](const GenerationRequest&) {
            LlmResult r;
            r.status = LlmStatus::ok;
            r.raw_output = nlohmann::json{{std::string(kFactField), fact}}.dump();
            return r;
        });
    }

    /// Always refuses with `status`.
    static StubProvider refusing(LlmStatus status) {
        return StubProvider([status](const GenerationRequest&) {
            LlmResult r;
            r.status = status;
            r.detail = "scripted refusal";
            return r;
        });
    }

    LlmResult generate(const GenerationRequest& request) override {
        ++calls_;
        std::lock_guard lock(mutex_);
        return script_(request);
    }

    std::size_t calls() const noexcept { return calls_.load(); }

private:
    Script script_;
    std::mutex mutex_;
    std::atomic<std::size_t> calls_{0};
};

/// One scripted or recorded provider answer.
struct ReplayRecord {
    std::string prompt_hash;
    LlmStatus status = LlmStatus::ok;
    std::optional<std::string> raw_output;
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;
    std::string doc_id;  // informational
};

inline nlohmann::json to_json(const ReplayRecord& r) {
    nlohmann::json j{{"prompt_hash", r.prompt_hash},
                     {"status", to_string(r.status)},
                     {"raw_output", r.raw_output ? nlohmann::json(*r.raw_output) : nlohmann::json(nullptr)},
                     {"input_tokens", r.input_tokens},
                     {"output_tokens", r.output_tokens}};
    if (!r.doc_id.empty()) j["doc_id"] = r.doc_id;
    return j;
}

inline ReplayRecord replay_record_from_json(const nlohmann::json& j) {
    ReplayRecord r;
    r.prompt_hash = j.at("prompt_hash").get<std::string>();
    r.status = parse_llm_status(j.at("status").get<std::string>());
    if (j.contains("raw_output") && !j["raw_output"].is_null()) r.raw_output = j["raw_output"].get<std::string>();
    r.input_tokens = j.value("input_tokens", std::int64_t{0});
    r.output_tokens = j.value("output_tokens", std::int64_t{0});
    r.doc_id = j.value("doc_id", "");
    return r;
}

/// Plays back answers keyed by the SHA-256 of the prompt. Unknown prompts
/// produce a transport error.
class ReplayProvider final : public GenerationClient {
public:
    explicit ReplayProvider(std::vector<ReplayRecord> records) {
        for (auto& r : records) by_hash_[r.prompt_hash] = std::move(r);
    }

    ReplayProvider(ReplayProvider&& other) noexcept
        : by_hash_(std::move(other.by_hash_)), calls_(other.calls_.load()), misses_(other.misses_.load()) {}

    static ReplayProvider load(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("cannot open replay fixture " + path.string());
        std::vector<ReplayRecord> records;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            const auto j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded()) throw ConfigError("replay fixture line " + std::to_string(line_no) + " is not valid JSON");
            try {
                records.push_back(replay_record_from_json(j));
            } catch (const std::exception& e) {
                throw ConfigError("replay fixture line " + std::to_string(line_no) + ": " + e.what());
            }
        }
        return ReplayProvider(std::move(records));
    }

    LlmResult generate(const GenerationRequest& request) override {
        ++calls_;
        auto it = by_hash_.find(sha256_hex(request.prompt));
        if (it == by_hash_.end()) {
            ++misses_;
            return {LlmStatus::transport_error, std::nullopt, 0, 0, "replay miss"};
        }
        const auto& r = it->second;
        return {r.status, r.raw_output, r.input_tokens, r.output_tokens, r.doc_id};
    }

    std::size_t size() const noexcept { return by_hash_.size(); }
    std::size_t calls() const noexcept { return calls_.load(); }
    std::size_t misses() const noexcept { return misses_.load(); }

private:
    std::unordered_map<std::string, ReplayRecord> by_hash_;
    std::atomic<std::size_t> calls_{0};
    std::atomic<std::size_t> misses_{0};
};

/// Forwards to another client and appends every exchange to a JSONL replay file.
class RecordingProvider final : public GenerationClient {
public:
    RecordingProvider(GenerationClient& inner, const std::filesystem::path& path) : inner_(inner), out_(path, std::ios::app | std::ios::binary) {
        if (!out_) throw ConfigError("cannot open replay recording " + path.string());
    }

    LlmResult generate(const GenerationRequest& request) override {
        auto result = inner_.generate(request);
        ReplayRecord r{sha256_hex(request.prompt), result.status, result.raw_output, result.input_tokens, result.output_tokens, {}};
        std::lock_guard lock(mutex_);
        out_ << to_json(r).dump() << '\n';
        out_.flush();
        return result;
    }

private:
    GenerationClient& inner_;
    std::mutex mutex_;
    std::ofstream out_;
};

/// Send one prompt. Refusals and failures come back as statuses; nothing
/// thrown by the client escapes.
inline LlmResult llm_extract(const VerdictDocument& doc, const RenderedPrompt& prompt, GenerationClient& client, const ProviderConfig& config) {
    GenerationRequest request{prompt.text, config.model_name, config.temperature, config.max_output_tokens};
    LlmResult result;
    try {
        result = client.generate(request);
    } catch (const std::exception& e) {
        result = {LlmStatus::transport_error, std::nullopt, 0, 0, std::string("client error: ") + e.what()};
    }
    if (result.status == LlmStatus::ok && !result.raw_output) {
        result.status = LlmStatus::transport_error;
        result.detail = "ok status without output";
    }
    if (result.status != LlmStatus::ok) result.raw_output.reset();
    if (result.input_tokens == 0) result.input_tokens = estimate_tokens(static_cast<std::int64_t>(prompt.char_count), config.chars_per_token);
    if (result.output_tokens == 0 && result.raw_output) {
        result.output_tokens = estimate_tokens(static_cast<std::int64_t>(utf8_length(*result.raw_output)), config.chars_per_token);
    }
    if (!result.detail.empty()) result.detail = doc.doc_id + ": " + result.detail;
    return result;
}

// ---------------------------------------------------------------------------
// Output parsing

struct ModelOutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// End (exclusive) of the balanced JSON object starting at `open`, honoring strings.
inline std::size_t object_end(std::string_view s, std::size_t open) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = open; i < s.size(); ++i) {
        const char c = s[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}' && --depth == 0) {
            return i + 1;
        }
    }
    return std::string_view::npos;
}

}  // namespace detail

/// Pull the factual statement out of a model answer. The JSON object may be
/// wrapped in prose or code fences. Returns nullopt when the model reports
/// that there is no factual statement (null or empty field); throws
/// ModelOutputError when no object with the field can be parsed.
inline std::optional<std::string> parse_model_output(std::string_view raw) {
    if (raw.empty()) throw ModelOutputError("empty model output");
    for (std::size_t open = raw.find('{'); open != std::string_view::npos; open = raw.find('{', open + 1)) {
        const auto close = detail::object_end(raw, open);
        if (close == std::string_view::npos) continue;
        const auto j = nlohmann::json::parse(raw.substr(open, close - open), nullptr, false);
        if (j.is_discarded() || !j.is_object()) continue;
        auto it = j.find(std::string(kFactField));
        if (it == j.end()) continue;
        if (it->is_null()) return std::nullopt;
        if (!it->is_string()) throw ModelOutputError("fact field is not a string");
        auto value = it->get<std::string>();
        if (value.empty()) return std::nullopt;
        return value;
    }
    throw ModelOutputError("no JSON object with a fact field in model output");
}

}  // namespace factx

#endif  // FACTX_EXTRACT_LLM_HPP
