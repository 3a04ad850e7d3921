// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The factx Authors

#ifndef FACTX_HTTP_BACKENDS_HPP
#define FACTX_HTTP_BACKENDS_HPP

// Live network backends. Include only where cpp-httplib is available;
// define CPPHTTPLIB_OPENSSL_SUPPORT before inclusion for https endpoints.

#include <chrono>
#include <mutex>
#include <string>
#include <thread>
#include <utility>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "factx/extract_llm.hpp"
#include "factx/ingest.hpp"

namespace factx {

namespace detail {

struct Endpoint {
    std::string origin;  // scheme://host[:port]
    std::string base;    // path prefix, no trailing slash
};

inline Endpoint split_endpoint(const std::string& url) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos) throw SetupError("endpoint must include a scheme: " + url);
    const auto path = url.find('/', scheme + 3);
    Endpoint e{url.substr(0, path), path == std::string::npos ? std::string() : url.substr(path)};
    while (!e.base.empty() && e.base.back() == '/') e.base.pop_back();
    return e;
}

}  // namespace detail

/// Generation over a Gemini-style REST interface:
/// POST {endpoint}/models/{model}:generateContent.
class HttpProvider final : public GenerationClient {
public:
    HttpProvider(std::string endpoint, std::string api_key, std::chrono::seconds timeout = std::chrono::seconds(120), int max_retries = 3)
        : endpoint_(detail::split_endpoint(endpoint)), api_key_(std::move(api_key)), timeout_(timeout), max_retries_(max_retries) {
        if (api_key_.empty()) throw SetupError("http provider: missing API key");
    }

    LlmResult generate(const GenerationRequest& request) override {
        const nlohmann::json body{
            {"contents", {{{"role", "user"}, {"parts", {{{"text", request.prompt}}}}}}},
            {"generationConfig", {{"temperature", request.temperature}, {"maxOutputTokens", request.max_output_tokens}, {"responseMimeType", "application/json"}}}};
        const std::string path = endpoint_.base + "/models/" + request.model + ":generateContent";
        LlmResult last{LlmStatus::transport_error, std::nullopt, 0, 0, "no attempt"};
        for (int attempt = 0; attempt <= max_retries_; ++attempt) {
            if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(500) * (1 << std::min(attempt, 6)));
            httplib::Client client(endpoint_.origin);
            client.set_connection_timeout(timeout_);
            client.set_read_timeout(timeout_);
            const httplib::Headers headers{{"x-goog-api-key", api_key_}};
            auto res = client.Post(path, headers, body.dump(), "application/json");
            if (!res) {
                last = {LlmStatus::transport_error, std::nullopt, 0, 0, httplib::to_string(res.error())};
                continue;
            }
            if (res->status == 429 || res->status >= 500) {
                last = {LlmStatus::transport_error, std::nullopt, 0, 0, "http " + std::to_string(res->status)};
                continue;
            }
            return interpret(res->status, res->body);
        }
        return last;
    }

    /// Map a response to an LlmResult. Public for testing without a network.
    static LlmResult interpret(int http_status, const std::string& payload) {
        const auto j = nlohmann::json::parse(payload, nullptr, false);
        if (http_status != 200) {
            const std::string message = j.is_object() && j.contains("error") ? j["error"].value("message", "") : payload.substr(0, 200);
            if (message.find("token") != std::string::npos) return {LlmStatus::token_limit_exceeded, std::nullopt, 0, 0, message};
            return {LlmStatus::transport_error, std::nullopt, 0, 0, "http " + std::to_string(http_status) + ": " + message};
        }
        if (j.is_discarded()) return {LlmStatus::transport_error, std::nullopt, 0, 0, "unreadable response"};
        LlmResult r;
        if (auto usage = j.find("usageMetadata"); usage != j.end()) {
            r.input_tokens = usage->value("promptTokenCount", std::int64_t{0});
            r.output_tokens = usage->value("candidatesTokenCount", std::int64_t{0});
        }
        if (j.contains("promptFeedback") && j["promptFeedback"].contains("blockReason")) {
            r.status = LlmStatus::safety_flagged;
            r.detail = j["promptFeedback"]["blockReason"].get<std::string>();
            return r;
        }
        if (!j.contains("candidates") || j["candidates"].empty()) {
            r.status = LlmStatus::transport_error;
            r.detail = "no candidates";
            return r;
        }
        const auto& candidate = j["candidates"][0];
        const std::string finish = candidate.value("finishReason", "");
        if (finish == "SAFETY" || finish == "PROHIBITED_CONTENT" || finish == "BLOCKLIST") {
            r.status = LlmStatus::safety_flagged;
            r.detail = finish;
            return r;
        }
        if (finish == "MAX_TOKENS") {
            r.status = LlmStatus::token_limit_exceeded;
            r.detail = finish;
            return r;
        }
        std::string text;
        if (candidate.contains("content") && candidate["content"].contains("parts")) {
            for (const auto& part : candidate["content"]["parts"]) text += part.value("text", "");
        }
        r.status = LlmStatus::ok;
        r.raw_output = std::move(text);
        return r;
    }

private:
    detail::Endpoint endpoint_;
    std::string api_key_;
    std::chrono::seconds timeout_;
    int max_retries_;
};

/// Decision retrieval over REST: GET {endpoint}/decisions?court=...&docket=...
/// answering with a JSON document record.
class HttpRetriever final : public DocumentRetriever {
public:
    explicit HttpRetriever(std::string endpoint, std::chrono::seconds timeout = std::chrono::seconds(30))
        : endpoint_(detail::split_endpoint(endpoint)), timeout_(timeout) {}

    FetchResponse fetch(const AdminRecord& record) override {
        httplib::Client client(endpoint_.origin);
        client.set_connection_timeout(timeout_);
        client.set_read_timeout(timeout_);
        const httplib::Params params{{"court", record.court_name}, {"docket", record.docket_number}};
        auto res = client.Get(endpoint_.base + "/decisions", params, httplib::Headers{});
        if (!res) return {FetchStatus::transport_error, std::nullopt, httplib::to_string(res.error())};
        if (res->status == 404) return {FetchStatus::not_found, std::nullopt, "http 404"};
        if (res->status == 429) return {FetchStatus::rate_limited, std::nullopt, "http 429"};
        if (res->status != 200) return {FetchStatus::transport_error, std::nullopt, "http " + std::to_string(res->status)};
        const auto j = nlohmann::json::parse(res->body, nullptr, false);
        if (j.is_discarded()) return {FetchStatus::transport_error, std::nullopt, "unreadable body"};
        std::string reason;
        auto doc = document_from_json(j, reason);
        if (!doc) return {FetchStatus::transport_error, std::nullopt, reason};
        return {FetchStatus::ok, std::move(doc), {}};
    }

private:
    detail::Endpoint endpoint_;
    std::chrono::seconds timeout_;
};

}  // namespace factx

#endif  // FACTX_HTTP_BACKENDS_HPP
