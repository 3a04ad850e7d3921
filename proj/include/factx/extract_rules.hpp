// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The factx Authors

#ifndef FACTX_EXTRACT_RULES_HPP
#define FACTX_EXTRACT_RULES_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "factx/align.hpp"
#include "factx/document.hpp"
#include "factx/sparing.hpp"
#include "factx/text.hpp"

namespace factx {

enum class Method { baseline, advanced, llm, combined };
enum class Status { extracted, no_match, failed };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::baseline: return "baseline";
        case Method::advanced: return "advanced";
        case Method::llm: return "llm";
        case Method::combined: return "combined";
    }
    return "unknown";
}

inline const char* to_string(Status s) {
    switch (s) {
        case Status::extracted: return "extracted";
        case Status::no_match: return "no_match";
        case Status::failed: return "failed";
    }
    return "unknown";
}

inline Method parse_method(std::string_view s) {
    if (s == "baseline") return Method::baseline;
    if (s == "advanced") return Method::advanced;
    if (s == "llm") return Method::llm;
    if (s == "combined") return Method::combined;
    throw std::invalid_argument("unknown method '" + std::string(s) + "'");
}

inline Status parse_status(std::string_view s) {
    if (s == "extracted") return Status::extracted;
    if (s == "no_match") return Status::no_match;
    if (s == "failed") return Status::failed;
    throw std::invalid_argument("unknown status '" + std::string(s) + "'");
}

/// Result of one extraction attempt. When extracted, `text` is exactly the
/// source code points [span.start, span.end).
struct ExtractionOutcome {
    std::string doc_id;
    Method method = Method::baseline;
    Status status = Status::no_match;
    std::optional<CharRange> span;
    std::optional<std::string> text;
    std::optional<double> score;  // confidence: 1.0 for rules, grounding score for the model path
    std::string diagnostics;

    bool extracted() const noexcept { return status == Status::extracted; }
};

inline nlohmann::json to_json(const ExtractionOutcome& o) {
    nlohmann::json j{{"doc_id", o.doc_id}, {"method", to_string(o.method)}, {"status", to_string(o.status)}};
    j["start"] = o.span ? nlohmann::json(o.span->start) : nlohmann::json(nullptr);
    j["end"] = o.span ? nlohmann::json(o.span->end) : nlohmann::json(nullptr);
    j["text"] = o.text ? nlohmann::json(*o.text) : nlohmann::json(nullptr);
    if (o.score) j["score"] = *o.score;
    j["diagnostics"] = o.diagnostics;
    return j;
}

inline ExtractionOutcome outcome_from_json(const nlohmann::json& j) {
    ExtractionOutcome o;
    o.doc_id = j.at("doc_id").get<std::string>();
    o.method = parse_method(j.at("method").get<std::string>());
    o.status = parse_status(j.at("status").get<std::string>());
    if (j.contains("start") && !j["start"].is_null()) o.span = CharRange{j["start"].get<std::size_t>(), j.at("end").get<std::size_t>()};
    if (j.contains("text") && !j["text"].is_null()) o.text = j["text"].get<std::string>();
    if (j.contains("score") && !j["score"].is_null()) o.score = j["score"].get<double>();
    o.diagnostics = j.value("diagnostics", "");
    return o;
}

/// Whether an extracted outcome is a verbatim excerpt of `raw_text` at its offsets.
inline bool is_verbatim(const ExtractionOutcome& o, std::string_view raw_text) {
    if (!o.extracted()) return !o.span && !o.text;
    if (!o.span || !o.text || o.span->start >= o.span->end) return false;
    const auto decoded = decode_utf8(raw_text);
    if (o.span->end > decoded.size()) return false;
    return decoded.bytes(raw_text, o.span->start, o.span->end) == *o.text;
}

namespace detail {

inline ExtractionOutcome no_match(const VerdictDocument& doc, Method method, std::string reason) {
    ExtractionOutcome o;
    o.doc_id = doc.doc_id;
    o.method = method;
    o.status = Status::no_match;
    o.diagnostics = std::move(reason);
    return o;
}

// Trimmed payload between two code-point offsets, or a no_match when empty.
inline ExtractionOutcome payload(const VerdictDocument& doc, const DecodedText& decoded, Method method, std::size_t begin,
                                 std::size_t end, std::string diagnostics) {
    trim_range(decoded.chars, begin, end);
    if (begin >= end) return no_match(doc, method, "empty payload");
    ExtractionOutcome o;
    o.doc_id = doc.doc_id;
    o.method = method;
    o.status = Status::extracted;
    o.span = CharRange{begin, end};
    o.text = std::string(decoded.bytes(doc.raw_text, begin, end));
    o.score = 1.0;
    o.diagnostics = std::move(diagnostics);
    return o;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Baseline: literal, whitespace-sensitive phrases

struct BaselinePhrases {
    std::vector<std::string> start_phrases;
    std::vector<std::string> end_phrases;
};

inline BaselinePhrases default_baseline_phrases() { return {default_start_phrases(), default_end_phrases()}; }

inline BaselinePhrases baseline_phrases_from_json(const nlohmann::json& j) {
    BaselinePhrases p;
    const auto& starts = j.contains("start_phrases") ? j.at("start_phrases") : j.at("start_markers");
    const auto& ends = j.contains("end_phrases") ? j.at("end_phrases") : j.at("end_markers");
    for (const auto& s : starts) p.start_phrases.push_back(s.get<std::string>());
    for (const auto& s : ends) p.end_phrases.push_back(s.get<std::string>());
    return p;
}

/// First literal start phrase (earliest; longer phrase on ties), then the
/// first literal end phrase after it. The payload between them is trimmed.
inline ExtractionOutcome baseline_extract(const VerdictDocument& doc, const BaselinePhrases& phrases) {
    if (phrases.start_phrases.empty() || phrases.end_phrases.empty()) {
        throw std::invalid_argument("baseline_extract: phrase lists must be non-empty");
    }
    const std::string& text = doc.raw_text;
    auto earliest = [&](std::span<const std::string> list, std::size_t from) {
        std::size_t best_pos = std::string::npos;
        std::size_t best_len = 0;
        for (const auto& phrase : list) {
            if (phrase.empty()) continue;
            const auto pos = text.find(phrase, from);
            if (pos == std::string::npos) continue;
            if (pos < best_pos || (pos == best_pos && phrase.size() > best_len)) {
                best_pos = pos;
                best_len = phrase.size();
            }
        }
        return std::pair{best_pos, best_len};
    };
    const auto [start_pos, start_len] = earliest(phrases.start_phrases, 0);
    if (start_pos == std::string::npos) return detail::no_match(doc, Method::baseline, "no_match(start)");
    const auto [end_pos, end_len] = earliest(phrases.end_phrases, start_pos + start_len);
    if (end_pos == std::string::npos) return detail::no_match(doc, Method::baseline, "no_match(end)");
    const auto decoded = decode_utf8(text);
    return detail::payload(doc, decoded, Method::baseline, decoded.char_index(start_pos + start_len), decoded.char_index(end_pos),
                           "baseline");
}

// ---------------------------------------------------------------------------
// Tolerant patterns

struct CompileError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Folded, whitespace-free view of a text, each character mapped to its
/// original code-point range. Tolerant patterns search this view.
struct SqueezedText {
    std::u32string chars;
    std::vector<CharRange> origin;

    static SqueezedText from(std::u32string_view text) {
        const auto normalized = normalize_text(text);
        SqueezedText s;
        s.chars.reserve(normalized.folded.size());
        s.origin.reserve(normalized.folded.size());
        for (std::size_t i = 0; i < normalized.folded.size(); ++i) {
            if (normalized.folded[i] == U' ') continue;
            s.chars.push_back(normalized.folded[i]);
            s.origin.push_back(normalized.offset_map[i]);
        }
        return s;
    }
};

/// A phrase matcher that ignores whitespace between any two characters,
/// case, and diacritics. Other characters are matched literally. A match
/// must not continue a word on either side.
class TolerantPattern {
public:
    static TolerantPattern compile(std::string_view phrase) {
        TolerantPattern p;
        p.phrase_ = std::string(phrase);
        for (char32_t c : normalize_text(phrase).folded) {
            if (c != U' ') p.needle_.push_back(c);
        }
        if (p.needle_.empty()) throw CompileError("compile_tolerant: empty phrase");
        return p;
    }

    const std::string& phrase() const noexcept { return phrase_; }
    std::size_t length() const noexcept { return needle_.size(); }

    /// First match at or after squeezed position `from`, in original code points.
    std::optional<CharRange> find(const SqueezedText& squeezed, std::u32string_view original, std::size_t from_offset = 0) const {
        auto first = std::lower_bound(squeezed.origin.begin(), squeezed.origin.end(), from_offset,
                                      [](const CharRange& r, std::size_t off) { return r.start < off; });
        auto pos = static_cast<std::size_t>(first - squeezed.origin.begin());
        const std::u32string_view hay(squeezed.chars);
        while (true) {
            pos = hay.find(needle_, pos);
            if (pos == std::u32string_view::npos) return std::nullopt;
            const CharRange range{squeezed.origin[pos].start, squeezed.origin[pos + needle_.size() - 1].end};
            const bool left_ok = range.start == 0 || !(is_letter(original[range.start - 1]) || is_mark(original[range.start - 1]));
            const bool right_ok = range.end >= original.size() || !is_letter(original[range.end]);
            if (left_ok && right_ok) return range;
            ++pos;
        }
    }

    bool matches(std::string_view text) const {
        const auto decoded = decode_utf8(text);
        return find(SqueezedText::from(decoded.chars), decoded.chars).has_value();
    }

private:
    std::string phrase_;
    std::u32string needle_;
};

inline TolerantPattern compile_tolerant(std::string_view phrase) { return TolerantPattern::compile(phrase); }

/// Compiled form of a MarkerSet; immutable and shareable across threads.
class CompiledMarkers {
public:
    explicit CompiledMarkers(MarkerSet markers) : markers_(std::move(markers)) {
        for (const auto& s : markers_.start_markers) starts_.push_back(compile_tolerant(s));
        for (const auto& e : markers_.end_markers) ends_.push_back(compile_tolerant(e));
    }

    const MarkerSet& markers() const noexcept { return markers_; }
    std::span<const TolerantPattern> starts() const noexcept { return starts_; }
    std::span<const TolerantPattern> ends() const noexcept { return ends_; }

private:
    MarkerSet markers_;
    std::vector<TolerantPattern> starts_;
    std::vector<TolerantPattern> ends_;
};

namespace detail {

// Earliest match among `patterns` at or after `from`; longer phrase wins ties.
inline std::optional<CharRange> earliest_match(std::span<const TolerantPattern> patterns, const SqueezedText& squeezed,
                                               std::u32string_view original, std::size_t from) {
    std::optional<CharRange> best;
    std::size_t best_len = 0;
    for (const auto& p : patterns) {
        auto m = p.find(squeezed, original, from);
        if (!m) continue;
        if (!best || m->start < best->start || (m->start == best->start && p.length() > best_len)) {
            best = m;
            best_len = p.length();
        }
    }
    return best;
}

}  // namespace detail

/// Tolerant marker extraction. The terminator is the first end marker after
/// the start marker, or failing that the next sparing header. If another start
/// marker lies wholly inside the payload, extraction restarts from the last one.
inline ExtractionOutcome advanced_extract(const VerdictDocument& doc, const CompiledMarkers& markers) {
    const auto decoded = decode_utf8(doc.raw_text);
    const std::u32string_view text(decoded.chars);
    const auto squeezed = SqueezedText::from(text);

    auto start = detail::earliest_match(markers.starts(), squeezed, text, 0);
    if (!start) return detail::no_match(doc, Method::advanced, "no_match(start)");

    std::string how = "advanced";
    std::size_t terminator = 0;
    if (auto end = detail::earliest_match(markers.ends(), squeezed, text, start->end)) {
        terminator = end->start;
    } else {
        const auto headers = detect_sparing(text);
        auto it = std::find_if(headers.begin(), headers.end(), [&](const SparingSpan& s) { return s.start_offset >= start->end; });
        if (it == headers.end()) return detail::no_match(doc, Method::advanced, "no_match(end)");
        terminator = it->start_offset;
        how = "advanced;end:sparing_fallback";
    }

    for (auto inner = detail::earliest_match(markers.starts(), squeezed, text, start->end); inner && inner->end <= terminator;
         inner = detail::earliest_match(markers.starts(), squeezed, text, inner->end)) {
        start = inner;
    }
    return detail::payload(doc, decoded, Method::advanced, start->end, terminator, how);
}

}  // namespace factx

#endif  // FACTX_EXTRACT_RULES_HPP
