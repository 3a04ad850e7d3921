// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The factx Authors

#ifndef FACTX_SPARING_HPP
#define FACTX_SPARING_HPP

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "factx/align.hpp"
#include "factx/document.hpp"
#include "factx/text.hpp"

namespace factx {

/// A letter-spaced run of text such as "R o z s u d o k".
struct SparingSpan {
    std::size_t start_offset = 0;  // code points into the source text
    std::size_t end_offset = 0;    // exclusive
    std::string collapsed;         // "Rozsudok"
    std::string raw;               // "R o z s u d o k"
};

namespace detail {

struct LetterRun {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t letters = 0;
};

// Maximal runs of letters (combining marks ride along with their letter).
inline std::vector<LetterRun> letter_runs(std::u32string_view text) {
    std::vector<LetterRun> runs;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_letter(text[i])) {
            ++i;
            continue;
        }
        LetterRun run{i, i, 0};
        while (i < text.size() && (is_letter(text[i]) || (is_mark(text[i]) && i > run.begin))) {
            if (is_letter(text[i])) ++run.letters;
            ++i;
        }
        run.end = i;
        runs.push_back(run);
    }
    return runs;
}

inline bool gap_is(std::u32string_view text, std::size_t from, std::size_t to, std::size_t min_spaces, std::size_t max_spaces) {
    const std::size_t width = to - from;
    if (width < min_spaces || width > max_spaces) return false;
    for (std::size_t k = from; k < to; ++k) {
        if (text[k] != U' ') return false;
    }
    return true;
}

// A spaced word: runs of one or two letters separated by single spaces,
// mostly single letters.
inline bool plausible_spaced_word(std::span<const LetterRun> chain) {
    if (chain.size() < 2) return false;
    const auto singles = static_cast<std::size_t>(std::count_if(chain.begin(), chain.end(), [](const LetterRun& r) { return r.letters == 1; }));
    const std::size_t doubles = chain.size() - singles;
    if (singles == 0) return false;
    return doubles == 0 || (chain.size() >= 3 && singles > doubles);
}

}  // namespace detail

/// Remove letter spacing: a single space between two letter groups of at
/// most two letters, at least one of them a single letter, is dropped; any
/// longer whitespace run becomes one space. Leading and trailing whitespace
/// is trimmed. Idempotent on the output of detect_sparing.
inline std::u32string collapse(std::u32string_view raw) {
    std::size_t begin = 0;
    std::size_t end = raw.size();
    trim_range(raw, begin, end);
    std::u32string out;
    out.reserve(end - begin);

    auto token_letters = [&](std::size_t from, std::size_t to) -> std::size_t {
        std::size_t letters = 0;
        for (std::size_t k = from; k < to; ++k) {
            if (is_letter(raw[k])) {
                ++letters;
            } else if (!is_mark(raw[k])) {
                return SIZE_MAX;
            }
        }
        return letters;
    };

    std::size_t i = begin;
    while (i < end) {
        std::size_t token_end = i;
        while (token_end < end && !is_space(raw[token_end])) ++token_end;
        const std::size_t letters = token_letters(i, token_end);
        out.append(raw.substr(i, token_end - i));
        if (token_end >= end) break;
        std::size_t gap_end = token_end;
        while (gap_end < end && is_space(raw[gap_end])) ++gap_end;
        std::size_t next_end = gap_end;
        while (next_end < end && !is_space(raw[next_end])) ++next_end;
        const std::size_t next_letters = token_letters(gap_end, next_end);
        const bool single_space = gap_end - token_end == 1 && raw[token_end] == U' ';
        const bool spaced = single_space && letters <= 2 && next_letters <= 2 && std::min(letters, next_letters) == 1;
        if (!spaced) out.push_back(U' ');
        i = gap_end;
    }
    return out;
}

inline std::string collapse(std::string_view raw) { return encode_utf8(collapse(decode_utf8(raw).chars)); }

inline std::string collapse(const SparingSpan& span) { return collapse(std::string_view(span.raw)); }

/// Maximum number of spaces treated as a word gap inside one spaced phrase.
inline constexpr std::size_t kMaxWordGap = 4;

/// Find letter-spaced spans. Adjacent spaced words separated by 2 to
/// kMaxWordGap spaces form one multi-word span. Spans are sorted and disjoint.
inline std::vector<SparingSpan> detect_sparing(std::u32string_view text) {
    using detail::LetterRun;
    const auto runs = detail::letter_runs(text);

    // Chains of short runs joined by exactly one space.
    struct Word {
        std::size_t first = 0;
        std::size_t last = 0;  // inclusive run indices
    };
    std::vector<Word> words;
    std::size_t i = 0;
    while (i < runs.size()) {
        if (runs[i].letters > 2) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < runs.size() && runs[j + 1].letters <= 2 && detail::gap_is(text, runs[j].end, runs[j + 1].begin, 1, 1)) ++j;
        if (detail::plausible_spaced_word(std::span(runs).subspan(i, j - i + 1))) words.push_back({i, j});
        i = j + 1;
    }

    std::vector<SparingSpan> spans;
    std::size_t w = 0;
    while (w < words.size()) {
        std::size_t last = w;
        while (last + 1 < words.size() &&
               detail::gap_is(text, runs[words[last].last].end, runs[words[last + 1].first].begin, 2, kMaxWordGap)) {
            ++last;
        }
        SparingSpan span;
        span.start_offset = runs[words[w].first].begin;
        span.end_offset = runs[words[last].last].end;
        const auto raw = text.substr(span.start_offset, span.end_offset - span.start_offset);
        span.raw = encode_utf8(raw);
        span.collapsed = encode_utf8(collapse(raw));
        spans.push_back(std::move(span));
        w = last + 1;
    }
    return spans;
}

inline std::vector<SparingSpan> detect_sparing(std::string_view utf8) { return detect_sparing(decode_utf8(utf8).chars); }

// ---------------------------------------------------------------------------
// Marker mining

struct MarkerCandidate {
    std::string expression;  // normalized collapsed form
    std::size_t document_count = 0;
    double mean_relative_position = 0.0;
    std::map<std::size_t, std::size_t> position_rank_histogram;  // rank (1-based) -> documents
};

inline nlohmann::json to_json(const MarkerCandidate& c) {
    nlohmann::json ranks = nlohmann::json::object();
    for (const auto& [rank, count] : c.position_rank_histogram) ranks[std::to_string(rank)] = count;
    return {{"expression", c.expression},
            {"document_count", c.document_count},
            {"mean_relative_position", c.mean_relative_position},
            {"position_rank_histogram", ranks}};
}

/// Group sparing expressions across a corpus by their normalized collapsed
/// form. Each document contributes its first occurrence of an expression;
/// rank is the order of first occurrence among the document's expressions.
inline std::vector<MarkerCandidate> mine_markers(std::span<const VerdictDocument> docs) {
    if (docs.empty()) throw std::invalid_argument("mine_markers: empty corpus");
    struct Accumulator {
        std::vector<double> positions;
        std::map<std::size_t, std::size_t> ranks;
    };
    std::unordered_map<std::string, Accumulator> table;
    for (const auto& doc : docs) {
        const auto decoded = decode_utf8(doc.raw_text);
        if (decoded.size() == 0) continue;
        std::unordered_set<std::string> seen;
        for (const auto& span : detect_sparing(decoded.chars)) {
            auto key = normalize_text(span.collapsed).utf8();
            if (key.empty() || !seen.insert(key).second) continue;
            auto& acc = table[key];
            acc.positions.push_back(static_cast<double>(span.start_offset) / static_cast<double>(decoded.size()));
            ++acc.ranks[seen.size()];
        }
    }
    std::vector<MarkerCandidate> out;
    out.reserve(table.size());
    for (auto& [expression, acc] : table) {
        // Summing in sorted order keeps the mean independent of corpus order.
        std::sort(acc.positions.begin(), acc.positions.end());
        double sum = 0.0;
        for (double p : acc.positions) sum += p;
        out.push_back({expression, acc.positions.size(), sum / static_cast<double>(acc.positions.size()), std::move(acc.ranks)});
    }
    std::sort(out.begin(), out.end(), [](const MarkerCandidate& a, const MarkerCandidate& b) {
        if (a.document_count != b.document_count) return a.document_count > b.document_count;
        if (a.mean_relative_position != b.mean_relative_position) return a.mean_relative_position < b.mean_relative_position;
        return a.expression < b.expression;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Annotated marker inventory

/// Opening and closing expressions of the factual statement, in normalized form.
struct MarkerSet {
    std::vector<std::string> start_markers;
    std::vector<std::string> end_markers;
};

/// Normalize, drop in-list duplicates, and enforce the MarkerSet invariants.
inline MarkerSet make_marker_set(std::span<const std::string> starts, std::span<const std::string> ends) {
    auto clean = [](std::span<const std::string> phrases, const char* which) {
        std::vector<std::string> out;
        std::unordered_set<std::string> seen;
        for (const auto& p : phrases) {
            auto norm = normalize_text(p).utf8();
            if (norm.empty()) throw ConfigError(std::string("marker set: empty phrase in ") + which);
            if (seen.insert(norm).second) out.push_back(std::move(norm));
        }
        if (out.empty()) throw ConfigError(std::string("marker set: ") + which + " is empty");
        return out;
    };
    MarkerSet set{clean(starts, "start_markers"), clean(ends, "end_markers")};
    for (const auto& s : set.start_markers) {
        if (std::find(set.end_markers.begin(), set.end_markers.end(), s) != set.end_markers.end()) {
            throw ConfigError("marker set: phrase '" + s + "' is listed as both start and end marker");
        }
    }
    return set;
}

inline MarkerSet marker_set_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("marker set: expected a JSON object");
    auto list = [&](const char* key) {
        auto it = j.find(key);
        if (it == j.end() || !it->is_array()) throw ConfigError(std::string("marker set: missing array ") + key);
        std::vector<std::string> out;
        for (const auto& v : *it) {
            if (!v.is_string()) throw ConfigError(std::string("marker set: non-string entry in ") + key);
            out.push_back(v.get<std::string>());
        }
        return out;
    };
    const auto starts = list("start_markers");
    const auto ends = list("end_markers");
    return make_marker_set(starts, ends);
}

inline nlohmann::json to_json(const MarkerSet& m) { return {{"start_markers", m.start_markers}, {"end_markers", m.end_markers}}; }

inline MarkerSet load_marker_set(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open marker set " + path.string());
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("marker set " + path.string() + " is not valid JSON");
    return marker_set_from_json(j);
}

/// Typical opening and closing expressions of the factual statement.
inline const std::vector<std::string>& default_start_phrases() {
    static const std::vector<std::string> phrases{
        "is found guilty that", "is found guilty", "they are guilty that", "is acknowledged as guilty that", "is acknowledged guilty that",
    };
    return phrases;
}

inline const std::vector<std::string>& default_end_phrases() {
    static const std::vector<std::string> phrases{"therefore", "thus"};
    return phrases;
}

inline MarkerSet default_marker_set() { return make_marker_set(default_start_phrases(), default_end_phrases()); }

}  // namespace factx

#endif  // FACTX_SPARING_HPP
