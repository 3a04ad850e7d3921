// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The factx Authors

#ifndef FACTX_ALIGN_HPP
#define FACTX_ALIGN_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "factx/text.hpp"

namespace factx {

/// Half-open code-point range [start, end).
struct CharRange {
    std::size_t start = 0;
    std::size_t end = 0;

    bool operator==(const CharRange&) const = default;
};

/// Folded text (diacritics removed, case-folded, whitespace collapsed and
/// trimmed) together with the original range each folded character derives from.
struct NormalizedText {
    std::u32string folded;
    std::vector<CharRange> offset_map;

    std::string utf8() const { return encode_utf8(folded); }

    /// Original range covered by folded characters [begin, end). `begin < end`.
    CharRange project(std::size_t begin, std::size_t end) const {
        return {offset_map[begin].start, offset_map[end - 1].end};
    }
};

inline NormalizedText normalize_text(std::u32string_view text) {
    NormalizedText out;
    out.folded.reserve(text.size());
    out.offset_map.reserve(text.size());

    bool pending_space = false;
    CharRange space_range;
    std::size_t last_char_start = 0;  // original start of the most recent emitted non-space char

    for (std::size_t k = 0; k < text.size(); ++k) {
        const char32_t c = text[k];
        if (is_space(c)) {
            if (out.folded.empty()) continue;
            if (!pending_space) {
                pending_space = true;
                space_range = {k, k + 1};
            } else {
                space_range.end = k + 1;
            }
            continue;
        }
        const std::u32string folded = fold_char(c);
        if (folded.empty()) {
            // Bare combining mark: attach to the preceding character unless a
            // whitespace run separates them.
            if (!out.folded.empty() && !pending_space) {
                for (std::size_t i = out.offset_map.size(); i-- > 0;) {
                    if (out.offset_map[i].start != last_char_start) break;
                    out.offset_map[i].end = k + 1;
                }
            }
            continue;
        }
        if (pending_space) {
            out.folded.push_back(U' ');
            out.offset_map.push_back(space_range);
            pending_space = false;
        }
        for (char32_t f : folded) {
            out.folded.push_back(f);
            out.offset_map.push_back({k, k + 1});
        }
        last_char_start = k;
    }
    return out;
}

inline NormalizedText normalize_text(std::string_view utf8) { return normalize_text(decode_utf8(utf8).chars); }

/// Levenshtein distance with unit costs.
inline std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
    if (a.size() < b.size()) std::swap(a, b);
    std::vector<std::size_t> row(b.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diagonal = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t above = row[j];
            row[j] = std::min({above + 1, row[j - 1] + 1, diagonal + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diagonal = above;
        }
    }
    return row[b.size()];
}

inline std::size_t lcs_length(std::u32string_view a, std::u32string_view b) {
    std::vector<std::size_t> row(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diagonal = 0;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t above = row[j];
            row[j] = a[i - 1] == b[j - 1] ? diagonal + 1 : std::max(above, row[j - 1]);
            diagonal = above;
        }
    }
    return row[b.size()];
}

enum class Metric { levenshtein, lcs_ratio };

/// Similarity of two already-folded strings.
inline double folded_similarity(std::u32string_view a, std::u32string_view b, Metric metric = Metric::levenshtein) {
    if (a.empty() && b.empty()) return 1.0;
    if (metric == Metric::lcs_ratio) {
        return 2.0 * static_cast<double>(lcs_length(a, b)) / static_cast<double>(a.size() + b.size());
    }
    const auto longest = std::max(a.size(), b.size());
    return 1.0 - static_cast<double>(edit_distance(a, b)) / static_cast<double>(longest);
}

/// Character-level similarity in [0,1] after folding both sides.
inline double similarity(std::string_view a, std::string_view b, Metric metric = Metric::levenshtein) {
    return folded_similarity(normalize_text(a).folded, normalize_text(b).folded, metric);
}

/// Best-aligned source span (original code-point offsets) for a candidate.
struct SpanMatch {
    std::size_t start_offset = 0;
    std::size_t end_offset = 0;
    double score = 0.0;
};

namespace detail {

// Score 1 - distance/denominator, compared exactly as a rational.
struct Fraction {
    std::int64_t distance = 0;
    std::int64_t denominator = 1;

    double value() const { return 1.0 - static_cast<double>(distance) / static_cast<double>(denominator); }
};

inline bool better(const Fraction& a, const Fraction& b) { return a.distance * b.denominator < b.distance * a.denominator; }
inline bool same(const Fraction& a, const Fraction& b) { return a.distance * b.denominator == b.distance * a.denominator; }

struct Candidate {
    Fraction score{1, 1};  // similarity 0
    std::size_t begin = 0;
    std::size_t end = 0;
    bool found = false;
};

// Earliest start wins ties, then shortest.
inline bool preferred(const Fraction& score, std::size_t begin, std::size_t end, const Candidate& best) {
    if (!best.found) return true;
    if (better(score, best.score)) return true;
    if (!same(score, best.score)) return false;
    if (begin != best.begin) return begin < best.begin;
    return end < best.end;
}

// Bit-parallel edit-distance column over a fixed pattern, 64 rows per word.
// Tracks only the bottom entry; `top` is the horizontal step of row 0
// (1 when the text prefix must be consumed, 0 when it is free).
class BitColumn {
public:
    explicit BitColumn(std::u32string_view pattern) : m_(pattern.size()), words_((pattern.size() + 63) / 64), pv_(words_), mv_(words_) {
        for (std::size_t r = 0; r < m_; ++r) {
            auto& eq = peq_[pattern[r]];
            if (eq.empty()) eq.assign(words_, 0);
            eq[r / 64] |= std::uint64_t{1} << (r % 64);
        }
        zero_.assign(words_, 0);
        last_bit_ = std::uint64_t{1} << ((m_ - 1) % 64);
        reset();
    }

    void reset() {
        std::fill(pv_.begin(), pv_.end(), ~std::uint64_t{0});
        std::fill(mv_.begin(), mv_.end(), 0);
        score_ = m_;
    }

    std::size_t score() const { return score_; }

    std::size_t step(char32_t c, int top) {
        const auto it = peq_.find(c);
        const std::uint64_t* eqs = it == peq_.end() ? zero_.data() : it->second.data();
        int h = top;
        for (std::size_t w = 0; w < words_; ++w) {
            const std::uint64_t neg = h < 0 ? 1 : 0;
            const std::uint64_t pos = h > 0 ? 1 : 0;
            std::uint64_t eq = eqs[w];
            const std::uint64_t pv = pv_[w];
            const std::uint64_t mv = mv_[w];
            const std::uint64_t xv = eq | mv;
            eq |= neg;
            const std::uint64_t xh = (((eq & pv) + pv) ^ pv) | eq;
            std::uint64_t ph = mv | ~(xh | pv);
            std::uint64_t mh = pv & xh;
            const std::uint64_t out = w + 1 == words_ ? last_bit_ : std::uint64_t{1} << 63;
            h = (ph & out) ? 1 : (mh & out) ? -1 : 0;
            ph = (ph << 1) | pos;
            mh = (mh << 1) | neg;
            pv_[w] = mh | ~(xv | ph);
            mv_[w] = ph & xv;
        }
        score_ = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(score_) + h);
        return score_;
    }

private:
    std::size_t m_;
    std::size_t words_;
    std::vector<std::uint64_t> pv_, mv_, zero_;
    std::unordered_map<char32_t, std::vector<std::uint64_t>> peq_;
    std::uint64_t last_bit_ = 0;
    std::size_t score_ = 0;
};

class SpanSearch {
public:
    SpanSearch(std::u32string_view needle, std::u32string_view hay)
        : needle_(needle), hay_(hay), reversed_(needle.rbegin(), needle.rend()), forward_(needle_), backward_(reversed_) {}

    Candidate run(std::size_t exact_limit) {
        if (auto hit = exact_occurrence()) return *hit;
        Candidate best = seed();
        if (hay_.size() <= exact_limit) exhaustive(best);
        return best;
    }

    Fraction score_of(std::size_t distance, std::size_t length) const {
        return {static_cast<std::int64_t>(distance), static_cast<std::int64_t>(std::max(needle_.size(), length))};
    }

private:
    std::optional<Candidate> exact_occurrence() const {
        const auto pos = hay_.find(needle_);
        if (pos == std::u32string_view::npos) return std::nullopt;
        return Candidate{{0, static_cast<std::int64_t>(needle_.size())}, pos, pos + needle_.size(), true};
    }

    bool blank(std::size_t i) const { return hay_[i] == U' '; }

    // Longest span that could still tie `best`: for length L > m the score is at most m / L.
    std::size_t length_cap(const Candidate& best) const {
        const std::int64_t m = static_cast<std::int64_t>(needle_.size());
        const std::int64_t kept = best.score.denominator - best.score.distance;
        if (!best.found || kept <= 0) return hay_.size();
        return static_cast<std::size_t>(m * best.score.denominator / kept);
    }

    // Semi-global alignment end with the smallest distance (earliest among equals).
    std::size_t best_free_end() {
        forward_.reset();
        std::size_t best_end = 0;
        std::size_t best_distance = SIZE_MAX;
        for (std::size_t j = 1; j <= hay_.size(); ++j) {
            const std::size_t d = forward_.step(hay_[j - 1], 0);
            if (!blank(j - 1) && d < best_distance) {
                best_distance = d;
                best_end = j;
            }
        }
        return best_end;
    }

    // With `end` fixed, the best start (earliest among equals).
    std::size_t best_start_for(std::size_t end, std::size_t max_len, Candidate& best) {
        backward_.reset();
        const std::size_t lowest = end > max_len ? end - max_len : 0;
        std::size_t chosen = SIZE_MAX;
        Fraction chosen_score{1, 1};
        for (std::size_t i = end; i-- > lowest;) {
            const std::size_t d = backward_.step(hay_[i], 1);
            if (blank(i)) continue;
            const Fraction s = score_of(d, end - i);
            if (chosen == SIZE_MAX || better(s, chosen_score) || same(s, chosen_score)) {
                chosen = i;
                chosen_score = s;
            }
        }
        if (chosen != SIZE_MAX && preferred(chosen_score, chosen, end, best)) best = {chosen_score, chosen, end, true};
        return chosen;
    }

    // With `begin` fixed, the best end (shortest among equals).
    std::size_t best_end_for(std::size_t begin, std::size_t max_len, Candidate& best) {
        forward_.reset();
        const std::size_t highest = std::min(hay_.size(), begin + max_len);
        std::size_t chosen = SIZE_MAX;
        Fraction chosen_score{1, 1};
        for (std::size_t j = begin + 1; j <= highest; ++j) {
            const std::size_t d = forward_.step(hay_[j - 1], 1);
            if (blank(j - 1)) continue;
            const Fraction s = score_of(d, j - begin);
            if (chosen == SIZE_MAX || better(s, chosen_score)) {
                chosen = j;
                chosen_score = s;
            }
        }
        if (chosen != SIZE_MAX && preferred(chosen_score, begin, chosen, best)) best = {chosen_score, begin, chosen, true};
        return chosen;
    }

    // Alternate between optimal start for a fixed end and optimal end for a
    // fixed start, starting from the best semi-global end.
    Candidate seed() {
        Candidate best;
        const std::size_t max_len = 3 * needle_.size() + 8;
        std::size_t end = best_free_end();
        if (end == 0) return best;
        std::size_t begin = SIZE_MAX;
        for (int round = 0; round < 8; ++round) {
            const std::size_t next_begin = best_start_for(end, max_len, best);
            if (next_begin == SIZE_MAX) break;
            const std::size_t next_end = best_end_for(next_begin, max_len, best);
            if (next_end == SIZE_MAX || (next_begin == begin && next_end == end)) break;
            begin = next_begin;
            end = next_end;
        }
        return best;
    }

    // lcs[i] = LCS(needle, hay[i..]); no span starting at i or later scores above lcs[i] / m.
    std::vector<std::size_t> suffix_lcs() const {
        const std::size_t m = needle_.size();
        const std::size_t n = hay_.size();
        std::vector<std::size_t> out(n + 1, 0), next(m + 1, 0), row(m + 1, 0);
        for (std::size_t i = n; i-- > 0;) {
            row[m] = 0;
            for (std::size_t r = m; r-- > 0;) row[r] = needle_[r] == hay_[i] ? next[r + 1] + 1 : std::max(next[r], row[r + 1]);
            out[i] = row[0];
            std::swap(row, next);
        }
        return out;
    }

    // Every start/end pair, pruned by bounds that can neither beat nor tie `best`.
    void exhaustive(Candidate& best) {
        const std::size_t m = needle_.size();
        const std::size_t n = hay_.size();
        const auto lcs = suffix_lcs();
        for (std::size_t i = 0; i < n; ++i) {
            if (best.found) {
                // Distance ratio from here on is at least (m - lcs[i]) / m.
                const auto lhs = static_cast<std::int64_t>(m - lcs[i]) * best.score.denominator;
                const auto rhs = best.score.distance * static_cast<std::int64_t>(m);
                if (lhs > rhs || (lhs == rhs && best.begin < i)) break;
            }
            if (blank(i)) continue;
            forward_.reset();
            std::size_t cap = length_cap(best);
            for (std::size_t j = i + 1; j <= n && j - i <= cap; ++j) {
                const std::size_t d = forward_.step(hay_[j - 1], 1);
                if (blank(j - 1)) continue;
                const Fraction s = score_of(d, j - i);
                if (preferred(s, i, j, best)) {
                    best = {s, i, j, true};
                    cap = length_cap(best);
                }
            }
        }
    }

    std::u32string_view needle_;
    std::u32string_view hay_;
    std::u32string reversed_;
    BitColumn forward_;
    BitColumn backward_;
};

}  // namespace detail

/// Sources whose folded length is at most this are searched exhaustively.
inline constexpr std::size_t kExhaustiveSourceLimit = 500;

/// Locate the span of `source` most similar to `candidate`. Searches folded
/// space and projects the winner back to original code-point offsets. Ties go
/// to the earliest, then shortest, span.
inline SpanMatch locate_span(const NormalizedText& candidate, const NormalizedText& source) {
    if (candidate.folded.empty() || source.folded.empty()) return {};
    detail::SpanSearch search(candidate.folded, source.folded);
    const auto best = search.run(kExhaustiveSourceLimit);
    if (!best.found) return {};
    const auto range = source.project(best.begin, best.end);
    return {range.start, range.end, best.score.value()};
}

inline SpanMatch locate_span(std::string_view candidate, std::string_view source) {
    if (candidate.empty() || source.empty()) throw std::invalid_argument("locate_span: candidate and source must be non-empty");
    return locate_span(normalize_text(candidate), normalize_text(source));
}

/// A verbatim excerpt of the source chosen to stand in for generated text.
struct GroundedExcerpt {
    std::string text;
    SpanMatch match;
};

inline constexpr double kDefaultGroundThreshold = 0.5;

/// Replace `candidate` with the exact source substring it aligns to, or
/// nothing when the best alignment scores below `accept_threshold`.
inline std::optional<GroundedExcerpt> ground(std::string_view candidate, std::string_view source,
                                             double accept_threshold = kDefaultGroundThreshold) {
    if (!(accept_threshold >= 0.0 && accept_threshold <= 1.0)) throw std::invalid_argument("ground: threshold must lie in [0,1]");
    if (candidate.empty() || source.empty()) return std::nullopt;
    const auto decoded = decode_utf8(source);
    const auto match = locate_span(normalize_text(candidate), normalize_text(decoded.chars));
    if (match.end_offset <= match.start_offset || match.score < accept_threshold) return std::nullopt;
    return GroundedExcerpt{std::string(decoded.bytes(source, match.start_offset, match.end_offset)), match};
}

}  // namespace factx

#endif  // FACTX_ALIGN_HPP
