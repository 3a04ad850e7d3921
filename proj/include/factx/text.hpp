// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The factx Authors

#ifndef FACTX_TEXT_HPP
#define FACTX_TEXT_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

namespace factx {

/// UTF-8 text decoded to code points, with the byte offset of every code
/// point kept so that code-point ranges map back to exact byte ranges.
/// Invalid byte sequences decode to U+FFFD, one per offending byte.
struct DecodedText {
    std::u32string chars;
    std::vector<std::size_t> byte_offsets;  // chars.size() + 1 entries

    std::size_t size() const noexcept { return chars.size(); }

    /// Bytes of the original UTF-8 string covering code points [begin, end).
    std::string_view bytes(std::string_view original, std::size_t begin, std::size_t end) const {
        return original.substr(byte_offsets[begin], byte_offsets[end] - byte_offsets[begin]);
    }

    /// Index of the code point starting at byte offset `b` (or the first one after it).
    std::size_t char_index(std::size_t b) const {
        auto it = std::lower_bound(byte_offsets.begin(), byte_offsets.end(), b);
        return static_cast<std::size_t>(it - byte_offsets.begin());
    }
};

inline DecodedText decode_utf8(std::string_view s) {
    DecodedText out;
    out.chars.reserve(s.size());
    out.byte_offsets.reserve(s.size() + 1);
    const auto* p = reinterpret_cast<const uint8_t*>(s.data());
    const auto len = static_cast<int32_t>(s.size());
    int32_t i = 0;
    while (i < len) {
        out.byte_offsets.push_back(static_cast<std::size_t>(i));
        if (p[i] < 0x80) {
            out.chars.push_back(p[i]);
            ++i;
            continue;
        }
        const int32_t start = i;
        UChar32 c = 0;
        U8_NEXT(p, i, len, c);
        if (c < 0) {
            c = 0xFFFD;
            i = start + 1;
        }
        out.chars.push_back(static_cast<char32_t>(c));
    }
    out.byte_offsets.push_back(s.size());
    return out;
}

inline void append_utf8(std::string& out, char32_t c) {
    if (c < 0x80) {
        out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (c >> 6)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (c >> 12)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (c >> 18)));
        out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
}

inline std::string encode_utf8(std::u32string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char32_t c : s) append_utf8(out, c);
    return out;
}

inline std::size_t utf8_length(std::string_view s) { return decode_utf8(s).size(); }

inline bool is_space(char32_t c) noexcept {
    if (c < 0x80) return c == ' ' || (c >= '\t' && c <= '\r');
    return u_isUWhiteSpace(static_cast<UChar32>(c)) != 0;
}

inline bool is_letter(char32_t c) noexcept {
    if (c < 0x80) return (c | 0x20) >= 'a' && (c | 0x20) <= 'z';
    return u_isalpha(static_cast<UChar32>(c)) != 0;
}

/// Combining mark of any kind (Mn, Mc, Me).
inline bool is_mark(char32_t c) noexcept {
    if (c < 0x300) return false;
    const auto mask = U_GET_GC_MASK(static_cast<UChar32>(c));
    return (mask & U_GC_M_MASK) != 0;
}

namespace detail {

inline const icu::Normalizer2& nfd() {
    static const icu::Normalizer2* instance = [] {
        UErrorCode status = U_ZERO_ERROR;
        const auto* n = icu::Normalizer2::getNFDInstance(status);
        return U_SUCCESS(status) ? n : nullptr;
    }();
    return *instance;
}

inline void decompose_strip(char32_t c, std::u32string& out) {
    icu::UnicodeString decomposition;
    if (!nfd().getDecomposition(static_cast<UChar32>(c), decomposition)) {
        if (!is_mark(c)) out.push_back(c);
        return;
    }
    for (int32_t i = 0; i < decomposition.length();) {
        const UChar32 part = decomposition.char32At(i);
        i += U16_LENGTH(part);
        if (!is_mark(static_cast<char32_t>(part))) out.push_back(static_cast<char32_t>(part));
    }
}

}  // namespace detail

/// Folded form of one code point: canonical decomposition with combining
/// marks dropped, then simple case folding. Empty for a bare combining mark.
inline std::u32string fold_char(char32_t c) {
    if (c < 0x80) {
        char32_t lower = (c >= 'A' && c <= 'Z') ? c + 0x20 : c;
        return std::u32string(1, lower);
    }
    std::u32string stripped;
    detail::decompose_strip(c, stripped);
    std::u32string out;
    for (char32_t part : stripped) {
        const auto folded = static_cast<char32_t>(u_foldCase(static_cast<UChar32>(part), U_FOLD_CASE_DEFAULT));
        if (folded == part) {
            out.push_back(part);
        } else {
            detail::decompose_strip(folded, out);
        }
    }
    return out;
}

inline std::u32string fold_case(std::u32string_view s) {
    std::u32string out;
    out.reserve(s.size());
    for (char32_t c : s) {
        if (c < 0x80) {
            out.push_back((c >= 'A' && c <= 'Z') ? c + 0x20 : c);
        } else {
            out.push_back(static_cast<char32_t>(u_foldCase(static_cast<UChar32>(c), U_FOLD_CASE_DEFAULT)));
        }
    }
    return out;
}

/// Trim Unicode whitespace from both ends of a code-point range.
inline void trim_range(std::u32string_view text, std::size_t& begin, std::size_t& end) {
    while (begin < end && is_space(text[begin])) ++begin;
    while (end > begin && is_space(text[end - 1])) --end;
}

}  // namespace factx

#endif  // FACTX_TEXT_HPP
