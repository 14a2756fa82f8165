#pragma once

// Text primitives shared across the toolkit: UTF-8 iteration, simple Unicode
// lowercase folding (Latin, Latin-1/Extended, Greek, Cyrillic), whitespace
// normalization, word tokenization, and the whitespace-normalized term
// matcher used by tagging, constraint checks, and metrics.
//
// Folding is locale-independent by construction; German sharp s is kept
// as-is (no "ss" expansion).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace duterm::text {

// ---------------------------------------------------------------- UTF-8 ---

// Decodes the code point starting at s[pos] and advances pos past it.
// Invalid sequences decode as U+FFFD and advance a single byte.
inline char32_t decode_cp(std::string_view s, std::size_t& pos) {
    const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
    const auto cont = [&](std::size_t i) {
        return i < s.size() && (byte(i) & 0xC0u) == 0x80u;
    };
    unsigned char b0 = byte(pos);
    if (b0 < 0x80u) {
        ++pos;
        return b0;
    }
    if ((b0 & 0xE0u) == 0xC0u && cont(pos + 1)) {
        char32_t cp = (char32_t(b0 & 0x1Fu) << 6) | char32_t(byte(pos + 1) & 0x3Fu);
        pos += 2;
        return cp;
    }
    if ((b0 & 0xF0u) == 0xE0u && cont(pos + 1) && cont(pos + 2)) {
        char32_t cp = (char32_t(b0 & 0x0Fu) << 12) | (char32_t(byte(pos + 1) & 0x3Fu) << 6) |
                      char32_t(byte(pos + 2) & 0x3Fu);
        pos += 3;
        return cp;
    }
    if ((b0 & 0xF8u) == 0xF0u && cont(pos + 1) && cont(pos + 2) && cont(pos + 3)) {
        char32_t cp = (char32_t(b0 & 0x07u) << 18) | (char32_t(byte(pos + 1) & 0x3Fu) << 12) |
                      (char32_t(byte(pos + 2) & 0x3Fu) << 6) | char32_t(byte(pos + 3) & 0x3Fu);
        pos += 4;
        return cp;
    }
    ++pos;
    return 0xFFFD;
}

inline char32_t peek_cp(std::string_view s, std::size_t pos) {
    return decode_cp(s, pos);
}

// Code point ending immediately before byte offset pos (pos > 0).
inline char32_t cp_before(std::string_view s, std::size_t pos) {
    std::size_t start = pos - 1;
    while (start > 0 && (static_cast<unsigned char>(s[start]) & 0xC0u) == 0x80u) --start;
    return peek_cp(s, start);
}

inline void append_cp(std::string& out, char32_t cp) {
    if (cp < 0x80u) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800u) {
        out.push_back(static_cast<char>(0xC0u | (cp >> 6)));
        out.push_back(static_cast<char>(0x80u | (cp & 0x3Fu)));
    } else if (cp < 0x10000u) {
        out.push_back(static_cast<char>(0xE0u | (cp >> 12)));
        out.push_back(static_cast<char>(0x80u | ((cp >> 6) & 0x3Fu)));
        out.push_back(static_cast<char>(0x80u | (cp & 0x3Fu)));
    } else {
        out.push_back(static_cast<char>(0xF0u | (cp >> 18)));
        out.push_back(static_cast<char>(0x80u | ((cp >> 12) & 0x3Fu)));
        out.push_back(static_cast<char>(0x80u | ((cp >> 6) & 0x3Fu)));
        out.push_back(static_cast<char>(0x80u | (cp & 0x3Fu)));
    }
}

inline std::size_t cp_count(std::string_view s) {
    std::size_t n = 0, pos = 0;
    while (pos < s.size()) {
        decode_cp(s, pos);
        ++n;
    }
    return n;
}

// ------------------------------------------------ classification/folding ---

inline bool is_space_cp(char32_t cp) {
    return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\f' ||
           cp == U'\v';
}

// Letters and digits of the scripts this toolkit targets (Latin incl.
// Latin-1/Extended-A/B, Greek, Cyrillic). Everything else is a boundary.
inline bool is_word_cp(char32_t cp) {
    if ((cp >= U'0' && cp <= U'9') || (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z'))
        return true;
    if (cp >= 0xC0u && cp <= 0x24Fu) return cp != 0xD7u && cp != 0xF7u;
    if (cp >= 0x370u && cp <= 0x3FFu) return cp != 0x37Eu && cp != 0x387u;
    if (cp >= 0x400u && cp <= 0x52Fu) return true;
    return false;
}

// Simple lowercase folding, one code point to one code point.
inline char32_t fold_cp(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 0x20u;
    if (cp < 0xC0u) return cp;
    // Latin-1 supplement (multiplication sign excluded)
    if (cp <= 0xDEu) return cp == 0xD7u ? cp : cp + 0x20u;
    // Latin Extended-A
    if (cp >= 0x100u && cp <= 0x137u) {
        if (cp == 0x130u) return U'i'; // dotted capital I
        return (cp % 2 == 0) ? cp + 1 : cp;
    }
    if (cp >= 0x139u && cp <= 0x147u) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp >= 0x14Au && cp <= 0x177u) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp == 0x178u) return 0xFFu;
    if (cp >= 0x179u && cp <= 0x17Du) return (cp % 2 == 1) ? cp + 1 : cp;
    // Greek
    if (cp == 0x386u) return 0x3ACu;
    if (cp >= 0x388u && cp <= 0x38Au) return cp + 0x25u;
    if (cp == 0x38Cu) return 0x3CCu;
    if (cp == 0x38Eu || cp == 0x38Fu) return cp + 0x3Fu;
    if (cp >= 0x391u && cp <= 0x3ABu && cp != 0x3A2u) return cp + 0x20u;
    // Cyrillic
    if (cp >= 0x400u && cp <= 0x40Fu) return cp + 0x50u;
    if (cp >= 0x410u && cp <= 0x42Fu) return cp + 0x20u;
    if (cp >= 0x460u && cp <= 0x481u) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp >= 0x48Au && cp <= 0x4BFu) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp == 0x4C0u) return 0x4CFu;
    if (cp >= 0x4C1u && cp <= 0x4CDu) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp >= 0x4D0u && cp <= 0x52Fu) return (cp % 2 == 0) ? cp + 1 : cp;
    return cp;
}

// ------------------------------------------------------- normalization ---

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space_cp(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && is_space_cp(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// Trims and collapses internal whitespace runs to a single space.
inline std::string collapse_ws(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t pos = 0;
    bool pending_space = false, seen_any = false;
    while (pos < s.size()) {
        std::size_t start = pos;
        char32_t cp = decode_cp(s, pos);
        if (is_space_cp(cp)) {
            pending_space = seen_any;
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.append(s.substr(start, pos - start));
        seen_any = true;
    }
    return out;
}

inline std::string fold_case(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t pos = 0;
    while (pos < s.size()) append_cp(out, fold_cp(decode_cp(s, pos)));
    return out;
}

// Canonical comparison key: case-folded, whitespace-collapsed.
inline std::string normalize_key(std::string_view s) {
    return fold_case(collapse_ws(s));
}

// ------------------------------------------------------------ matching ---

struct MatchOptions {
    bool fold_case = true;
    bool word_boundary = false;
};

namespace detail {

// Matches the whitespace-normalized term at byte offset pos. A single space
// in the term consumes one or more whitespace code points in the text.
// Returns the end byte offset; boundary checks are the caller's job.
inline std::optional<std::size_t> match_normalized_at(std::string_view txt, std::size_t pos,
                                                      std::string_view term,
                                                      bool fold) {
    std::size_t ti = 0, xi = pos;
    while (ti < term.size()) {
        char32_t tc = decode_cp(term, ti);
        if (tc == U' ') {
            if (xi >= txt.size() || !is_space_cp(peek_cp(txt, xi))) return std::nullopt;
            while (xi < txt.size()) {
                std::size_t save = xi;
                if (!is_space_cp(decode_cp(txt, xi))) {
                    xi = save;
                    break;
                }
            }
        } else {
            if (xi >= txt.size()) return std::nullopt;
            char32_t xc = decode_cp(txt, xi);
            if (fold ? fold_cp(xc) != fold_cp(tc) : xc != tc) return std::nullopt;
        }
    }
    return xi;
}

} // namespace detail

// Matches `term` (any whitespace shape; normalized internally) at byte
// offset pos under the given options.
inline std::optional<std::size_t> match_term_at(std::string_view txt, std::size_t pos,
                                                std::string_view term,
                                                const MatchOptions& opts = {}) {
    std::string norm = collapse_ws(term);
    if (norm.empty()) return std::nullopt;
    if (opts.word_boundary && pos > 0 && is_word_cp(cp_before(txt, pos))) return std::nullopt;
    auto end = detail::match_normalized_at(txt, pos, norm, opts.fold_case);
    if (!end) return std::nullopt;
    if (opts.word_boundary && *end < txt.size() && is_word_cp(peek_cp(txt, *end)))
        return std::nullopt;
    return end;
}

// Non-overlapping left-to-right occurrences as (start, end) byte ranges.
inline std::vector<std::pair<std::size_t, std::size_t>> find_occurrences(
    std::string_view txt, std::string_view term, const MatchOptions& opts = {}) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::string norm = collapse_ws(term);
    if (norm.empty()) return out;
    std::size_t pos = 0;
    bool prev_word = false;
    while (pos < txt.size()) {
        bool start_ok = !opts.word_boundary || !prev_word;
        if (start_ok) {
            auto end = detail::match_normalized_at(txt, pos, norm, opts.fold_case);
            if (end && (!opts.word_boundary || *end >= txt.size() ||
                        !is_word_cp(peek_cp(txt, *end)))) {
                out.emplace_back(pos, *end);
                pos = *end;
                prev_word = pos > 0 && is_word_cp(cp_before(txt, pos));
                continue;
            }
        }
        prev_word = is_word_cp(decode_cp(txt, pos));
    }
    return out;
}

inline bool contains_term(std::string_view txt, std::string_view term,
                          const MatchOptions& opts = {}) {
    std::string norm = collapse_ws(term);
    if (norm.empty()) return false;
    std::size_t pos = 0;
    bool prev_word = false;
    while (pos < txt.size()) {
        if (!opts.word_boundary || !prev_word) {
            auto end = detail::match_normalized_at(txt, pos, norm, opts.fold_case);
            if (end && (!opts.word_boundary || *end >= txt.size() ||
                        !is_word_cp(peek_cp(txt, *end))))
                return true;
        }
        prev_word = is_word_cp(decode_cp(txt, pos));
    }
    return false;
}

// -------------------------------------------------------- tokenization ---

// Splits on whitespace after separating punctuation runs from adjacent word
// characters, e.g. "Hello, world!" -> {"Hello", ",", "world", "!"}.
inline std::vector<std::string> tokenize_words(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    int cur_kind = -1; // 0 word, 1 punctuation
    auto flush = [&] {
        if (!cur.empty()) out.push_back(std::move(cur));
        cur.clear();
        cur_kind = -1;
    };
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t start = pos;
        char32_t cp = decode_cp(s, pos);
        if (is_space_cp(cp)) {
            flush();
            continue;
        }
        int kind = is_word_cp(cp) ? 0 : 1;
        if (cur_kind != -1 && cur_kind != kind) flush();
        cur.append(s.substr(start, pos - start));
        cur_kind = kind;
    }
    flush();
    return out;
}

} // namespace duterm::text
