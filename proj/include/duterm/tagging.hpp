#pragma once

// Tag standardization: [TERM]...[/TERM] span detection, stripping,
// longest-first term matching with case preservation, and symmetric
// source/target re-tagging driven by the terminology dictionary.
//
// Tag literals are bit-exact: "[TERM]" and "[/TERM]".

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "duterm/dictionary.hpp"
#include "duterm/text.hpp"

namespace duterm {

inline constexpr std::string_view kTagOpen = "[TERM]";
inline constexpr std::string_view kTagClose = "[/TERM]";

// Byte-offset span into tag-stripped text.
struct Span {
    std::size_t start = 0;
    std::size_t end = 0;
    std::string term_text; // original-case substring [start, end)

    bool operator==(const Span&) const = default;
};

struct TagReport {
    bool balanced = true;
    bool nested = false;
    std::size_t orphan_open = 0;
    std::size_t orphan_close = 0;
    std::size_t span_count = 0;

    bool well_formed() const { return balanced && !nested; }
};

struct TaggedSegment {
    std::string text;        // raw form, possibly containing tags
    std::string stripped;    // text with all tag tokens removed
    std::vector<Span> spans; // tagged regions of `stripped`
};

// Pure integrity scan: balance, nesting, orphan counts, matched-pair count.
inline TagReport verify_tags(std::string_view s) {
    TagReport report;
    std::size_t depth = 0;
    std::size_t pos = 0;
    while (pos < s.size()) {
        if (s.compare(pos, kTagOpen.size(), kTagOpen) == 0) {
            ++depth;
            if (depth > 1) report.nested = true;
            pos += kTagOpen.size();
        } else if (s.compare(pos, kTagClose.size(), kTagClose) == 0) {
            if (depth == 0) {
                ++report.orphan_close;
            } else {
                --depth;
                ++report.span_count;
            }
            pos += kTagClose.size();
        } else {
            ++pos;
        }
    }
    report.orphan_open = depth;
    report.balanced = report.orphan_open == 0 && report.orphan_close == 0;
    return report;
}

struct StripResult {
    std::string text; // input with every tag token removed
    std::vector<Span> spans;
    TagReport report;
};

// Removes all tag tokens. Spans are reported only for well-formed input
// (balanced, non-nested); defective input still strips clean but returns an
// empty span list plus the defect report.
inline StripResult strip_tags(std::string_view s) {
    StripResult result;
    result.report = verify_tags(s);
    std::size_t pos = 0;
    std::optional<std::size_t> open_at;
    while (pos < s.size()) {
        if (s.compare(pos, kTagOpen.size(), kTagOpen) == 0) {
            open_at = result.text.size();
            pos += kTagOpen.size();
        } else if (s.compare(pos, kTagClose.size(), kTagClose) == 0) {
            if (open_at) {
                Span span{*open_at, result.text.size(), {}};
                span.term_text = result.text.substr(span.start, span.end - span.start);
                result.spans.push_back(std::move(span));
                open_at.reset();
            }
            pos += kTagClose.size();
        } else {
            result.text.push_back(s[pos]);
            ++pos;
        }
    }
    if (!result.report.well_formed()) result.spans.clear();
    return result;
}

// Canonical inverse of strip_tags: inserts tag pairs at the given spans.
// Spans must be sorted and non-overlapping.
inline std::string insert_tags(std::string_view plain, const std::vector<Span>& spans) {
    std::string out;
    out.reserve(plain.size() + spans.size() * (kTagOpen.size() + kTagClose.size()));
    std::size_t pos = 0;
    for (const auto& span : spans) {
        out.append(plain.substr(pos, span.start - pos));
        out.append(kTagOpen);
        out.append(plain.substr(span.start, span.end - span.start));
        out.append(kTagClose);
        pos = span.end;
    }
    out.append(plain.substr(pos));
    return out;
}

inline TaggedSegment make_tagged_segment(std::string_view plain, std::vector<Span> spans) {
    TaggedSegment seg;
    seg.stripped = std::string(plain);
    seg.spans = std::move(spans);
    seg.text = insert_tags(seg.stripped, seg.spans);
    return seg;
}

enum class TermSide { source, target };

struct TermSpan {
    std::size_t start = 0;
    std::size_t end = 0;
    TermPair term;
};

// Greedy left-to-right scan over tag-free text. At each position candidate
// terms are tried longest-first (ties: lexicographic) so longer terms shadow
// their sub-terms; matching is case-insensitive on whitespace-normalized
// term text, must start and end at non-alphanumeric boundaries, and matched
// spans are consumed. Original casing of the text is untouched.
inline std::vector<TermSpan> find_term_spans(std::string_view txt,
                                             const std::vector<TermPair>& terms,
                                             TermSide side) {
    struct Candidate {
        std::string normalized; // whitespace-collapsed match text
        const TermPair* term;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(terms.size());
    for (const auto& t : terms) {
        const std::string& raw = side == TermSide::source ? t.source_term : t.target_term;
        std::string norm = text::collapse_ws(raw);
        if (norm.empty()) continue;
        candidates.push_back({std::move(norm), &t});
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.normalized.size() != b.normalized.size())
            return a.normalized.size() > b.normalized.size();
        if (a.normalized != b.normalized) return a.normalized < b.normalized;
        if (a.term->source_term != b.term->source_term)
            return a.term->source_term < b.term->source_term;
        return a.term->target_term < b.term->target_term;
    });

    // Bucket candidates by folded first code point; per-position order is
    // preserved within a bucket.
    std::map<char32_t, std::vector<const Candidate*>> buckets;
    for (const auto& c : candidates) {
        std::size_t p = 0;
        buckets[text::fold_cp(text::decode_cp(c.normalized, p))].push_back(&c);
    }

    std::vector<TermSpan> out;
    std::size_t pos = 0;
    bool prev_word = false;
    while (pos < txt.size()) {
        std::size_t next = pos;
        char32_t cp = text::decode_cp(txt, next);
        if (!prev_word) {
            auto it = buckets.find(text::fold_cp(cp));
            if (it != buckets.end()) {
                bool matched = false;
                for (const Candidate* c : it->second) {
                    auto end = text::detail::match_normalized_at(txt, pos, c->normalized, true);
                    if (!end) continue;
                    if (*end < txt.size() && text::is_word_cp(text::peek_cp(txt, *end))) continue;
                    out.push_back({pos, *end, *c->term});
                    pos = *end;
                    prev_word = pos > 0 && text::is_word_cp(text::cp_before(txt, pos));
                    matched = true;
                    break;
                }
                if (matched) continue;
            }
        }
        prev_word = text::is_word_cp(cp);
        pos = next;
    }
    return out;
}

struct RetagWarning {
    std::string source_term;
    std::string target_term;
    std::string reason; // "target-term-not-found" | "extra-source-occurrences"
                        // | "extra-target-occurrences"
};

struct RetagResult {
    TaggedSegment source;
    TaggedSegment target;
    std::vector<TermPair> tagged_terms; // one entry per tagged pair, source order
    std::vector<RetagWarning> warnings;
};

// Re-tags a sentence pair from the dictionary. Stale tags are stripped
// first; a tag pair is emitted only when both sides match, so the output
// carries equal tag counts. Occurrence pairing is positional: the k-th
// source occurrence of a pair is tied to the k-th target occurrence.
inline RetagResult retag_pair(std::string_view source, std::string_view target,
                              const TermDictionary& dict) {
    RetagResult result;
    std::string src_plain = strip_tags(source).text;
    std::string tgt_plain = strip_tags(target).text;

    std::vector<TermSpan> src_spans = find_term_spans(src_plain, dict.entries(), TermSide::source);

    std::vector<TermPair> needed;
    for (const auto& s : src_spans) {
        bool seen = false;
        for (const auto& n : needed) seen = seen || n.same_pair(s.term);
        if (!seen) needed.push_back(s.term);
    }
    std::vector<TermSpan> tgt_spans = find_term_spans(tgt_plain, needed, TermSide::target);

    auto count_for = [](const std::vector<TermSpan>& spans, const TermPair& p) {
        std::size_t n = 0;
        for (const auto& s : spans)
            if (s.term.same_pair(p)) ++n;
        return n;
    };

    std::vector<Span> src_keep, tgt_keep;
    std::vector<std::pair<std::size_t, TermPair>> kept_terms; // (source start, pair)
    for (const auto& pair : needed) {
        std::size_t cs = count_for(src_spans, pair);
        std::size_t ct = count_for(tgt_spans, pair);
        std::size_t k = std::min(cs, ct);
        if (k == 0) {
            result.warnings.push_back({pair.source_term, pair.target_term,
                                       "target-term-not-found"});
            continue;
        }
        if (cs > k)
            result.warnings.push_back({pair.source_term, pair.target_term,
                                       "extra-source-occurrences"});
        if (ct > k)
            result.warnings.push_back({pair.source_term, pair.target_term,
                                       "extra-target-occurrences"});
        std::size_t taken = 0;
        for (const auto& s : src_spans) {
            if (taken == k) break;
            if (!s.term.same_pair(pair)) continue;
            src_keep.push_back({s.start, s.end,
                                src_plain.substr(s.start, s.end - s.start)});
            kept_terms.emplace_back(s.start, pair);
            ++taken;
        }
        taken = 0;
        for (const auto& s : tgt_spans) {
            if (taken == k) break;
            if (!s.term.same_pair(pair)) continue;
            tgt_keep.push_back({s.start, s.end,
                                tgt_plain.substr(s.start, s.end - s.start)});
            ++taken;
        }
    }

    auto by_start = [](const Span& a, const Span& b) { return a.start < b.start; };
    std::sort(src_keep.begin(), src_keep.end(), by_start);
    std::sort(tgt_keep.begin(), tgt_keep.end(), by_start);
    std::sort(kept_terms.begin(), kept_terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [start, pair] : kept_terms) result.tagged_terms.push_back(std::move(pair));

    result.source = make_tagged_segment(src_plain, std::move(src_keep));
    result.target = make_tagged_segment(tgt_plain, std::move(tgt_keep));
    return result;
}

} // namespace duterm
