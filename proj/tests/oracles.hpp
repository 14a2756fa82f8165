#pragma once

// Independent reference implementations used to check the library. These
// are deliberately written from the metric and matching definitions with
// plain loops and byte-level ASCII handling, sharing no code with the
// implementation under test. Inputs are restricted to ASCII where that
// keeps the oracle trivially correct.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

using Tokens = std::vector<std::string>;

// ------------------------------------------------------------------ BLEU ---

// Clipped modified n-gram precision components for one corpus.
struct BleuParts {
    std::vector<long long> correct;
    std::vector<long long> total;
    long long hyp_len = 0;
    long long ref_len = 0;
};

inline BleuParts bleu_parts(const std::vector<Tokens>& hyps, const std::vector<Tokens>& refs,
                            int max_order) {
    BleuParts parts;
    parts.correct.assign(max_order, 0);
    parts.total.assign(max_order, 0);
    for (std::size_t s = 0; s < hyps.size(); ++s) {
        const Tokens& hyp = hyps[s];
        const Tokens& ref = refs[s];
        parts.hyp_len += static_cast<long long>(hyp.size());
        parts.ref_len += static_cast<long long>(ref.size());
        for (int n = 1; n <= max_order; ++n) {
            std::map<Tokens, long long> hyp_counts, ref_counts;
            for (int i = 0; i + n <= static_cast<int>(hyp.size()); ++i)
                ++hyp_counts[Tokens(hyp.begin() + i, hyp.begin() + i + n)];
            for (int i = 0; i + n <= static_cast<int>(ref.size()); ++i)
                ++ref_counts[Tokens(ref.begin() + i, ref.begin() + i + n)];
            for (const auto& [gram, count] : hyp_counts) {
                parts.total[n - 1] += count;
                auto it = ref_counts.find(gram);
                if (it != ref_counts.end())
                    parts.correct[n - 1] += std::min(count, it->second);
            }
        }
    }
    return parts;
}

// Corpus BLEU per the classical definition: geometric mean of clipped
// precisions with uniform weights and brevity penalty exp(1 - r/c) for
// c <= r; any zero or undefined precision scores 0.
inline double bleu(const std::vector<Tokens>& hyps, const std::vector<Tokens>& refs,
                   int max_order) {
    BleuParts parts = bleu_parts(hyps, refs, max_order);
    if (parts.hyp_len == 0) return 0.0;
    double log_sum = 0.0;
    for (int n = 0; n < max_order; ++n) {
        if (parts.total[n] == 0 || parts.correct[n] == 0) return 0.0;
        log_sum += std::log(static_cast<double>(parts.correct[n]) /
                            static_cast<double>(parts.total[n])) /
                   max_order;
    }
    double bp = parts.hyp_len <= parts.ref_len
                    ? std::exp(1.0 - static_cast<double>(parts.ref_len) /
                                         static_cast<double>(parts.hyp_len))
                    : 1.0;
    return 100.0 * bp * std::exp(log_sum);
}

// --------------------------------------------------------------- chrF++ ---

// chrF++ over ASCII corpora: character n-grams (orders 1..char_order) on
// whitespace-removed bytes plus word n-grams (orders 1..word_order) on the
// given token lists. Precision/recall are averaged over orders that carry
// n-grams on at least one side; F_beta weights recall by beta^2.
inline double chrf(const std::vector<std::string>& hyps, const std::vector<std::string>& refs,
                   const std::vector<Tokens>& hyp_tokens, const std::vector<Tokens>& ref_tokens,
                   int char_order, int word_order, double beta) {
    int orders = char_order + word_order;
    std::vector<long long> match(orders, 0), hyp_total(orders, 0), ref_total(orders, 0);

    auto strip_spaces = [](const std::string& s) {
        std::string out;
        for (char c : s)
            if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
        return out;
    };

    for (std::size_t s = 0; s < hyps.size(); ++s) {
        std::string hyp = strip_spaces(hyps[s]);
        std::string ref = strip_spaces(refs[s]);
        for (int n = 1; n <= char_order; ++n) {
            std::map<std::string, long long> hc, rc;
            for (int i = 0; i + n <= static_cast<int>(hyp.size()); ++i) ++hc[hyp.substr(i, n)];
            for (int i = 0; i + n <= static_cast<int>(ref.size()); ++i) ++rc[ref.substr(i, n)];
            for (const auto& [g, c] : hc) {
                hyp_total[n - 1] += c;
                auto it = rc.find(g);
                if (it != rc.end()) match[n - 1] += std::min(c, it->second);
            }
            for (const auto& [g, c] : rc) ref_total[n - 1] += c;
        }
        for (int n = 1; n <= word_order; ++n) {
            std::map<Tokens, long long> hc, rc;
            const Tokens& ht = hyp_tokens[s];
            const Tokens& rt = ref_tokens[s];
            for (int i = 0; i + n <= static_cast<int>(ht.size()); ++i)
                ++hc[Tokens(ht.begin() + i, ht.begin() + i + n)];
            for (int i = 0; i + n <= static_cast<int>(rt.size()); ++i)
                ++rc[Tokens(rt.begin() + i, rt.begin() + i + n)];
            int slot = char_order + n - 1;
            for (const auto& [g, c] : hc) {
                hyp_total[slot] += c;
                auto it = rc.find(g);
                if (it != rc.end()) match[slot] += std::min(c, it->second);
            }
            for (const auto& [g, c] : rc) ref_total[slot] += c;
        }
    }

    double sum_p = 0.0, sum_r = 0.0;
    int included = 0;
    for (int i = 0; i < orders; ++i) {
        if (hyp_total[i] == 0 && ref_total[i] == 0) continue;
        sum_p += hyp_total[i] > 0 ? static_cast<double>(match[i]) / hyp_total[i] : 0.0;
        sum_r += ref_total[i] > 0 ? static_cast<double>(match[i]) / ref_total[i] : 0.0;
        ++included;
    }
    if (included == 0) return 0.0;
    double p = sum_p / included, r = sum_r / included;
    double b2 = beta * beta;
    if (b2 * p + r <= 0.0) return 0.0;
    return 100.0 * (1.0 + b2) * p * r / (b2 * p + r);
}

// ------------------------------------------------- containment / spans ---

inline std::string ascii_norm(const std::string& s) {
    std::string out;
    bool pending = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending = !out.empty();
            continue;
        }
        if (pending) out.push_back(' ');
        pending = false;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

// Naive O(n*m) containment scan of the normalized needle in the normalized
// haystack.
inline bool contains_naive(const std::string& haystack, const std::string& needle) {
    std::string h = ascii_norm(haystack), n = ascii_norm(needle);
    if (n.empty()) return false;
    if (n.size() > h.size()) return false;
    for (std::size_t i = 0; i + n.size() <= h.size(); ++i) {
        bool ok = true;
        for (std::size_t j = 0; j < n.size() && ok; ++j) ok = h[i + j] == n[j];
        if (ok) return true;
    }
    return false;
}

inline bool ascii_word(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

struct OracleSpan {
    std::size_t start = 0;
    std::size_t end = 0;
    std::size_t term_index = 0;
};

// Left-to-right longest-first span assignment over ASCII text: at every
// position candidate terms are tried in (-length, lexicographic) order,
// matched case-insensitively with single-space flexibility and word
// boundaries, and consumed on success.
inline std::vector<OracleSpan> term_spans(const std::string& txt,
                                          const std::vector<std::string>& terms) {
    std::vector<std::size_t> order(terms.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (terms[a].size() != terms[b].size()) return terms[a].size() > terms[b].size();
        return terms[a] < terms[b];
    });

    auto match_at = [&](std::size_t pos, const std::string& term) -> std::optional<std::size_t> {
        std::size_t ti = 0, xi = pos;
        while (ti < term.size()) {
            if (term[ti] == ' ') {
                if (xi >= txt.size() || !std::isspace(static_cast<unsigned char>(txt[xi])))
                    return std::nullopt;
                while (xi < txt.size() && std::isspace(static_cast<unsigned char>(txt[xi]))) ++xi;
                ++ti;
                continue;
            }
            if (xi >= txt.size()) return std::nullopt;
            if (std::tolower(static_cast<unsigned char>(txt[xi])) !=
                std::tolower(static_cast<unsigned char>(term[ti])))
                return std::nullopt;
            ++xi;
            ++ti;
        }
        return xi;
    };

    std::vector<OracleSpan> out;
    std::size_t pos = 0;
    while (pos < txt.size()) {
        bool boundary_ok = pos == 0 || !ascii_word(txt[pos - 1]);
        if (boundary_ok) {
            bool matched = false;
            for (std::size_t idx : order) {
                auto end = match_at(pos, terms[idx]);
                if (!end) continue;
                if (*end < txt.size() && ascii_word(txt[*end])) continue;
                out.push_back({pos, *end, idx});
                pos = *end;
                matched = true;
                break;
            }
            if (matched) continue;
        }
        ++pos;
    }
    return out;
}

} // namespace oracle
