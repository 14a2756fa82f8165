#pragma once

// Evaluation metrics, computed after tag stripping:
//
//  - corpus BLEU: clipped modified n-gram precisions p_n for n = 1..N,
//    uniform weights, geometric mean, brevity penalty exp(1 - r/c) when the
//    hypothesis corpus is shorter than the reference corpus. No smoothing:
//    any p_n of zero (including orders with no hypothesis n-grams) scores 0.
//  - chrF2++: F_beta (beta = 2, recall weighted double) over precision and
//    recall averaged across character n-grams of order 1..6 computed on
//    whitespace-removed text and word n-grams of order 1..2. Orders with no
//    n-grams on either side are excluded from the average, so identity
//    corpora score 100 regardless of sentence length.
//  - terminology success rate: micro-average over required target terms
//    (macro per-segment average reported alongside in JSON).
//
// Statistics are accumulated corpus-level and merge associatively, so
// corpora may be sharded.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "duterm/dictionary.hpp"
#include "duterm/modes.hpp"
#include "duterm/tagging.hpp"
#include "duterm/text.hpp"

namespace duterm {

struct MetricConfig {
    int bleu_max_order = 4;
    int chrf_char_order = 6;
    int chrf_word_order = 2;
    double chrf_beta = 2.0;
    enum class TermMatchPolicy { exact_case, case_insensitive };
    TermMatchPolicy term_match_policy = TermMatchPolicy::exact_case;

    void validate() const {
        if (bleu_max_order < 1 || chrf_char_order < 1 || chrf_word_order < 1)
            throw std::invalid_argument("metric n-gram orders must be >= 1");
        if (!(chrf_beta > 0)) throw std::invalid_argument("chrf_beta must be > 0");
    }
};

namespace metrics_detail {

inline void count_ngrams(const std::vector<std::string>& tokens, int order,
                         std::unordered_map<std::string, std::int64_t>& counts) {
    if (static_cast<int>(tokens.size()) < order) return;
    for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
        std::string key;
        for (int j = 0; j < order; ++j) {
            if (j) key.push_back('\x1f');
            key.append(tokens[i + j]);
        }
        ++counts[key];
    }
}

inline std::int64_t clipped_matches(const std::unordered_map<std::string, std::int64_t>& hyp,
                                    const std::unordered_map<std::string, std::int64_t>& ref) {
    std::int64_t matches = 0;
    for (const auto& [gram, n] : hyp) {
        auto it = ref.find(gram);
        if (it != ref.end()) matches += std::min(n, it->second);
    }
    return matches;
}

// Character n-gram counts over whitespace-removed text, UTF-8 aware.
inline void count_char_ngrams(std::string_view s, int order,
                              std::unordered_map<std::string, std::int64_t>& counts,
                              std::int64_t& total) {
    std::string compact;
    compact.reserve(s.size());
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t start = pos;
        char32_t cp = text::decode_cp(s, pos);
        if (!text::is_space_cp(cp)) compact.append(s.substr(start, pos - start));
    }
    std::vector<std::size_t> offsets;
    pos = 0;
    while (pos < compact.size()) {
        offsets.push_back(pos);
        text::decode_cp(compact, pos);
    }
    offsets.push_back(compact.size());
    std::size_t cps = offsets.size() - 1;
    if (cps < static_cast<std::size_t>(order)) return;
    for (std::size_t i = 0; i + order <= cps; ++i) {
        ++counts[compact.substr(offsets[i], offsets[i + order] - offsets[i])];
        ++total;
    }
}

} // namespace metrics_detail

// ------------------------------------------------------------------ BLEU ---

struct BleuStats {
    std::vector<std::int64_t> correct; // clipped matches per order
    std::vector<std::int64_t> total;   // hypothesis n-grams per order
    std::int64_t hyp_len = 0;
    std::int64_t ref_len = 0;

    explicit BleuStats(int max_order = 4)
        : correct(static_cast<std::size_t>(max_order), 0),
          total(static_cast<std::size_t>(max_order), 0) {}

    void merge(const BleuStats& o) {
        for (std::size_t i = 0; i < correct.size(); ++i) {
            correct[i] += o.correct[i];
            total[i] += o.total[i];
        }
        hyp_len += o.hyp_len;
        ref_len += o.ref_len;
    }
};

inline BleuStats bleu_sentence_stats(std::string_view hyp, std::string_view ref,
                                     const MetricConfig& cfg = {}) {
    BleuStats stats(cfg.bleu_max_order);
    auto hyp_tokens = text::tokenize_words(hyp);
    auto ref_tokens = text::tokenize_words(ref);
    stats.hyp_len = static_cast<std::int64_t>(hyp_tokens.size());
    stats.ref_len = static_cast<std::int64_t>(ref_tokens.size());
    for (int n = 1; n <= cfg.bleu_max_order; ++n) {
        std::unordered_map<std::string, std::int64_t> hyp_counts, ref_counts;
        metrics_detail::count_ngrams(hyp_tokens, n, hyp_counts);
        metrics_detail::count_ngrams(ref_tokens, n, ref_counts);
        std::int64_t total = 0;
        for (const auto& [gram, c] : hyp_counts) total += c;
        stats.total[n - 1] = total;
        stats.correct[n - 1] = metrics_detail::clipped_matches(hyp_counts, ref_counts);
    }
    return stats;
}

inline double bleu_score_from_stats(const BleuStats& stats) {
    if (stats.hyp_len == 0) return 0.0;
    double log_precision = 0.0;
    const double n_orders = static_cast<double>(stats.correct.size());
    for (std::size_t i = 0; i < stats.correct.size(); ++i) {
        if (stats.correct[i] == 0 || stats.total[i] == 0) return 0.0;
        log_precision += std::log(static_cast<double>(stats.correct[i]) /
                                  static_cast<double>(stats.total[i])) /
                         n_orders;
    }
    double bp = 1.0;
    if (stats.hyp_len <= stats.ref_len)
        bp = std::exp(1.0 - static_cast<double>(stats.ref_len) /
                                static_cast<double>(stats.hyp_len));
    return 100.0 * bp * std::exp(log_precision);
}

inline double corpus_bleu(const std::vector<std::string>& hyps,
                          const std::vector<std::string>& refs, const MetricConfig& cfg = {}) {
    cfg.validate();
    if (hyps.size() != refs.size())
        throw std::invalid_argument("corpus_bleu: hypothesis/reference count mismatch");
    if (hyps.empty()) throw std::invalid_argument("corpus_bleu: empty corpus");
    BleuStats stats(cfg.bleu_max_order);
    for (std::size_t i = 0; i < hyps.size(); ++i)
        stats.merge(bleu_sentence_stats(hyps[i], refs[i], cfg));
    return bleu_score_from_stats(stats);
}

// ---------------------------------------------------------------- chrF2++ ---

struct ChrfStats {
    // char orders 1..char_order followed by word orders 1..word_order
    std::vector<std::int64_t> match;
    std::vector<std::int64_t> hyp_total;
    std::vector<std::int64_t> ref_total;

    ChrfStats(int char_order, int word_order)
        : match(static_cast<std::size_t>(char_order + word_order), 0),
          hyp_total(static_cast<std::size_t>(char_order + word_order), 0),
          ref_total(static_cast<std::size_t>(char_order + word_order), 0) {}

    void merge(const ChrfStats& o) {
        for (std::size_t i = 0; i < match.size(); ++i) {
            match[i] += o.match[i];
            hyp_total[i] += o.hyp_total[i];
            ref_total[i] += o.ref_total[i];
        }
    }
};

inline ChrfStats chrf_sentence_stats(std::string_view hyp, std::string_view ref,
                                     const MetricConfig& cfg = {}) {
    ChrfStats stats(cfg.chrf_char_order, cfg.chrf_word_order);
    for (int n = 1; n <= cfg.chrf_char_order; ++n) {
        std::unordered_map<std::string, std::int64_t> hyp_counts, ref_counts;
        std::int64_t hyp_total = 0, ref_total = 0;
        metrics_detail::count_char_ngrams(hyp, n, hyp_counts, hyp_total);
        metrics_detail::count_char_ngrams(ref, n, ref_counts, ref_total);
        std::size_t slot = static_cast<std::size_t>(n - 1);
        stats.hyp_total[slot] = hyp_total;
        stats.ref_total[slot] = ref_total;
        stats.match[slot] = metrics_detail::clipped_matches(hyp_counts, ref_counts);
    }
    auto hyp_tokens = text::tokenize_words(hyp);
    auto ref_tokens = text::tokenize_words(ref);
    for (int n = 1; n <= cfg.chrf_word_order; ++n) {
        std::unordered_map<std::string, std::int64_t> hyp_counts, ref_counts;
        metrics_detail::count_ngrams(hyp_tokens, n, hyp_counts);
        metrics_detail::count_ngrams(ref_tokens, n, ref_counts);
        std::size_t slot = static_cast<std::size_t>(cfg.chrf_char_order + n - 1);
        for (const auto& [gram, c] : hyp_counts) stats.hyp_total[slot] += c;
        for (const auto& [gram, c] : ref_counts) stats.ref_total[slot] += c;
        stats.match[slot] = metrics_detail::clipped_matches(hyp_counts, ref_counts);
    }
    return stats;
}

inline double chrf_score_from_stats(const ChrfStats& stats, double beta) {
    double sum_p = 0.0, sum_r = 0.0;
    std::size_t included = 0;
    for (std::size_t i = 0; i < stats.match.size(); ++i) {
        if (stats.hyp_total[i] == 0 && stats.ref_total[i] == 0) continue;
        double p = stats.hyp_total[i] > 0
                       ? static_cast<double>(stats.match[i]) / static_cast<double>(stats.hyp_total[i])
                       : 0.0;
        double r = stats.ref_total[i] > 0
                       ? static_cast<double>(stats.match[i]) / static_cast<double>(stats.ref_total[i])
                       : 0.0;
        sum_p += p;
        sum_r += r;
        ++included;
    }
    if (included == 0) return 0.0;
    double avg_p = sum_p / static_cast<double>(included);
    double avg_r = sum_r / static_cast<double>(included);
    double beta2 = beta * beta;
    double denom = beta2 * avg_p + avg_r;
    if (denom <= 0.0) return 0.0;
    return 100.0 * (1.0 + beta2) * avg_p * avg_r / denom;
}

inline double chrf2pp(const std::vector<std::string>& hyps, const std::vector<std::string>& refs,
                      const MetricConfig& cfg = {}) {
    cfg.validate();
    if (hyps.size() != refs.size())
        throw std::invalid_argument("chrf2pp: hypothesis/reference count mismatch");
    if (hyps.empty()) throw std::invalid_argument("chrf2pp: empty corpus");
    ChrfStats stats(cfg.chrf_char_order, cfg.chrf_word_order);
    for (std::size_t i = 0; i < hyps.size(); ++i)
        stats.merge(chrf_sentence_stats(hyps[i], refs[i], cfg));
    return chrf_score_from_stats(stats, cfg.chrf_beta);
}

// -------------------------------------------------- terminology success ---

// One evaluated segment: the post-edited hypothesis plus everything needed
// to re-derive its required terms.
struct EvalSegment {
    std::uint64_t segment_id = 0;
    std::string source;
    std::string hypothesis;
};

struct SrResult {
    double micro = 0.0; // found terms / required terms
    double macro = 0.0; // mean per-segment rate over segments with terms
    std::int64_t required = 0;
    std::int64_t found = 0;
};

inline bool hypothesis_contains_term(std::string_view hypothesis, std::string_view target_term,
                                     MetricConfig::TermMatchPolicy policy) {
    text::MatchOptions opts;
    opts.fold_case = policy == MetricConfig::TermMatchPolicy::case_insensitive;
    opts.word_boundary = false;
    return text::contains_term(hypothesis, target_term, opts);
}

// Success rate of one term set over a corpus. Required pairs are resolved
// from the chosen db against each source; hypotheses are tag-stripped
// before matching. Segments with no required terms contribute nothing.
inline SrResult terminology_sr(const std::vector<EvalSegment>& segments, TerminologyMode term_set,
                               const TermDictionary& proper_db, const TermDictionary& random_db,
                               const MetricConfig& cfg, std::uint64_t run_seed) {
    if (term_set == TerminologyMode::noterm)
        throw std::invalid_argument("terminology_sr: term set must be proper or random");
    if (segments.empty()) throw std::invalid_argument("terminology_sr: empty record list");
    SrResult result;
    double macro_sum = 0.0;
    std::int64_t macro_n = 0;
    for (const auto& seg : segments) {
        std::vector<TermPair> required =
            resolve_terms(seg.source, term_set, proper_db, random_db,
                          segment_seed(run_seed, seg.segment_id));
        if (required.empty()) continue;
        std::string hyp = strip_tags(seg.hypothesis).text;
        std::int64_t found = 0;
        for (const auto& pair : required)
            if (hypothesis_contains_term(hyp, pair.target_term, cfg.term_match_policy)) ++found;
        result.required += static_cast<std::int64_t>(required.size());
        result.found += found;
        macro_sum += static_cast<double>(found) / static_cast<double>(required.size());
        ++macro_n;
    }
    result.micro = result.required > 0
                       ? static_cast<double>(result.found) / static_cast<double>(result.required)
                       : 0.0;
    result.macro = macro_n > 0 ? macro_sum / static_cast<double>(macro_n) : 0.0;
    return result;
}

// ------------------------------------------------------------- reporting ---

struct EvalReport {
    LanguagePair direction{"en", "de"};
    TerminologyMode mode = TerminologyMode::noterm;
    double bleu = 0.0;
    double chrf2pp = 0.0;
    double sr_proper = 0.0;
    double sr_random = 0.0;
    double sr_proper_macro = 0.0;
    double sr_random_macro = 0.0;
    std::int64_t segment_count = 0;
};

namespace metrics_detail {

inline int mode_rank(TerminologyMode m) {
    switch (m) {
        case TerminologyMode::noterm: return 0;
        case TerminologyMode::proper: return 1;
        default: return 2;
    }
}

inline std::vector<EvalReport> sorted_rows(std::vector<EvalReport> rows) {
    std::sort(rows.begin(), rows.end(), [](const EvalReport& a, const EvalReport& b) {
        if (a.direction != b.direction) return a.direction < b.direction;
        return mode_rank(a.mode) < mode_rank(b.mode);
    });
    return rows;
}

inline std::string upper_ascii(std::string s) {
    for (char& c : s)
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 0x20);
    return s;
}

} // namespace metrics_detail

// Plain-text table over rows sorted by (direction, noterm < proper < random).
inline std::string render_report(const std::vector<EvalReport>& reports) {
    std::string out = "Lang  Type    BLEU    chrF2++  Prop. SR  Rand. SR\n"
                      "----  ------  ------  -------  --------  --------\n";
    char buf[128];
    for (const auto& row : metrics_detail::sorted_rows(reports)) {
        std::snprintf(buf, sizeof(buf), "%-4s  %-6s  %6.2f  %7.2f  %8.2f  %8.2f\n",
                      metrics_detail::upper_ascii(row.direction.target).c_str(),
                      to_string(row.mode).c_str(), row.bleu, row.chrf2pp, row.sr_proper,
                      row.sr_random);
        out += buf;
    }
    return out;
}

inline nlohmann::json report_row_to_json(const EvalReport& row) {
    return {{"lang", row.direction.str()},
            {"mode", to_string(row.mode)},
            {"bleu", row.bleu},
            {"chrf2pp", row.chrf2pp},
            {"sr_proper", row.sr_proper},
            {"sr_random", row.sr_random},
            {"sr_proper_macro", row.sr_proper_macro},
            {"sr_random_macro", row.sr_random_macro},
            {"n", row.segment_count}};
}

inline nlohmann::json report_to_json(const std::vector<EvalReport>& reports) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : metrics_detail::sorted_rows(reports))
        out.push_back(report_row_to_json(row));
    return out;
}

inline EvalReport report_row_from_json(const nlohmann::json& obj) {
    EvalReport row;
    row.direction = LanguagePair::parse(obj.at("lang").get<std::string>());
    row.mode = terminology_mode_from_string(obj.at("mode").get<std::string>());
    row.bleu = obj.at("bleu").get<double>();
    row.chrf2pp = obj.at("chrf2pp").get<double>();
    row.sr_proper = obj.at("sr_proper").get<double>();
    row.sr_random = obj.at("sr_random").get<double>();
    row.sr_proper_macro = obj.value("sr_proper_macro", 0.0);
    row.sr_random_macro = obj.value("sr_random_macro", 0.0);
    row.segment_count = obj.at("n").get<std::int64_t>();
    return row;
}

} // namespace duterm
