#pragma once

// Synthetic parallel-data generation: seeded sampling of generation plans
// (mode, terms, temperature), prompt construction, and strict parsing of
// bilingual EN/{target} blocks into tagged ParallelPairs.
//
// Corpus JSONL schema, one object per line:
//   {"src_tagged": str, "tgt_tagged": str, "lang": "en-de", "gen_mode":
//    "single-term"|"multi-term", "terms": [{"src","tgt"}], "temperature":
//    float, "qe_score": float (present once scored)}

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "duterm/dictionary.hpp"
#include "duterm/jsonl.hpp"
#include "duterm/prompts.hpp"
#include "duterm/rng.hpp"
#include "duterm/tagging.hpp"
#include "duterm/text.hpp"

namespace duterm {

enum class GenMode { single_term, multi_term };

inline std::string to_string(GenMode m) {
    return m == GenMode::single_term ? "single-term" : "multi-term";
}

inline GenMode gen_mode_from_string(std::string_view s) {
    if (s == "single-term") return GenMode::single_term;
    if (s == "multi-term") return GenMode::multi_term;
    throw std::invalid_argument("unknown gen_mode \"" + std::string(s) + "\"");
}

struct ParallelPair {
    TaggedSegment source;
    TaggedSegment target;
    LanguagePair direction{"en", "de"};
    std::vector<TermPair> terms_used;
    GenMode gen_mode = GenMode::single_term;
    double temperature = 0.0;
    std::optional<double> qe_score;
};

// ----------------------------------------------------------- prompts ---

inline std::string build_single_term_prompt(const TermPair& term, const std::string& target_lang,
                                            int n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (contains_tag_markup(term.source_term) || contains_tag_markup(term.target_term))
        throw std::invalid_argument("term pair contains tag markup");
    return prompts::render(prompts::kSingleTermTemplate,
                           {{"n", std::to_string(n)},
                            {"source_term", term.source_term},
                            {"target_term", term.target_term},
                            {"target_lang", target_lang}});
}

inline std::string build_multi_term_prompt(const std::vector<TermPair>& terms,
                                           const std::string& target_lang, int n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (terms.size() < 2 || terms.size() > 3)
        throw std::invalid_argument("multi-term prompts take 2-3 term pairs, got " +
                                    std::to_string(terms.size()));
    std::string terms_str;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) terms_str.push_back('\n');
        terms_str += terms[i].source_term + " : " + terms[i].target_term;
    }
    return prompts::render(prompts::kMultiTermTemplate, {{"n", std::to_string(n)},
                                                         {"terms_str", terms_str},
                                                         {"target_lang", target_lang}});
}

// ------------------------------------------------------------- planning ---

struct GenPlanItem {
    GenMode mode = GenMode::single_term;
    std::vector<TermPair> terms; // 1 for single-term, 2-3 for multi-term
    double temperature = 0.3;
};

// Deterministic under seed. Temperatures are uniform in [temp_lo, temp_hi];
// multi-term items draw 2-3 distinct terms without replacement; the
// single:multi split is a per-item Bernoulli draw.
inline std::vector<GenPlanItem> sample_generation_plan(const TermDictionary& dict, int count,
                                                       std::uint64_t seed,
                                                       double single_ratio = 0.7,
                                                       double temp_lo = 0.3,
                                                       double temp_hi = 0.7) {
    if (count < 1) throw std::invalid_argument("plan count must be >= 1");
    if (dict.empty()) throw std::invalid_argument("dictionary is empty");
    if (!(single_ratio >= 0.0 && single_ratio <= 1.0))
        throw std::invalid_argument("single_ratio must be in [0, 1]");
    if (single_ratio < 1.0 && dict.size() < 3)
        throw std::invalid_argument(
            "multi-term generation needs a dictionary with at least 3 entries, got " +
            std::to_string(dict.size()));
    std::mt19937_64 gen(seed);
    std::vector<GenPlanItem> plan;
    plan.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        GenPlanItem item;
        item.temperature = rng::uniform(gen, temp_lo, temp_hi);
        bool single = rng::uniform01(gen) < single_ratio;
        if (single) {
            item.mode = GenMode::single_term;
            item.terms.push_back(dict.entries()[rng::uniform_index(gen, dict.size())]);
        } else {
            item.mode = GenMode::multi_term;
            std::size_t k = 2 + rng::uniform_index(gen, 2);
            while (item.terms.size() < k) {
                const TermPair& draw = dict.entries()[rng::uniform_index(gen, dict.size())];
                bool seen = false;
                for (const auto& t : item.terms) seen = seen || t.same_pair(draw);
                if (!seen) item.terms.push_back(draw);
            }
        }
        plan.push_back(std::move(item));
    }
    return plan;
}

// -------------------------------------------------------------- parsing ---

struct RejectedBlock {
    std::size_t first_line = 0; // 1-based, inclusive
    std::size_t last_line = 0;
    std::string reason;
};

struct ParseOutcome {
    std::vector<ParallelPair> accepted;
    std::vector<RejectedBlock> rejected;
};

namespace synthgen_detail {

inline bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

// Accepts "German:" (case-insensitive language name) or the literal
// placeholder "{target_lang}:".
inline std::optional<std::string> target_line_payload(std::string_view line,
                                                      const std::string& target_lang) {
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    std::string label = text::trim(line.substr(0, colon));
    if (text::fold_case(label) != text::fold_case(target_lang) && label != "{target_lang}")
        return std::nullopt;
    return text::trim(line.substr(colon + 1));
}

inline bool spans_match_terms(const std::vector<Span>& spans,
                              const std::vector<std::string>& expected) {
    if (spans.size() != expected.size()) return false;
    std::vector<std::string> got, want;
    for (const auto& s : spans) got.push_back(text::normalize_key(s.term_text));
    for (const auto& t : expected) want.push_back(text::normalize_key(t));
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    return got == want;
}

} // namespace synthgen_detail

// Strict parse of raw model output. A candidate block is an "EN:" line plus
// the following non-blank line; runs of other non-blank lines count as one
// rejected "chatter" block. A pair is accepted only when both lines carry
// balanced, non-nested tags whose spans match expected_terms exactly (count
// and content, case-insensitive); well-formed pairs beyond expected_n are
// rejected as "excess-pair". Total function: every defect is data.
inline ParseOutcome parse_generation_output(std::string_view raw, const std::string& target_lang,
                                            int expected_n,
                                            const std::vector<TermPair>& expected_terms,
                                            const LanguagePair& direction,
                                            double temperature = 0.0) {
    if (expected_n < 1) throw std::invalid_argument("expected_n must be >= 1");
    if (expected_terms.empty() || expected_terms.size() > 3)
        throw std::invalid_argument("expected_terms must hold 1-3 pairs, got " +
                                    std::to_string(expected_terms.size()));
    ParseOutcome outcome;
    std::vector<std::string> lines;
    {
        std::size_t start = 0;
        while (start <= raw.size()) {
            std::size_t nl = raw.find('\n', start);
            if (nl == std::string_view::npos) {
                lines.emplace_back(raw.substr(start));
                break;
            }
            lines.emplace_back(raw.substr(start, nl - start));
            start = nl + 1;
        }
    }

    std::vector<std::string> expected_src, expected_tgt;
    for (const auto& t : expected_terms) {
        expected_src.push_back(t.source_term);
        expected_tgt.push_back(t.target_term);
    }

    std::optional<std::size_t> chatter_start;
    auto flush_chatter = [&](std::size_t end_line) {
        if (!chatter_start) return;
        outcome.rejected.push_back({*chatter_start + 1, end_line, "chatter"});
        chatter_start.reset();
    };

    std::size_t i = 0;
    while (i < lines.size()) {
        std::string line = text::trim(lines[i]);
        if (synthgen_detail::is_blank(line)) {
            flush_chatter(i);
            ++i;
            continue;
        }
        if (line.rfind("EN:", 0) != 0) {
            if (!chatter_start) chatter_start = i;
            ++i;
            continue;
        }
        flush_chatter(i);

        std::string src_text = text::trim(line.substr(3));
        std::size_t block_first = i + 1;
        ++i;
        while (i < lines.size() && synthgen_detail::is_blank(lines[i])) ++i;
        if (i >= lines.size() || text::trim(lines[i]).rfind("EN:", 0) == 0) {
            outcome.rejected.push_back({block_first, block_first, "missing-target-line"});
            continue;
        }
        auto tgt_payload = synthgen_detail::target_line_payload(text::trim(lines[i]), target_lang);
        std::size_t block_last = i + 1;
        if (!tgt_payload) {
            outcome.rejected.push_back({block_first, block_last, "bad-target-label"});
            ++i;
            continue;
        }
        ++i;
        std::string tgt_text = *tgt_payload;

        auto reject = [&](std::string reason) {
            outcome.rejected.push_back({block_first, block_last, std::move(reason)});
        };

        TagReport src_report = verify_tags(src_text);
        TagReport tgt_report = verify_tags(tgt_text);
        if (!src_report.well_formed()) {
            reject("source-tag-integrity");
            continue;
        }
        if (!tgt_report.well_formed()) {
            reject("target-tag-integrity");
            continue;
        }
        StripResult src_strip = strip_tags(src_text);
        StripResult tgt_strip = strip_tags(tgt_text);
        if (src_strip.spans.empty()) {
            reject("missing-source-tag");
            continue;
        }
        if (tgt_strip.spans.empty()) {
            reject("missing-target-tag");
            continue;
        }
        if (src_strip.spans.size() != expected_terms.size() ||
            tgt_strip.spans.size() != expected_terms.size()) {
            reject("span-count-mismatch");
            continue;
        }
        if (!synthgen_detail::spans_match_terms(src_strip.spans, expected_src) ||
            !synthgen_detail::spans_match_terms(tgt_strip.spans, expected_tgt)) {
            reject("term-mismatch");
            continue;
        }
        if (outcome.accepted.size() >= static_cast<std::size_t>(expected_n)) {
            reject("excess-pair");
            continue;
        }

        ParallelPair pair;
        pair.source = TaggedSegment{src_text, src_strip.text, src_strip.spans};
        pair.target = TaggedSegment{tgt_text, tgt_strip.text, tgt_strip.spans};
        pair.direction = direction;
        pair.terms_used = expected_terms;
        pair.gen_mode = expected_terms.size() == 1 ? GenMode::single_term : GenMode::multi_term;
        pair.temperature = temperature;
        outcome.accepted.push_back(std::move(pair));
    }
    flush_chatter(lines.size());
    return outcome;
}

// ------------------------------------------------------------ corpus IO ---

inline jsonl::json pair_to_json(const ParallelPair& pair) {
    jsonl::json terms = jsonl::json::array();
    for (const auto& t : pair.terms_used)
        terms.push_back({{"src", t.source_term}, {"tgt", t.target_term}});
    jsonl::json row{{"src_tagged", pair.source.text},
                    {"tgt_tagged", pair.target.text},
                    {"lang", pair.direction.str()},
                    {"gen_mode", to_string(pair.gen_mode)},
                    {"terms", terms},
                    {"temperature", pair.temperature}};
    if (pair.qe_score) row["qe_score"] = *pair.qe_score;
    return row;
}

inline ParallelPair pair_from_json(const jsonl::json& obj, const std::string& file,
                                   std::size_t line_no) {
    ParallelPair pair;
    std::string src_tagged = jsonl::require_string(obj, "src_tagged", file, line_no);
    std::string tgt_tagged = jsonl::require_string(obj, "tgt_tagged", file, line_no);
    StripResult src = strip_tags(src_tagged);
    StripResult tgt = strip_tags(tgt_tagged);
    pair.source = TaggedSegment{std::move(src_tagged), src.text, src.spans};
    pair.target = TaggedSegment{std::move(tgt_tagged), tgt.text, tgt.spans};
    pair.direction = LanguagePair::parse(jsonl::require_string(obj, "lang", file, line_no));
    pair.gen_mode =
        gen_mode_from_string(jsonl::require_string(obj, "gen_mode", file, line_no));
    const auto& terms = jsonl::require_field(obj, "terms", file, line_no);
    if (!terms.is_array())
        throw jsonl::parse_error(file, line_no, "field \"terms\" must be an array");
    for (const auto& t : terms)
        pair.terms_used.push_back(TermPair{jsonl::require_string(t, "src", file, line_no),
                                           jsonl::require_string(t, "tgt", file, line_no), 0,
                                           TermOrigin::dev_file});
    const auto& temp = jsonl::require_field(obj, "temperature", file, line_no);
    if (!temp.is_number())
        throw jsonl::parse_error(file, line_no, "field \"temperature\" must be a number");
    pair.temperature = temp.get<double>();
    if (obj.contains("qe_score")) pair.qe_score = obj.at("qe_score").get<double>();
    return pair;
}

inline void save_corpus(const std::vector<ParallelPair>& pairs,
                        const std::filesystem::path& path) {
    std::vector<jsonl::json> rows;
    rows.reserve(pairs.size());
    for (const auto& p : pairs) rows.push_back(pair_to_json(p));
    jsonl::write_lines(path, rows);
}

inline std::vector<ParallelPair> load_corpus(const std::filesystem::path& path) {
    std::vector<ParallelPair> pairs;
    const std::string file = path.string();
    jsonl::for_each_line(path, [&](std::size_t line_no, const jsonl::json& obj) {
        pairs.push_back(pair_from_json(obj, file, line_no));
    });
    return pairs;
}

} // namespace duterm
