#pragma once

// Quality filtering of generated pairs: QE scoring (pluggable service or a
// deterministic heuristic stub), conservative thresholding, and source-side
// deduplication.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "duterm/synthgen.hpp"
#include "duterm/tagging.hpp"
#include "duterm/text.hpp"

namespace duterm {

struct QEScorerConfig {
    enum class Backend { http_service, heuristic_stub };
    Backend backend = Backend::heuristic_stub;
    std::string endpoint; // http_service only
    double threshold = 0.85;

    void validate() const {
        if (!(threshold >= 0.0 && threshold <= 1.0))
            throw std::invalid_argument("QE threshold must be in [0, 1]");
    }

    // Default operating band; other values are allowed but flagged.
    bool threshold_is_default_band() const { return threshold >= 0.85 && threshold <= 0.9; }
};

// Reference-free scorer over tag-stripped (source, translation) pairs.
class QEScorer {
  public:
    virtual ~QEScorer() = default;
    // One score in [0, 1] per input pair, input order.
    virtual std::vector<double> score(const std::vector<std::pair<std::string, std::string>>&
                                          stripped_pairs) = 0;
    virtual std::string name() const = 0;
};

// Deterministic stand-in for a neural QE model:
//   0.5 * fraction of required target terms present
// + 0.3 * length-ratio closeness min(|s|,|t|) / max(|s|,|t|)
// + 0.2 * (target non-empty)
// clamped to [0, 1]; an empty target floors the score at 0.
class HeuristicStubScorer final : public QEScorer {
  public:
    std::vector<double> score(
        const std::vector<std::pair<std::string, std::string>>& stripped_pairs) override {
        std::vector<double> out;
        out.reserve(stripped_pairs.size());
        for (const auto& [src, tgt] : stripped_pairs) out.push_back(score_pair(src, tgt, {}));
        return out;
    }

    std::string name() const override { return "heuristic-stub"; }

    static double score_pair(const std::string& src, const std::string& tgt,
                             const std::vector<TermPair>& terms) {
        if (text::trim(tgt).empty()) return 0.0;
        double presence = 1.0;
        if (!terms.empty()) {
            std::size_t found = 0;
            text::MatchOptions opts;
            opts.fold_case = true;
            opts.word_boundary = true;
            for (const auto& t : terms)
                if (text::contains_term(tgt, t.target_term, opts)) ++found;
            presence = static_cast<double>(found) / static_cast<double>(terms.size());
        }
        double ls = static_cast<double>(src.size());
        double lt = static_cast<double>(tgt.size());
        double ratio = ls == 0.0 || lt == 0.0 ? 0.0 : std::min(ls, lt) / std::max(ls, lt);
        double score = 0.5 * presence + 0.3 * ratio + 0.2;
        return std::min(1.0, std::max(0.0, score));
    }
};

struct ScoreError {
    std::size_t index = 0;
    std::string message;
};

struct ScoreOutcome {
    std::vector<ParallelPair> pairs; // input order, qe_score set where scored
    std::vector<ScoreError> errors;  // pairs left unscored
};

// Scores every pair on tag-stripped text. The stub path scores required-term
// presence per pair; service failures leave the affected pairs unscored and
// reported rather than aborting the batch.
inline ScoreOutcome score_pairs(std::vector<ParallelPair> pairs, QEScorer& scorer) {
    ScoreOutcome outcome;
    if (auto* stub = dynamic_cast<HeuristicStubScorer*>(&scorer)) {
        for (auto& p : pairs)
            p.qe_score = stub->score_pair(p.source.stripped, p.target.stripped, p.terms_used);
        outcome.pairs = std::move(pairs);
        return outcome;
    }
    std::vector<std::pair<std::string, std::string>> stripped;
    stripped.reserve(pairs.size());
    for (const auto& p : pairs) stripped.emplace_back(p.source.stripped, p.target.stripped);
    try {
        std::vector<double> scores = scorer.score(stripped);
        if (scores.size() != pairs.size())
            throw std::runtime_error("QE scorer returned " + std::to_string(scores.size()) +
                                     " scores for " + std::to_string(pairs.size()) + " pairs");
        for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i].qe_score = scores[i];
    } catch (const std::exception& err) {
        for (std::size_t i = 0; i < pairs.size(); ++i)
            outcome.errors.push_back({i, err.what()});
    }
    outcome.pairs = std::move(pairs);
    return outcome;
}

enum class DropReason { below_threshold, duplicate_source };

inline std::string to_string(DropReason r) {
    return r == DropReason::below_threshold ? "below-threshold" : "duplicate-source";
}

struct DroppedPair {
    ParallelPair pair;
    DropReason reason;
};

struct FilterOutcome {
    std::vector<ParallelPair> kept;    // input order
    std::vector<DroppedPair> dropped;  // input order
};

// Threshold filter plus first-wins dedup on normalized (case-folded,
// whitespace-collapsed, tag-stripped) source text, in one ordered pass.
// Every pair must already carry a qe_score.
inline FilterOutcome filter_and_dedup(const std::vector<ParallelPair>& pairs, double threshold) {
    FilterOutcome outcome;
    std::unordered_set<std::string> seen_sources;
    for (const auto& pair : pairs) {
        if (!pair.qe_score)
            throw std::invalid_argument("filter_and_dedup: pair without qe_score");
        if (*pair.qe_score < threshold) {
            outcome.dropped.push_back({pair, DropReason::below_threshold});
            continue;
        }
        std::string key = text::normalize_key(pair.source.stripped);
        if (!seen_sources.insert(key).second) {
            outcome.dropped.push_back({pair, DropReason::duplicate_source});
            continue;
        }
        outcome.kept.push_back(pair);
    }
    return outcome;
}

} // namespace duterm
