#pragma once

// LLM post-editing: per-record prompt construction (with or without
// terminology constraints), batch dispatch at fixed low temperature, and
// acceptance validation of every hypothesis (format, tag integrity, and
// required-term satisfaction) with a single retry before rejection.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "duterm/backend.hpp"
#include "duterm/dictionary.hpp"
#include "duterm/modes.hpp"
#include "duterm/prompts.hpp"
#include "duterm/tagging.hpp"
#include "duterm/text.hpp"

namespace duterm {

struct TranslationRecord {
    std::uint64_t segment_id = 0;
    LanguagePair direction{"en", "de"};
    TerminologyMode mode = TerminologyMode::noterm;
    std::string source;
    std::string draft;      // NMT hypothesis going in
    std::string hypothesis; // post-edited text coming out
    std::vector<TermPair> required_terms;
};

// Renders the required-terminology prompt when terms are present, the
// quality-only variant otherwise. term_str renders as
// "src1": "tgt1", "src2": "tgt2".
inline std::string build_postedit_prompt(const TranslationRecord& rec) {
    if (text::trim(rec.draft).empty())
        throw std::invalid_argument("post-edit prompt needs a non-empty draft");
    std::string target_lang = rec.direction.target_name();
    if (rec.required_terms.empty()) {
        return prompts::render(prompts::kPosteditNotermTemplate,
                               {{"target_lang", target_lang},
                                {"source", rec.source},
                                {"translation", rec.draft}});
    }
    std::string term_str;
    for (std::size_t i = 0; i < rec.required_terms.size(); ++i) {
        if (i) term_str += ", ";
        term_str += "\"" + rec.required_terms[i].source_term + "\": \"" +
                    rec.required_terms[i].target_term + "\"";
    }
    return prompts::render(prompts::kPosteditTermTemplate, {{"target_lang", target_lang},
                                                            {"source", rec.source},
                                                            {"translation", rec.draft},
                                                            {"term_str", term_str}});
}

// Constraint check used at acceptance time: whitespace-normalized,
// case-insensitive, word-boundary containment.
inline bool satisfies_constraint(std::string_view hypothesis, std::string_view target_term) {
    text::MatchOptions opts;
    opts.fold_case = true;
    opts.word_boundary = true;
    return text::contains_term(hypothesis, target_term, opts);
}

namespace postedit_detail {

// Empty return means accepted.
inline std::vector<std::string> validate_hypothesis(const TranslationRecord& rec,
                                                    const std::string& hypothesis) {
    std::vector<std::string> reasons;
    if (text::trim(hypothesis).empty()) {
        reasons.push_back("empty-hypothesis");
        return reasons;
    }
    bool draft_had_tags = contains_tag_markup(rec.draft);
    if (contains_tag_markup(hypothesis)) {
        if (!draft_had_tags)
            reasons.push_back("unexpected-tags");
        else if (!verify_tags(hypothesis).well_formed())
            reasons.push_back("tag-integrity");
    }
    std::string hyp_plain = strip_tags(hypothesis).text;
    for (const auto& term : rec.required_terms)
        if (!satisfies_constraint(hyp_plain, term.target_term))
            reasons.push_back("missing-term: " + term.target_term);
    return reasons;
}

} // namespace postedit_detail

struct RejectedRecord {
    TranslationRecord record;
    std::vector<std::string> reasons;
};

struct PosteditOutcome {
    std::vector<TranslationRecord> accepted; // input order, hypothesis filled
    std::vector<RejectedRecord> rejected;    // input order
    int max_in_flight = 0;
};

// Post-edits a batch. Each failed record (backend error or validation
// failure) is resubmitted once with the same prompt before being rejected.
inline PosteditOutcome postedit_batch(TextGenBackend& backend,
                                      const std::vector<TranslationRecord>& records,
                                      double temperature = 0.3, std::size_t parallelism = 1,
                                      const RetryPolicy& retry = {}) {
    PosteditOutcome outcome;
    if (records.empty()) return outcome;

    std::vector<GenerationRequest> requests;
    requests.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        GenerationRequest req;
        req.prompt = build_postedit_prompt(records[i]);
        req.temperature = temperature;
        req.max_outputs = 1;
        req.request_id = records[i].segment_id;
        requests.push_back(std::move(req));
    }

    struct Attempt {
        std::optional<std::string> hypothesis;
        std::vector<std::string> reasons;
    };
    std::vector<Attempt> state(records.size());

    auto run_round = [&](const std::vector<std::size_t>& indices) {
        std::vector<GenerationRequest> round;
        round.reserve(indices.size());
        for (std::size_t i : indices) round.push_back(requests[i]);
        BatchOutcome batch = generate_batch(backend, round, parallelism, retry);
        outcome.max_in_flight = std::max(outcome.max_in_flight, batch.max_in_flight);
        for (std::size_t j = 0; j < indices.size(); ++j) {
            std::size_t i = indices[j];
            if (!batch.results[j]) {
                state[i].hypothesis.reset();
                continue;
            }
            state[i].hypothesis = batch.results[j]->completions.front();
            state[i].reasons = postedit_detail::validate_hypothesis(records[i],
                                                                    *state[i].hypothesis);
        }
        for (const auto& err : batch.errors) state[indices[err.index]].reasons = {err.message};
    };

    std::vector<std::size_t> all(records.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    run_round(all);

    std::vector<std::size_t> failed;
    for (std::size_t i = 0; i < records.size(); ++i)
        if (!state[i].reasons.empty() || !state[i].hypothesis) failed.push_back(i);
    if (!failed.empty()) run_round(failed);

    for (std::size_t i = 0; i < records.size(); ++i) {
        if (state[i].hypothesis && state[i].reasons.empty()) {
            TranslationRecord rec = records[i];
            rec.hypothesis = *state[i].hypothesis;
            outcome.accepted.push_back(std::move(rec));
        } else {
            std::vector<std::string> reasons = state[i].reasons;
            if (reasons.empty()) reasons.push_back("backend-error");
            outcome.rejected.push_back({records[i], std::move(reasons)});
        }
    }
    return outcome;
}

} // namespace duterm
