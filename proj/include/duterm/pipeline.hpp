#pragma once

// Stage orchestration shared by the CLI and the hermetic test harness. Each
// stage takes loaded inputs and returns data; file IO at the edges uses the
// atomic writers so interrupted runs are restartable.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "duterm/backend.hpp"
#include "duterm/config.hpp"
#include "duterm/dictionary.hpp"
#include "duterm/filtering.hpp"
#include "duterm/http_backend.hpp"
#include "duterm/metrics.hpp"
#include "duterm/mock_backend.hpp"
#include "duterm/modes.hpp"
#include "duterm/postedit.hpp"
#include "duterm/submission.hpp"
#include "duterm/synthgen.hpp"
#include "duterm/tagging.hpp"
#include "duterm/validation.hpp"

namespace duterm::pipeline {

inline std::unique_ptr<TextGenBackend> make_generation_backend(const PipelineConfig& cfg) {
    if (cfg.generation_backend.mock) return std::make_unique<MockBackend>(cfg.seed);
    return std::make_unique<HttpTextGenBackend>(cfg.generation_backend.endpoint);
}

inline std::unique_ptr<QEScorer> make_qe_scorer(const PipelineConfig& cfg) {
    if (cfg.qe_backend.mock) return std::make_unique<HeuristicStubScorer>();
    return std::make_unique<HttpQEScorer>(cfg.qe_backend.endpoint);
}

inline void log_line(std::ostream* log, const std::string& line) {
    if (log) *log << line << '\n';
}

// ------------------------------------------------------------ synthesis ---

struct GenOutcome {
    std::vector<ParallelPair> pairs;
    std::size_t rejected_blocks = 0;
    std::size_t backend_errors = 0;
};

// Plans, prompts, generates, and strictly parses one direction's synthetic
// corpus. Deterministic for a given (config, direction) under mock backends.
inline GenOutcome run_gen_synthetic(const PipelineConfig& cfg, const TermDictionary& dict,
                                    TextGenBackend& backend, std::ostream* log = nullptr) {
    const LanguagePair& direction = dict.direction();
    std::uint64_t dir_seed = rng::mix(cfg.seed, rng::fnv1a64(direction.str()));
    std::vector<GenPlanItem> plan =
        sample_generation_plan(dict, cfg.gen.count, dir_seed, cfg.gen.single_term_ratio,
                               cfg.gen.temperature_min, cfg.gen.temperature_max);

    std::vector<GenerationRequest> requests;
    requests.reserve(plan.size());
    for (std::size_t i = 0; i < plan.size(); ++i) {
        GenerationRequest req;
        req.prompt = plan[i].mode == GenMode::single_term
                         ? build_single_term_prompt(plan[i].terms.front(),
                                                    direction.target_name(),
                                                    cfg.gen.pairs_per_prompt)
                         : build_multi_term_prompt(plan[i].terms, direction.target_name(),
                                                   cfg.gen.pairs_per_prompt);
        req.temperature = plan[i].temperature;
        req.max_outputs = cfg.gen.completions_per_request;
        req.request_id = i;
        requests.push_back(std::move(req));
    }

    BatchOutcome batch = generate_batch(backend, requests,
                                        static_cast<std::size_t>(cfg.gen.parallelism));

    GenOutcome outcome;
    outcome.backend_errors = batch.errors.size();
    for (std::size_t i = 0; i < plan.size(); ++i) {
        if (!batch.results[i]) continue;
        for (const std::string& completion : batch.results[i]->completions) {
            ParseOutcome parsed = parse_generation_output(
                completion, direction.target_name(), cfg.gen.pairs_per_prompt, plan[i].terms,
                direction, plan[i].temperature);
            outcome.rejected_blocks += parsed.rejected.size();
            for (auto& pair : parsed.accepted) outcome.pairs.push_back(std::move(pair));
        }
    }
    log_line(log, "[gen-synthetic] " + direction.str() + ": generated=" +
                      std::to_string(outcome.pairs.size()) + " rejected=" +
                      std::to_string(outcome.rejected_blocks) + " backend_errors=" +
                      std::to_string(outcome.backend_errors));
    return outcome;
}

// ---------------------------------------------------------------- retag ---

struct RetagOutcome {
    std::vector<ParallelPair> pairs;
    std::size_t dropped = 0;  // rows left without a valid span structure
    std::size_t warnings = 0; // asymmetric-match warnings across rows
};

// Tag-standardization pass over a corpus: re-derives spans on both sides
// from the dictionary and reclassifies gen_mode from the resulting span
// count. Rows ending with zero or more than three symmetric spans are
// dropped.
inline RetagOutcome run_retag(const std::vector<ParallelPair>& pairs, const TermDictionary& dict,
                              std::ostream* log = nullptr) {
    RetagOutcome outcome;
    for (const auto& pair : pairs) {
        RetagResult retag = retag_pair(pair.source.text, pair.target.text, dict);
        outcome.warnings += retag.warnings.size();
        std::size_t spans = retag.source.spans.size();
        if (spans == 0 || spans > 3) {
            ++outcome.dropped;
            continue;
        }
        ParallelPair row = pair;
        row.source = retag.source;
        row.target = retag.target;
        row.terms_used = retag.tagged_terms;
        row.gen_mode = spans == 1 ? GenMode::single_term : GenMode::multi_term;
        outcome.pairs.push_back(std::move(row));
    }
    log_line(log, "[retag] kept=" + std::to_string(outcome.pairs.size()) + " dropped=" +
                      std::to_string(outcome.dropped) + " warnings=" +
                      std::to_string(outcome.warnings));
    return outcome;
}

// --------------------------------------------------------------- filter ---

struct FilterRunOutcome {
    FilterOutcome result;
    std::size_t score_errors = 0;
};

inline FilterRunOutcome run_filter(std::vector<ParallelPair> pairs, QEScorer& scorer,
                                   const QEScorerConfig& cfg, std::ostream* log = nullptr) {
    cfg.validate();
    if (!cfg.threshold_is_default_band())
        log_line(log, "[filter] warning: threshold " + std::to_string(cfg.threshold) +
                          " is outside the default 0.85-0.9 band");
    ScoreOutcome scored = score_pairs(std::move(pairs), scorer);
    FilterRunOutcome outcome;
    outcome.score_errors = scored.errors.size();
    if (!scored.errors.empty())
        throw std::runtime_error("QE scoring failed for " +
                                 std::to_string(scored.errors.size()) + " pairs: " +
                                 scored.errors.front().message);
    outcome.result = filter_and_dedup(scored.pairs, cfg.threshold);
    std::size_t total = outcome.result.kept.size() + outcome.result.dropped.size();
    log_line(log, "[filter] kept=" + std::to_string(outcome.result.kept.size()) + "/" +
                      std::to_string(total) + " threshold=" + std::to_string(cfg.threshold));
    return outcome;
}

// ------------------------------------------------------------- postedit ---

struct PosteditRunOutcome {
    PosteditOutcome result;
    std::vector<TranslationRecord> inputs; // records as submitted
};

inline PosteditRunOutcome run_postedit(const std::vector<DraftRecord>& drafts,
                                       const LanguagePair& direction, TerminologyMode mode,
                                       const TermDictionary& proper_db,
                                       const TermDictionary& random_db,
                                       const PipelineConfig& cfg, TextGenBackend& backend,
                                       std::ostream* log = nullptr) {
    std::vector<TranslationRecord> records;
    records.reserve(drafts.size());
    for (const auto& draft : drafts) {
        TranslationRecord rec;
        rec.segment_id = draft.segment_id;
        rec.direction = direction;
        rec.mode = mode;
        rec.source = draft.source;
        rec.draft = draft.draft;
        rec.required_terms = resolve_terms(draft.source, mode, proper_db, random_db,
                                           segment_seed(cfg.seed, draft.segment_id));
        records.push_back(std::move(rec));
    }
    PosteditRunOutcome outcome;
    outcome.inputs = records;
    outcome.result = postedit_batch(backend, records, cfg.postedit.temperature,
                                    static_cast<std::size_t>(cfg.postedit.parallelism),
                                    RetryPolicy{cfg.postedit.transport_retries,
                                                std::chrono::milliseconds(100),
                                                std::chrono::milliseconds(2000)});
    log_line(log, "[postedit] " + direction.str() + "." + to_string(mode) + ": accepted=" +
                      std::to_string(outcome.result.accepted.size()) + " rejected=" +
                      std::to_string(outcome.result.rejected.size()));
    return outcome;
}

// ------------------------------------------------------------- evaluate ---

// Scores one (direction, mode) submission against its references.
inline EvalReport evaluate_records(const std::vector<TranslationRecord>& records,
                                   const std::vector<ReferenceRecord>& refs,
                                   const TermDictionary& proper_db,
                                   const TermDictionary& random_db, const MetricConfig& cfg,
                                   std::uint64_t run_seed) {
    if (records.empty()) throw std::invalid_argument("evaluate: no records");
    std::map<std::uint64_t, const ReferenceRecord*> by_id;
    for (const auto& r : refs) by_id[r.segment_id] = &r;

    std::vector<std::string> hyps, ref_texts;
    std::vector<EvalSegment> segments;
    hyps.reserve(records.size());
    ref_texts.reserve(records.size());
    for (const auto& rec : records) {
        auto it = by_id.find(rec.segment_id);
        if (it == by_id.end())
            throw std::runtime_error("no reference for segment id " +
                                     std::to_string(rec.segment_id));
        hyps.push_back(strip_tags(rec.hypothesis).text);
        ref_texts.push_back(strip_tags(it->second->target).text);
        segments.push_back({rec.segment_id, rec.source, rec.hypothesis});
    }

    EvalReport report;
    report.direction = records.front().direction;
    report.mode = records.front().mode;
    report.segment_count = static_cast<std::int64_t>(records.size());
    report.bleu = corpus_bleu(hyps, ref_texts, cfg);
    report.chrf2pp = chrf2pp(hyps, ref_texts, cfg);
    SrResult proper = terminology_sr(segments, TerminologyMode::proper, proper_db, random_db,
                                     cfg, run_seed);
    SrResult random = terminology_sr(segments, TerminologyMode::random, proper_db, random_db,
                                     cfg, run_seed);
    report.sr_proper = proper.micro;
    report.sr_random = random.micro;
    report.sr_proper_macro = proper.macro;
    report.sr_random_macro = random.macro;
    return report;
}

// -------------------------------------------------------- dictionary IO ---

// Directory convention for per-direction dictionaries:
//   {src}-{tgt}.proper.jsonl and {src}-{tgt}.random.jsonl
inline std::filesystem::path dictionary_path(const std::filesystem::path& dir,
                                             const LanguagePair& direction,
                                             TerminologyMode which) {
    return dir / (direction.str() + "." + to_string(which) + ".jsonl");
}

inline ValidationDbs load_validation_dbs(const std::filesystem::path& dir) {
    ValidationDbs dbs;
    for (const auto& direction : supported_directions()) {
        auto proper_path = dictionary_path(dir, direction, TerminologyMode::proper);
        auto random_path = dictionary_path(dir, direction, TerminologyMode::random);
        if (std::filesystem::exists(proper_path))
            dbs.proper.emplace(direction, load_serialized_dictionary(proper_path, direction));
        if (std::filesystem::exists(random_path))
            dbs.random.emplace(direction, load_serialized_dictionary(random_path, direction));
    }
    return dbs;
}

} // namespace duterm::pipeline
