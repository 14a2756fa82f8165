// duterm: terminology-constrained MT pipeline toolkit.
//
// Subcommands cover the two pipeline stages end to end: extract-terms,
// gen-synthetic, retag, filter, postedit, evaluate, validate. A single JSON
// config file carries every hyperparameter; --seed and --mock-backends
// override it so seeded runs are reproducible offline.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "duterm/config.hpp"
#include "duterm/pipeline.hpp"

namespace fs = std::filesystem;
using namespace duterm;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    bool mock_backends = false;

    PipelineConfig load() const {
        PipelineConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (seed) cfg.seed = *seed;
        if (mock_backends) {
            cfg.generation_backend.mock = true;
            cfg.qe_backend.mock = true;
            cfg.filter.backend = QEScorerConfig::Backend::heuristic_stub;
        }
        cfg.validate();
        return cfg;
    }
};

int cmd_extract_terms(const GlobalOpts& global, const std::string& devfile,
                      const std::string& direction_str, const std::string& out_path) {
    (void)global;
    LanguagePair direction = LanguagePair::parse(direction_str);
    TermDictionary dict = load_dictionary(devfile, direction);
    save_dictionary(dict, out_path);
    std::cerr << "[extract-terms] " << direction.str() << ": entries=" << dict.size() << "\n";
    return 0;
}

int cmd_gen_synthetic(const GlobalOpts& global, const std::string& dict_path,
                      const std::string& direction_str, const std::string& out_path) {
    PipelineConfig cfg = global.load();
    LanguagePair direction = LanguagePair::parse(direction_str);
    TermDictionary dict = load_serialized_dictionary(dict_path, direction);
    auto backend = pipeline::make_generation_backend(cfg);
    pipeline::GenOutcome outcome = pipeline::run_gen_synthetic(cfg, dict, *backend, &std::cerr);
    save_corpus(outcome.pairs, out_path);
    return 0;
}

int cmd_retag(const GlobalOpts& global, const std::string& corpus_path,
              const std::string& dict_path, const std::string& direction_str,
              const std::string& out_path) {
    (void)global;
    LanguagePair direction = LanguagePair::parse(direction_str);
    TermDictionary dict = load_serialized_dictionary(dict_path, direction);
    std::vector<ParallelPair> pairs = load_corpus(corpus_path);
    pipeline::RetagOutcome outcome = pipeline::run_retag(pairs, dict, &std::cerr);
    save_corpus(outcome.pairs, out_path);
    return 0;
}

int cmd_filter(const GlobalOpts& global, const std::string& corpus_path,
               const std::string& out_path, const std::string& drop_report_path,
               std::optional<double> threshold) {
    PipelineConfig cfg = global.load();
    if (threshold) cfg.filter.threshold = *threshold;
    cfg.filter.validate();
    std::vector<ParallelPair> pairs = load_corpus(corpus_path);
    auto scorer = pipeline::make_qe_scorer(cfg);
    pipeline::FilterRunOutcome outcome =
        pipeline::run_filter(std::move(pairs), *scorer, cfg.filter, &std::cerr);
    save_corpus(outcome.result.kept, out_path);
    if (!drop_report_path.empty()) {
        std::vector<jsonl::json> rows;
        for (const auto& d : outcome.result.dropped) {
            jsonl::json row = pair_to_json(d.pair);
            row["reason"] = to_string(d.reason);
            rows.push_back(std::move(row));
        }
        jsonl::write_lines(drop_report_path, rows);
    }
    return 0;
}

int cmd_postedit(const GlobalOpts& global, const std::string& drafts_path,
                 const std::string& direction_str, const std::string& mode_str,
                 const std::string& dicts_dir, const std::string& out_dir,
                 const std::string& rejects_path) {
    PipelineConfig cfg = global.load();
    LanguagePair direction = LanguagePair::parse(direction_str);
    TerminologyMode mode = terminology_mode_from_string(mode_str);
    TermDictionary proper_db = load_serialized_dictionary(
        pipeline::dictionary_path(dicts_dir, direction, TerminologyMode::proper), direction);
    TermDictionary random_db = load_serialized_dictionary(
        pipeline::dictionary_path(dicts_dir, direction, TerminologyMode::random), direction);
    std::vector<DraftRecord> drafts = load_drafts(drafts_path);
    auto backend = pipeline::make_generation_backend(cfg);
    pipeline::PosteditRunOutcome outcome = pipeline::run_postedit(
        drafts, direction, mode, proper_db, random_db, cfg, *backend, &std::cerr);
    fs::path out = fs::path(out_dir) / submission_filename(direction, mode);
    save_submission(outcome.result.accepted, out);
    if (!rejects_path.empty()) {
        std::vector<jsonl::json> rows;
        for (const auto& r : outcome.result.rejected) {
            jsonl::json row = record_to_json(r.record);
            row["reasons"] = r.reasons;
            rows.push_back(std::move(row));
        }
        jsonl::write_lines(rejects_path, rows);
    }
    return outcome.result.rejected.empty() ? 0 : 3;
}

int cmd_evaluate(const GlobalOpts& global, const std::string& submission_dir,
                 const std::string& refs_dir, const std::string& dicts_dir,
                 const std::string& out_dir) {
    PipelineConfig cfg = global.load();
    ValidationDbs dbs = pipeline::load_validation_dbs(dicts_dir);
    std::vector<EvalReport> rows;
    for (const auto& direction : cfg.directions) {
        auto proper_it = dbs.proper.find(direction);
        auto random_it = dbs.random.find(direction);
        if (proper_it == dbs.proper.end() || random_it == dbs.random.end())
            throw std::runtime_error("missing dictionaries for " + direction.str() + " in " +
                                     dicts_dir);
        fs::path refs_path = fs::path(refs_dir) / (direction.str() + ".refs.jsonl");
        std::vector<ReferenceRecord> refs = load_references(refs_path);
        for (TerminologyMode mode : all_modes()) {
            fs::path sub = fs::path(submission_dir) / submission_filename(direction, mode);
            if (!fs::exists(sub)) continue;
            std::vector<TranslationRecord> records = load_submission(sub);
            rows.push_back(pipeline::evaluate_records(records, refs, proper_it->second,
                                                      random_it->second, cfg.metrics,
                                                      cfg.seed));
        }
    }
    std::string table = render_report(rows);
    nlohmann::json json_rows = report_to_json(rows);
    fs::create_directories(out_dir);
    jsonl::write_text_atomic(fs::path(out_dir) / "report.txt", table);
    jsonl::write_text_atomic(fs::path(out_dir) / "report.json", json_rows.dump(2) + "\n");
    std::cout << table;
    std::cerr << "[evaluate] rows=" << rows.size() << "\n";
    return 0;
}

int cmd_validate(const GlobalOpts& global, const std::string& root,
                 const std::string& dicts_dir, bool json_output) {
    (void)global;
    ValidationDbs dbs;
    if (!dicts_dir.empty()) dbs = pipeline::load_validation_dbs(dicts_dir);
    ValidationReport report = validate_submission(root, dbs);
    if (json_output)
        std::cout << report.to_json().dump(2) << "\n";
    else
        std::cout << report.render_text();
    return report.clean() ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"duterm: terminology-constrained MT pipeline toolkit"};
    app.require_subcommand(1);

    GlobalOpts global;
    app.add_option("--config", global.config_path, "pipeline config file (JSON)");
    std::uint64_t seed_val = 0;
    auto* seed_opt = app.add_option("--seed", seed_val, "override the config seed");
    app.add_flag("--mock-backends", global.mock_backends,
                 "force the deterministic mock generation backend and the QE stub");

    std::string devfile, direction, out_path, dict_path, corpus_path, drop_report, drafts_path,
        mode_str, dicts_dir, out_dir, refs_dir, root, rejects_path, submission_dir;
    std::optional<double> threshold;
    bool json_output = false;

    auto* extract = app.add_subcommand("extract-terms",
                                       "build a terminology dictionary from a dev file");
    extract->add_option("--dev", devfile, "dev file (JSONL)")->required();
    extract->add_option("--direction", direction, "language pair, e.g. en-de")->required();
    extract->add_option("--out", out_path, "output dictionary (JSONL)")->required();

    auto* gen = app.add_subcommand("gen-synthetic", "generate a tagged synthetic corpus");
    gen->add_option("--dict", dict_path, "serialized dictionary (JSONL)")->required();
    gen->add_option("--direction", direction, "language pair")->required();
    gen->add_option("--out", out_path, "output corpus (JSONL)")->required();

    auto* retag = app.add_subcommand("retag", "re-run tag standardization over a corpus");
    retag->add_option("--corpus", corpus_path, "input corpus (JSONL)")->required();
    retag->add_option("--dict", dict_path, "serialized dictionary (JSONL)")->required();
    retag->add_option("--direction", direction, "language pair")->required();
    retag->add_option("--out", out_path, "output corpus (JSONL)")->required();

    auto* filter = app.add_subcommand("filter", "QE-score, threshold, and dedup a corpus");
    filter->add_option("--corpus", corpus_path, "input corpus (JSONL)")->required();
    filter->add_option("--out", out_path, "kept pairs (JSONL)")->required();
    filter->add_option("--drop-report", drop_report, "dropped pairs with reasons (JSONL)");
    double threshold_val = 0.0;
    auto* thr_opt = filter->add_option("--threshold", threshold_val, "QE threshold override");

    auto* postedit = app.add_subcommand("postedit", "post-edit drafts under one terminology mode");
    postedit->add_option("--drafts", drafts_path, "draft translations (JSONL)")->required();
    postedit->add_option("--direction", direction, "language pair")->required();
    postedit->add_option("--mode", mode_str, "proper | random | noterm")->required();
    postedit->add_option("--dicts", dicts_dir, "dictionary directory")->required();
    postedit->add_option("--out-dir", out_dir, "submission output directory")->required();
    postedit->add_option("--rejects", rejects_path, "rejected records with reasons (JSONL)");

    auto* evaluate = app.add_subcommand("evaluate", "score submissions and render the report");
    evaluate->add_option("--submissions", submission_dir, "submission directory")->required();
    evaluate->add_option("--refs", refs_dir, "references directory")->required();
    evaluate->add_option("--dicts", dicts_dir, "dictionary directory")->required();
    evaluate->add_option("--out-dir", out_dir, "report output directory")->required();

    auto* validate = app.add_subcommand("validate", "QA-sweep a submission directory");
    validate->add_option("--root", root, "submission directory")->required();
    validate->add_option("--dicts", dicts_dir, "dictionary directory");
    validate->add_flag("--json", json_output, "emit the report as JSON");

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt) global.seed = seed_val;
    if (*thr_opt) threshold = threshold_val;

    try {
        if (*extract) return cmd_extract_terms(global, devfile, direction, out_path);
        if (*gen) return cmd_gen_synthetic(global, dict_path, direction, out_path);
        if (*retag) return cmd_retag(global, corpus_path, dict_path, direction, out_path);
        if (*filter) return cmd_filter(global, corpus_path, out_path, drop_report, threshold);
        if (*postedit)
            return cmd_postedit(global, drafts_path, direction, mode_str, dicts_dir, out_dir,
                                rejects_path);
        if (*evaluate) return cmd_evaluate(global, submission_dir, refs_dir, dicts_dir, out_dir);
        if (*validate) return cmd_validate(global, root, dicts_dir, json_output);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
