#pragma once

// Deterministic fixture corpus for hermetic pipeline runs: per-direction
// terminology dictionaries, draft translations (pass-through pseudo-NMT),
// and gold-ish references with the proper target terms substituted in.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "duterm/dictionary.hpp"
#include "duterm/modes.hpp"
#include "duterm/pipeline.hpp"
#include "duterm/submission.hpp"
#include "duterm/text.hpp"

namespace fixtures {

using namespace duterm;

inline const std::vector<std::string>& source_terms() {
    static const std::vector<std::string> terms = {
        // single-word
        "cloud", "server", "ticker", "audit", "latency", "broker", "gateway", "invoice",
        "firewall", "margin", "payload", "hedge", "kernel", "dividend", "cache", "treasury",
        "router", "liquidity", "sandbox", "collateral", "uptime", "arbitrage", "failover",
        "custody", "throughput",
        // multi-word (exercise longest-first shadowing against their prefixes)
        "cloud service", "machine translation", "risk engine", "data pipeline",
        "load balancer", "credit default swap", "exchange rate", "hash table", "order book",
        "unit test", "virtual machine", "interest rate", "message queue", "stock exchange",
        "neural network", "packet filter", "capital buffer", "query planner",
        "settlement cycle", "backup agent", "wire transfer", "billing cycle", "token bucket",
        "yield curve", "edge node"};
    return terms;
}

// ASCII -> Cyrillic lookalike transliteration for the Russian fixtures.
inline std::string to_cyrillic(const std::string& s) {
    static const char32_t map[26] = {U'а', U'б', U'ц', U'д', U'е', U'ф', U'г', U'х', U'и',
                                     U'ж', U'к', U'л', U'м', U'н', U'о', U'п', U'я', U'р',
                                     U'с', U'т', U'у', U'в', U'ш', U'х', U'ы', U'з'};
    std::string out;
    for (char c : s) {
        if (c >= 'a' && c <= 'z')
            text::append_cp(out, map[c - 'a']);
        else if (c >= 'A' && c <= 'Z')
            text::append_cp(out, text::fold_cp(map[c - 'A']) - 0x20);
        else
            out.push_back(c);
    }
    return out;
}

inline std::string upper_first(const std::string& s) {
    if (s.empty()) return s;
    std::string out = s;
    std::size_t pos = 0;
    char32_t cp = text::decode_cp(out, pos);
    if (cp >= U'a' && cp <= U'z') {
        out[0] = static_cast<char>(out[0] - 0x20);
    } else {
        // Cyrillic lowercase -> uppercase
        if (cp >= 0x430u && cp <= 0x44Fu) {
            std::string head;
            text::append_cp(head, cp - 0x20u);
            out = head + out.substr(pos);
        }
    }
    return out;
}

// Distinct, language-flavored target surface for a source term.
inline std::string target_term_for(const std::string& src, const LanguagePair& direction) {
    if (direction.target == "de") return upper_first(src) + "werk";
    if (direction.target == "es") return upper_first(src) + "ción";
    return upper_first(to_cyrillic(src));
}

inline TermDictionary proper_dictionary(const LanguagePair& direction, std::size_t n_terms = 50) {
    TermDictionary dict(direction);
    const auto& sources = source_terms();
    for (std::size_t i = 0; i < n_terms && i < sources.size(); ++i)
        dict.add(TermPair{sources[i], target_term_for(sources[i], direction), 0,
                          TermOrigin::dev_file},
                 1 + i % 3);
    return dict;
}

// Random-assignment pool: disjoint surfaces from the proper terms.
inline TermDictionary random_dictionary(const LanguagePair& direction, std::size_t n_terms = 50) {
    TermDictionary dict(direction);
    const auto& sources = source_terms();
    for (std::size_t i = 0; i < n_terms && i < sources.size(); ++i) {
        std::string src = "spare " + sources[i];
        dict.add(TermPair{src, target_term_for(src, direction), 0, TermOrigin::dev_file}, 1);
    }
    return dict;
}

inline const std::vector<std::string>& sentence_frames() {
    static const std::vector<std::string> frames = {
        "Operations staff rely on the {a} during peak hours.",
        "Quarterly planning starts with the {a} review.",
        "Regulators approved the {a} proposal last week.",
        "Engineers documented the {a} configuration in detail.",
        "The {a} upgrade reduced reported incidents.",
        "Finance signed off on the {a} rollout alongside the {b} review.",
        "Both the {a} and the {b} were covered by the same change window.",
        "Customers asked how the {a} interacts with the {b} in production."};
    return frames;
}

// Draft inputs: source embeds one or two dictionary terms; the draft is a
// pass-through copy of the source (the NMT stage is out of scope and this
// pseudo-draft keeps every improvement observable).
inline std::vector<DraftRecord> make_drafts(const TermDictionary& dict, std::size_t count) {
    std::vector<DraftRecord> drafts;
    const auto& frames = sentence_frames();
    const auto& entries = dict.entries();
    for (std::size_t i = 0; i < count; ++i) {
        const std::string& frame = frames[i % frames.size()];
        std::string source = frame;
        auto substitute = [&](const std::string& key, const std::string& value) {
            std::size_t pos = source.find(key);
            if (pos != std::string::npos) source.replace(pos, key.size(), value);
        };
        substitute("{a}", entries[(i * 7 + 3) % entries.size()].source_term);
        substitute("{b}", entries[(i * 13 + 11) % entries.size()].source_term);
        drafts.push_back({i + 1, source, source});
    }
    return drafts;
}

// Pseudo-references: the source with every matching proper term replaced by
// its target side, so constraint-respecting hypotheses score well.
inline std::vector<ReferenceRecord> make_references(const std::vector<DraftRecord>& drafts,
                                                    const TermDictionary& proper) {
    std::vector<ReferenceRecord> refs;
    refs.reserve(drafts.size());
    for (const auto& d : drafts) {
        std::string ref = d.source;
        for (const auto& entry : proper.lookup(d.source)) {
            std::size_t pos = 0;
            while ((pos = ref.find(entry.source_term, pos)) != std::string::npos) {
                ref.replace(pos, entry.source_term.size(), entry.target_term);
                pos += entry.target_term.size();
            }
        }
        refs.push_back({d.segment_id, ref});
    }
    return refs;
}

// Writes dictionaries, drafts, and references for every supported direction
// under root/{dicts,drafts,refs}.
struct FixtureTree {
    std::filesystem::path dicts;
    std::filesystem::path drafts;
    std::filesystem::path refs;
};

inline FixtureTree write_fixture_tree(const std::filesystem::path& root,
                                      std::size_t segments_per_direction) {
    namespace fs = std::filesystem;
    FixtureTree tree{root / "dicts", root / "drafts", root / "refs"};
    fs::create_directories(tree.dicts);
    fs::create_directories(tree.drafts);
    fs::create_directories(tree.refs);
    for (const auto& direction : supported_directions()) {
        TermDictionary proper = proper_dictionary(direction);
        TermDictionary random = random_dictionary(direction);
        save_dictionary(proper,
                        pipeline::dictionary_path(tree.dicts, direction, TerminologyMode::proper));
        save_dictionary(random,
                        pipeline::dictionary_path(tree.dicts, direction, TerminologyMode::random));
        std::vector<DraftRecord> drafts = make_drafts(proper, segments_per_direction);
        save_drafts(drafts, tree.drafts / (direction.str() + ".drafts.jsonl"));
        save_references(make_references(drafts, proper),
                        tree.refs / (direction.str() + ".refs.jsonl"));
    }
    return tree;
}

// Runs the post-edit stage for every (direction, mode) cell over the
// fixture drafts and writes a complete 9-file submission directory.
struct GridRun {
    FixtureTree tree;
    std::filesystem::path submissions;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

inline GridRun run_pipeline_grid(const std::filesystem::path& root,
                                 std::size_t segments_per_direction, std::uint64_t seed) {
    GridRun run;
    run.tree = write_fixture_tree(root, segments_per_direction);
    run.submissions = root / "submissions";
    std::filesystem::create_directories(run.submissions);

    PipelineConfig cfg;
    cfg.seed = seed;
    cfg.postedit.parallelism = 4;

    MockBackend backend(seed);
    for (const auto& direction : supported_directions()) {
        TermDictionary proper = load_serialized_dictionary(
            pipeline::dictionary_path(run.tree.dicts, direction, TerminologyMode::proper),
            direction);
        TermDictionary random = load_serialized_dictionary(
            pipeline::dictionary_path(run.tree.dicts, direction, TerminologyMode::random),
            direction);
        std::vector<DraftRecord> drafts =
            load_drafts(run.tree.drafts / (direction.str() + ".drafts.jsonl"));
        for (TerminologyMode mode : all_modes()) {
            pipeline::PosteditRunOutcome outcome = pipeline::run_postedit(
                drafts, direction, mode, proper, random, cfg, backend, nullptr);
            run.accepted += outcome.result.accepted.size();
            run.rejected += outcome.result.rejected.size();
            save_submission(outcome.result.accepted,
                            run.submissions / submission_filename(direction, mode));
        }
    }
    return run;
}

} // namespace fixtures
