#pragma once

// Deterministic offline text-generation backend. Generation prompts are
// parsed back through their own templates and answered with well-formed
// EN/{target} pairs built from fixed sentence frames; post-edit prompts are
// answered with the current translation, required target terms substituted
// in. Output text is a pure function of (prompt, temperature, seed);
// failure-injection knobs exist for tests only.

#include <array>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "duterm/backend.hpp"
#include "duterm/prompts.hpp"
#include "duterm/rng.hpp"
#include "duterm/tagging.hpp"
#include "duterm/text.hpp"

namespace duterm {

class MockBackend final : public TextGenBackend {
  public:
    explicit MockBackend(std::uint64_t seed = 0) : seed_(seed) {}

    std::string name() const override { return "mock"; }

    // --- failure injection (tests) ---
    std::set<std::uint64_t> fail_requests;           // transport error
    std::set<std::uint64_t> empty_completion_requests;
    std::set<std::string> refuse_terms;              // never substituted in post-edits
    bool auth_fail = false;
    int fail_first_attempts = 0;                     // transport errors for the first N calls

    std::uint64_t calls() const { return calls_.load(); }

    GenerationResult generate_once(const GenerationRequest& req) override {
        std::uint64_t call = calls_.fetch_add(1) + 1;
        if (auth_fail)
            throw backend_error(backend_error::Kind::auth, "mock: authentication rejected");
        if (static_cast<std::int64_t>(call) <= fail_first_attempts)
            throw backend_error(backend_error::Kind::transport, "mock: injected transport failure");
        if (fail_requests.count(req.request_id))
            throw backend_error(backend_error::Kind::transport,
                                "mock: injected failure for request " +
                                    std::to_string(req.request_id));

        GenerationResult result;
        result.request_id = req.request_id;
        if (empty_completion_requests.count(req.request_id)) {
            result.completions.assign(static_cast<std::size_t>(req.max_outputs), "");
            return result;
        }
        std::uint64_t key = rng::mix(seed_, rng::fnv1a64(req.prompt));
        std::uint64_t temp_bits;
        double temp = req.temperature;
        static_assert(sizeof(temp_bits) == sizeof(temp));
        std::memcpy(&temp_bits, &temp, sizeof(temp));
        key = rng::mix(key, temp_bits);
        for (int j = 0; j < req.max_outputs; ++j)
            result.completions.push_back(complete(req.prompt, rng::mix(key, j)));
        return result;
    }

  private:
    struct ParsedTerms {
        std::vector<std::pair<std::string, std::string>> pairs;
        std::string target_lang;
        int n = 1;
    };

    std::string complete(const std::string& prompt, std::uint64_t key) const {
        if (auto vals = prompts::extract(prompts::kSingleTermTemplate, prompt)) {
            ParsedTerms parsed;
            parsed.pairs.emplace_back(vals->at("source_term"), vals->at("target_term"));
            parsed.target_lang = vals->at("target_lang");
            parsed.n = std::max(1, std::atoi(vals->at("n").c_str()));
            return render_pairs(parsed, key);
        }
        if (auto vals = prompts::extract(prompts::kMultiTermTemplate, prompt)) {
            ParsedTerms parsed;
            parsed.target_lang = vals->at("target_lang");
            parsed.n = std::max(1, std::atoi(vals->at("n").c_str()));
            for (std::string_view rest = vals->at("terms_str"); !rest.empty();) {
                std::size_t nl = rest.find('\n');
                std::string_view line = rest.substr(0, nl);
                rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
                std::size_t sep = line.find(" : ");
                if (sep == std::string_view::npos) continue;
                parsed.pairs.emplace_back(text::trim(line.substr(0, sep)),
                                          text::trim(line.substr(sep + 3)));
            }
            return render_pairs(parsed, key);
        }
        if (auto vals = prompts::extract(prompts::kPosteditTermTemplate, prompt))
            return postedit(vals->at("translation"), parse_term_str(vals->at("term_str")));
        if (auto vals = prompts::extract(prompts::kPosteditNotermTemplate, prompt))
            return vals->at("translation");
        // Unrecognized prompt: echo something harmless but deterministic.
        return "OK";
    }

    // "src1": "tgt1", "src2": "tgt2"
    static std::vector<std::pair<std::string, std::string>> parse_term_str(std::string_view s) {
        std::vector<std::pair<std::string, std::string>> out;
        std::size_t pos = 0;
        auto read_quoted = [&]() -> std::optional<std::string> {
            pos = s.find('"', pos);
            if (pos == std::string_view::npos) return std::nullopt;
            std::size_t end = s.find('"', pos + 1);
            if (end == std::string_view::npos) return std::nullopt;
            std::string val(s.substr(pos + 1, end - pos - 1));
            pos = end + 1;
            return val;
        };
        while (pos < s.size()) {
            auto src = read_quoted();
            if (!src) break;
            auto tgt = read_quoted();
            if (!tgt) break;
            out.emplace_back(std::move(*src), std::move(*tgt));
        }
        return out;
    }

    std::string postedit(const std::string& translation,
                         const std::vector<std::pair<std::string, std::string>>& terms) const {
        std::string hyp = translation;
        text::MatchOptions opts;
        opts.fold_case = true;
        opts.word_boundary = true;
        for (const auto& [src, tgt] : terms) {
            if (refuse_terms.count(tgt)) continue;
            if (text::contains_term(hyp, tgt, opts)) continue;
            auto occurrences = text::find_occurrences(hyp, src, opts);
            // replace right to left so earlier offsets stay valid
            for (auto it = occurrences.rbegin(); it != occurrences.rend(); ++it)
                hyp.replace(it->first, it->second - it->first, tgt);
        }
        // A replacement can clobber an overlapping term handled earlier
        // (e.g. "cloud" inside an inserted "cloud service" target); a final
        // append pass restores the guarantee that every required target
        // term is present.
        for (const auto& [src, tgt] : terms) {
            if (refuse_terms.count(tgt)) continue;
            if (!text::contains_term(hyp, tgt, opts)) hyp += " " + tgt;
        }
        return hyp;
    }

    std::string render_pairs(const ParsedTerms& parsed, std::uint64_t key) const {
        std::string out;
        for (int i = 0; i < parsed.n; ++i) {
            std::uint64_t pick = rng::mix(key, static_cast<std::uint64_t>(i));
            out += "EN: " + fill_frame(en_frames(parsed.pairs.size()), pick, parsed.pairs, true);
            out += "\n" + parsed.target_lang + ": " +
                   fill_frame(tgt_frames(parsed.pairs.size()), pick, parsed.pairs, false);
            out += "\n\n";
        }
        return out;
    }

    // Sentence frames; {0}/{1}/{2} are term slots, each used exactly once.
    static const std::vector<std::string>& en_frames(std::size_t slots) {
        static const std::vector<std::string> one = {
            "The {0} rollout finished ahead of schedule.",
            "Our platform depends on {0} for routine operations.",
            "Analysts reviewed the {0} figures this quarter.",
            "Every {0} instance is monitored around the clock."};
        static const std::vector<std::string> two = {
            "The {0} team migrated every {1} before the deadline.",
            "Auditors compared the {0} records against each {1} entry.",
            "Our {0} strategy now covers the {1} workflow as well."};
        static const std::vector<std::string> three = {
            "Using {0}, the {1} group audited each {2} release.",
            "The {0} desk reconciled the {1} ledger with every {2} statement."};
        return slots <= 1 ? one : slots == 2 ? two : three;
    }

    static const std::vector<std::string>& tgt_frames(std::size_t slots) {
        static const std::vector<std::string> one = {
            "Der Rollout von {0} wurde vorzeitig abgeschlossen.",
            "Unsere Plattform nutzt {0} im Regelbetrieb.",
            "Die Analysten pruefen die {0} Zahlen in diesem Quartal.",
            "Jede {0} Instanz wird rund um die Uhr beobachtet."};
        static const std::vector<std::string> two = {
            "Das {0} Team hat jede {1} vor der Frist migriert.",
            "Die Pruefer haben die {0} Unterlagen mit jedem {1} Eintrag verglichen.",
            "Unsere {0} Strategie deckt nun auch den {1} Ablauf ab."};
        static const std::vector<std::string> three = {
            "Mit {0} hat die {1} Gruppe jede {2} Version geprueft.",
            "Der {0} Bereich hat das {1} Buch mit jeder {2} Abrechnung abgeglichen."};
        return slots <= 1 ? one : slots == 2 ? two : three;
    }

    static std::string fill_frame(const std::vector<std::string>& frames, std::uint64_t pick,
                                  const std::vector<std::pair<std::string, std::string>>& terms,
                                  bool source_side) {
        const std::string& frame = frames[pick % frames.size()];
        std::map<std::string, std::string> slots;
        for (std::size_t i = 0; i < terms.size() && i < 3; ++i) {
            const std::string& t = source_side ? terms[i].first : terms[i].second;
            slots[std::to_string(i)] = std::string(kTagOpen) + t + std::string(kTagClose);
        }
        return prompts::render(frame, slots);
    }

    std::uint64_t seed_;
    mutable std::atomic<std::uint64_t> calls_{0};
};

} // namespace duterm
