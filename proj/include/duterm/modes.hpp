#pragma once

// Terminology handling modes and per-segment constraint resolution, shared
// by the post-editing stage and the evaluator so random-term assignments
// are reproducible from (run seed, segment id) alone.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "duterm/dictionary.hpp"
#include "duterm/rng.hpp"

namespace duterm {

enum class TerminologyMode { proper, random, noterm };

inline std::string to_string(TerminologyMode m) {
    switch (m) {
        case TerminologyMode::proper: return "proper";
        case TerminologyMode::random: return "random";
        default: return "noterm";
    }
}

inline TerminologyMode terminology_mode_from_string(std::string_view s) {
    if (s == "proper") return TerminologyMode::proper;
    if (s == "random") return TerminologyMode::random;
    if (s == "noterm") return TerminologyMode::noterm;
    throw std::invalid_argument("unknown terminology mode \"" + std::string(s) + "\"");
}

inline const std::vector<TerminologyMode>& all_modes() {
    static const std::vector<TerminologyMode> modes = {
        TerminologyMode::noterm, TerminologyMode::proper, TerminologyMode::random};
    return modes;
}

// Resolves the required term pairs for one source segment.
//   proper: every proper-db entry matching the source (containment lookup).
//   random: one pair drawn uniformly from the random db per matched source
//           term, deduplicated on exact pair; deterministic under seed.
//   noterm: empty.
inline std::vector<TermPair> resolve_terms(std::string_view source, TerminologyMode mode,
                                           const TermDictionary& proper_db,
                                           const TermDictionary& random_db,
                                           std::uint64_t seed) {
    if (mode == TerminologyMode::noterm) return {};
    std::vector<TermPair> matched = proper_db.lookup(source);
    if (mode == TerminologyMode::proper) return matched;
    std::vector<TermPair> out;
    if (random_db.empty()) return out;
    std::mt19937_64 gen(seed);
    for (std::size_t i = 0; i < matched.size(); ++i) {
        const TermPair& draw = random_db.entries()[rng::uniform_index(gen, random_db.size())];
        bool seen = false;
        for (const auto& p : out) seen = seen || p.same_pair(draw);
        if (!seen) out.push_back(draw);
    }
    return out;
}

// Seed convention tying a run seed to one segment; used identically at
// post-edit time and at evaluation time.
inline std::uint64_t segment_seed(std::uint64_t run_seed, std::uint64_t segment_id) {
    return rng::mix(run_seed, segment_id);
}

} // namespace duterm
