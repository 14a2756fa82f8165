#pragma once

// Bilingual terminology dictionaries: ingestion from shared-task dev files,
// merging of generated term expansions, and containment lookup.
//
// Dev-file JSONL schema, one object per line:
//   {"id": int, "source": str, "target": str, "terms": [{"src": str, "tgt": str}]}
// Serialized dictionary schema:
//   {"src": str, "tgt": str, "repetition_id": int, "origin": "dev-file"|"llm-expanded"}

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "duterm/jsonl.hpp"
#include "duterm/text.hpp"

namespace duterm {

struct LanguagePair {
    std::string source; // always "en" in scope
    std::string target; // one of "de", "es", "ru"

    static LanguagePair parse(std::string_view s) {
        auto dash = s.find('-');
        if (dash == std::string_view::npos)
            throw std::invalid_argument("language pair must look like \"en-de\": got \"" +
                                        std::string(s) + "\"");
        LanguagePair lp{std::string(s.substr(0, dash)), std::string(s.substr(dash + 1))};
        lp.validate();
        return lp;
    }

    void validate() const {
        if (source != "en")
            throw std::invalid_argument("unsupported source language code \"" + source + "\"");
        if (target != "de" && target != "es" && target != "ru")
            throw std::invalid_argument("unsupported target language code \"" + target + "\"");
    }

    std::string str() const { return source + "-" + target; }

    // Language name used in prompt templates and report rows.
    std::string target_name() const {
        if (target == "de") return "German";
        if (target == "es") return "Spanish";
        return "Russian";
    }

    bool operator==(const LanguagePair&) const = default;
    auto operator<=>(const LanguagePair&) const = default;
};

inline const std::vector<LanguagePair>& supported_directions() {
    static const std::vector<LanguagePair> dirs = {
        {"en", "de"}, {"en", "es"}, {"en", "ru"}};
    return dirs;
}

enum class TermOrigin { dev_file, llm_expanded };

inline std::string to_string(TermOrigin o) {
    return o == TermOrigin::dev_file ? "dev-file" : "llm-expanded";
}

inline TermOrigin term_origin_from_string(std::string_view s) {
    if (s == "dev-file") return TermOrigin::dev_file;
    if (s == "llm-expanded") return TermOrigin::llm_expanded;
    throw std::invalid_argument("unknown term origin \"" + std::string(s) + "\"");
}

struct TermPair {
    std::string source_term;
    std::string target_term;
    std::uint64_t repetition_id = 0;
    TermOrigin origin = TermOrigin::dev_file;

    bool same_pair(const TermPair& o) const {
        return source_term == o.source_term && target_term == o.target_term;
    }
};

inline bool contains_tag_markup(std::string_view s) {
    return s.find("[TERM]") != std::string_view::npos ||
           s.find("[/TERM]") != std::string_view::npos;
}

struct MergeError {
    std::size_t index; // position in the expansion list
    std::string reason;
};

// Immutable after construction; safe for concurrent reads.
class TermDictionary {
  public:
    explicit TermDictionary(LanguagePair direction) : direction_(std::move(direction)) {
        direction_.validate();
    }

    const LanguagePair& direction() const { return direction_; }
    const std::vector<TermPair>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    bool has_pair(std::string_view src, std::string_view tgt) const {
        return pair_set_.count(pair_key(src, tgt)) != 0;
    }

    // Entries whose case-folded source_term equals the case-folded query.
    std::vector<TermPair> find_by_source(std::string_view source_term) const {
        std::vector<TermPair> out;
        auto it = index_.find(text::normalize_key(source_term));
        if (it == index_.end()) return out;
        for (std::size_t i : it->second) out.push_back(entries_[i]);
        return out;
    }

    // Adds the pair or, if (src, tgt) already exists, bumps its
    // repetition_id by `count` and keeps the existing origin.
    void add(TermPair pair, std::uint64_t count = 1) {
        std::string key = pair_key(pair.source_term, pair.target_term);
        auto it = pair_set_.find(key);
        if (it != pair_set_.end()) {
            entries_[it->second].repetition_id += count;
            return;
        }
        pair.repetition_id = count == 0 ? pair.repetition_id : count;
        insert_entry(std::move(key), std::move(pair));
    }

    // Inserts preserving the given repetition_id (serialized-form loads).
    void add_exact(TermPair pair) {
        std::string key = pair_key(pair.source_term, pair.target_term);
        if (pair_set_.count(key)) return;
        insert_entry(std::move(key), std::move(pair));
    }

    // All entries whose source_term occurs in source_text under case-folded,
    // whitespace-normalized containment; ordered by descending source_term
    // length, ties broken lexicographically. Pure read.
    std::vector<TermPair> lookup(std::string_view source_text) const {
        std::string hay = text::normalize_key(source_text);
        std::vector<TermPair> out;
        for (std::size_t i : lookup_order_) {
            if (hay.find(folded_sources_[i]) != std::string::npos) out.push_back(entries_[i]);
        }
        return out;
    }

  private:
    static std::string pair_key(std::string_view src, std::string_view tgt) {
        std::string k(src);
        k.push_back('\x1f');
        k.append(tgt);
        return k;
    }

    bool order_before(std::size_t a, std::size_t b) const {
        std::size_t la = entries_[a].source_term.size();
        std::size_t lb = entries_[b].source_term.size();
        if (la != lb) return la > lb;
        if (entries_[a].source_term != entries_[b].source_term)
            return entries_[a].source_term < entries_[b].source_term;
        return entries_[a].target_term < entries_[b].target_term;
    }

    // Keeps lookup_order_ sorted at insertion time so reads stay free of
    // shared mutable state.
    void insert_entry(std::string key, TermPair pair) {
        std::size_t idx = entries_.size();
        index_[text::normalize_key(pair.source_term)].push_back(idx);
        pair_set_.emplace(std::move(key), idx);
        folded_sources_.push_back(text::normalize_key(pair.source_term));
        entries_.push_back(std::move(pair));
        auto pos = std::lower_bound(lookup_order_.begin(), lookup_order_.end(), idx,
                                    [this](std::size_t a, std::size_t b) {
                                        return order_before(a, b);
                                    });
        lookup_order_.insert(pos, idx);
    }

    LanguagePair direction_;
    std::vector<TermPair> entries_;
    std::unordered_map<std::string, std::vector<std::size_t>> index_; // folded src -> entries
    std::unordered_map<std::string, std::size_t> pair_set_;           // (src, tgt) -> entry
    std::vector<std::string> folded_sources_;
    std::vector<std::size_t> lookup_order_; // entry indices in lookup order
};

// Parses a shared-task dev file. repetition_id of each (src, tgt) pair is
// its occurrence count across the file's lines.
inline TermDictionary load_dictionary(const std::filesystem::path& path,
                                      const LanguagePair& direction) {
    TermDictionary dict(direction);
    const std::string file = path.string();
    jsonl::for_each_line(path, [&](std::size_t line_no, const jsonl::json& obj) {
        jsonl::require_field(obj, "id", file, line_no);
        jsonl::require_string(obj, "source", file, line_no);
        jsonl::require_string(obj, "target", file, line_no);
        const auto& terms = jsonl::require_field(obj, "terms", file, line_no);
        if (!terms.is_array())
            throw jsonl::parse_error(file, line_no, "field \"terms\" must be an array");
        for (const auto& t : terms) {
            std::string src = text::trim(jsonl::require_string(t, "src", file, line_no));
            std::string tgt = text::trim(jsonl::require_string(t, "tgt", file, line_no));
            if (src.empty() || tgt.empty())
                throw jsonl::parse_error(file, line_no, "term pair has an empty side");
            if (contains_tag_markup(src) || contains_tag_markup(tgt))
                throw jsonl::parse_error(file, line_no, "term pair contains tag markup");
            dict.add(TermPair{std::move(src), std::move(tgt), 0, TermOrigin::dev_file});
        }
    });
    return dict;
}

// Union of dict and LLM-generated expansions. Exact duplicates of existing
// pairs are dropped (existing origin kept); pairs carrying tag markup or an
// empty side are rejected into the error list.
struct MergeResult {
    TermDictionary dict;
    std::vector<MergeError> errors;
};

inline MergeResult merge_expansions(const TermDictionary& dict,
                                    const std::vector<TermPair>& expanded) {
    MergeResult result{dict, {}};
    for (std::size_t i = 0; i < expanded.size(); ++i) {
        std::string src = text::trim(expanded[i].source_term);
        std::string tgt = text::trim(expanded[i].target_term);
        if (contains_tag_markup(src) || contains_tag_markup(tgt)) {
            result.errors.push_back({i, "term pair contains tag markup"});
            continue;
        }
        if (src.empty() || tgt.empty()) {
            result.errors.push_back({i, "term pair has an empty side"});
            continue;
        }
        if (result.dict.has_pair(src, tgt)) continue;
        result.dict.add_exact(TermPair{std::move(src), std::move(tgt), 0, TermOrigin::llm_expanded});
    }
    return result;
}

inline void save_dictionary(const TermDictionary& dict, const std::filesystem::path& path) {
    std::vector<jsonl::json> rows;
    rows.reserve(dict.size());
    for (const auto& e : dict.entries()) {
        rows.push_back({{"src", e.source_term},
                        {"tgt", e.target_term},
                        {"repetition_id", e.repetition_id},
                        {"origin", to_string(e.origin)}});
    }
    jsonl::write_lines(path, rows);
}

inline TermDictionary load_serialized_dictionary(const std::filesystem::path& path,
                                                 const LanguagePair& direction) {
    TermDictionary dict(direction);
    const std::string file = path.string();
    jsonl::for_each_line(path, [&](std::size_t line_no, const jsonl::json& obj) {
        TermPair pair;
        pair.source_term = jsonl::require_string(obj, "src", file, line_no);
        pair.target_term = jsonl::require_string(obj, "tgt", file, line_no);
        const auto& rep = jsonl::require_field(obj, "repetition_id", file, line_no);
        if (!rep.is_number_unsigned())
            throw jsonl::parse_error(file, line_no, "repetition_id must be a non-negative integer");
        pair.repetition_id = rep.get<std::uint64_t>();
        pair.origin = term_origin_from_string(jsonl::require_string(obj, "origin", file, line_no));
        dict.add_exact(std::move(pair));
    });
    return dict;
}

} // namespace duterm
