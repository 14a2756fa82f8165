#pragma once

// Submission file conventions shared by the post-edit writer, the evaluator,
// and the validator.
//
// Filename schema (configurable pattern): {src}-{tgt}.{mode}.jsonl
// Record schema, one object per line:
//   {"id": int, "lang": "en-de", "mode": "proper"|"random"|"noterm",
//    "source": str, "draft": str, "hypothesis": str,
//    "terms": [{"src": str, "tgt": str}]}

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "duterm/jsonl.hpp"
#include "duterm/modes.hpp"
#include "duterm/postedit.hpp"

namespace duterm {

inline constexpr std::string_view kSubmissionFilePattern = "{src}-{tgt}.{mode}.jsonl";

inline std::string submission_filename(const LanguagePair& direction, TerminologyMode mode,
                                       std::string_view pattern = kSubmissionFilePattern) {
    std::string out(pattern);
    auto replace_all = [&](std::string_view key, const std::string& value) {
        for (std::size_t pos = out.find(key); pos != std::string::npos;
             pos = out.find(key, pos + value.size()))
            out.replace(pos, key.size(), value);
    };
    replace_all("{src}", direction.source);
    replace_all("{tgt}", direction.target);
    replace_all("{mode}", to_string(mode));
    return out;
}

struct SubmissionFileName {
    LanguagePair direction;
    TerminologyMode mode;
};

// Reverses submission_filename for the default pattern.
inline std::optional<SubmissionFileName> parse_submission_filename(std::string_view name) {
    // {src}-{tgt}.{mode}.jsonl
    std::size_t dash = name.find('-');
    std::size_t dot1 = name.find('.', dash == std::string_view::npos ? 0 : dash);
    std::size_t dot2 = dot1 == std::string_view::npos ? std::string_view::npos
                                                      : name.find('.', dot1 + 1);
    if (dash == std::string_view::npos || dot1 == std::string_view::npos ||
        dot2 == std::string_view::npos)
        return std::nullopt;
    if (name.substr(dot2 + 1) != "jsonl") return std::nullopt;
    try {
        SubmissionFileName parsed{
            LanguagePair{std::string(name.substr(0, dash)),
                         std::string(name.substr(dash + 1, dot1 - dash - 1))},
            terminology_mode_from_string(name.substr(dot1 + 1, dot2 - dot1 - 1))};
        parsed.direction.validate();
        return parsed;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

inline jsonl::json record_to_json(const TranslationRecord& rec) {
    jsonl::json terms = jsonl::json::array();
    for (const auto& t : rec.required_terms)
        terms.push_back({{"src", t.source_term}, {"tgt", t.target_term}});
    return {{"id", rec.segment_id},    {"lang", rec.direction.str()},
            {"mode", to_string(rec.mode)}, {"source", rec.source},
            {"draft", rec.draft},      {"hypothesis", rec.hypothesis},
            {"terms", terms}};
}

inline TranslationRecord record_from_json(const jsonl::json& obj, const std::string& file,
                                          std::size_t line_no) {
    TranslationRecord rec;
    const auto& id = jsonl::require_field(obj, "id", file, line_no);
    if (!id.is_number_unsigned())
        throw jsonl::parse_error(file, line_no, "field \"id\" must be a non-negative integer");
    rec.segment_id = id.get<std::uint64_t>();
    try {
        rec.direction = LanguagePair::parse(jsonl::require_string(obj, "lang", file, line_no));
        rec.mode = terminology_mode_from_string(
            jsonl::require_string(obj, "mode", file, line_no));
    } catch (const std::invalid_argument& err) {
        throw jsonl::parse_error(file, line_no, err.what());
    }
    rec.source = jsonl::require_string(obj, "source", file, line_no);
    rec.draft = jsonl::require_string(obj, "draft", file, line_no);
    rec.hypothesis = jsonl::require_string(obj, "hypothesis", file, line_no);
    const auto& terms = jsonl::require_field(obj, "terms", file, line_no);
    if (!terms.is_array())
        throw jsonl::parse_error(file, line_no, "field \"terms\" must be an array");
    for (const auto& t : terms)
        rec.required_terms.push_back(TermPair{jsonl::require_string(t, "src", file, line_no),
                                              jsonl::require_string(t, "tgt", file, line_no),
                                              0, TermOrigin::dev_file});
    return rec;
}

inline void save_submission(const std::vector<TranslationRecord>& records,
                            const std::filesystem::path& path) {
    std::vector<jsonl::json> rows;
    rows.reserve(records.size());
    for (const auto& rec : records) rows.push_back(record_to_json(rec));
    jsonl::write_lines(path, rows);
}

inline std::vector<TranslationRecord> load_submission(const std::filesystem::path& path) {
    std::vector<TranslationRecord> records;
    const std::string file = path.string();
    jsonl::for_each_line(path, [&](std::size_t line_no, const jsonl::json& obj) {
        records.push_back(record_from_json(obj, file, line_no));
    });
    return records;
}

// Draft-translation input to the post-edit stage:
//   {"id": int, "source": str, "draft": str}
struct DraftRecord {
    std::uint64_t segment_id = 0;
    std::string source;
    std::string draft;
};

inline std::vector<DraftRecord> load_drafts(const std::filesystem::path& path) {
    std::vector<DraftRecord> drafts;
    const std::string file = path.string();
    jsonl::for_each_line(path, [&](std::size_t line_no, const jsonl::json& obj) {
        DraftRecord rec;
        const auto& id = jsonl::require_field(obj, "id", file, line_no);
        if (!id.is_number_unsigned())
            throw jsonl::parse_error(file, line_no, "field \"id\" must be a non-negative integer");
        rec.segment_id = id.get<std::uint64_t>();
        rec.source = jsonl::require_string(obj, "source", file, line_no);
        rec.draft = jsonl::require_string(obj, "draft", file, line_no);
        drafts.push_back(std::move(rec));
    });
    return drafts;
}

inline void save_drafts(const std::vector<DraftRecord>& drafts,
                        const std::filesystem::path& path) {
    std::vector<jsonl::json> rows;
    rows.reserve(drafts.size());
    for (const auto& d : drafts)
        rows.push_back({{"id", d.segment_id}, {"source", d.source}, {"draft", d.draft}});
    jsonl::write_lines(path, rows);
}

// Evaluation references: {"id": int, "target": str}
struct ReferenceRecord {
    std::uint64_t segment_id = 0;
    std::string target;
};

inline std::vector<ReferenceRecord> load_references(const std::filesystem::path& path) {
    std::vector<ReferenceRecord> refs;
    const std::string file = path.string();
    jsonl::for_each_line(path, [&](std::size_t line_no, const jsonl::json& obj) {
        ReferenceRecord rec;
        const auto& id = jsonl::require_field(obj, "id", file, line_no);
        if (!id.is_number_unsigned())
            throw jsonl::parse_error(file, line_no, "field \"id\" must be a non-negative integer");
        rec.segment_id = id.get<std::uint64_t>();
        rec.target = jsonl::require_string(obj, "target", file, line_no);
        refs.push_back(std::move(rec));
    });
    return refs;
}

inline void save_references(const std::vector<ReferenceRecord>& refs,
                            const std::filesystem::path& path) {
    std::vector<jsonl::json> rows;
    rows.reserve(refs.size());
    for (const auto& r : refs)
        rows.push_back({{"id", r.segment_id}, {"target", r.target}});
    jsonl::write_lines(path, rows);
}

} // namespace duterm
