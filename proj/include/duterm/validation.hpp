#pragma once

// Submission QA sweep: filename schema, mode completeness per language
// pair, per-line JSONL structure, tag integrity of every hypothesis, and
// constraint satisfaction for constrained modes. Read-only; every failure
// is report data and the report is empty-error iff the submission passes.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "duterm/dictionary.hpp"
#include "duterm/modes.hpp"
#include "duterm/postedit.hpp"
#include "duterm/submission.hpp"
#include "duterm/tagging.hpp"

namespace duterm {

struct SchemaError {
    std::string file;
    std::size_t line = 0; // 0 = whole-file problem
    std::string reason;
};

struct MissingMode {
    LanguagePair direction;
    TerminologyMode mode;
};

struct TagFailure {
    std::string file;
    std::size_t line = 0;
};

struct ConstraintFailure {
    std::string file;
    std::size_t line = 0;
    std::vector<std::string> missing_terms;
};

struct ValidationReport {
    std::size_t files_checked = 0;
    std::vector<SchemaError> schema_errors;
    std::vector<MissingMode> missing_modes;
    std::vector<TagFailure> tag_failures;
    std::vector<ConstraintFailure> constraint_failures;

    bool clean() const {
        return schema_errors.empty() && missing_modes.empty() && tag_failures.empty() &&
               constraint_failures.empty();
    }

    std::size_t error_count() const {
        return schema_errors.size() + missing_modes.size() + tag_failures.size() +
               constraint_failures.size();
    }

    nlohmann::json to_json() const {
        nlohmann::json out;
        out["files_checked"] = files_checked;
        out["ok"] = clean();
        out["schema_errors"] = nlohmann::json::array();
        for (const auto& e : schema_errors)
            out["schema_errors"].push_back(
                {{"file", e.file}, {"line", e.line}, {"reason", e.reason}});
        out["missing_modes"] = nlohmann::json::array();
        for (const auto& m : missing_modes)
            out["missing_modes"].push_back(
                {{"lang", m.direction.str()}, {"mode", to_string(m.mode)}});
        out["tag_failures"] = nlohmann::json::array();
        for (const auto& t : tag_failures)
            out["tag_failures"].push_back({{"file", t.file}, {"line", t.line}});
        out["constraint_failures"] = nlohmann::json::array();
        for (const auto& c : constraint_failures)
            out["constraint_failures"].push_back({{"file", c.file},
                                                  {"line", c.line},
                                                  {"missing_terms", c.missing_terms}});
        return out;
    }

    std::string render_text() const {
        std::string out;
        out += "files checked: " + std::to_string(files_checked) + "\n";
        for (const auto& m : missing_modes)
            out += "missing mode file: " + m.direction.str() + " " + to_string(m.mode) + "\n";
        for (const auto& e : schema_errors)
            out += "schema error: " + e.file + ":" + std::to_string(e.line) + ": " + e.reason +
                   "\n";
        for (const auto& t : tag_failures)
            out += "tag failure: " + t.file + ":" + std::to_string(t.line) + "\n";
        for (const auto& c : constraint_failures) {
            out += "constraint failure: " + c.file + ":" + std::to_string(c.line) + ": missing";
            for (const auto& term : c.missing_terms) out += " \"" + term + "\"";
            out += "\n";
        }
        out += clean() ? "result: PASS\n" : "result: FAIL\n";
        return out;
    }
};

// Per-direction dictionary pair used for constraint validation.
struct ValidationDbs {
    std::map<LanguagePair, TermDictionary> proper;
    std::map<LanguagePair, TermDictionary> random;
};

// Validates a submission directory. Proper-file required terms are
// re-derived from the proper dictionary (the stored list is additionally
// cross-checked against it); random files are checked against their stored
// terms since the assignment seed is not a validator input.
inline ValidationReport validate_submission(const std::filesystem::path& root,
                                            const ValidationDbs& dbs,
                                            std::string_view pattern = kSubmissionFilePattern) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root))
        throw std::runtime_error("submission root is not a readable directory: " +
                                 root.string());

    ValidationReport report;

    std::map<std::string, SubmissionFileName> expected;
    for (const auto& direction : supported_directions())
        for (TerminologyMode mode : all_modes())
            expected.emplace(submission_filename(direction, mode, pattern),
                             SubmissionFileName{direction, mode});

    std::vector<std::string> present;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        std::string name = entry.path().filename().string();
        if (entry.path().extension() != ".jsonl") continue;
        present.push_back(name);
    }
    std::sort(present.begin(), present.end());

    for (const auto& [name, id] : expected) {
        if (std::find(present.begin(), present.end(), name) == present.end())
            report.missing_modes.push_back({id.direction, id.mode});
    }

    for (const std::string& name : present) {
        ++report.files_checked;
        auto it = expected.find(name);
        if (it == expected.end()) {
            report.schema_errors.push_back({name, 0, "filename does not match pattern"});
            continue;
        }
        const LanguagePair& direction = it->second.direction;
        TerminologyMode mode = it->second.mode;
        const TermDictionary* proper_db = nullptr;
        const TermDictionary* random_db = nullptr;
        if (auto db = dbs.proper.find(direction); db != dbs.proper.end())
            proper_db = &db->second;
        if (auto db = dbs.random.find(direction); db != dbs.random.end())
            random_db = &db->second;

        std::ifstream in(root / name);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.find_first_not_of(" \t") == std::string::npos) continue;
            nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
            if (obj.is_discarded()) {
                report.schema_errors.push_back({name, line_no, "malformed JSON line"});
                continue;
            }
            TranslationRecord rec;
            try {
                rec = record_from_json(obj, name, line_no);
            } catch (const jsonl::parse_error& err) {
                report.schema_errors.push_back({name, line_no, err.what()});
                continue;
            }
            if (rec.direction != direction)
                report.schema_errors.push_back({name, line_no, "lang does not match filename"});
            if (rec.mode != mode)
                report.schema_errors.push_back({name, line_no, "mode does not match filename"});
            if (text::trim(rec.hypothesis).empty())
                report.schema_errors.push_back({name, line_no, "empty hypothesis"});
            if (mode == TerminologyMode::noterm && !rec.required_terms.empty())
                report.schema_errors.push_back({name, line_no, "noterm record carries terms"});

            if (!verify_tags(rec.hypothesis).well_formed())
                report.tag_failures.push_back({name, line_no});

            if (mode == TerminologyMode::noterm) continue;

            const TermDictionary* own_db =
                mode == TerminologyMode::proper ? proper_db : random_db;
            if (own_db) {
                for (const auto& t : rec.required_terms)
                    if (!own_db->has_pair(t.source_term, t.target_term))
                        report.schema_errors.push_back(
                            {name, line_no,
                             "term pair not in " + to_string(mode) + " dictionary: \"" +
                                 t.source_term + "\" -> \"" + t.target_term + "\""});
            }

            std::vector<TermPair> required;
            if (mode == TerminologyMode::proper && proper_db)
                required = proper_db->lookup(rec.source);
            else
                required = rec.required_terms;

            std::string hyp_plain = strip_tags(rec.hypothesis).text;
            std::vector<std::string> missing;
            for (const auto& t : required)
                if (!satisfies_constraint(hyp_plain, t.target_term))
                    missing.push_back(t.target_term);
            if (!missing.empty())
                report.constraint_failures.push_back({name, line_no, std::move(missing)});
        }
    }

    auto by_file_line = [](const auto& a, const auto& b) {
        return a.file != b.file ? a.file < b.file : a.line < b.line;
    };
    std::sort(report.schema_errors.begin(), report.schema_errors.end(), by_file_line);
    std::sort(report.tag_failures.begin(), report.tag_failures.end(), by_file_line);
    std::sort(report.constraint_failures.begin(), report.constraint_failures.end(),
              by_file_line);
    return report;
}

} // namespace duterm
