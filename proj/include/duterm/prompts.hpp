#pragma once

// The four prompt templates driving generation and post-editing, plus the
// placeholder renderer/extractor. Template text is fixed verbatim; builders
// substitute placeholders and nothing else, so prompts are reproducible and
// the deterministic mock backend can parse its own inputs back out.

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace duterm::prompts {

inline constexpr std::string_view kSingleTermTemplate =
    "Generate {n} professional, domain-specific English-({target_lang}) bilingual sentence pairs for terminology translation.\n"
    "The term pair to use is: {source_term}\\(EN) : \\\"{target_term}\\ ({target_lang})\n"
    "Requirements:\n"
    "- Each sentence pair must be natural, fluent, and contextually appropriate for IT or financial domains.\n"
    "- Include the term exactly once per sentence.\n"
    "- Wrap the term with [TERM] and [/TERM] in both the English and ({target_lang}) sentences.\n"
    "- Ensure accurate translation and alignment of the term.\n"
    "Format:\n"
    "EN: [sentence]\n"
    "{target_lang}: [sentence]\n"
    "Output exactly {n} such pairs.";

inline constexpr std::string_view kMultiTermTemplate =
    "Generate {n} professional, domain-specific English-({target_lang}) bilingual sentence pairs for terminology translation.\n"
    "Use ALL of the following term pairs in each sentence pair:\n"
    "{terms_str}\n"
    "Requirements:\n"
    "- Each sentence pair must be natural, fluent, and contextually appropriate for IT or financial domains.\n"
    "- Include each term exactly once per sentence.\n"
    "- Wrap each term with [TERM] and [/TERM] in both the English and ({target_lang}) sentences.\n"
    "- Ensure accurate translation and alignment of the terms.\n"
    "Format:\n"
    "EN: [sentence]\n"
    "{target_lang}: [sentence]\n"
    "Output exactly {n} such pairs.";

inline constexpr std::string_view kPosteditTermTemplate =
    "As an expert English-{target_lang} translator specializing in technical and business documentation, improve this {target_lang} translation.\n"
    "\n"
    "SOURCE (English): {source}\n"
    "\n"
    "CURRENT TRANSLATION ({target_lang}): {translation}\n"
    "\n"
    "REQUIRED TERMINOLOGY (English: {target_lang}): {term_str}\n"
    "\n"
    "YOUR TASK:\n"
    "1. Ensure all required terminology is correctly used\n"
    "2. Maintain the same meaning as the source text\n"
    "3. Ensure natural, fluent {target_lang} that sounds like native content\n"
    "4. Preserve formatting, numbers, and special characters\n"
    "5. Match the tone and register of the original text\n"
    "\n"
    "Return ONLY the improved {target_lang} translation with no explanations, notes, or other text.";

inline constexpr std::string_view kPosteditNotermTemplate =
    "As an expert English-{target_lang} translator specializing in technical and business documentation, improve this {target_lang} translation.\n"
    "\n"
    "SOURCE (English): {source}\n"
    "\n"
    "CURRENT TRANSLATION ({target_lang}): {translation}\n"
    "\n"
    "Note: There may be important terminology in the source text that should be translated precisely and consistently. Please ensure any technical or business terms are rendered correctly in {target_lang}.\n"
    "\n"
    "YOUR TASK:\n"
    "1. Enhance the translation for fluency and accuracy\n"
    "2. Maintain the same meaning as the source text\n"
    "3. Ensure natural, fluent {target_lang} that sounds like native content\n"
    "4. Preserve formatting, numbers, and special characters\n"
    "5. Match the tone and register of the original text\n"
    "\n"
    "Return ONLY the improved {target_lang} translation with no explanations, notes, or other text.";

// Single-pass placeholder substitution: substituted values are inserted
// verbatim and never rescanned.
inline std::string render(std::string_view tpl,
                          const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(tpl.size());
    std::size_t pos = 0;
    while (pos < tpl.size()) {
        if (tpl[pos] == '{') {
            std::size_t close = tpl.find('}', pos);
            if (close != std::string_view::npos) {
                auto it = values.find(std::string(tpl.substr(pos + 1, close - pos - 1)));
                if (it != values.end()) {
                    out += it->second;
                    pos = close + 1;
                    continue;
                }
            }
        }
        out.push_back(tpl[pos]);
        ++pos;
    }
    return out;
}

// Inverse of render over the same template: walks the template's literal
// anchors through the rendered text and captures placeholder values. A
// placeholder seen more than once keeps its first capture. Returns nullopt
// when the rendered text does not fit the template.
inline std::optional<std::map<std::string, std::string>> extract(std::string_view tpl,
                                                                 std::string_view rendered) {
    std::map<std::string, std::string> captured;
    std::size_t tpos = 0, rpos = 0;
    while (tpos < tpl.size()) {
        std::size_t open = tpl.find('{', tpos);
        std::size_t close = open == std::string_view::npos ? std::string_view::npos
                                                           : tpl.find('}', open);
        if (open == std::string_view::npos || close == std::string_view::npos) {
            // trailing literal
            std::string_view lit = tpl.substr(tpos);
            if (rendered.substr(rpos) != lit) return std::nullopt;
            return captured;
        }
        std::string_view lit = tpl.substr(tpos, open - tpos);
        if (rendered.compare(rpos, lit.size(), lit) != 0) return std::nullopt;
        rpos += lit.size();
        std::string key(tpl.substr(open + 1, close - open - 1));
        // capture until the next literal anchor
        std::size_t next_open = tpl.find('{', close + 1);
        std::string_view anchor = tpl.substr(close + 1, next_open == std::string_view::npos
                                                            ? std::string_view::npos
                                                            : next_open - close - 1);
        std::size_t value_end;
        if (anchor.empty()) {
            value_end = rendered.size();
        } else {
            value_end = rendered.find(anchor, rpos);
            if (value_end == std::string_view::npos) return std::nullopt;
        }
        std::string value(rendered.substr(rpos, value_end - rpos));
        auto [it, inserted] = captured.emplace(key, value);
        if (!inserted && it->second != value) return std::nullopt;
        rpos = value_end;
        tpos = close + 1;
    }
    if (rpos != rendered.size() && tpl.back() != '}') return std::nullopt;
    return captured;
}

} // namespace duterm::prompts
