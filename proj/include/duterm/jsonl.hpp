#pragma once

// JSONL file helpers: line-accurate parsing and atomic writes (temp file in
// the target directory, then rename) so interrupted runs never leave a
// half-written corpus behind.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace duterm::jsonl {

using json = nlohmann::json;

class parse_error : public std::runtime_error {
  public:
    parse_error(const std::string& file, std::size_t line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
          file_(file),
          line_(line) {}

    const std::string& file() const { return file_; }
    std::size_t line() const { return line_; }

  private:
    std::string file_;
    std::size_t line_;
};

// Calls fn(line_number, parsed_object) for every non-blank line. Line
// numbers are 1-based. Throws parse_error on malformed JSON.
inline void for_each_line(const std::filesystem::path& path,
                          const std::function<void(std::size_t, const json&)>& fn) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool blank = line.find_first_not_of(" \t") == std::string::npos;
        if (blank) continue;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded())
            throw parse_error(path.string(), line_no, "malformed JSON line");
        fn(line_no, obj);
    }
}

// Atomic whole-file write: serialize every row, write to a temp file next to
// the target, then rename over it.
inline void write_lines(const std::filesystem::path& path, const std::vector<json>& rows) {
    namespace fs = std::filesystem;
    fs::path dir = path.parent_path();
    if (!dir.empty()) fs::create_directories(dir);
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        for (const auto& row : rows) out << row.dump() << '\n';
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

inline void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path dir = path.parent_path();
    if (!dir.empty()) fs::create_directories(dir);
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

// Required-field accessors with line context in error messages.

inline const json& require_field(const json& obj, const char* key, const std::string& file,
                                 std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw parse_error(file, line, std::string("missing required field \"") + key + "\"");
    return *it;
}

inline std::string require_string(const json& obj, const char* key, const std::string& file,
                                  std::size_t line) {
    const json& v = require_field(obj, key, file, line);
    if (!v.is_string())
        throw parse_error(file, line, std::string("field \"") + key + "\" must be a string");
    return v.get<std::string>();
}

} // namespace duterm::jsonl
