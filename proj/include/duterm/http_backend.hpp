#pragma once

// HTTP clients for the two external services, kept behind the backend
// interfaces so the rest of the pipeline never sees the wire.
//
// Text generation: POST {endpoint}  {"prompt": str, "temperature": float,
//                  "n": int} -> {"completions": [str]}
// QE scoring:      POST {endpoint}  {"pairs": [{"src": str, "mt": str}]}
//                  -> {"scores": [float]}
//
// Credentials come from the environment (DUTERM_API_KEY) and are sent as a
// bearer token; they are never read from config files.

#include <chrono>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "duterm/backend.hpp"
#include "duterm/filtering.hpp"

namespace duterm {

inline constexpr const char* kApiKeyEnvVar = "DUTERM_API_KEY";

namespace http_detail {

struct SplitUrl {
    std::string host_and_scheme; // e.g. "http://127.0.0.1:8080"
    std::string path;            // e.g. "/v1/generate"
};

inline SplitUrl split_url(const std::string& url) {
    std::size_t scheme = url.find("://");
    std::size_t path_start = scheme == std::string::npos ? url.find('/')
                                                         : url.find('/', scheme + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

inline httplib::Headers auth_headers() {
    httplib::Headers headers;
    if (const char* key = std::getenv(kApiKeyEnvVar); key && *key)
        headers.emplace("Authorization", std::string("Bearer ") + key);
    return headers;
}

inline std::optional<std::chrono::milliseconds> retry_after_hint(const httplib::Response& res) {
    std::string v = res.get_header_value("Retry-After");
    if (v.empty()) return std::nullopt;
    return std::chrono::milliseconds(std::atol(v.c_str()) * 1000);
}

// Maps a finished (or failed) POST onto the backend error taxonomy and
// returns the response body on success.
inline std::string post_json(const std::string& endpoint, const std::string& body) {
    SplitUrl url = split_url(endpoint);
    httplib::Client client(url.host_and_scheme);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(60, 0);
    auto res = client.Post(url.path, auth_headers(), body, "application/json");
    if (!res)
        throw backend_error(backend_error::Kind::transport,
                            "transport failure for " + endpoint + ": " +
                                httplib::to_string(res.error()));
    if (res->status == 401 || res->status == 403)
        throw backend_error(backend_error::Kind::auth,
                            "authentication failed for " + endpoint + " (status " +
                                std::to_string(res->status) + ")");
    if (res->status == 429)
        throw backend_error(backend_error::Kind::rate_limit,
                            "rate limited by " + endpoint, retry_after_hint(*res));
    if (res->status < 200 || res->status >= 300)
        throw backend_error(backend_error::Kind::transport,
                            "status " + std::to_string(res->status) + " from " + endpoint);
    return res->body;
}

} // namespace http_detail

class HttpTextGenBackend final : public TextGenBackend {
  public:
    explicit HttpTextGenBackend(std::string endpoint) : endpoint_(std::move(endpoint)) {}

    std::string name() const override { return "http"; }

    GenerationResult generate_once(const GenerationRequest& req) override {
        nlohmann::json body{{"prompt", req.prompt},
                            {"temperature", req.temperature},
                            {"n", req.max_outputs}};
        std::string raw = http_detail::post_json(endpoint_, body.dump());
        nlohmann::json parsed = nlohmann::json::parse(raw, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("completions") ||
            !parsed["completions"].is_array())
            throw backend_error(backend_error::Kind::malformed_response,
                                "malformed generation response from " + endpoint_);
        GenerationResult result;
        for (const auto& c : parsed["completions"]) {
            if (!c.is_string())
                throw backend_error(backend_error::Kind::malformed_response,
                                    "non-string completion from " + endpoint_);
            result.completions.push_back(c.get<std::string>());
        }
        return result;
    }

  private:
    std::string endpoint_;
};

class HttpQEScorer final : public QEScorer {
  public:
    explicit HttpQEScorer(std::string endpoint) : endpoint_(std::move(endpoint)) {}

    std::string name() const override { return "http-qe"; }

    std::vector<double> score(
        const std::vector<std::pair<std::string, std::string>>& stripped_pairs) override {
        nlohmann::json pairs = nlohmann::json::array();
        for (const auto& [src, mt] : stripped_pairs)
            pairs.push_back({{"src", src}, {"mt", mt}});
        nlohmann::json body{{"pairs", pairs}};
        std::string raw = http_detail::post_json(endpoint_, body.dump());
        nlohmann::json parsed = nlohmann::json::parse(raw, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("scores") || !parsed["scores"].is_array())
            throw backend_error(backend_error::Kind::malformed_response,
                                "malformed QE response from " + endpoint_);
        std::vector<double> scores;
        for (const auto& s : parsed["scores"]) {
            if (!s.is_number())
                throw backend_error(backend_error::Kind::malformed_response,
                                    "non-numeric QE score from " + endpoint_);
            scores.push_back(s.get<double>());
        }
        return scores;
    }

  private:
    std::string endpoint_;
};

} // namespace duterm
