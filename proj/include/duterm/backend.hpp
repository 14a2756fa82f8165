#pragma once

// Uniform text-generation backend interface with retrying single-request
// dispatch and bounded-parallelism batching. Results always come back in
// request order; per-request failures are isolated into an error report.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace duterm {

struct GenerationRequest {
    std::string prompt;
    double temperature = 0.3;
    int max_outputs = 1;
    std::uint64_t request_id = 0;

    void validate() const {
        if (!(temperature >= 0.0 && temperature <= 1.0))
            throw std::invalid_argument("temperature must be in [0, 1]");
        if (max_outputs < 1) throw std::invalid_argument("max_outputs must be >= 1");
    }
};

struct GenerationResult {
    std::uint64_t request_id = 0;
    std::vector<std::string> completions;
    std::string backend_name;
    std::chrono::microseconds latency{0};
};

class backend_error : public std::runtime_error {
  public:
    enum class Kind { transport, auth, rate_limit, malformed_response };

    backend_error(Kind kind, const std::string& what,
                  std::optional<std::chrono::milliseconds> retry_after = std::nullopt)
        : std::runtime_error(what), kind_(kind), retry_after_(retry_after) {}

    Kind kind() const { return kind_; }
    std::optional<std::chrono::milliseconds> retry_after() const { return retry_after_; }

  private:
    Kind kind_;
    std::optional<std::chrono::milliseconds> retry_after_;
};

// Implementations must be safe to call from multiple threads.
class TextGenBackend {
  public:
    virtual ~TextGenBackend() = default;
    virtual GenerationResult generate_once(const GenerationRequest& req) = 0;
    virtual std::string name() const = 0;
};

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds base_delay{100};
    std::chrono::milliseconds max_delay{2000};
};

// Validates the request, dispatches, and retries transient transport and
// rate-limit failures with capped exponential backoff. Authentication and
// malformed-response errors are never retried.
inline GenerationResult generate(TextGenBackend& backend, const GenerationRequest& req,
                                 const RetryPolicy& retry = {}) {
    req.validate();
    std::chrono::milliseconds delay = retry.base_delay;
    for (int attempt = 1;; ++attempt) {
        try {
            auto begin = std::chrono::steady_clock::now();
            GenerationResult result = backend.generate_once(req);
            result.request_id = req.request_id;
            result.backend_name = backend.name();
            result.latency = std::chrono::duration_cast<std::chrono::microseconds>(
                std::chrono::steady_clock::now() - begin);
            if (result.completions.empty())
                throw backend_error(backend_error::Kind::malformed_response,
                                    "backend returned no completions");
            return result;
        } catch (const backend_error& err) {
            bool retryable = err.kind() == backend_error::Kind::transport ||
                             err.kind() == backend_error::Kind::rate_limit;
            if (!retryable || attempt >= retry.max_attempts) throw;
            std::chrono::milliseconds wait =
                err.retry_after() ? std::min(*err.retry_after(), retry.max_delay)
                                  : std::min(delay, retry.max_delay);
            if (wait.count() > 0) std::this_thread::sleep_for(wait);
            delay *= 2;
        }
    }
}

struct BatchError {
    std::size_t index = 0;
    std::uint64_t request_id = 0;
    std::string message;
};

struct BatchOutcome {
    std::vector<std::optional<GenerationResult>> results; // request order
    std::vector<BatchError> errors;                       // failed items, by index
    int max_in_flight = 0;                                // instrumentation
};

// Runs the batch with at most `parallelism` requests in flight. Output order
// equals input order; one failure never aborts the batch.
inline BatchOutcome generate_batch(TextGenBackend& backend,
                                   const std::vector<GenerationRequest>& reqs,
                                   std::size_t parallelism, const RetryPolicy& retry = {}) {
    if (parallelism < 1) throw std::invalid_argument("parallelism must be >= 1");
    BatchOutcome outcome;
    outcome.results.resize(reqs.size());
    if (reqs.empty()) return outcome;

    std::atomic<std::size_t> next{0};
    std::atomic<int> in_flight{0};
    std::atomic<int> max_in_flight{0};
    std::mutex errors_mutex;

    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= reqs.size()) return;
            int now = in_flight.fetch_add(1) + 1;
            int seen = max_in_flight.load();
            while (seen < now && !max_in_flight.compare_exchange_weak(seen, now)) {
            }
            try {
                outcome.results[i] = generate(backend, reqs[i], retry);
            } catch (const std::exception& err) {
                std::lock_guard<std::mutex> lock(errors_mutex);
                outcome.errors.push_back({i, reqs[i].request_id, err.what()});
            }
            in_flight.fetch_sub(1);
        }
    };

    std::size_t n_workers = std::min(parallelism, reqs.size());
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::sort(outcome.errors.begin(), outcome.errors.end(),
              [](const BatchError& a, const BatchError& b) { return a.index < b.index; });
    outcome.max_in_flight = max_in_flight.load();
    return outcome;
}

} // namespace duterm
