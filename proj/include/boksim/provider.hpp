#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace boksim::provider {

// Newline-delimited JSON, one document per line:
//   request  {"id": int, "op": "info" | "embed" | "score", ...}
//   response {"id": int, "ok": true, "result": ...} | {"id": int, "ok": false, "error": text}

struct ProviderInfo {
    std::string name;
    std::size_t dim = 0;
    std::size_t max_tokens = 0;
};

class Transport {
public:
    virtual ~Transport() = default;
    virtual void send_line(std::string_view line) = 0;
    // Next line without the trailing newline. Throws ProviderError on EOF or timeout.
    virtual std::string receive_line() = 0;
};

// "tcp://host:port" (or bare "host:port") connects a socket;
// "stdio:<shell command>" spawns the command and talks over its stdin/stdout.
std::unique_ptr<Transport> connect(std::string_view endpoint,
                                   std::chrono::milliseconds timeout = std::chrono::seconds(120));

// The BOKSIM_PROVIDER environment variable wins over the configured endpoint.
std::optional<std::string> resolve_endpoint(const std::optional<std::string>& configured);

using TextPair = std::pair<std::string, std::string>;

// One connection, one request in flight. Not safe to share across threads.
class ProviderClient {
public:
    explicit ProviderClient(std::unique_ptr<Transport> transport, std::size_t batch_size = 32);

    // Sends "info" and validates dim > 0 and max_tokens > 0.
    const ProviderInfo& handshake();
    const ProviderInfo& info() const;
    bool connected() const { return info_.has_value(); }

    // One dim-length vector per text, in order.
    std::vector<std::vector<double>> embed(std::span<const std::string> texts);
    // One finite score per (keyword, sentence) pair, in order.
    std::vector<double> score(std::span<const TextPair> pairs);

private:
    nlohmann::json request(nlohmann::json body);

    std::unique_ptr<Transport> transport_;
    std::size_t batch_size_;
    std::int64_t next_id_ = 1;
    std::optional<ProviderInfo> info_;
};

}  // namespace boksim::provider
