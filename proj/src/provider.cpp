#include "boksim/provider.hpp"

#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstdlib>
#include <cstring>

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "boksim/error.hpp"

namespace boksim::provider {

using nlohmann::json;

namespace {

void ignore_sigpipe() {
    static const bool done = [] {
        std::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)done;
}

void write_all(int fd, std::string_view data) {
    while (!data.empty()) {
        ssize_t n = ::write(fd, data.data(), data.size());
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw ProviderError(std::string("provider write failed: ") + std::strerror(errno));
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

// Buffered line reader over a file descriptor with a per-read timeout.
class LineReader {
public:
    LineReader(int fd, std::chrono::milliseconds timeout) : fd_(fd), timeout_(timeout) {}

    std::string next() {
        while (true) {
            auto eol = buffer_.find('\n');
            if (eol != std::string::npos) {
                std::string line = buffer_.substr(0, eol);
                buffer_.erase(0, eol + 1);
                return line;
            }
            pollfd pfd{fd_, POLLIN, 0};
            int ready = ::poll(&pfd, 1, static_cast<int>(timeout_.count()));
            if (ready == 0) {
                throw ProviderError("provider timed out");
            }
            if (ready < 0) {
                if (errno == EINTR) {
                    continue;
                }
                throw ProviderError(std::string("provider poll failed: ") + std::strerror(errno));
            }
            char chunk[65536];
            ssize_t n = ::read(fd_, chunk, sizeof(chunk));
            if (n < 0) {
                if (errno == EINTR) {
                    continue;
                }
                throw ProviderError(std::string("provider read failed: ") + std::strerror(errno));
            }
            if (n == 0) {
                throw ProviderError("provider closed the connection");
            }
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }

private:
    int fd_;
    std::chrono::milliseconds timeout_;
    std::string buffer_;
};

class SocketTransport final : public Transport {
public:
    SocketTransport(int fd, std::chrono::milliseconds timeout) : fd_(fd), reader_(fd, timeout) {}
    ~SocketTransport() override { ::close(fd_); }
    SocketTransport(const SocketTransport&) = delete;
    SocketTransport& operator=(const SocketTransport&) = delete;

    void send_line(std::string_view line) override {
        std::string framed(line);
        framed += '\n';
        write_all(fd_, framed);
    }
    std::string receive_line() override { return reader_.next(); }

private:
    int fd_;
    LineReader reader_;
};

class ProcessTransport final : public Transport {
public:
    ProcessTransport(const std::string& command, std::chrono::milliseconds timeout) {
        int to_child[2];
        int from_child[2];
        if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) {
            throw ProviderError("cannot create pipes for provider process");
        }
        pid_ = ::fork();
        if (pid_ < 0) {
            throw ProviderError("cannot fork provider process");
        }
        if (pid_ == 0) {
            ::dup2(to_child[0], STDIN_FILENO);
            ::dup2(from_child[1], STDOUT_FILENO);
            ::close(to_child[0]);
            ::close(to_child[1]);
            ::close(from_child[0]);
            ::close(from_child[1]);
            ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            ::_exit(127);
        }
        ::close(to_child[0]);
        ::close(from_child[1]);
        write_fd_ = to_child[1];
        read_fd_ = from_child[0];
        reader_.emplace(read_fd_, timeout);
    }

    ~ProcessTransport() override {
        ::close(write_fd_);
        ::close(read_fd_);
        int status = 0;
        ::waitpid(pid_, &status, 0);
    }
    ProcessTransport(const ProcessTransport&) = delete;
    ProcessTransport& operator=(const ProcessTransport&) = delete;

    void send_line(std::string_view line) override {
        std::string framed(line);
        framed += '\n';
        write_all(write_fd_, framed);
    }
    std::string receive_line() override { return reader_->next(); }

private:
    pid_t pid_ = -1;
    int write_fd_ = -1;
    int read_fd_ = -1;
    std::optional<LineReader> reader_;
};

std::unique_ptr<Transport> connect_tcp(std::string_view address, std::chrono::milliseconds timeout) {
    auto colon = address.rfind(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == address.size()) {
        throw ValidationError("provider endpoint must be host:port, got '" + std::string(address) +
                              "'");
    }
    std::string host(address.substr(0, colon));
    std::string port(address.substr(colon + 1));
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* result = nullptr;
    if (int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &result); rc != 0) {
        throw ProviderError("cannot resolve provider " + std::string(address) + ": " +
                            ::gai_strerror(rc));
    }
    int fd = -1;
    for (addrinfo* ai = result; ai != nullptr; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) {
            continue;
        }
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
            break;
        }
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(result);
    if (fd < 0) {
        throw ProviderError("provider unreachable at " + std::string(address));
    }
    return std::make_unique<SocketTransport>(fd, timeout);
}

std::vector<double> read_vector(const json& value, std::size_t dim, std::string_view ctx) {
    if (!value.is_array()) {
        throw ProviderError(std::string(ctx) + ": vector is not an array");
    }
    if (value.size() != dim) {
        throw ProviderError(std::string(ctx) + ": dimension mismatch, got " +
                            std::to_string(value.size()) + ", expected " + std::to_string(dim));
    }
    std::vector<double> out;
    out.reserve(dim);
    for (const auto& x : value) {
        if (!x.is_number() || !std::isfinite(x.get<double>())) {
            throw ProviderError(std::string(ctx) + ": non-finite or non-numeric component");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

}  // namespace

std::unique_ptr<Transport> connect(std::string_view endpoint, std::chrono::milliseconds timeout) {
    ignore_sigpipe();
    constexpr std::string_view tcp = "tcp://";
    constexpr std::string_view stdio = "stdio:";
    if (endpoint.starts_with(stdio)) {
        auto command = endpoint.substr(stdio.size());
        if (command.empty()) {
            throw ValidationError("stdio provider endpoint needs a command");
        }
        return std::make_unique<ProcessTransport>(std::string(command), timeout);
    }
    if (endpoint.starts_with(tcp)) {
        endpoint.remove_prefix(tcp.size());
    }
    return connect_tcp(endpoint, timeout);
}

std::optional<std::string> resolve_endpoint(const std::optional<std::string>& configured) {
    if (const char* env = std::getenv("BOKSIM_PROVIDER"); env != nullptr && *env != '\0') {
        return std::string(env);
    }
    return configured;
}

ProviderClient::ProviderClient(std::unique_ptr<Transport> transport, std::size_t batch_size)
    : transport_(std::move(transport)), batch_size_(batch_size == 0 ? 1 : batch_size) {}

json ProviderClient::request(json body) {
    const std::int64_t id = next_id_++;
    body["id"] = id;
    transport_->send_line(body.dump());
    std::string line = transport_->receive_line();
    json response;
    try {
        response = json::parse(line);
    } catch (const json::parse_error&) {
        throw ProviderError("provider sent malformed JSON: " + line.substr(0, 200));
    }
    if (!response.is_object() || !response.contains("id") || !response["id"].is_number_integer() ||
        !response.contains("ok") || !response["ok"].is_boolean()) {
        throw ProviderError("provider response lacks id/ok fields");
    }
    if (response["id"].get<std::int64_t>() != id) {
        throw ProviderError("provider answered request " +
                            std::to_string(response["id"].get<std::int64_t>()) + ", expected " +
                            std::to_string(id));
    }
    if (!response["ok"].get<bool>()) {
        std::string message = response.contains("error") && response["error"].is_string()
                                  ? response["error"].get<std::string>()
                                  : "unspecified error";
        throw ProviderError("provider error: " + message);
    }
    if (!response.contains("result")) {
        throw ProviderError("provider response lacks a result");
    }
    return std::move(response["result"]);
}

const ProviderInfo& ProviderClient::handshake() {
    json result = request({{"op", "info"}});
    if (!result.is_object()) {
        throw ProviderError("provider info is not an object");
    }
    ProviderInfo info;
    try {
        info.name = result.value("name", std::string());
        info.dim = result.at("dim").get<std::size_t>();
        info.max_tokens = result.at("max_tokens").get<std::size_t>();
    } catch (const json::exception& e) {
        throw ProviderError(std::string("provider info malformed: ") + e.what());
    }
    if (info.dim == 0 || info.max_tokens == 0) {
        throw ProviderError("provider info must declare dim > 0 and max_tokens > 0");
    }
    info_ = info;
    return *info_;
}

const ProviderInfo& ProviderClient::info() const {
    if (!info_) {
        throw ProviderError("provider handshake not completed");
    }
    return *info_;
}

std::vector<std::vector<double>> ProviderClient::embed(std::span<const std::string> texts) {
    const std::size_t dim = info().dim;
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (std::size_t start = 0; start < texts.size(); start += batch_size_) {
        auto batch = texts.subspan(start, std::min(batch_size_, texts.size() - start));
        json result = request({{"op", "embed"}, {"texts", batch}});
        if (!result.is_array() || result.size() != batch.size()) {
            throw ProviderError("provider returned " +
                                std::to_string(result.is_array() ? result.size() : 0) +
                                " vectors for " + std::to_string(batch.size()) + " texts");
        }
        for (std::size_t i = 0; i < batch.size(); ++i) {
            out.push_back(read_vector(result[i], dim, "embed[" + std::to_string(start + i) + "]"));
        }
    }
    return out;
}

std::vector<double> ProviderClient::score(std::span<const TextPair> pairs) {
    info();
    std::vector<double> out;
    out.reserve(pairs.size());
    for (std::size_t start = 0; start < pairs.size(); start += batch_size_) {
        auto batch = pairs.subspan(start, std::min(batch_size_, pairs.size() - start));
        json items = json::array();
        for (const auto& [kw, sent] : batch) {
            items.push_back(json::array({kw, sent}));
        }
        json result = request({{"op", "score"}, {"pairs", std::move(items)}});
        if (!result.is_array() || result.size() != batch.size()) {
            throw ProviderError("provider returned a score list of the wrong length");
        }
        for (const auto& x : result) {
            if (!x.is_number() || !std::isfinite(x.get<double>())) {
                throw ProviderError("provider returned a non-finite score");
            }
            out.push_back(x.get<double>());
        }
    }
    return out;
}

}  // namespace boksim::provider
