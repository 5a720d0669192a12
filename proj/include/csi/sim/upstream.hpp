#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>

namespace httplib {
class Server;
}

namespace csi::sim {

/// Last "[[usage:<in>,<out>]]" marker in a text, if any.
std::optional<std::pair<std::int64_t, std::int64_t>> parse_usage_marker(const std::string& text);

/// Render a usage marker agents embed in their prompts.
std::string usage_marker(std::int64_t input_tokens, std::int64_t output_tokens);

/// Minimal chat-completions endpoint the proxies forward to. The reply
/// echoes the final user message (so injected directives come back where the
/// agent can see them) and reports whatever usage the conversation's latest
/// usage marker declares, so scripted token trajectories survive the round
/// trip into the cost ledger.
class UpstreamStub {
public:
    UpstreamStub();
    ~UpstreamStub();

    UpstreamStub(const UpstreamStub&) = delete;
    UpstreamStub& operator=(const UpstreamStub&) = delete;

    /// Bind an ephemeral loopback port and serve; returns the port.
    int start();
    void stop();
    int port() const { return port_; }
    std::int64_t request_count() const { return requests_.load(); }

private:
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<std::int64_t> requests_{0};
};

} // namespace csi::sim
