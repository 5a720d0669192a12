#include "csi/sim/upstream.hpp"

#include <httplib.h>
#include <json.hpp>

namespace csi::sim {

using nlohmann::json;

std::optional<std::pair<std::int64_t, std::int64_t>> parse_usage_marker(const std::string& text) {
    const std::string open = "[[usage:";
    const size_t pos = text.rfind(open);
    if (pos == std::string::npos) return std::nullopt;
    const size_t comma = text.find(',', pos + open.size());
    const size_t close = text.find("]]", pos + open.size());
    if (comma == std::string::npos || close == std::string::npos || comma > close)
        return std::nullopt;
    try {
        const std::int64_t in = std::stoll(text.substr(pos + open.size(), comma - pos - open.size()));
        const std::int64_t out = std::stoll(text.substr(comma + 1, close - comma - 1));
        return std::make_pair(in, out);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::string usage_marker(std::int64_t input_tokens, std::int64_t output_tokens) {
    return "[[usage:" + std::to_string(input_tokens) + "," + std::to_string(output_tokens) + "]]";
}

UpstreamStub::UpstreamStub() : server_(std::make_unique<httplib::Server>()) {
    server_->Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                 httplib::Response& res) {
        requests_.fetch_add(1);
        json body = json::parse(req.body, nullptr, false);
        std::string last_user;
        std::int64_t in = 0;
        std::int64_t out = 0;
        if (body.is_object() && body.contains("messages") && body["messages"].is_array()) {
            for (const auto& msg : body["messages"]) {
                if (msg.value("role", "") != "user") continue;
                if (!msg.contains("content") || !msg["content"].is_string()) continue;
                last_user = msg["content"].get<std::string>();
                if (auto usage = parse_usage_marker(last_user)) {
                    in = usage->first;
                    out = usage->second;
                }
            }
        }
        json reply{{"id", "chatcmpl-upstream"},
                   {"object", "chat.completion"},
                   {"created", 0},
                   {"model", body.is_object() ? body.value("model", "sim") : "sim"},
                   {"choices",
                    json::array({json{{"index", 0},
                                      {"message", json{{"role", "assistant"},
                                                       {"content", "echo: " + last_user}}},
                                      {"finish_reason", "stop"}}})},
                   {"usage", json{{"prompt_tokens", in},
                                  {"completion_tokens", out},
                                  {"total_tokens", in + out}}}};
        res.status = 200;
        res.set_content(reply.dump(), "application/json");
    });
}

UpstreamStub::~UpstreamStub() { stop(); }

int UpstreamStub::start() {
    port_ = server_->bind_to_any_port("127.0.0.1");
    if (port_ <= 0) throw std::runtime_error("upstream stub failed to bind");
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port_;
}

void UpstreamStub::stop() {
    if (server_ && server_->is_running()) server_->stop();
    if (thread_.joinable()) thread_.join();
}

} // namespace csi::sim
