#include "csi/proxy/server.hpp"

#include <httplib.h>

#include "csi/wire/translate.hpp"

namespace csi::proxy {

using wire::Dialect;
using wire::ExchangeKind;

ProxyServer::ProxyServer(RouteTable table, std::shared_ptr<LedgerWriter> ledger,
                         std::shared_ptr<Clock> clock, InjectionHook* hook, CostRate rate)
    : table_(std::move(table)),
      ledger_(std::move(ledger)),
      clock_(std::move(clock)),
      hook_(hook),
      rate_(rate),
      server_(std::make_unique<httplib::Server>()) {
    table_.check();

    const auto post_handler = [this](const httplib::Request& req, httplib::Response& res) {
        int status = 200;
        std::string out;
        handle(req.path, req.body, req.get_header_value("x-csi-session"),
               req.get_header_value("x-csi-challenge"), status, out);
        res.status = status;
        res.set_content(out, "application/json");
    };
    server_->Post(".*", post_handler);

    // The API surface is POST-only; any other verb is telemetry by definition.
    const auto swallow = [this](const httplib::Request& req, httplib::Response& res) {
        LedgerEntry e;
        e.timestamp = rfc3339_utc(clock_->now_ms());
        e.scaffold_id = table_.scaffold_id;
        e.session_id = req.get_header_value("x-csi-session");
        e.challenge_id = req.get_header_value("x-csi-challenge");
        e.blocked = true;
        ledger_->append(e);
        res.status = 200;
        res.set_content("", "application/json");
    };
    server_->Get(".*", swallow);
    server_->Put(".*", swallow);
    server_->Patch(".*", swallow);
    server_->Delete(".*", swallow);
}

ProxyServer::~ProxyServer() { stop(); }

int ProxyServer::start() {
    if (table_.listen_port == 0) {
        port_ = server_->bind_to_any_port(table_.listen_host);
        if (port_ <= 0) throw std::runtime_error("proxy failed to bind an ephemeral port");
    } else {
        if (!server_->bind_to_port(table_.listen_host, table_.listen_port))
            throw std::runtime_error("proxy failed to bind port " + std::to_string(table_.listen_port));
        port_ = table_.listen_port;
    }
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port_;
}

void ProxyServer::stop() {
    if (server_ && server_->is_running()) server_->stop();
    if (thread_.joinable()) thread_.join();
}

void ProxyServer::handle(const std::string& path, const std::string& body, const std::string& session,
                         const std::string& challenge, int& status, std::string& out) {
    const TimeMs t0 = clock_->now_ms();
    LedgerEntry e;
    e.timestamp = rfc3339_utc(t0);
    e.scaffold_id = table_.scaffold_id;
    e.session_id = session;
    e.challenge_id = challenge;

    const RouteDecision decision = classify(table_, path);
    if (decision.kind == RouteKind::Blocked) {
        e.blocked = true;
        ledger_->append(e);
        status = 200;
        out.clear();
        return;
    }

    const Route& route = *decision.route;
    e.dialect = std::string(to_string(route.inbound));

    wire::CanonicalExchange request;
    try {
        request = wire::to_canonical(route.inbound, body, ExchangeKind::Request);
    } catch (const wire::TranslateError& err) {
        e.warning = "translate-failure: " + std::string(err.what());
        ledger_->append(e);
        status = 400;
        out = wire::error_document(route.inbound, err.what()).dump();
        return;
    }
    e.model_id = request.model_id;

    if (hook_) {
        if (auto directive = hook_->before_forward(table_.scaffold_id, session))
            request.messages.push_back({wire::Role::User, *directive, {}, ""});
    }

    std::string warning;
    if (wire::drops_extras(route.upstream, request)) warning = "extras-dropped";
    const nlohmann::json upstream_body = wire::from_canonical(route.upstream, request);

    httplib::Client client(route.upstream_host, route.upstream_port);
    client.set_connection_timeout(5, 0);
    client.set_read_timeout(30, 0);
    httplib::Result result = client.Post(route.upstream_path, upstream_body.dump(), "application/json");

    if (!result || result->status >= 500) {
        e.warning = "upstream-unreachable";
        e.latency_ms = clock_->now_ms() - t0;
        ledger_->append(e);
        status = 502;
        out = wire::error_document(route.inbound, "upstream unreachable").dump();
        return;
    }

    nlohmann::json upstream_json = nlohmann::json::parse(result->body, nullptr, false);
    if (result->status != 200 || upstream_json.is_discarded()) {
        e.warning = "upstream-error: status " + std::to_string(result->status);
        e.latency_ms = clock_->now_ms() - t0;
        ledger_->append(e);
        status = result->status;
        out = wire::error_document(route.inbound, "upstream error (status " +
                                                      std::to_string(result->status) + ")")
                  .dump();
        return;
    }

    try {
        const wire::TokenUsage usage = wire::usage_of(route.upstream, upstream_json);
        e.input_tokens = usage.input_tokens;
        e.output_tokens = usage.output_tokens;
        e.cost_e4 = compute_cost_e4(usage, rate_);
    } catch (const wire::TranslateError&) {
        e.warning = warning.empty() ? "missing-usage" : warning + ";missing-usage";
        warning.clear();
    }
    if (!warning.empty()) e.warning = warning;

    try {
        wire::CanonicalExchange response =
            wire::to_canonical(route.upstream, upstream_json, ExchangeKind::Response);
        if (e.model_id.empty()) e.model_id = response.model_id;
        out = wire::from_canonical(route.inbound, response).dump();
        status = 200;
    } catch (const wire::TranslateError& err) {
        e.warning = "translate-failure: " + std::string(err.what());
        out = wire::error_document(route.inbound, err.what()).dump();
        status = 502;
    }
    e.latency_ms = clock_->now_ms() - t0;
    ledger_->append(e);
}

} // namespace csi::proxy
