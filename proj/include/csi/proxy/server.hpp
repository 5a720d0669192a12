#pragma once

#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "csi/clock.hpp"
#include "csi/proxy/cost.hpp"
#include "csi/proxy/ledger.hpp"
#include "csi/proxy/route_table.hpp"

namespace httplib {
class Server;
}

namespace csi::proxy {

/// Decides whether a directive gets appended to an outbound request as a
/// trailing user message. Implemented by the blackboard injection engine;
/// null hook means no injection ever.
class InjectionHook {
public:
    virtual ~InjectionHook() = default;
    virtual std::optional<std::string> before_forward(const std::string& scaffold_id,
                                                      const std::string& session_id) = 0;
};

/// Loopback routing proxy for one scaffold. POSTs matching a whitelisted
/// route are translated inbound-dialect -> canonical -> upstream dialect,
/// forwarded, and the response translated back; everything else is swallowed
/// with 200/empty. Every request lands in the ledger.
class ProxyServer {
public:
    ProxyServer(RouteTable table, std::shared_ptr<LedgerWriter> ledger, std::shared_ptr<Clock> clock,
                InjectionHook* hook = nullptr, CostRate rate = {});
    ~ProxyServer();

    ProxyServer(const ProxyServer&) = delete;
    ProxyServer& operator=(const ProxyServer&) = delete;

    /// Bind and serve on a background thread; returns the bound port.
    int start();
    void stop();
    int port() const { return port_; }
    const RouteTable& table() const { return table_; }

private:
    void handle(const std::string& path, const std::string& body, const std::string& session,
                const std::string& challenge, int& status, std::string& out);

    RouteTable table_;
    std::shared_ptr<LedgerWriter> ledger_;
    std::shared_ptr<Clock> clock_;
    InjectionHook* hook_;
    CostRate rate_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
};

} // namespace csi::proxy
