#pragma once

#include <optional>
#include <string>
#include <vector>

#include "csi/wire/dialect.hpp"

namespace csi::proxy {

/// One forwardable API surface on a scaffold's proxy port.
struct Route {
    std::string path_prefix;       // e.g. "/v1/messages"
    wire::Dialect inbound;         // dialect the scaffold speaks
    wire::Dialect upstream;        // dialect the upstream endpoint speaks
    std::string upstream_host;
    int upstream_port = 0;
    std::string upstream_path;     // path on the upstream endpoint
};

/// Whitelist routing for one scaffold: anything that matches no route is
/// telemetry and gets swallowed. Session attribution hangs off the listen
/// port, so each scaffold gets its own table/port.
struct RouteTable {
    std::string scaffold_id;
    std::string listen_host = "127.0.0.1";
    int listen_port = 0;           // 0 = pick an ephemeral port at bind time
    std::vector<Route> routes;

    /// Throws std::invalid_argument when prefixes shadow each other.
    void check() const;
};

enum class RouteKind { Api, Blocked };

struct RouteDecision {
    RouteKind kind = RouteKind::Blocked;
    const Route* route = nullptr;  // set when kind == Api
};

/// Longest-prefix match over the whitelist; no match means blocked.
RouteDecision classify(const RouteTable& table, const std::string& path);

} // namespace csi::proxy
