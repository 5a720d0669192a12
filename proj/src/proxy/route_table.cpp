#include "csi/proxy/route_table.hpp"

#include <stdexcept>

namespace csi::proxy {

void RouteTable::check() const {
    for (size_t i = 0; i < routes.size(); ++i) {
        if (routes[i].path_prefix.empty() || routes[i].path_prefix[0] != '/')
            throw std::invalid_argument("route prefix must start with '/': '" + routes[i].path_prefix + "'");
        for (size_t j = 0; j < routes.size(); ++j)
            if (i != j && routes[i].path_prefix == routes[j].path_prefix)
                throw std::invalid_argument("duplicate route prefix '" + routes[i].path_prefix + "'");
    }
}

RouteDecision classify(const RouteTable& table, const std::string& path) {
    const Route* best = nullptr;
    for (const Route& r : table.routes) {
        if (path.compare(0, r.path_prefix.size(), r.path_prefix) != 0) continue;
        // Prefix must end at a path boundary: "/v1/messages" matches
        // "/v1/messages" and "/v1/messages/x" but not "/v1/messagesque".
        if (path.size() > r.path_prefix.size()) {
            const char next = path[r.path_prefix.size()];
            if (next != '/' && next != '?') continue;
        }
        if (!best || r.path_prefix.size() > best->path_prefix.size()) best = &r;
    }
    if (!best) return {RouteKind::Blocked, nullptr};
    return {RouteKind::Api, best};
}

} // namespace csi::proxy
