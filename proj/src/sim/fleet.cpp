#include "csi/sim/fleet.hpp"

#include <stdexcept>

#include "csi/wire/translate.hpp"

namespace csi::sim {

Fleet::Fleet(const std::string& ledger_path, std::shared_ptr<ManualClock> clock,
             proxy::InjectionHook* hook)
    : clock_(std::move(clock)),
      hook_(hook),
      ledger_(std::make_shared<proxy::LedgerWriter>(ledger_path)) {
    upstream_.start();
}

Fleet::~Fleet() = default;

void Fleet::add_scaffold(const std::string& id, wire::Dialect dialect) {
    if (proxies_.count(id)) return;
    proxy::RouteTable table;
    table.scaffold_id = id;
    proxy::Route route;
    route.path_prefix = wire::default_api_path(dialect);
    route.inbound = dialect;
    route.upstream = wire::Dialect::OpenAiChatCompletions;
    route.upstream_host = "127.0.0.1";
    route.upstream_port = upstream_.port();
    route.upstream_path = wire::default_api_path(wire::Dialect::OpenAiChatCompletions);
    table.routes.push_back(route);

    auto server = std::make_unique<proxy::ProxyServer>(table, ledger_, clock_, hook_);
    const int port = server->start();
    proxies_.emplace(id, std::move(server));
    endpoints_[id] = ProxyEndpoint{port, dialect, route.path_prefix};
}

void Fleet::add_scaffolds(const std::vector<orch::ScaffoldSpec>& specs) {
    for (const auto& spec : specs) add_scaffold(spec.id, spec.dialect);
}

ProxyEndpoint Fleet::endpoint(const std::string& scaffold_id) const {
    auto it = endpoints_.find(scaffold_id);
    if (it == endpoints_.end())
        throw std::invalid_argument("no proxy for scaffold: " + scaffold_id);
    return it->second;
}

orch::DriverFactory Fleet::factory(ScriptSet scripts) {
    return [this, scripts = std::move(scripts)](
               const orch::SessionSetup& setup) -> std::unique_ptr<orch::SessionDriver> {
        const AgentScript* script = scripts.find(setup.spec->id);
        ChallengePlan plan =
            script ? script->plan_for(setup.challenge->name) : ChallengePlan{};
        const std::string model = script ? script->model : setup.spec->model_id;
        return std::make_unique<SimAgent>(setup, std::move(plan), endpoint(setup.spec->id), model);
    };
}

} // namespace csi::sim
