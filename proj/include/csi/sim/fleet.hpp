#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "csi/blackboard/engine.hpp"
#include "csi/orch/campaign.hpp"
#include "csi/proxy/ledger.hpp"
#include "csi/proxy/server.hpp"
#include "csi/sim/agent.hpp"
#include "csi/sim/script.hpp"
#include "csi/sim/upstream.hpp"

namespace csi::sim {

/// Everything a simulated campaign shares: one upstream endpoint, one cost
/// ledger, one routing proxy per scaffold (each scaffold's identity is its
/// port), and the glue that turns agent scripts into session drivers.
class Fleet {
public:
    /// The hook (usually the blackboard injection engine) is wired into
    /// every proxy; sessions that never register with it see no directives.
    Fleet(const std::string& ledger_path, std::shared_ptr<ManualClock> clock,
          proxy::InjectionHook* hook = nullptr);
    ~Fleet();

    Fleet(const Fleet&) = delete;
    Fleet& operator=(const Fleet&) = delete;

    void add_scaffold(const std::string& id, wire::Dialect dialect);
    void add_scaffolds(const std::vector<orch::ScaffoldSpec>& specs);

    ProxyEndpoint endpoint(const std::string& scaffold_id) const;
    std::shared_ptr<proxy::LedgerWriter> ledger() const { return ledger_; }
    const std::string& ledger_path() const { return ledger_->path(); }
    std::int64_t upstream_requests() const { return upstream_.request_count(); }

    /// Driver factory over a script set; scaffolds without a script (or a
    /// script without this challenge) idle to timeout.
    orch::DriverFactory factory(ScriptSet scripts);

private:
    std::shared_ptr<ManualClock> clock_;
    proxy::InjectionHook* hook_;
    UpstreamStub upstream_;
    std::shared_ptr<proxy::LedgerWriter> ledger_;
    std::map<std::string, std::unique_ptr<proxy::ProxyServer>> proxies_;
    std::map<std::string, ProxyEndpoint> endpoints_;
};

} // namespace csi::sim
