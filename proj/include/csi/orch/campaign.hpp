#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "csi/blackboard/engine.hpp"
#include "csi/clock.hpp"
#include "csi/orch/challenge.hpp"
#include "csi/orch/environment.hpp"
#include "csi/orch/record.hpp"
#include "csi/wire/dialect.hpp"

namespace csi::orch {

enum class CampaignMode { Independent, Race, Blackboard };

std::string to_string(CampaignMode mode);
CampaignMode campaign_mode_from_string(const std::string& s);

/// One scaffold as the campaign sees it: identity, wire dialect, cooperation
/// role (blackboard mode), and a descriptive launch command.
struct ScaffoldSpec {
    std::string id;
    wire::Dialect dialect = wire::Dialect::OpenAiChatCompletions;
    std::string model_id = "alias1-mini";
    blackboard::RolePolicy role_policy;
    std::string launch;
};

/// CSI_BACKEND tag for a scaffold id (claude sessions launch as "cc").
std::string backend_tag(const std::string& scaffold_id);

/// What a session produced in one turn, and when it wants the next one.
struct TurnResult {
    std::string output;
    std::optional<TimeMs> next_in; // ms of virtual time; nullopt = session done
};

/// A running scaffold session. The simulator provides scripted drivers; a
/// container adapter would wrap real processes behind the same two calls.
class SessionDriver {
public:
    virtual ~SessionDriver() = default;
    virtual TimeMs first_delay() const = 0;
    virtual TurnResult turn() = 0;
    virtual std::int64_t turns_taken() const = 0;
};

struct SessionSetup {
    const ScaffoldSpec* spec = nullptr;
    const Challenge* challenge = nullptr;
    CampaignMode mode = CampaignMode::Independent;
    std::string session_id;
    Environment* env = nullptr;
    std::shared_ptr<blackboard::Substrate> substrate; // null outside blackboard mode
};

using DriverFactory = std::function<std::unique_ptr<SessionDriver>(const SessionSetup&)>;

/// Shared services a campaign runs on. The clock must be the same instance
/// the proxy and injection engine see, so virtual time lines up everywhere.
struct RunnerServices {
    std::shared_ptr<ManualClock> clock;
    DriverFactory factory;
    std::string ledger_path;                      // empty: skip reconciliation
    blackboard::InjectionEngine* engine = nullptr; // required for blackboard mode
    std::string work_dir;
    unsigned seed = 1;
    TimeMs grace_ms = 5000;
};

/// Run one challenge under a mode. Independent: sessions run one at a time,
/// each to flag or timeout. Race/blackboard: sessions run concurrently in
/// virtual time; the first verified flag (pattern match + equality with the
/// target's literal flag) wins and terminates the peers within the grace
/// window. Every scaffold gets a record; token/cost fields come from the
/// ledger rows of its session.
std::vector<RunRecord> run_challenge(CampaignMode mode, const Challenge& challenge,
                                     const std::vector<ScaffoldSpec>& scaffolds,
                                     RunnerServices& services, RecordWriter* records = nullptr);

/// Whole-suite campaign in manifest order.
std::vector<RunRecord> run_campaign(CampaignMode mode, const SuiteManifest& suite,
                                    const std::vector<ScaffoldSpec>& scaffolds,
                                    RunnerServices& services, RecordWriter* records = nullptr);

} // namespace csi::orch
