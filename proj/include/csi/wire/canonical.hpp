#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "csi/wire/dialect.hpp"

namespace csi::wire {

enum class Role { System, User, Assistant, ToolResult };

enum class StopReason { End, ToolUse, Length, Aborted };

enum class ExchangeKind { Request, Response };

std::string to_string(Role r);
Role role_from_string(std::string_view s);
std::string to_string(StopReason s);
StopReason stop_reason_from_string(std::string_view s);

/// One tool invocation requested by the assistant. Arguments are carried as
/// an opaque serialized string and never interpreted here.
struct ToolCall {
    std::string id;
    std::string name;
    std::string arguments;

    bool operator==(const ToolCall&) const = default;
};

struct Message {
    Role role = Role::User;
    std::string text;
    std::vector<ToolCall> tool_calls;     // assistant only
    std::string tool_call_id;             // tool-result only: the referenced call

    bool operator==(const Message&) const = default;
};

struct TokenUsage {
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;

    std::int64_t combined() const { return input_tokens + output_tokens; }
    bool operator==(const TokenUsage&) const = default;
};

struct SamplingParams {
    std::optional<double> temperature;
    std::optional<std::int64_t> max_tokens;

    bool operator==(const SamplingParams&) const = default;
};

/// Dialect-neutral pivot model for one API exchange (a request body or a
/// response body). Translation always goes through this type; no
/// dialect-to-dialect shortcut exists.
struct CanonicalExchange {
    ExchangeKind kind = ExchangeKind::Request;
    std::string model_id;
    std::vector<Message> messages;
    SamplingParams sampling;
    std::optional<TokenUsage> usage;       // responses
    std::optional<StopReason> stop_reason; // responses

    /// Unknown top-level fields from the source body, preserved verbatim.
    /// Re-emitted only when the target dialect equals extras_dialect.
    nlohmann::json extras = nlohmann::json::object();
    std::optional<Dialect> extras_dialect;

    /// Semantic equality: extras are a carriage detail and do not count.
    bool operator==(const CanonicalExchange& o) const {
        return kind == o.kind && model_id == o.model_id && messages == o.messages &&
               sampling == o.sampling && usage == o.usage && stop_reason == o.stop_reason;
    }
};

/// Structural invariants: roles are ordered sensibly and every tool-result
/// references exactly one tool call issued by an earlier assistant message.
/// Throws TranslateError (kind Malformed) on violation.
void validate(const CanonicalExchange& ex);

nlohmann::json to_json(const CanonicalExchange& ex);
CanonicalExchange canonical_from_json(const nlohmann::json& j);

} // namespace csi::wire
