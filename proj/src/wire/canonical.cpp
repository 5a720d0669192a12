#include "csi/wire/canonical.hpp"

#include "csi/wire/translate.hpp"

namespace csi::wire {

std::string to_string(Role r) {
    switch (r) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
    case Role::ToolResult: return "tool-result";
    }
    return "user";
}

Role role_from_string(std::string_view s) {
    if (s == "system") return Role::System;
    if (s == "user") return Role::User;
    if (s == "assistant") return Role::Assistant;
    if (s == "tool-result") return Role::ToolResult;
    throw TranslateError(ErrorKind::MalformedBody, "role", "unknown role '" + std::string(s) + "'");
}

std::string to_string(StopReason s) {
    switch (s) {
    case StopReason::End: return "end";
    case StopReason::ToolUse: return "tool-use";
    case StopReason::Length: return "length";
    case StopReason::Aborted: return "aborted";
    }
    return "end";
}

StopReason stop_reason_from_string(std::string_view s) {
    if (s == "end") return StopReason::End;
    if (s == "tool-use") return StopReason::ToolUse;
    if (s == "length") return StopReason::Length;
    if (s == "aborted") return StopReason::Aborted;
    throw TranslateError(ErrorKind::MalformedBody, "stop_reason", "unknown stop reason '" + std::string(s) + "'");
}

void validate(const CanonicalExchange& ex) {
    std::vector<std::string> open_calls;
    for (size_t i = 0; i < ex.messages.size(); ++i) {
        const Message& m = ex.messages[i];
        const std::string where = "messages[" + std::to_string(i) + "]";
        if (!m.tool_calls.empty() && m.role != Role::Assistant)
            throw TranslateError(ErrorKind::MalformedBody, where, "tool calls on a non-assistant message");
        if (m.role == Role::ToolResult) {
            if (m.tool_call_id.empty())
                throw TranslateError(ErrorKind::MalformedBody, where, "tool-result without a referenced call id");
            bool known = false;
            for (const auto& id : open_calls)
                if (id == m.tool_call_id) known = true;
            if (!known)
                throw TranslateError(ErrorKind::MalformedBody, where,
                                     "tool-result references unknown call id '" + m.tool_call_id + "'");
        } else if (!m.tool_call_id.empty()) {
            throw TranslateError(ErrorKind::MalformedBody, where, "tool_call_id on a non-tool-result message");
        }
        for (const ToolCall& c : m.tool_calls) {
            if (c.id.empty())
                throw TranslateError(ErrorKind::MalformedBody, where, "tool call without an id");
            open_calls.push_back(c.id);
        }
    }
    if (ex.kind == ExchangeKind::Response) {
        for (const Message& m : ex.messages)
            if (m.role != Role::Assistant)
                throw TranslateError(ErrorKind::MalformedBody, "messages", "response carries a non-assistant message");
    }
}

nlohmann::json to_json(const CanonicalExchange& ex) {
    nlohmann::json j;
    j["kind"] = ex.kind == ExchangeKind::Request ? "request" : "response";
    j["model_id"] = ex.model_id;
    j["messages"] = nlohmann::json::array();
    for (const Message& m : ex.messages) {
        nlohmann::json jm;
        jm["role"] = to_string(m.role);
        jm["text"] = m.text;
        if (!m.tool_calls.empty()) {
            jm["tool_calls"] = nlohmann::json::array();
            for (const ToolCall& c : m.tool_calls)
                jm["tool_calls"].push_back({{"id", c.id}, {"name", c.name}, {"arguments", c.arguments}});
        }
        if (!m.tool_call_id.empty()) jm["tool_call_id"] = m.tool_call_id;
        j["messages"].push_back(std::move(jm));
    }
    nlohmann::json sampling = nlohmann::json::object();
    if (ex.sampling.temperature) sampling["temperature"] = *ex.sampling.temperature;
    if (ex.sampling.max_tokens) sampling["max_tokens"] = *ex.sampling.max_tokens;
    if (!sampling.empty()) j["sampling"] = std::move(sampling);
    if (ex.usage)
        j["usage"] = {{"input_tokens", ex.usage->input_tokens}, {"output_tokens", ex.usage->output_tokens}};
    if (ex.stop_reason) j["stop_reason"] = to_string(*ex.stop_reason);
    return j;
}

CanonicalExchange canonical_from_json(const nlohmann::json& j) {
    CanonicalExchange ex;
    ex.kind = j.at("kind").get<std::string>() == "response" ? ExchangeKind::Response : ExchangeKind::Request;
    ex.model_id = j.value("model_id", "");
    for (const auto& jm : j.at("messages")) {
        Message m;
        m.role = role_from_string(jm.at("role").get<std::string>());
        m.text = jm.value("text", "");
        if (jm.contains("tool_calls"))
            for (const auto& jc : jm["tool_calls"])
                m.tool_calls.push_back({jc.at("id"), jc.at("name"), jc.at("arguments")});
        m.tool_call_id = jm.value("tool_call_id", "");
        ex.messages.push_back(std::move(m));
    }
    if (j.contains("sampling")) {
        const auto& s = j["sampling"];
        if (s.contains("temperature")) ex.sampling.temperature = s["temperature"].get<double>();
        if (s.contains("max_tokens")) ex.sampling.max_tokens = s["max_tokens"].get<std::int64_t>();
    }
    if (j.contains("usage"))
        ex.usage = TokenUsage{j["usage"].at("input_tokens"), j["usage"].at("output_tokens")};
    if (j.contains("stop_reason")) ex.stop_reason = stop_reason_from_string(j["stop_reason"].get<std::string>());
    return ex;
}

} // namespace csi::wire
