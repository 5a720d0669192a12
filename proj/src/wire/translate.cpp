#include "csi/wire/translate.hpp"

#include <algorithm>
#include <set>

namespace csi::wire {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key))
        throw TranslateError(ErrorKind::MalformedBody, path + "." + key, "missing required field");
    return j[key];
}

std::string require_string(const json& j, const char* key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_string())
        throw TranslateError(ErrorKind::MalformedBody, path + "." + key, "expected a string");
    return v.get<std::string>();
}

/// Gather top-level fields outside `known` into the exchange's extras bag.
void collect_extras(const json& body, const std::set<std::string>& known, Dialect d, CanonicalExchange& ex) {
    for (auto it = body.begin(); it != body.end(); ++it) {
        if (known.count(it.key())) continue;
        if (it.key() == "stream" && it.value().is_boolean() && it.value().get<bool>())
            throw TranslateError(ErrorKind::UnsupportedFeature, "stream", "streaming responses are not supported");
        ex.extras[it.key()] = it.value();
    }
    if (!ex.extras.empty()) ex.extras_dialect = d;
}

void emit_extras(json& body, Dialect target, const CanonicalExchange& ex) {
    if (ex.extras.empty() || !ex.extras_dialect || *ex.extras_dialect != target) return;
    for (auto it = ex.extras.begin(); it != ex.extras.end(); ++it)
        if (!body.contains(it.key())) body[it.key()] = it.value();
}

void read_sampling(const json& body, const char* max_key, CanonicalExchange& ex, const std::string& path) {
    if (body.contains("temperature") && !body["temperature"].is_null()) {
        if (!body["temperature"].is_number())
            throw TranslateError(ErrorKind::MalformedBody, path + ".temperature", "expected a number");
        ex.sampling.temperature = body["temperature"].get<double>();
    }
    if (body.contains(max_key) && !body[max_key].is_null()) {
        if (!body[max_key].is_number_integer())
            throw TranslateError(ErrorKind::MalformedBody, path + "." + max_key, "expected an integer");
        ex.sampling.max_tokens = body[max_key].get<std::int64_t>();
    }
}

/// Flatten string-or-text-block-array content to plain text.
std::string text_of_content(const json& content, const std::string& path,
                            const std::set<std::string>& text_types) {
    if (content.is_null()) return "";
    if (content.is_string()) return content.get<std::string>();
    if (!content.is_array())
        throw TranslateError(ErrorKind::MalformedBody, path, "expected string or content array");
    std::string out;
    for (size_t i = 0; i < content.size(); ++i) {
        const json& part = content[i];
        const std::string ppath = path + "[" + std::to_string(i) + "]";
        const std::string type = require_string(part, "type", ppath);
        if (!text_types.count(type))
            throw TranslateError(ErrorKind::UnsupportedFeature, ppath,
                                 "content part type '" + type + "' is not supported");
        if (!out.empty()) out += "\n";
        out += require_string(part, "text", ppath);
    }
    return out;
}

/// Serialized-arguments string -> JSON object, for dialects that embed tool
/// input as structured data. Never interprets the contents.
json parse_arguments(const std::string& arguments, const std::string& name) {
    json parsed = json::parse(arguments, nullptr, false);
    if (parsed.is_discarded())
        throw TranslateError(ErrorKind::Unrepresentable, "tool_calls",
                             "tool call '" + name + "' carries a non-JSON argument string this dialect cannot embed");
    return parsed;
}

/// Leading system messages -> one dedicated field; a system message after any
/// other role cannot be expressed in dialects with a single system slot.
std::pair<std::string, size_t> hoist_system(const CanonicalExchange& ex, Dialect d) {
    std::string sys;
    size_t first_other = 0;
    while (first_other < ex.messages.size() && ex.messages[first_other].role == Role::System) {
        if (!sys.empty()) sys += "\n";
        sys += ex.messages[first_other].text;
        ++first_other;
    }
    for (size_t i = first_other; i < ex.messages.size(); ++i)
        if (ex.messages[i].role == Role::System)
            throw TranslateError(ErrorKind::Unrepresentable, "messages[" + std::to_string(i) + "]",
                                 std::string("mid-conversation system message cannot be expressed in ") +
                                     std::string(to_string(d)));
    return {sys, first_other};
}

// --- anthropic-messages ----------------------------------------------------

CanonicalExchange anthropic_to_canonical(const json& body, ExchangeKind kind) {
    CanonicalExchange ex;
    ex.kind = kind;
    const std::set<std::string> text_types{"text"};
    if (kind == ExchangeKind::Request) {
        ex.model_id = require_string(body, "model", "$");
        if (body.contains("system") && !body["system"].is_null())
            ex.messages.push_back({Role::System, text_of_content(body["system"], "$.system", text_types), {}, ""});
        const json& messages = require(body, "messages", "$");
        for (size_t i = 0; i < messages.size(); ++i) {
            const json& jm = messages[i];
            const std::string mpath = "$.messages[" + std::to_string(i) + "]";
            const std::string role = require_string(jm, "role", mpath);
            if (role != "user" && role != "assistant")
                throw TranslateError(ErrorKind::MalformedBody, mpath + ".role", "unexpected role '" + role + "'");
            const json& content = require(jm, "content", mpath);
            if (content.is_string()) {
                ex.messages.push_back({role == "user" ? Role::User : Role::Assistant,
                                       content.get<std::string>(), {}, ""});
                continue;
            }
            if (!content.is_array())
                throw TranslateError(ErrorKind::MalformedBody, mpath + ".content", "expected string or array");
            Message current;
            current.role = role == "user" ? Role::User : Role::Assistant;
            bool have_current = false;
            for (size_t b = 0; b < content.size(); ++b) {
                const json& block = content[b];
                const std::string bpath = mpath + ".content[" + std::to_string(b) + "]";
                const std::string type = require_string(block, "type", bpath);
                if (type == "text") {
                    if (!current.text.empty()) current.text += "\n";
                    current.text += require_string(block, "text", bpath);
                    have_current = true;
                } else if (type == "tool_use") {
                    const json& input = require(block, "input", bpath);
                    if (!input.is_object())
                        throw TranslateError(ErrorKind::MalformedBody, bpath + ".input", "expected an object");
                    current.tool_calls.push_back({require_string(block, "id", bpath),
                                                  require_string(block, "name", bpath), input.dump()});
                    have_current = true;
                } else if (type == "tool_result") {
                    if (have_current && (!current.text.empty() || !current.tool_calls.empty())) {
                        ex.messages.push_back(current);
                        current = Message{role == "user" ? Role::User : Role::Assistant, "", {}, ""};
                        have_current = false;
                    }
                    Message result;
                    result.role = Role::ToolResult;
                    result.tool_call_id = require_string(block, "tool_use_id", bpath);
                    if (block.contains("content"))
                        result.text = text_of_content(block["content"], bpath + ".content", text_types);
                    ex.messages.push_back(std::move(result));
                } else {
                    throw TranslateError(ErrorKind::UnsupportedFeature, bpath,
                                         "content block type '" + type + "' is not supported");
                }
            }
            if (have_current) ex.messages.push_back(std::move(current));
        }
        read_sampling(body, "max_tokens", ex, "$");
        collect_extras(body,
                       {"model", "system", "messages", "max_tokens", "temperature"},
                       Dialect::AnthropicMessages, ex);
    } else {
        ex.model_id = body.value("model", "");
        Message m;
        m.role = Role::Assistant;
        if (body.contains("content"))
            for (size_t b = 0; b < body["content"].size(); ++b) {
                const json& block = body["content"][b];
                const std::string bpath = "$.content[" + std::to_string(b) + "]";
                const std::string type = require_string(block, "type", bpath);
                if (type == "text") {
                    if (!m.text.empty()) m.text += "\n";
                    m.text += require_string(block, "text", bpath);
                } else if (type == "tool_use") {
                    const json& input = require(block, "input", bpath);
                    m.tool_calls.push_back({require_string(block, "id", bpath),
                                            require_string(block, "name", bpath), input.dump()});
                } else {
                    throw TranslateError(ErrorKind::UnsupportedFeature, bpath,
                                         "content block type '" + type + "' is not supported");
                }
            }
        ex.messages.push_back(std::move(m));
        if (body.contains("stop_reason") && !body["stop_reason"].is_null()) {
            const std::string sr = body["stop_reason"].get<std::string>();
            if (sr == "end_turn" || sr == "stop_sequence") ex.stop_reason = StopReason::End;
            else if (sr == "tool_use") ex.stop_reason = StopReason::ToolUse;
            else if (sr == "max_tokens") ex.stop_reason = StopReason::Length;
            else throw TranslateError(ErrorKind::MalformedBody, "$.stop_reason", "unknown value '" + sr + "'");
        } else {
            ex.stop_reason = StopReason::Aborted;
        }
        if (body.contains("usage"))
            ex.usage = TokenUsage{require(body["usage"], "input_tokens", "$.usage").get<std::int64_t>(),
                                  require(body["usage"], "output_tokens", "$.usage").get<std::int64_t>()};
        collect_extras(body,
                       {"id", "type", "role", "model", "content", "stop_reason", "stop_sequence", "usage"},
                       Dialect::AnthropicMessages, ex);
    }
    return ex;
}

json anthropic_from_canonical(const CanonicalExchange& ex) {
    json body;
    if (ex.kind == ExchangeKind::Request) {
        body["model"] = ex.model_id;
        auto [sys, first] = hoist_system(ex, Dialect::AnthropicMessages);
        if (first > 0) body["system"] = sys;
        body["messages"] = json::array();
        for (size_t i = first; i < ex.messages.size(); ++i) {
            const Message& m = ex.messages[i];
            json jm;
            if (m.role == Role::ToolResult) {
                jm["role"] = "user";
                jm["content"] = json::array({{{"type", "tool_result"},
                                              {"tool_use_id", m.tool_call_id},
                                              {"content", m.text}}});
            } else {
                jm["role"] = m.role == Role::User ? "user" : "assistant";
                json blocks = json::array();
                if (!m.text.empty() || m.tool_calls.empty())
                    blocks.push_back({{"type", "text"}, {"text", m.text}});
                for (const ToolCall& c : m.tool_calls)
                    blocks.push_back({{"type", "tool_use"},
                                      {"id", c.id},
                                      {"name", c.name},
                                      {"input", parse_arguments(c.arguments, c.name)}});
                jm["content"] = std::move(blocks);
            }
            body["messages"].push_back(std::move(jm));
        }
        body["max_tokens"] = ex.sampling.max_tokens.value_or(4096);
        if (ex.sampling.temperature) body["temperature"] = *ex.sampling.temperature;
    } else {
        if (ex.messages.size() != 1)
            throw TranslateError(ErrorKind::Unrepresentable, "messages",
                                 "anthropic-messages responses carry exactly one assistant message");
        const Message& m = ex.messages.front();
        body["id"] = "msg_csi0001";
        body["type"] = "message";
        body["role"] = "assistant";
        body["model"] = ex.model_id;
        json blocks = json::array();
        if (!m.text.empty() || m.tool_calls.empty())
            blocks.push_back({{"type", "text"}, {"text", m.text}});
        for (const ToolCall& c : m.tool_calls)
            blocks.push_back({{"type", "tool_use"},
                              {"id", c.id},
                              {"name", c.name},
                              {"input", parse_arguments(c.arguments, c.name)}});
        body["content"] = std::move(blocks);
        if (!ex.stop_reason || *ex.stop_reason == StopReason::Aborted) {
            body["stop_reason"] = nullptr;
        } else {
            switch (*ex.stop_reason) {
            case StopReason::End: body["stop_reason"] = "end_turn"; break;
            case StopReason::ToolUse: body["stop_reason"] = "tool_use"; break;
            case StopReason::Length: body["stop_reason"] = "max_tokens"; break;
            default: break;
            }
        }
        if (ex.usage)
            body["usage"] = {{"input_tokens", ex.usage->input_tokens},
                             {"output_tokens", ex.usage->output_tokens}};
    }
    emit_extras(body, Dialect::AnthropicMessages, ex);
    return body;
}

// --- openai-chat-completions / mistral-function-calling --------------------
//
// The two dialects share the chat-completions body family; mistral differs in
// id conventions, its legacy "model_length" finish reason, and a ban on null
// content. One translator handles both, parameterized by dialect.

CanonicalExchange chatish_to_canonical(const json& body, ExchangeKind kind, Dialect d) {
    CanonicalExchange ex;
    ex.kind = kind;
    const std::set<std::string> text_types{"text"};
    if (kind == ExchangeKind::Request) {
        ex.model_id = require_string(body, "model", "$");
        const json& messages = require(body, "messages", "$");
        for (size_t i = 0; i < messages.size(); ++i) {
            const json& jm = messages[i];
            const std::string mpath = "$.messages[" + std::to_string(i) + "]";
            const std::string role = require_string(jm, "role", mpath);
            Message m;
            if (role == "system" || role == "developer") {
                m.role = Role::System;
                m.text = text_of_content(require(jm, "content", mpath), mpath + ".content", text_types);
            } else if (role == "user") {
                m.role = Role::User;
                m.text = text_of_content(require(jm, "content", mpath), mpath + ".content", text_types);
            } else if (role == "assistant") {
                m.role = Role::Assistant;
                if (jm.contains("content"))
                    m.text = text_of_content(jm["content"], mpath + ".content", text_types);
                if (jm.contains("tool_calls"))
                    for (size_t c = 0; c < jm["tool_calls"].size(); ++c) {
                        const json& jc = jm["tool_calls"][c];
                        const std::string cpath = mpath + ".tool_calls[" + std::to_string(c) + "]";
                        const json& fn = require(jc, "function", cpath);
                        m.tool_calls.push_back({require_string(jc, "id", cpath),
                                                require_string(fn, "name", cpath + ".function"),
                                                require_string(fn, "arguments", cpath + ".function")});
                    }
            } else if (role == "tool") {
                m.role = Role::ToolResult;
                m.tool_call_id = require_string(jm, "tool_call_id", mpath);
                if (jm.contains("content"))
                    m.text = text_of_content(jm["content"], mpath + ".content", text_types);
            } else {
                throw TranslateError(ErrorKind::MalformedBody, mpath + ".role", "unexpected role '" + role + "'");
            }
            ex.messages.push_back(std::move(m));
        }
        read_sampling(body, "max_tokens", ex, "$");
        collect_extras(body, {"model", "messages", "max_tokens", "temperature"}, d, ex);
    } else {
        ex.model_id = body.value("model", "");
        const json& choices = require(body, "choices", "$");
        if (!choices.is_array() || choices.size() != 1)
            throw TranslateError(choices.is_array() && choices.size() > 1 ? ErrorKind::UnsupportedFeature
                                                                          : ErrorKind::MalformedBody,
                                 "$.choices", "expected exactly one choice");
        const json& choice = choices[0];
        const json& jm = require(choice, "message", "$.choices[0]");
        Message m;
        m.role = Role::Assistant;
        if (jm.contains("content") && !jm["content"].is_null())
            m.text = text_of_content(jm["content"], "$.choices[0].message.content", text_types);
        if (jm.contains("tool_calls"))
            for (size_t c = 0; c < jm["tool_calls"].size(); ++c) {
                const json& jc = jm["tool_calls"][c];
                const std::string cpath = "$.choices[0].message.tool_calls[" + std::to_string(c) + "]";
                const json& fn = require(jc, "function", cpath);
                m.tool_calls.push_back({require_string(jc, "id", cpath),
                                        require_string(fn, "name", cpath + ".function"),
                                        require_string(fn, "arguments", cpath + ".function")});
            }
        ex.messages.push_back(std::move(m));
        if (choice.contains("finish_reason") && !choice["finish_reason"].is_null()) {
            const std::string fr = choice["finish_reason"].get<std::string>();
            if (fr == "stop") ex.stop_reason = StopReason::End;
            else if (fr == "tool_calls") ex.stop_reason = StopReason::ToolUse;
            else if (fr == "length" || fr == "model_length") ex.stop_reason = StopReason::Length;
            else throw TranslateError(ErrorKind::UnsupportedFeature, "$.choices[0].finish_reason",
                                      "finish reason '" + fr + "' has no canonical equivalent");
        } else {
            ex.stop_reason = StopReason::Aborted;
        }
        if (body.contains("usage"))
            ex.usage = TokenUsage{require(body["usage"], "prompt_tokens", "$.usage").get<std::int64_t>(),
                                  require(body["usage"], "completion_tokens", "$.usage").get<std::int64_t>()};
        collect_extras(body, {"id", "object", "created", "model", "choices", "usage"}, d, ex);
    }
    return ex;
}

json chatish_from_canonical(const CanonicalExchange& ex, Dialect d) {
    const bool mistral = d == Dialect::MistralFunctionCalling;
    json body;
    if (ex.kind == ExchangeKind::Request) {
        body["model"] = ex.model_id;
        body["messages"] = json::array();
        for (const Message& m : ex.messages) {
            json jm;
            switch (m.role) {
            case Role::System:
                jm["role"] = "system";
                jm["content"] = m.text;
                break;
            case Role::User:
                jm["role"] = "user";
                jm["content"] = m.text;
                break;
            case Role::Assistant:
                jm["role"] = "assistant";
                if (m.text.empty() && !m.tool_calls.empty() && !mistral)
                    jm["content"] = nullptr;
                else
                    jm["content"] = m.text;
                if (!m.tool_calls.empty()) {
                    jm["tool_calls"] = json::array();
                    for (const ToolCall& c : m.tool_calls)
                        jm["tool_calls"].push_back({{"id", c.id},
                                                    {"type", "function"},
                                                    {"function", {{"name", c.name}, {"arguments", c.arguments}}}});
                }
                break;
            case Role::ToolResult:
                jm["role"] = "tool";
                jm["tool_call_id"] = m.tool_call_id;
                jm["content"] = m.text;
                break;
            }
            body["messages"].push_back(std::move(jm));
        }
        if (ex.sampling.max_tokens) body["max_tokens"] = *ex.sampling.max_tokens;
        if (ex.sampling.temperature) body["temperature"] = *ex.sampling.temperature;
    } else {
        if (ex.messages.size() != 1)
            throw TranslateError(ErrorKind::Unrepresentable, "messages",
                                 "chat-completions responses carry exactly one assistant message");
        const Message& m = ex.messages.front();
        body["id"] = mistral ? "cmpl-csi0001" : "chatcmpl-csi0001";
        body["object"] = "chat.completion";
        body["created"] = 0;
        body["model"] = ex.model_id;
        json jm;
        jm["role"] = "assistant";
        if (m.text.empty() && !m.tool_calls.empty() && !mistral)
            jm["content"] = nullptr;
        else
            jm["content"] = m.text;
        if (!m.tool_calls.empty()) {
            jm["tool_calls"] = json::array();
            for (const ToolCall& c : m.tool_calls)
                jm["tool_calls"].push_back({{"id", c.id},
                                            {"type", "function"},
                                            {"function", {{"name", c.name}, {"arguments", c.arguments}}}});
        }
        json finish;
        if (!ex.stop_reason || *ex.stop_reason == StopReason::Aborted) finish = nullptr;
        else if (*ex.stop_reason == StopReason::End) finish = "stop";
        else if (*ex.stop_reason == StopReason::ToolUse) finish = "tool_calls";
        else finish = "length";
        body["choices"] = json::array({{{"index", 0}, {"message", std::move(jm)}, {"finish_reason", finish}}});
        if (ex.usage)
            body["usage"] = {{"prompt_tokens", ex.usage->input_tokens},
                             {"completion_tokens", ex.usage->output_tokens},
                             {"total_tokens", ex.usage->combined()}};
    }
    emit_extras(body, d, ex);
    return body;
}

// --- openai-responses ------------------------------------------------------

CanonicalExchange responses_to_canonical(const json& body, ExchangeKind kind) {
    CanonicalExchange ex;
    ex.kind = kind;
    const std::set<std::string> text_types{"input_text", "output_text", "text"};
    if (kind == ExchangeKind::Request) {
        ex.model_id = require_string(body, "model", "$");
        if (body.contains("instructions") && !body["instructions"].is_null())
            ex.messages.push_back({Role::System, body["instructions"].get<std::string>(), {}, ""});
        const json& input = require(body, "input", "$");
        if (input.is_string()) {
            ex.messages.push_back({Role::User, input.get<std::string>(), {}, ""});
        } else if (input.is_array()) {
            for (size_t i = 0; i < input.size(); ++i) {
                const json& item = input[i];
                const std::string ipath = "$.input[" + std::to_string(i) + "]";
                const std::string type = item.contains("type") ? item["type"].get<std::string>() : "message";
                if (type == "message") {
                    const std::string role = require_string(item, "role", ipath);
                    Message m;
                    if (role == "system" || role == "developer") m.role = Role::System;
                    else if (role == "user") m.role = Role::User;
                    else if (role == "assistant") m.role = Role::Assistant;
                    else
                        throw TranslateError(ErrorKind::MalformedBody, ipath + ".role",
                                             "unexpected role '" + role + "'");
                    m.text = text_of_content(require(item, "content", ipath), ipath + ".content", text_types);
                    ex.messages.push_back(std::move(m));
                } else if (type == "function_call") {
                    ToolCall call{require_string(item, "call_id", ipath), require_string(item, "name", ipath),
                                  require_string(item, "arguments", ipath)};
                    if (ex.messages.empty() || ex.messages.back().role != Role::Assistant)
                        ex.messages.push_back({Role::Assistant, "", {}, ""});
                    ex.messages.back().tool_calls.push_back(std::move(call));
                } else if (type == "function_call_output") {
                    Message m;
                    m.role = Role::ToolResult;
                    m.tool_call_id = require_string(item, "call_id", ipath);
                    if (item.contains("output"))
                        m.text = text_of_content(item["output"], ipath + ".output", text_types);
                    ex.messages.push_back(std::move(m));
                } else {
                    throw TranslateError(ErrorKind::UnsupportedFeature, ipath,
                                         "input item type '" + type + "' is not supported");
                }
            }
        } else {
            throw TranslateError(ErrorKind::MalformedBody, "$.input", "expected string or array");
        }
        read_sampling(body, "max_output_tokens", ex, "$");
        collect_extras(body, {"model", "instructions", "input", "max_output_tokens", "temperature"},
                       Dialect::OpenAiResponses, ex);
    } else {
        ex.model_id = body.value("model", "");
        Message m;
        m.role = Role::Assistant;
        if (body.contains("output"))
            for (size_t i = 0; i < body["output"].size(); ++i) {
                const json& item = body["output"][i];
                const std::string ipath = "$.output[" + std::to_string(i) + "]";
                const std::string type = require_string(item, "type", ipath);
                if (type == "message") {
                    const std::string text =
                        text_of_content(require(item, "content", ipath), ipath + ".content", text_types);
                    if (!m.text.empty() && !text.empty()) m.text += "\n";
                    m.text += text;
                } else if (type == "function_call") {
                    m.tool_calls.push_back({require_string(item, "call_id", ipath),
                                            require_string(item, "name", ipath),
                                            require_string(item, "arguments", ipath)});
                } else {
                    throw TranslateError(ErrorKind::UnsupportedFeature, ipath,
                                         "output item type '" + type + "' is not supported");
                }
            }
        const std::string status = body.value("status", "completed");
        if (status == "completed") {
            ex.stop_reason = m.tool_calls.empty() ? StopReason::End : StopReason::ToolUse;
        } else if (status == "incomplete") {
            std::string reason;
            if (body.contains("incomplete_details") && body["incomplete_details"].is_object())
                reason = body["incomplete_details"].value("reason", "");
            ex.stop_reason = reason == "max_output_tokens" ? StopReason::Length : StopReason::Aborted;
        } else {
            ex.stop_reason = StopReason::Aborted;
        }
        ex.messages.push_back(std::move(m));
        if (body.contains("usage"))
            ex.usage = TokenUsage{require(body["usage"], "input_tokens", "$.usage").get<std::int64_t>(),
                                  require(body["usage"], "output_tokens", "$.usage").get<std::int64_t>()};
        collect_extras(body,
                       {"id", "object", "created_at", "model", "status", "incomplete_details", "output", "usage"},
                       Dialect::OpenAiResponses, ex);
    }
    return ex;
}

json responses_from_canonical(const CanonicalExchange& ex) {
    json body;
    if (ex.kind == ExchangeKind::Request) {
        body["model"] = ex.model_id;
        auto [sys, first] = hoist_system(ex, Dialect::OpenAiResponses);
        if (first > 0) body["instructions"] = sys;
        body["input"] = json::array();
        for (size_t i = first; i < ex.messages.size(); ++i) {
            const Message& m = ex.messages[i];
            if (m.role == Role::ToolResult) {
                body["input"].push_back(
                    {{"type", "function_call_output"}, {"call_id", m.tool_call_id}, {"output", m.text}});
                continue;
            }
            const bool assistant = m.role == Role::Assistant;
            if (!m.text.empty() || m.tool_calls.empty()) {
                json content = json::array(
                    {{{"type", assistant ? "output_text" : "input_text"}, {"text", m.text}}});
                body["input"].push_back({{"type", "message"},
                                         {"role", assistant ? "assistant" : "user"},
                                         {"content", std::move(content)}});
            }
            for (const ToolCall& c : m.tool_calls)
                body["input"].push_back({{"type", "function_call"},
                                         {"call_id", c.id},
                                         {"name", c.name},
                                         {"arguments", c.arguments}});
        }
        if (ex.sampling.max_tokens) body["max_output_tokens"] = *ex.sampling.max_tokens;
        if (ex.sampling.temperature) body["temperature"] = *ex.sampling.temperature;
    } else {
        if (ex.messages.size() != 1)
            throw TranslateError(ErrorKind::Unrepresentable, "messages",
                                 "openai-responses responses carry exactly one assistant message");
        const Message& m = ex.messages.front();
        body["id"] = "resp_csi0001";
        body["object"] = "response";
        body["created_at"] = 0;
        body["model"] = ex.model_id;
        if (!ex.stop_reason || *ex.stop_reason == StopReason::End || *ex.stop_reason == StopReason::ToolUse) {
            body["status"] = "completed";
        } else {
            body["status"] = "incomplete";
            body["incomplete_details"] = {
                {"reason", *ex.stop_reason == StopReason::Length ? "max_output_tokens" : "aborted"}};
        }
        body["output"] = json::array();
        if (!m.text.empty())
            body["output"].push_back(
                {{"type", "message"},
                 {"role", "assistant"},
                 {"content", json::array({{{"type", "output_text"}, {"text", m.text}}})}});
        for (const ToolCall& c : m.tool_calls)
            body["output"].push_back(
                {{"type", "function_call"}, {"call_id", c.id}, {"name", c.name}, {"arguments", c.arguments}});
        if (ex.usage)
            body["usage"] = {{"input_tokens", ex.usage->input_tokens},
                             {"output_tokens", ex.usage->output_tokens}};
    }
    emit_extras(body, Dialect::OpenAiResponses, ex);
    return body;
}

} // namespace

std::string to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::MalformedBody: return "malformed-body";
    case ErrorKind::UnsupportedFeature: return "unsupported-feature";
    case ErrorKind::Unrepresentable: return "unrepresentable";
    case ErrorKind::MissingUsage: return "missing-usage";
    }
    return "malformed-body";
}

Dialect dialect_from_string(std::string_view name) {
    if (name == "anthropic-messages") return Dialect::AnthropicMessages;
    if (name == "openai-chat-completions") return Dialect::OpenAiChatCompletions;
    if (name == "openai-responses") return Dialect::OpenAiResponses;
    if (name == "mistral-function-calling") return Dialect::MistralFunctionCalling;
    throw std::invalid_argument("unknown dialect '" + std::string(name) + "'");
}

std::string default_api_path(Dialect d) {
    switch (d) {
    case Dialect::AnthropicMessages: return "/v1/messages";
    case Dialect::OpenAiChatCompletions: return "/v1/chat/completions";
    case Dialect::OpenAiResponses: return "/v1/responses";
    case Dialect::MistralFunctionCalling: return "/v1/chat/completions";
    }
    return "/";
}

CanonicalExchange to_canonical(Dialect d, const nlohmann::json& body, ExchangeKind kind) {
    if (!body.is_object())
        throw TranslateError(ErrorKind::MalformedBody, "$", "body is not a JSON object");
    CanonicalExchange ex;
    switch (d) {
    case Dialect::AnthropicMessages: ex = anthropic_to_canonical(body, kind); break;
    case Dialect::OpenAiChatCompletions: ex = chatish_to_canonical(body, kind, d); break;
    case Dialect::MistralFunctionCalling: ex = chatish_to_canonical(body, kind, d); break;
    case Dialect::OpenAiResponses: ex = responses_to_canonical(body, kind); break;
    }
    validate(ex);
    return ex;
}

CanonicalExchange to_canonical(Dialect d, const std::string& body, ExchangeKind kind) {
    nlohmann::json parsed = nlohmann::json::parse(body, nullptr, false);
    if (parsed.is_discarded())
        throw TranslateError(ErrorKind::MalformedBody, "$", "body is not valid JSON");
    return to_canonical(d, parsed, kind);
}

json from_canonical(Dialect d, const CanonicalExchange& ex) {
    switch (d) {
    case Dialect::AnthropicMessages: return anthropic_from_canonical(ex);
    case Dialect::OpenAiChatCompletions: return chatish_from_canonical(ex, d);
    case Dialect::MistralFunctionCalling: return chatish_from_canonical(ex, d);
    case Dialect::OpenAiResponses: return responses_from_canonical(ex);
    }
    throw std::logic_error("unreachable dialect");
}

TokenUsage usage_of(Dialect d, const nlohmann::json& response) {
    const char* in_key = "input_tokens";
    const char* out_key = "output_tokens";
    if (d == Dialect::OpenAiChatCompletions || d == Dialect::MistralFunctionCalling) {
        in_key = "prompt_tokens";
        out_key = "completion_tokens";
    }
    if (!response.is_object() || !response.contains("usage") || !response["usage"].is_object())
        throw TranslateError(ErrorKind::MissingUsage, "$.usage", "response carries no usage accounting");
    const json& u = response["usage"];
    if (!u.contains(in_key) || !u.contains(out_key))
        throw TranslateError(ErrorKind::MissingUsage, std::string("$.usage.") + in_key,
                             "usage object is incomplete");
    return TokenUsage{u[in_key].get<std::int64_t>(), u[out_key].get<std::int64_t>()};
}

bool drops_extras(Dialect target, const CanonicalExchange& ex) {
    return !ex.extras.empty() && ex.extras_dialect && *ex.extras_dialect != target;
}

json error_document(Dialect d, const std::string& message) {
    if (d == Dialect::AnthropicMessages)
        return {{"type", "error"}, {"error", {{"type", "api_error"}, {"message", message}}}};
    return {{"error", {{"type", "api_error"}, {"message", message}}}};
}

} // namespace csi::wire
