#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace csi::wire {

/// Wire dialects the proxy can speak on either side of a route.
enum class Dialect {
    AnthropicMessages,
    OpenAiChatCompletions,
    OpenAiResponses,
    MistralFunctionCalling,
};

constexpr std::string_view to_string(Dialect d) {
    switch (d) {
    case Dialect::AnthropicMessages: return "anthropic-messages";
    case Dialect::OpenAiChatCompletions: return "openai-chat-completions";
    case Dialect::OpenAiResponses: return "openai-responses";
    case Dialect::MistralFunctionCalling: return "mistral-function-calling";
    }
    return "unknown";
}

Dialect dialect_from_string(std::string_view name);

/// Default request path each dialect is served on.
std::string default_api_path(Dialect d);

} // namespace csi::wire
