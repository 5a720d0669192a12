#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <vector>

#include "csi/wire/translate.hpp"

using namespace csi::wire;
using nlohmann::json;

namespace {

const std::vector<Dialect> kDialects = {
    Dialect::AnthropicMessages,
    Dialect::OpenAiChatCompletions,
    Dialect::OpenAiResponses,
    Dialect::MistralFunctionCalling,
};

json load(const std::string& rel) {
    std::ifstream in(std::string(CSI_FIXTURE_DIR) + "/wire/" + rel);
    REQUIRE_MESSAGE(in.good(), "missing fixture " << rel);
    return json::parse(in);
}

} // namespace

TEST_CASE("single user message maps to a one-message canonical exchange") {
    json body = {{"model", "alias2-mini"}, {"messages", json::array({{{"role", "user"}, {"content", "hi"}}})}};
    CanonicalExchange ex = to_canonical(Dialect::OpenAiChatCompletions, body, ExchangeKind::Request);
    CHECK(ex.model_id == "alias2-mini");
    REQUIRE(ex.messages.size() == 1);
    CHECK(ex.messages[0].role == Role::User);
    CHECK(ex.messages[0].text == "hi");
    CHECK(ex.messages[0].tool_calls.empty());
}

TEST_CASE("fixture corpus: round-trip and cross-dialect agreement") {
    for (const char* conv : {"basic", "toolcall", "longrun"}) {
        for (const char* side : {"request", "response"}) {
            const ExchangeKind kind =
                std::string(side) == "request" ? ExchangeKind::Request : ExchangeKind::Response;
            const std::string name = std::string(conv) + "." + side + ".json";
            const CanonicalExchange expected = canonical_from_json(load("canonical/" + name));

            std::vector<CanonicalExchange> parsed;
            for (Dialect d : kDialects) {
                CAPTURE(name);
                CAPTURE(to_string(d));
                const json doc = load(std::string(to_string(d)) + "/" + name);

                CanonicalExchange ex = to_canonical(d, doc, kind);
                CHECK(ex == expected); // semantic agreement with the frozen canonical form

                // Emitting and re-parsing must be byte-stable: fixtures are
                // authored in normalized form, so no loss-field stripping is
                // needed for equality here.
                const json emitted = from_canonical(d, ex);
                CHECK(emitted == doc);

                // Idempotence after one normalization.
                CanonicalExchange again = to_canonical(d, emitted, kind);
                CHECK(again == ex);

                CHECK_NOTHROW(validate(ex));
                parsed.push_back(std::move(ex));
            }
            for (size_t i = 1; i < parsed.size(); ++i) CHECK(parsed[0] == parsed[i]);
        }
    }
}

TEST_CASE("message count and role sequence survive every dialect pair") {
    const CanonicalExchange ex = canonical_from_json(load("canonical/toolcall.request.json"));
    for (Dialect from : kDialects) {
        const json doc = from_canonical(from, ex);
        const CanonicalExchange back = to_canonical(from, doc, ExchangeKind::Request);
        REQUIRE(back.messages.size() == ex.messages.size());
        for (size_t i = 0; i < ex.messages.size(); ++i) {
            CHECK(back.messages[i].role == ex.messages[i].role);
            CHECK(back.messages[i].tool_call_id == ex.messages[i].tool_call_id);
        }
    }
}

TEST_CASE("usage extraction") {
    SUBCASE("chat-completions field names") {
        const json doc = load("openai-chat-completions/longrun.response.json");
        TokenUsage u = usage_of(Dialect::OpenAiChatCompletions, doc);
        CHECK(u.input_tokens == 7192);
        CHECK(u.output_tokens == 300);
        CHECK(u.combined() == 7492);
    }
    SUBCASE("anthropic field names") {
        const json doc = load("anthropic-messages/toolcall.response.json");
        TokenUsage u = usage_of(Dialect::AnthropicMessages, doc);
        CHECK(u.input_tokens == 100);
        CHECK(u.output_tokens == 20);
    }
    SUBCASE("responses field names") {
        const json doc = load("openai-responses/basic.response.json");
        TokenUsage u = usage_of(Dialect::OpenAiResponses, doc);
        CHECK(u.input_tokens == 7);
        CHECK(u.output_tokens == 9);
    }
    SUBCASE("absent usage raises missing-usage") {
        json doc = load("openai-chat-completions/basic.response.json");
        doc.erase("usage");
        try {
            usage_of(Dialect::OpenAiChatCompletions, doc);
            FAIL("expected TranslateError");
        } catch (const TranslateError& e) {
            CHECK(e.kind() == ErrorKind::MissingUsage);
        }
    }
}

TEST_CASE("tool arguments ride through untouched as serialized strings") {
    const std::string args = "{\"depth\":3,\"target\":\"10.9.9.9\",\"wordlist\":\"common.txt\"}";
    CanonicalExchange ex;
    ex.kind = ExchangeKind::Request;
    ex.model_id = "alias2-mini";
    ex.messages.push_back({Role::User, "go", {}, ""});
    ex.messages.push_back({Role::Assistant, "", {{"call_9", "scan", args}}, ""});

    SUBCASE("string-embedding dialects keep the exact bytes") {
        for (Dialect d : {Dialect::OpenAiChatCompletions, Dialect::OpenAiResponses,
                          Dialect::MistralFunctionCalling}) {
            const CanonicalExchange back = to_canonical(d, from_canonical(d, ex), ExchangeKind::Request);
            REQUIRE(back.messages[1].tool_calls.size() == 1);
            CHECK(back.messages[1].tool_calls[0].arguments == args);
        }
    }
    SUBCASE("object-embedding dialects normalize to sorted-key compact form") {
        const CanonicalExchange back = to_canonical(
            Dialect::AnthropicMessages, from_canonical(Dialect::AnthropicMessages, ex), ExchangeKind::Request);
        // args above is already compact with sorted keys, so it is a fixed point.
        CHECK(back.messages[1].tool_calls[0].arguments == args);
    }
    SUBCASE("non-JSON argument strings cannot enter object-embedding dialects") {
        ex.messages[1].tool_calls[0].arguments = "not json at all {{{";
        try {
            from_canonical(Dialect::AnthropicMessages, ex);
            FAIL("expected TranslateError");
        } catch (const TranslateError& e) {
            CHECK(e.kind() == ErrorKind::Unrepresentable);
        }
        // No re-parse happens for string-embedding dialects: bytes pass through.
        const CanonicalExchange back = to_canonical(Dialect::OpenAiChatCompletions,
                                                    from_canonical(Dialect::OpenAiChatCompletions, ex),
                                                    ExchangeKind::Request);
        CHECK(back.messages[1].tool_calls[0].arguments == "not json at all {{{");
    }
}

TEST_CASE("unknown top-level fields: kept same-dialect, dropped cross-dialect") {
    json body = load("anthropic-messages/basic.request.json");
    body["metadata"] = {{"user_id", "op-7"}};
    const CanonicalExchange ex = to_canonical(Dialect::AnthropicMessages, body, ExchangeKind::Request);
    REQUIRE(ex.extras_dialect.has_value());
    CHECK(*ex.extras_dialect == Dialect::AnthropicMessages);

    const json same = from_canonical(Dialect::AnthropicMessages, ex);
    CHECK(same["metadata"]["user_id"] == "op-7");
    CHECK_FALSE(drops_extras(Dialect::AnthropicMessages, ex));

    const json cross = from_canonical(Dialect::OpenAiChatCompletions, ex);
    CHECK_FALSE(cross.contains("metadata"));
    CHECK(drops_extras(Dialect::OpenAiChatCompletions, ex));
}

TEST_CASE("error classes") {
    SUBCASE("missing model is malformed-body with a field path") {
        try {
            to_canonical(Dialect::OpenAiChatCompletions, json{{"messages", json::array()}},
                         ExchangeKind::Request);
            FAIL("expected TranslateError");
        } catch (const TranslateError& e) {
            CHECK(e.kind() == ErrorKind::MalformedBody);
            CHECK(e.path() == "$.model");
        }
    }
    SUBCASE("unparseable body is malformed-body") {
        try {
            to_canonical(Dialect::OpenAiChatCompletions, std::string("{nope"), ExchangeKind::Request);
            FAIL("expected TranslateError");
        } catch (const TranslateError& e) {
            CHECK(e.kind() == ErrorKind::MalformedBody);
        }
    }
    SUBCASE("image content parts are rejected, not dropped") {
        json body = load("openai-chat-completions/basic.request.json");
        body["messages"][0]["content"] =
            json::array({{{"type", "image_url"}, {"image_url", {{"url", "http://x/y.png"}}}}});
        try {
            to_canonical(Dialect::OpenAiChatCompletions, body, ExchangeKind::Request);
            FAIL("expected TranslateError");
        } catch (const TranslateError& e) {
            CHECK(e.kind() == ErrorKind::UnsupportedFeature);
        }
    }
    SUBCASE("streaming requests are rejected") {
        json body = load("openai-chat-completions/basic.request.json");
        body["stream"] = true;
        try {
            to_canonical(Dialect::OpenAiChatCompletions, body, ExchangeKind::Request);
            FAIL("expected TranslateError");
        } catch (const TranslateError& e) {
            CHECK(e.kind() == ErrorKind::UnsupportedFeature);
        }
    }
    SUBCASE("mid-conversation system message cannot reach single-slot dialects") {
        CanonicalExchange ex = canonical_from_json(load("canonical/basic.request.json"));
        ex.messages.push_back({Role::System, "new rules", {}, ""});
        for (Dialect d : {Dialect::AnthropicMessages, Dialect::OpenAiResponses}) {
            try {
                from_canonical(d, ex);
                FAIL("expected TranslateError");
            } catch (const TranslateError& e) {
                CHECK(e.kind() == ErrorKind::Unrepresentable);
            }
        }
        // Chat-style dialects express it natively.
        CHECK_NOTHROW(from_canonical(Dialect::OpenAiChatCompletions, ex));
        CHECK_NOTHROW(from_canonical(Dialect::MistralFunctionCalling, ex));
    }
}

TEST_CASE("stop reasons map symmetrically in every dialect") {
    for (StopReason stop : {StopReason::End, StopReason::ToolUse, StopReason::Length, StopReason::Aborted}) {
        CanonicalExchange ex;
        ex.kind = ExchangeKind::Response;
        ex.model_id = "alias2-mini";
        Message m;
        m.role = Role::Assistant;
        m.text = "done";
        if (stop == StopReason::ToolUse) m.tool_calls.push_back({"call_1", "bash", "{}"});
        ex.messages.push_back(std::move(m));
        ex.usage = TokenUsage{10, 5};
        ex.stop_reason = stop;
        for (Dialect d : kDialects) {
            CAPTURE(to_string(d));
            CAPTURE(to_string(stop));
            const CanonicalExchange back = to_canonical(d, from_canonical(d, ex), ExchangeKind::Response);
            REQUIRE(back.stop_reason.has_value());
            CHECK(*back.stop_reason == stop);
        }
    }
}

TEST_CASE("tool-result referential integrity is enforced") {
    CanonicalExchange ex;
    ex.kind = ExchangeKind::Request;
    ex.model_id = "alias2-mini";
    ex.messages.push_back({Role::User, "go", {}, ""});
    ex.messages.push_back({Role::Assistant, "", {{"call_1", "bash", "{}"}}, ""});
    ex.messages.push_back({Role::ToolResult, "ok", {}, "call_1"});
    CHECK_NOTHROW(validate(ex));

    ex.messages[2].tool_call_id = "call_404";
    try {
        validate(ex);
        FAIL("expected TranslateError");
    } catch (const TranslateError& e) {
        CHECK(e.kind() == ErrorKind::MalformedBody);
    }
}

TEST_CASE("foreign-authored documents normalize once, then stay fixed") {
    // Shorthand string content plus provider-assigned ids: the first pass
    // strips nothing silently except documented loss-table fields (ids,
    // created stamps); a second pass is the identity.
    json doc = {
        {"id", "chatcmpl-9y7abcdef"},
        {"object", "chat.completion"},
        {"created", 1726000000},
        {"model", "alias2-mini"},
        {"choices", json::array({{{"index", 0},
                                  {"message", {{"role", "assistant"}, {"content", "hello"}}},
                                  {"finish_reason", "stop"}}})},
        {"usage", {{"prompt_tokens", 3}, {"completion_tokens", 2}, {"total_tokens", 5}}},
    };
    const Dialect d = Dialect::OpenAiChatCompletions;
    const CanonicalExchange first = to_canonical(d, doc, ExchangeKind::Response);
    const json once = from_canonical(d, first);
    const CanonicalExchange second = to_canonical(d, once, ExchangeKind::Response);
    CHECK(first == second);
    CHECK(once == from_canonical(d, second));
    // Loss-table fields got fixed placeholder values; everything else held.
    CHECK(once["choices"] == doc["choices"]);
    CHECK(once["usage"] == doc["usage"]);
    CHECK(once["model"] == doc["model"]);
}

TEST_CASE("multiple leading system messages collapse into the dedicated slot") {
    CanonicalExchange ex;
    ex.kind = ExchangeKind::Request;
    ex.model_id = "alias2-mini";
    ex.messages.push_back({Role::System, "rule one", {}, ""});
    ex.messages.push_back({Role::System, "rule two", {}, ""});
    ex.messages.push_back({Role::User, "hi", {}, ""});
    const json body = from_canonical(Dialect::AnthropicMessages, ex);
    CHECK(body["system"] == "rule one\nrule two");
    const CanonicalExchange back = to_canonical(Dialect::AnthropicMessages, body, ExchangeKind::Request);
    REQUIRE(back.messages.size() == 2); // collapsed after one normalization
    CHECK(back.messages[0].text == "rule one\nrule two");
    // ...and from there the mapping is idempotent.
    CHECK(to_canonical(Dialect::AnthropicMessages, from_canonical(Dialect::AnthropicMessages, back),
                       ExchangeKind::Request) == back);
}

TEST_CASE("orphan tool calls in responses input synthesize an assistant turn") {
    json body = {
        {"model", "alias2-mini"},
        {"input", json::array({
                      {{"type", "function_call"}, {"call_id", "c1"}, {"name", "bash"}, {"arguments", "{}"}},
                      {{"type", "function_call_output"}, {"call_id", "c1"}, {"output", "ok"}},
                  })},
    };
    const CanonicalExchange ex = to_canonical(Dialect::OpenAiResponses, body, ExchangeKind::Request);
    REQUIRE(ex.messages.size() == 2);
    CHECK(ex.messages[0].role == Role::Assistant);
    CHECK(ex.messages[0].text.empty());
    REQUIRE(ex.messages[0].tool_calls.size() == 1);
    CHECK(ex.messages[1].role == Role::ToolResult);
}

TEST_CASE("dialect-shaped error documents") {
    const json a = error_document(Dialect::AnthropicMessages, "upstream unreachable");
    CHECK(a["type"] == "error");
    CHECK(a["error"]["message"] == "upstream unreachable");
    for (Dialect d : {Dialect::OpenAiChatCompletions, Dialect::OpenAiResponses,
                      Dialect::MistralFunctionCalling}) {
        const json e = error_document(d, "upstream unreachable");
        CHECK(e["error"]["message"] == "upstream unreachable");
        CHECK(e["error"]["type"] == "api_error");
    }
}

TEST_CASE("dialect names round-trip") {
    for (Dialect d : kDialects) CHECK(dialect_from_string(to_string(d)) == d);
    CHECK_THROWS_AS(dialect_from_string("smoke-signals"), std::invalid_argument);
}
