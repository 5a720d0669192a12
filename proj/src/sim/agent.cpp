#include "csi/sim/agent.hpp"

#include <algorithm>
#include <cmath>

#include <httplib.h>

#include "csi/sim/upstream.hpp"
#include "csi/wire/translate.hpp"

namespace csi::sim {

SimAgent::SimAgent(const orch::SessionSetup& setup, ChallengePlan plan, ProxyEndpoint endpoint,
                   std::string model)
    : scaffold_(setup.spec->id),
      session_(setup.session_id),
      challenge_(setup.challenge->name),
      plan_(std::move(plan)),
      endpoint_(std::move(endpoint)),
      model_(std::move(model)),
      env_(setup.env),
      board_(setup.substrate),
      target_(*setup.challenge),
      posts_left_(plan_.posts) {
    target_.attach(*env_);
}

TimeMs SimAgent::time_of_turn(int k) const {
    if (plan_.solve) {
        const double elapsed_ms = plan_.elapsed_s * 1000.0;
        if (k <= plan_.solve_turn)
            return static_cast<TimeMs>(std::llround(elapsed_ms * k / plan_.solve_turn));
        return static_cast<TimeMs>(std::llround(elapsed_ms)) +
               static_cast<TimeMs>(std::llround(plan_.turn_seconds * 1000.0)) *
                   (k - plan_.solve_turn);
    }
    return static_cast<TimeMs>(std::llround(plan_.turn_seconds * 1000.0)) * k;
}

TimeMs SimAgent::first_delay() const { return std::max<TimeMs>(time_of_turn(1), 1); }

std::string SimAgent::call_model(int behavior_turn) {
    const wire::TokenUsage usage = plan_.usage.at(turn_ - 1);
    wire::CanonicalExchange ex;
    ex.kind = wire::ExchangeKind::Request;
    ex.model_id = model_;
    ex.messages.push_back(
        {wire::Role::System, "You are working CTF challenge " + challenge_ + ".", {}, ""});
    ex.messages.push_back({wire::Role::User,
                           "turn " + std::to_string(behavior_turn) + ": report status and plan. " +
                               usage_marker(usage.input_tokens, usage.output_tokens),
                           {},
                           ""});
    const std::string body = wire::from_canonical(endpoint_.dialect, ex).dump();

    httplib::Client client("127.0.0.1", endpoint_.port);
    httplib::Headers headers{{"x-csi-session", session_}, {"x-csi-challenge", challenge_}};
    auto result = client.Post(endpoint_.api_path, headers, body, "application/json");
    if (!result || result->status != 200) return "";

    try {
        const auto response = wire::to_canonical(
            endpoint_.dialect, nlohmann::json::parse(result->body), wire::ExchangeKind::Response);
        for (auto it = response.messages.rbegin(); it != response.messages.rend(); ++it) {
            if (it->role == wire::Role::Assistant) return it->text;
        }
    } catch (const std::exception&) {
    }
    return "";
}

void SimAgent::obey_directive(const std::string& assistant_text) {
    const size_t tail = assistant_text.find("tail -n +");
    if (tail == std::string::npos) return; // no directive in this reply

    if (plan_.reads && board_) {
        size_t from_line = 1;
        try {
            from_line = std::stoul(assistant_text.substr(tail + 9));
        } catch (const std::exception&) {
        }
        from_line = std::min(from_line, board_->line_count() + 1);
        board_->read_delta(from_line, scaffold_);
    }
    const bool asked_to_write = assistant_text.find("append it to") != std::string::npos;
    if (plan_.writes && board_ && asked_to_write) {
        if (posts_left_ > 0) {
            blackboard::Post post;
            post.author = scaffold_;
            post.kind = blackboard::PostKind::Hypothesis;
            post.body = "turn " + std::to_string(turn_) + " observations on " + challenge_ + ".";
            board_->append_post(post);
            --posts_left_;
        } else {
            board_->append_lines(scaffold_, {"scratch: turn " + std::to_string(turn_) + " notes"});
        }
    }
}

orch::TurnResult SimAgent::turn() {
    ++turn_;
    const int behavior_turn = plan_.turns > 0 ? (turn_ - 1) % plan_.turns + 1 : turn_;
    std::string out;

    if (turn_ == 1) {
        out += env_->exec("launch").output;
        out += env_->exec("cat /challenge/metadata.json").output; // denied: hardened

        // Telemetry that must never reach upstream; the proxy swallows it.
        httplib::Client client("127.0.0.1", endpoint_.port);
        httplib::Headers headers{{"x-csi-session", session_}, {"x-csi-challenge", challenge_}};
        client.Post("/telemetry/events", headers, "{}", "application/json");
    }

    if (std::find(plan_.error_turns.begin(), plan_.error_turns.end(), behavior_turn) !=
        plan_.error_turns.end()) {
        out += env_->exec("false").output;
    }

    if (plan_.solve && turn_ == plan_.solve_turn) {
        for (const auto& step : target_.steps()) out += env_->exec(step).output;
    } else {
        out += env_->exec("scan --service " + challenge_).output;
    }

    const std::string assistant = call_model(behavior_turn);
    obey_directive(assistant);
    out += "assistant: " + assistant + "\n";

    orch::TurnResult result;
    result.output = out;
    const TimeMs now = time_of_turn(turn_);
    const TimeMs next = time_of_turn(turn_ + 1);
    result.next_in = std::max<TimeMs>(next - now, 1);
    return result;
}

} // namespace csi::sim
