#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <thread>

#include "csi/blackboard/engine.hpp"

using namespace csi;
using namespace csi::blackboard;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        static std::atomic<int> counter{0};
        path = fs::temp_directory_path() /
               ("bb-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

Post make_post(const std::string& author, const std::string& ts, PostKind kind,
               const std::string& body) {
    Post p;
    p.author = author;
    p.timestamp = ts;
    p.kind = kind;
    p.body = body;
    return p;
}

} // namespace

TEST_CASE("post serialization round-trips") {
    const Post p = make_post("codex", "2026-01-05T14:03:22.000Z", PostKind::Artifact,
                             "Recovered RSA primes:\np = 0xdead, q = 0xbeef");
    const std::string text = p.serialize();
    CHECK(text == "## [codex] [2026-01-05T14:03:22.000Z] [artifact]\n"
                  "Recovered RSA primes:\np = 0xdead, q = 0xbeef\n\n");
    const auto posts = parse_posts(text);
    REQUIRE(posts.size() == 1);
    CHECK(posts[0] == p);
}

TEST_CASE("all four post kinds parse") {
    std::string doc;
    for (PostKind k :
         {PostKind::Artifact, PostKind::Hypothesis, PostKind::FlagCandidate, PostKind::Note})
        doc += make_post("gcai", "2026-01-05T15:00:00.000Z", k, "body for " + to_string(k)).serialize();
    const auto posts = parse_posts(doc);
    REQUIRE(posts.size() == 4);
    CHECK(posts[2].kind == PostKind::FlagCandidate);
}

TEST_CASE("free-form scratch lines are tolerated, bad headers are not") {
    const std::string doc = "scratch note outside any post\n" +
                            make_post("claude", "2026-01-05T15:00:00.000Z", PostKind::Note, "hello")
                                .serialize() +
                            "more scratch\n";
    const auto posts = parse_posts(doc);
    REQUIRE(posts.size() == 1);
    CHECK(posts[0].author == "claude");

    CHECK_THROWS_AS(parse_posts("## [oops] [no-kind-bracket\n"), SubstrateError);
    CHECK_THROWS_AS(parse_posts("## [a] [b] [not-a-kind]\nbody\n\n"), SubstrateError);
}

TEST_CASE("substrate appends, counts lines, and slices deltas") {
    TempDir dir;
    auto clock = std::make_shared<ManualClock>(1767625200000);
    Substrate board((dir.path / "notes.md").string(), clock);

    CHECK(board.line_count() == 0);
    // Empty read off an empty board is legal (cursor may sit at count+1).
    CHECK(board.read_delta(1, "codex").lines.empty());

    const size_t at = board.append_post(
        make_post("codex", "", PostKind::Hypothesis, "the CRC is keyed per connection"));
    CHECK(at == 1);
    CHECK(board.line_count() == 3); // header + one body line + blank

    board.append_lines("codex", {"l4", "l5"});
    CHECK(board.line_count() == 5);

    SUBCASE("tail -n +3 semantics") {
        const DeltaRead d = board.read_delta(3, "gcai");
        REQUIRE(d.lines.size() == 3);
        CHECK(d.lines[0] == "");
        CHECK(d.lines[1] == "l4");
        CHECK(d.lines[2] == "l5");
        CHECK(d.next_from_line == 6);
        // Nothing new: empty slice, cursor stays put.
        const DeltaRead d2 = board.read_delta(d.next_from_line, "gcai");
        CHECK(d2.lines.empty());
        CHECK(d2.next_from_line == 6);
        // Beyond EOF+1 is a caller bug.
        CHECK_THROWS_AS(board.read_delta(7, "gcai"), SubstrateError);
        CHECK_THROWS_AS(board.read_delta(0, "gcai"), SubstrateError);
    }

    SUBCASE("delta completeness: full read equals concatenated increments") {
        std::vector<std::string> incremental = board.read_delta(1, "r").lines;
        size_t cursor = board.line_count() + 1;
        board.append_post(make_post("claude", "", PostKind::Note, "checkpoint"));
        board.append_lines("claude", {"x"});
        const DeltaRead d = board.read_delta(cursor, "r");
        incremental.insert(incremental.end(), d.lines.begin(), d.lines.end());
        CHECK(incremental == board.read_delta(1, "r").lines);
    }

    SUBCASE("activity sidecar records reads and writes") {
        board.read_delta(1, "gcai");
        const auto events = read_activity_log((dir.path / "notes.md").string() + ".events.jsonl");
        // empty read at the top of the case, post write, scratch write, this read
        REQUIRE(events.size() == 4);
        CHECK(events[0].event == "read");
        CHECK(events[1].event == "write");
        CHECK(events[1].posts == 1);
        CHECK(events[2].event == "write");
        CHECK(events[2].posts == 0);
        CHECK(events.back().event == "read");
        CHECK(events.back().scaffold == "gcai");
        CHECK(events.back().lines == 5);
    }
}

TEST_CASE("concurrent posters interleave whole posts") {
    TempDir dir;
    auto clock = std::make_shared<ManualClock>(1767625200000);
    Substrate board((dir.path / "notes.md").string(), clock);

    constexpr int kThreads = 6;
    constexpr int kEach = 25;
    std::vector<std::thread> threads;
    for (int t = 0; t < kThreads; ++t)
        threads.emplace_back([&board, t] {
            for (int i = 0; i < kEach; ++i)
                board.append_post(make_post("w" + std::to_string(t), "", PostKind::Note,
                                            "entry " + std::to_string(i) + "\nsecond line"));
        });
    for (auto& t : threads) t.join();

    const auto posts = board.posts();
    CHECK(posts.size() == kThreads * kEach);
    for (const Post& p : posts) CHECK(p.body.find("second line") != std::string::npos);
}

TEST_CASE("recency window filters the emptiness gate's post count") {
    TempDir dir;
    auto clock = std::make_shared<ManualClock>(0);
    Substrate board((dir.path / "notes.md").string(), clock);
    const TimeMs window = 10 * 60 * 1000;

    clock->set_ms(1000);
    board.append_post(make_post("codex", "", PostKind::Note, "early"));
    clock->set_ms(5 * 60 * 1000);
    board.append_post(make_post("gcai", "", PostKind::Note, "mid"));

    CHECK(board.recent_post_count(5 * 60 * 1000, window) == 2);
    // Eleven minutes later the first post has aged out...
    CHECK(board.recent_post_count(12 * 60 * 1000, window) == 1);
    // ...and eventually the board reads as quiet even though text remains.
    CHECK(board.recent_post_count(60 * 60 * 1000, window) == 0);
    CHECK(board.line_count() > 0);
}

TEST_CASE("injection gate: worked decisions") {
    const RolePolicy writer{Role::Writer, 8, 0.5};
    const RolePolicy reader{Role::Reader, 8, 0.5};
    const RolePolicy first{Role::FirstTurnOnly, 8, 0.5};
    const RolePolicy none{Role::None, 8, 0.5};

    auto st = [](int requests, double elapsed, bool flag = false) {
        InjectionState s;
        s.requests_seen = requests;
        s.elapsed_fraction = elapsed;
        s.flag_observed = flag;
        s.recent_post_count = 3;
        return s;
    };

    SUBCASE("cadence hits: 1, then every 8th") {
        CHECK(should_inject(st(1, 0.1), writer).inject);
        CHECK(should_inject(st(9, 0.2), writer).inject);
        CHECK(should_inject(st(17, 0.3), writer).inject);
        CHECK_FALSE(should_inject(st(2, 0.1), writer).inject);
        CHECK(should_inject(st(2, 0.1), writer).suppressed_by == SuppressReason::Cadence);
        CHECK_FALSE(should_inject(st(8, 0.1), writer).inject);
        CHECK(should_inject(st(9, 0.2), reader).inject);
    }
    SUBCASE("budget cutoff silences the second half") {
        const auto d = should_inject(st(17, 0.6), writer);
        CHECK_FALSE(d.inject);
        CHECK(d.suppressed_by == SuppressReason::Budget);
        CHECK_FALSE(should_inject(st(1, 0.5), writer).inject); // boundary is exclusive
        CHECK(should_inject(st(1, 0.49), writer).inject);
    }
    SUBCASE("first-turn-only fires once") {
        CHECK(should_inject(st(1, 0.1), first).inject);
        const auto d = should_inject(st(9, 0.1), first);
        CHECK_FALSE(d.inject);
        CHECK(d.suppressed_by == SuppressReason::Cadence);
    }
    SUBCASE("role none never participates") {
        const auto d = should_inject(st(1, 0.0), none);
        CHECK_FALSE(d.inject);
        CHECK(d.suppressed_by == SuppressReason::Role);
    }
    SUBCASE("post-victory suppression wins over cadence") {
        const auto d = should_inject(st(9, 0.2, true), writer);
        CHECK_FALSE(d.inject);
        CHECK(d.suppressed_by == SuppressReason::Victory);
    }
    SUBCASE("directive class follows the role") {
        CHECK(should_inject(st(1, 0.1), writer).directive_class == DirectiveClass::ReadWrite);
        CHECK(should_inject(st(1, 0.1), first).directive_class == DirectiveClass::ReadWrite);
        CHECK(should_inject(st(1, 0.1), reader).directive_class == DirectiveClass::ReadOnly);
    }
    SUBCASE("the emptiness gate consults the recency-filtered count only") {
        InjectionState s = st(1, 0.1);
        s.recent_post_count = 0;
        const auto d = should_inject(s, writer);
        CHECK(d.inject); // advisory: decision unchanged
        CHECK(d.quiet_board);
    }
}

TEST_CASE("injection count closed form: 1 + floor((R-1)/n) before cutoff") {
    const RolePolicy writer{Role::Writer, 8, 0.5};
    for (int total : {1, 2, 8, 9, 16, 17, 40, 100}) {
        int injections = 0;
        for (int r = 1; r <= total; ++r) {
            InjectionState s;
            s.requests_seen = r;
            s.elapsed_fraction = 0.2;
            if (should_inject(s, writer).inject) ++injections;
        }
        CHECK(injections == 1 + (total - 1) / 8);
    }
}

TEST_CASE("directive text is deterministic and carries the delta command") {
    const std::string ro = render_directive(DirectiveClass::ReadOnly, 1);
    CHECK(ro.find("tail -n +1 /blackboard/notes.md") != std::string::npos);
    CHECK(ro.find("append") == std::string::npos); // read-only: no posting ask
    CHECK(ro == render_directive(DirectiveClass::ReadOnly, 1));

    const std::string rw = render_directive(DirectiveClass::ReadWrite, 42);
    CHECK(rw.find("tail -n +42 /blackboard/notes.md") != std::string::npos);
    CHECK(rw.find("## [your-id] [timestamp]") != std::string::npos);
    CHECK(rw == render_directive(DirectiveClass::ReadWrite, 42));

    CHECK(render_directive(DirectiveClass::ReadWrite, 42, true) !=
          render_directive(DirectiveClass::ReadWrite, 42, false));
}

TEST_CASE("engine drives per-session cadence, cursor, and suppression") {
    TempDir dir;
    auto clock = std::make_shared<ManualClock>(0);
    auto board = std::make_shared<Substrate>((dir.path / "notes.md").string(), clock);
    InjectionEngine engine(clock);

    const TimeMs budget = 1000 * 1000; // 1000 s
    engine.register_session("codex/noisy_crc", {Role::Writer, 8, 0.5}, 0, budget, board);

    // Request 1 on an empty board: directive from line 1.
    auto d1 = engine.before_forward("codex", "codex/noisy_crc");
    REQUIRE(d1.has_value());
    CHECK(d1->find("tail -n +1 ") != std::string::npos);

    // Requests 2..8: silent.
    for (int r = 2; r <= 8; ++r) CHECK_FALSE(engine.before_forward("codex", "codex/noisy_crc"));

    // Peers posted meanwhile; request 9 re-points at the still-unread line 1.
    board->append_post({"gcai", "1970-01-01T00:00:01.000Z", PostKind::Artifact, "dump at /tmp/fw.bin"});
    auto d9 = engine.before_forward("codex", "codex/noisy_crc");
    REQUIRE(d9.has_value());
    CHECK(d9->find("tail -n +1 ") != std::string::npos);

    // The cursor advanced past the 3 board lines; request 17 reads from 4.
    for (int r = 10; r <= 16; ++r) CHECK_FALSE(engine.before_forward("codex", "codex/noisy_crc"));
    auto d17 = engine.before_forward("codex", "codex/noisy_crc");
    REQUIRE(d17.has_value());
    CHECK(d17->find("tail -n +4 ") != std::string::npos);
    CHECK(engine.injection_count("codex/noisy_crc") == 3);

    SUBCASE("flag sighting latches off") {
        engine.set_flag_observed("codex/noisy_crc");
        for (int r = 18; r <= 40; ++r)
            CHECK_FALSE(engine.before_forward("codex", "codex/noisy_crc"));
        CHECK(engine.injection_count("codex/noisy_crc") == 3);
    }
    SUBCASE("budget cutoff latches off") {
        clock->set_ms(budget / 2); // exactly 50%
        for (int r = 18; r <= 40; ++r)
            CHECK_FALSE(engine.before_forward("codex", "codex/noisy_crc"));
        CHECK(engine.injection_count("codex/noisy_crc") == 3);
    }
    SUBCASE("unknown sessions are unmanaged") {
        CHECK_FALSE(engine.before_forward("codex", "codex/other"));
    }
}
