#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "csi/blackboard/post.hpp"
#include "csi/clock.hpp"

namespace csi::blackboard {

struct DeltaRead {
    std::vector<std::string> lines;
    size_t next_from_line = 1; // pass this back in to continue
};

/// Append-only shared notes file plus a sidecar activity log
/// (<file>.events.jsonl) recording who read and wrote. One substrate file per
/// challenge; writers are serialized by an in-process lock and O_APPEND
/// writes, so concurrent posts interleave whole entries.
class Substrate {
public:
    /// `mount_path` is the path agents are told about (directive text); the
    /// backing file can live anywhere.
    Substrate(std::string file_path, std::shared_ptr<Clock> clock,
              std::string mount_path = "/blackboard/notes.md");

    const std::string& file_path() const { return file_path_; }
    const std::string& mount_path() const { return mount_path_; }

    size_t line_count() const;

    /// Append a typed post; returns the 1-based line its header landed on.
    /// The post's timestamp is stamped from the clock if empty.
    size_t append_post(Post post);

    /// Free-form append (scratch lines outside the post format).
    size_t append_lines(const std::string& author, const std::vector<std::string>& lines);

    /// Everything from `from_line` (1-based) to EOF; `tail -n +N` semantics.
    /// from_line may be at most line_count()+1 (an empty read); beyond that
    /// raises SubstrateError(BadDelta).
    DeltaRead read_delta(size_t from_line, const std::string& reader);

    /// Parse all posts currently on the board.
    std::vector<Post> posts() const;

    /// Posts younger than `window_ms` as of `now`.
    size_t recent_post_count(TimeMs now, TimeMs window_ms) const;

private:
    std::string read_all() const;
    void append_raw(const std::string& text);
    void log_event(const std::string& who, const char* event, size_t lines, size_t posts);

    std::string file_path_;
    std::string events_path_;
    std::string mount_path_;
    std::shared_ptr<Clock> clock_;
    mutable std::mutex mutex_;
};

/// One row of the activity sidecar.
struct ActivityEvent {
    std::string timestamp;
    std::string scaffold;
    std::string event; // "read" | "write"
    size_t lines = 0;
    size_t posts = 0; // posts contained in this write (0 for reads/scratch)
};

std::vector<ActivityEvent> read_activity_log(const std::string& events_path);

} // namespace csi::blackboard
