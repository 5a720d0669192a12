#include "csi/blackboard/substrate.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace csi::blackboard {

namespace {

size_t count_lines(const std::string& text) {
    return static_cast<size_t>(std::count(text.begin(), text.end(), '\n'));
}

} // namespace

Substrate::Substrate(std::string file_path, std::shared_ptr<Clock> clock, std::string mount_path)
    : file_path_(std::move(file_path)),
      events_path_(file_path_ + ".events.jsonl"),
      mount_path_(std::move(mount_path)),
      clock_(std::move(clock)) {
    const auto dir = std::filesystem::path(file_path_).parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);
}

std::string Substrate::read_all() const {
    std::ifstream in(file_path_, std::ios::binary);
    if (!in.good()) return "";
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

size_t Substrate::line_count() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return count_lines(read_all());
}

void Substrate::append_raw(const std::string& text) {
    const int fd = ::open(file_path_.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd < 0)
        throw SubstrateError(SubstrateError::Kind::Io,
                             "cannot open substrate " + file_path_ + ": " + std::strerror(errno));
    size_t off = 0;
    while (off < text.size()) {
        const ssize_t n = ::write(fd, text.data() + off, text.size() - off);
        if (n < 0) {
            if (errno == EINTR) continue;
            ::close(fd);
            throw SubstrateError(SubstrateError::Kind::Io,
                                 "substrate write failed: " + std::string(std::strerror(errno)));
        }
        off += static_cast<size_t>(n);
    }
    ::close(fd);
}

void Substrate::log_event(const std::string& who, const char* event, size_t lines, size_t posts) {
    nlohmann::json j{{"ts", rfc3339_utc(clock_->now_ms())},
                     {"scaffold", who},
                     {"event", event},
                     {"lines", lines}};
    if (posts > 0) j["posts"] = posts;
    const std::string line = j.dump() + "\n";
    const int fd = ::open(events_path_.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd < 0) throw SubstrateError(SubstrateError::Kind::Io, "cannot open " + events_path_);
    [[maybe_unused]] ssize_t n = ::write(fd, line.data(), line.size());
    ::close(fd);
}

size_t Substrate::append_post(Post post) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (post.timestamp.empty()) post.timestamp = rfc3339_utc(clock_->now_ms());
    const size_t header_line = count_lines(read_all()) + 1;
    const std::string text = post.serialize();
    append_raw(text);
    log_event(post.author, "write", count_lines(text), 1);
    return header_line;
}

size_t Substrate::append_lines(const std::string& author, const std::vector<std::string>& lines) {
    std::lock_guard<std::mutex> lock(mutex_);
    const size_t first_line = count_lines(read_all()) + 1;
    std::string text;
    for (const std::string& l : lines) text += l + "\n";
    append_raw(text);
    log_event(author, "write", lines.size(), 0);
    return first_line;
}

DeltaRead Substrate::read_delta(size_t from_line, const std::string& reader) {
    std::lock_guard<std::mutex> lock(mutex_);
    const std::string content = read_all();
    const size_t total = count_lines(content);
    if (from_line < 1 || from_line > total + 1)
        throw SubstrateError(SubstrateError::Kind::BadDelta,
                             "delta read from line " + std::to_string(from_line) + " but substrate has " +
                                 std::to_string(total) + " lines");
    DeltaRead delta;
    std::istringstream in(content);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno >= from_line) delta.lines.push_back(line);
    }
    delta.next_from_line = total + 1;
    log_event(reader, "read", delta.lines.size(), 0);
    return delta;
}

std::vector<Post> Substrate::posts() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return parse_posts(read_all());
}

size_t Substrate::recent_post_count(TimeMs now, TimeMs window_ms) const {
    size_t count = 0;
    for (const Post& p : posts()) {
        try {
            const TimeMs t = parse_rfc3339(p.timestamp);
            if (t >= now - window_ms && t <= now) ++count;
        } catch (const std::invalid_argument&) {
            // Unstampable posts never count as recent.
        }
    }
    return count;
}

std::vector<ActivityEvent> read_activity_log(const std::string& events_path) {
    std::ifstream in(events_path);
    std::vector<ActivityEvent> events;
    if (!in.good()) return events;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw SubstrateError(SubstrateError::Kind::Corrupt, "corrupt activity log line in " + events_path);
        ActivityEvent e;
        e.timestamp = j.value("ts", "");
        e.scaffold = j.value("scaffold", "");
        e.event = j.value("event", "");
        e.lines = j.value("lines", size_t{0});
        e.posts = j.value("posts", size_t{0});
        events.push_back(std::move(e));
    }
    return events;
}

} // namespace csi::blackboard
