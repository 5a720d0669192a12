#include "csi/blackboard/post.hpp"

#include <array>
#include <sstream>

namespace csi::blackboard {

std::string to_string(PostKind k) {
    switch (k) {
    case PostKind::Artifact: return "artifact";
    case PostKind::Hypothesis: return "hypothesis";
    case PostKind::FlagCandidate: return "flag-candidate";
    case PostKind::Note: return "note";
    }
    return "note";
}

PostKind post_kind_from_string(std::string_view s) {
    if (s == "artifact") return PostKind::Artifact;
    if (s == "hypothesis") return PostKind::Hypothesis;
    if (s == "flag-candidate") return PostKind::FlagCandidate;
    if (s == "note") return PostKind::Note;
    throw SubstrateError(SubstrateError::Kind::Corrupt, "unknown post kind '" + std::string(s) + "'");
}

std::string Post::serialize() const {
    std::string out = "## [" + author + "] [" + timestamp + "] [" + to_string(kind) + "]\n";
    out += body;
    if (!body.empty() && body.back() != '\n') out += '\n';
    out += '\n';
    return out;
}

namespace {

// "## [a] [b] [c]" -> {a, b, c}; throws on structural mismatch.
std::array<std::string, 3> parse_header(const std::string& line) {
    std::array<std::string, 3> fields;
    size_t pos = 2; // after "##"
    for (int i = 0; i < 3; ++i) {
        const size_t open = line.find('[', pos);
        const size_t close = line.find(']', open);
        if (open == std::string::npos || close == std::string::npos)
            throw SubstrateError(SubstrateError::Kind::Corrupt, "unparseable post header: " + line);
        fields[i] = line.substr(open + 1, close - open - 1);
        pos = close + 1;
    }
    return fields;
}

} // namespace

std::vector<Post> parse_posts(const std::string& content) {
    std::vector<Post> posts;
    std::istringstream in(content);
    std::string line;
    Post current;
    bool in_post = false;
    bool first_body_line = true;
    auto flush = [&] {
        if (in_post) {
            posts.push_back(current);
            in_post = false;
        }
    };
    while (std::getline(in, line)) {
        if (line.rfind("## ", 0) == 0) {
            flush();
            const auto fields = parse_header(line);
            current = Post{};
            current.author = fields[0];
            current.timestamp = fields[1];
            current.kind = post_kind_from_string(fields[2]);
            in_post = true;
            first_body_line = true;
        } else if (in_post) {
            if (line.empty()) {
                flush(); // blank line terminates the post
            } else {
                if (!first_body_line) current.body += '\n';
                current.body += line;
                first_body_line = false;
            }
        }
        // Non-blank lines outside any post block are free-form scratch.
    }
    flush();
    return posts;
}

} // namespace csi::blackboard
