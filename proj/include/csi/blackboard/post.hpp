#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "csi/clock.hpp"

namespace csi::blackboard {

enum class PostKind { Artifact, Hypothesis, FlagCandidate, Note };

std::string to_string(PostKind k);
PostKind post_kind_from_string(std::string_view s);

class SubstrateError : public std::runtime_error {
public:
    enum class Kind { Corrupt, BadDelta, Io };
    SubstrateError(Kind kind, const std::string& detail) : std::runtime_error(detail), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// One typed finding on the shared board.
///
/// Serialized form:
///   ## [author] [2026-01-05T14:03:22.000Z] [artifact]
///   body line(s)
///   <blank line>
struct Post {
    std::string author;
    std::string timestamp; // RFC3339 UTC
    PostKind kind = PostKind::Note;
    std::string body;

    std::string serialize() const;
    bool operator==(const Post&) const = default;
};

/// Parse every post in a substrate document. Lines outside post blocks are
/// free-form scratch and are skipped; a line that starts like a post header
/// but does not parse raises SubstrateError(Corrupt).
std::vector<Post> parse_posts(const std::string& content);

} // namespace csi::blackboard
