#pragma once

#include <string>

#include "csi/blackboard/policy.hpp"

namespace csi::blackboard {

/// Deterministic directive text: same inputs, same bytes. from_line feeds the
/// `tail -n +N` delta-read command; read-write directives additionally carry
/// posting instructions, and a quiet board adds a seeding nudge.
std::string render_directive(DirectiveClass cls, size_t from_line, bool quiet_board = false,
                             const std::string& substrate_path = "/blackboard/notes.md");

} // namespace csi::blackboard
