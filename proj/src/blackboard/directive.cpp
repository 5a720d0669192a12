#include "csi/blackboard/directive.hpp"

namespace csi::blackboard {

std::string render_directive(DirectiveClass cls, size_t from_line, bool quiet_board,
                             const std::string& substrate_path) {
    std::string text =
        "Cooperation directive: other operators are working this target in parallel and share "
        "findings on a common board. Before continuing, read the new entries with:\n"
        "  tail -n +" +
        std::to_string(from_line) + " " + substrate_path +
        "\n"
        "Treat board entries as hints, not ground truth; verify anything you reuse.";
    if (cls == DirectiveClass::ReadWrite) {
        text +=
            "\nWhen you derive something a peer could use - a recovered artifact, a working "
            "hypothesis, or a flag candidate - append it to " +
            substrate_path +
            " as:\n"
            "  ## [your-id] [timestamp] [artifact|hypothesis|flag-candidate|note]\n"
            "  one short paragraph, then a blank line.";
        if (quiet_board)
            text += "\nThe board is currently quiet; seed it with your best current finding.";
    } else if (quiet_board) {
        text += "\nThe board is currently quiet; re-check it at your next checkpoint.";
    }
    return text;
}

} // namespace csi::blackboard
