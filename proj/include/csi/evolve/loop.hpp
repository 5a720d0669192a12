#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "csi/evolve/score.hpp"

namespace csi::evolve {

/// A proposed scaffold rewrite. The artifact never edits real scaffold
/// source; a candidate is just an id plus the focus it was written under and
/// a human-readable summary of the change.
struct Candidate {
    std::string id;
    std::string focus;
    std::string summary;
};

/// Produces candidates; the real thing would be an LLM editor plus a compile
/// step, which stays behind this interface.
class CandidateGenerator {
public:
    virtual ~CandidateGenerator() = default;
    virtual Candidate propose(const std::string& incumbent_id, size_t iteration,
                              const std::string& focus) = 0;
};

/// Deterministic generator for tests and demo runs: ids are
/// "<incumbent>-i<iteration>", summaries name the focus.
class ScriptedGenerator : public CandidateGenerator {
public:
    Candidate propose(const std::string& incumbent_id, size_t iteration,
                      const std::string& focus) override;
};

/// One loop iteration as logged.
struct IterationRecord {
    size_t iteration = 0;
    std::string focus;
    std::string candidate_id;
    CandidateScore candidate;
    CandidateScore incumbent; // score *before* the gate was applied
    bool accepted = false;

    nlohmann::json to_json() const;
    static IterationRecord from_json(const nlohmann::json& j);
};

std::vector<IterationRecord> read_evolution_log(const std::string& path);

/// Evaluates a candidate on the training items.
using Evaluator = std::function<std::vector<EvalOutcome>(const Candidate&)>;

/// Single-trace coordinate descent: propose under the rotating focus,
/// evaluate, and replace the incumbent only on strict total improvement.
/// Appends one JSONL row per iteration when a log path is given.
class EvolutionLoop {
public:
    EvolutionLoop(std::string incumbent_id, CandidateScore incumbent_score,
                  CandidateGenerator& generator, Evaluator evaluator,
                  std::string log_path = "");

    IterationRecord step();
    std::vector<IterationRecord> run(size_t iterations);

    const std::string& incumbent_id() const { return incumbent_id_; }
    const CandidateScore& incumbent_score() const { return incumbent_score_; }
    size_t iteration() const { return iteration_; }

private:
    std::string incumbent_id_;
    CandidateScore incumbent_score_;
    CandidateGenerator& generator_;
    Evaluator evaluator_;
    std::string log_path_;
    size_t iteration_ = 0;
};

} // namespace csi::evolve
