#include "csi/evolve/loop.hpp"

#include <fstream>

namespace csi::evolve {

Candidate ScriptedGenerator::propose(const std::string& incumbent_id, size_t iteration,
                                     const std::string& focus) {
    Candidate c;
    c.id = incumbent_id + "-i" + std::to_string(iteration);
    c.focus = focus;
    c.summary = "rewrite targeting " + focus;
    return c;
}

namespace {

nlohmann::json score_json(const CandidateScore& s) {
    return {{"solve_rate", s.solve_rate},
            {"time_bonus", s.time_bonus},
            {"step_bonus", s.step_bonus},
            {"total", s.total}};
}

CandidateScore score_from_json(const nlohmann::json& j) {
    CandidateScore s;
    s.solve_rate = j.at("solve_rate").get<double>();
    s.time_bonus = j.at("time_bonus").get<double>();
    s.step_bonus = j.at("step_bonus").get<double>();
    s.total = j.at("total").get<double>();
    return s;
}

} // namespace

nlohmann::json IterationRecord::to_json() const {
    return {{"iteration", iteration},
            {"focus", focus},
            {"candidate_id", candidate_id},
            {"candidate", score_json(candidate)},
            {"incumbent", score_json(incumbent)},
            {"accepted", accepted}};
}

IterationRecord IterationRecord::from_json(const nlohmann::json& j) {
    IterationRecord r;
    r.iteration = j.at("iteration").get<size_t>();
    r.focus = j.at("focus").get<std::string>();
    r.candidate_id = j.at("candidate_id").get<std::string>();
    r.candidate = score_from_json(j.at("candidate"));
    r.incumbent = score_from_json(j.at("incumbent"));
    r.accepted = j.at("accepted").get<bool>();
    return r;
}

std::vector<IterationRecord> read_evolution_log(const std::string& path) {
    std::vector<IterationRecord> out;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(IterationRecord::from_json(nlohmann::json::parse(line)));
    }
    return out;
}

EvolutionLoop::EvolutionLoop(std::string incumbent_id, CandidateScore incumbent_score,
                             CandidateGenerator& generator, Evaluator evaluator,
                             std::string log_path)
    : incumbent_id_(std::move(incumbent_id)),
      incumbent_score_(incumbent_score),
      generator_(generator),
      evaluator_(std::move(evaluator)),
      log_path_(std::move(log_path)) {}

IterationRecord EvolutionLoop::step() {
    const std::string& focus = next_focus(iteration_);
    Candidate candidate = generator_.propose(incumbent_id_, iteration_, focus);
    CandidateScore candidate_score = score_outcomes(evaluator_(candidate));

    IterationRecord rec;
    rec.iteration = iteration_;
    rec.focus = focus;
    rec.candidate_id = candidate.id;
    rec.candidate = candidate_score;
    rec.incumbent = incumbent_score_;
    rec.accepted = accept(candidate_score, incumbent_score_);

    if (rec.accepted) {
        incumbent_id_ = candidate.id;
        incumbent_score_ = candidate_score;
    }
    iteration_ += 1;

    if (!log_path_.empty()) {
        std::ofstream out(log_path_, std::ios::app);
        out << rec.to_json().dump() << "\n";
    }
    return rec;
}

std::vector<IterationRecord> EvolutionLoop::run(size_t iterations) {
    std::vector<IterationRecord> records;
    records.reserve(iterations);
    for (size_t i = 0; i < iterations; ++i) records.push_back(step());
    return records;
}

} // namespace csi::evolve
