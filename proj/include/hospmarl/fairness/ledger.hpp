#pragma once

#include <vector>

#include "hospmarl/env/skills.hpp"
#include "hospmarl/env/types.hpp"

namespace hospmarl {

enum class FairnessMode { FairSkill, WorkloadOnly, Fen, None };

const char* fairness_mode_name(FairnessMode m);
bool fairness_mode_from_name(const std::string& name, FairnessMode& out);

// Per-episode record of who did which subtask, plus the skill table needed
// for the alignment metric. Owned by one episode runner.
class FairnessLedger {
 public:
  FairnessLedger() = default;
  FairnessLedger(std::vector<SkillProfile> skills, double alpha, double lambda);

  void record_subtask(Subtask kind, AgentId executor);

  int n_agents() const { return static_cast<int>(skills_.size()); }
  int total_subtasks() const { return total_; }
  const std::vector<int>& subtask_counts() const { return counts_; }
  const std::vector<std::pair<Subtask, AgentId>>& executed() const { return executed_; }
  double alpha() const { return alpha_; }
  double lambda() const { return lambda_; }

  double l1() const;
  // Skill-task alignment L2 = 1 - sum_t S_executor(t) / sum_t max_j S_j(t).
  // A zero denominator (no agent could ever be aligned) degenerates to 0.
  double l2() const;
  double l3() const;

  // Per-agent share of all executed subtasks, in percent (zeros when empty).
  std::vector<double> contribution_pct() const;
  // max contribution % minus min contribution %.
  double range() const;

 private:
  std::vector<SkillProfile> skills_;
  std::vector<int> counts_;
  std::vector<std::pair<Subtask, AgentId>> executed_;
  double skill_sum_ = 0.0;      // sum of executor skill over executed subtasks
  double max_skill_sum_ = 0.0;  // sum of best-available skill over the same
  int total_ = 0;
  double alpha_ = 0.7;
  double lambda_ = 1.0;
  mutable bool warned_degenerate_ = false;
};

struct FairnessReport {
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;
  std::vector<double> contribution_pct;
  double range = 0.0;
  double success_rate = 0.0;
};

}  // namespace hospmarl
