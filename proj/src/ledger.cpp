#include "hospmarl/fairness/ledger.hpp"

#include <algorithm>
#include <cstdio>

#include "hospmarl/errors.hpp"
#include "hospmarl/fairness/metrics.hpp"

namespace hospmarl {

const char* fairness_mode_name(FairnessMode m) {
  switch (m) {
    case FairnessMode::FairSkill: return "fairskill";
    case FairnessMode::WorkloadOnly: return "workload_only";
    case FairnessMode::Fen: return "fen";
    case FairnessMode::None: return "none";
  }
  return "?";
}

bool fairness_mode_from_name(const std::string& name, FairnessMode& out) {
  if (name == "fairskill") out = FairnessMode::FairSkill;
  else if (name == "workload_only") out = FairnessMode::WorkloadOnly;
  else if (name == "fen") out = FairnessMode::Fen;
  else if (name == "none") out = FairnessMode::None;
  else return false;
  return true;
}

FairnessLedger::FairnessLedger(std::vector<SkillProfile> skills, double alpha, double lambda)
    : skills_(std::move(skills)), counts_(skills_.size(), 0), alpha_(alpha), lambda_(lambda) {
  if (alpha_ < 0.0 || alpha_ > 1.0) throw ConfigError("alpha must be in [0, 1]");
  if (lambda_ < 0.0) throw ConfigError("lambda must be >= 0");
}

void FairnessLedger::record_subtask(Subtask kind, AgentId executor) {
  if (executor < 0 || executor >= n_agents())
    throw UnknownSubtaskError("record_subtask: unknown executor");
  if (static_cast<std::size_t>(kind) >= kNumSubtasks)
    throw UnknownSubtaskError("record_subtask: unknown subtask kind");
  counts_[executor] += 1;
  executed_.emplace_back(kind, executor);
  total_ += 1;
  skill_sum_ += skills_[executor].at(kind);
  double best = 0.0;
  for (const auto& p : skills_) best = std::max(best, p.at(kind));
  max_skill_sum_ += best;
}

double FairnessLedger::l1() const { return gini_l1(counts_); }

double FairnessLedger::l2() const {
  if (max_skill_sum_ <= 0.0) {
    if (total_ > 0 && !warned_degenerate_) {
      std::fprintf(stderr, "warning: alignment denominator is zero, L2 reported as 0\n");
      warned_degenerate_ = true;
    }
    return 0.0;
  }
  return 1.0 - skill_sum_ / max_skill_sum_;
}

double FairnessLedger::l3() const { return composite_l3(l1(), l2(), alpha_); }

std::vector<double> FairnessLedger::contribution_pct() const {
  std::vector<double> out(counts_.size(), 0.0);
  if (total_ == 0) return out;
  for (std::size_t i = 0; i < counts_.size(); ++i)
    out[i] = 100.0 * static_cast<double>(counts_[i]) / static_cast<double>(total_);
  return out;
}

double FairnessLedger::range() const {
  if (counts_.empty()) return 0.0;
  const auto pct = contribution_pct();
  const auto [lo, hi] = std::minmax_element(pct.begin(), pct.end());
  return *hi - *lo;
}

}  // namespace hospmarl
