#pragma once

// Property audits over exact rule outputs: Condorcet / top-cycle
// consistency, monotonicity, and worst-case coalition gain (k-SNM-α) with
// replayable witnesses. Exhaustive mode sweeps every tournament on n teams;
// sampled mode draws scenarios but still evaluates every gain exactly.

#include <cstdint>
#include <optional>
#include <string>

#include "trn/rational.hpp"
#include "trn/rules.hpp"
#include "trn/tournament.hpp"

namespace trn {

class AuditError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AuditOptions {
  int threads = 1;  // 0 = auto-detect
  std::uint64_t max_scenarios = 2'000'000'000;
};

// A manipulation instance: `variant` agrees with `base` outside the
// coalition's internal matches.
struct CollusionScenario {
  Tournament base;
  TeamSet coalition;
  Tournament variant;
};

struct KsnmReport {
  std::string rule_id;
  int n = 0;
  int k = 0;
  bool exhaustive = true;
  Rat alpha_observed;                 // max of r_S(T') - r_S(T)
  CollusionScenario witness;          // achieves alpha_observed
  std::uint64_t scenarios_checked = 0;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  double wall_ms = 0.0;
  std::string coverage_note;          // sampled mode only
};

// Max gain over every tournament, every coalition of size 2..k and every
// orientation of its internal matches. Ties break toward the smallest
// (tournament index, coalition mask, variant index), so reports are
// identical across runs and worker counts.
KsnmReport audit_ksnm_exhaustive(const Rule& rule, int n, int k,
                                 const AuditOptions& opts = {});

// Random (tournament, coalition) scenarios; inside each, every variant is
// enumerated when C(|S|,2) is small, else greedy best-response refinement.
// Gains are exact. Lower-bound witness only.
KsnmReport audit_ksnm_sampled(const Rule& rule, int n, int k,
                              std::uint64_t scenarios, std::uint64_t seed,
                              const AuditOptions& opts = {});

struct MonotoneWitness {
  Tournament base;
  Tournament variant;  // base with one win of `team` flipped to a loss
  int team = -1;
  Rat before, after;   // r_team(base), r_team(variant); after > before
};

struct MonotoneReport {
  std::string rule_id;
  int n = 0;
  bool pass = false;
  std::uint64_t checks = 0;
  std::optional<MonotoneWitness> witness;
  int threads = 1;
  double wall_ms = 0.0;
};

// Single-flip monotonicity across all tournaments (flip chains reduce to
// single flips by transitivity).
MonotoneReport audit_monotone(const Rule& rule, int n, const AuditOptions& opts = {});

struct ConsistencyReport {
  std::string rule_id;
  int n = 0;
  std::string property;  // "cc" or "top-cycle"
  bool pass = false;
  std::uint64_t checks = 0;
  std::optional<Tournament> witness;
  int threads = 1;
  double wall_ms = 0.0;
};

// Every Condorcet tournament maps its winner to probability exactly 1.
ConsistencyReport audit_cc(const Rule& rule, int n, const AuditOptions& opts = {});

// Exact: zero mass outside the top cycle (and zero dummy mass) everywhere.
ConsistencyReport audit_top_cycle_exact(const Rule& rule, int n,
                                        const AuditOptions& opts = {});

struct SampledTopCycleReport {
  std::string rule_id;
  int n = 0;
  std::uint64_t tournaments = 0;
  std::uint64_t draws_per_tournament = 0;
  std::uint64_t violations = 0;
  std::uint64_t seed = 0;
  bool pass() const { return violations == 0; }
  double wall_ms = 0.0;
};

// Samples winners on random tournaments; any winner outside the top cycle
// (including a dummy) is a violation.
SampledTopCycleReport audit_top_cycle_sampled(const Rule& rule, int n,
                                              std::uint64_t tournaments,
                                              std::uint64_t draws_per_tournament,
                                              std::uint64_t seed,
                                              const AuditOptions& opts = {});

struct BoundReport {
  KsnmReport search;
  Rat bound;
  bool within = false;  // alpha_observed <= bound
};

// Witness search asserting every observed gain stays under a closed-form
// bound; the max found doubles as an empirical tightness probe.
BoundReport bound_check_exhaustive(const Rule& rule, int n, int k, const Rat& bound,
                                   const AuditOptions& opts = {});
BoundReport bound_check_sampled(const Rule& rule, int n, int k, const Rat& bound,
                                std::uint64_t scenarios, std::uint64_t seed,
                                const AuditOptions& opts = {});

// Re-evaluates a witness from scratch; reports must reproduce exactly.
Rat replay_gain(const Rule& rule, const CollusionScenario& s);

}  // namespace trn
