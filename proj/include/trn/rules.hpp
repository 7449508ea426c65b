#pragma once

// The tournament rules: SignificantOnly, the randomized d-ary
// single-elimination bracket (exact distribution and single-run sampler),
// uniform TopCycle, the uniform baseline, the Ext(r, n^d) scaling
// combinator, and the closed-form manipulability bound evaluators.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trn/distribution.hpp"
#include "trn/rng.hpp"
#include "trn/tournament.hpp"

namespace trn {

// Input outside the rule's domain (e.g. significant-only below 6 teams).
class RuleDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact evaluation refused because the required work exceeds a cap.
class FeasibilityError : public std::runtime_error {
 public:
  FeasibilityError(const std::string& msg, std::uint64_t required, std::uint64_t cap)
      : std::runtime_error(msg), required(required), cap(cap) {}
  std::uint64_t required;
  std::uint64_t cap;
};

struct EvalCaps {
  std::uint64_t rdseb_states = 2'000'000;   // subset-memo entries, all levels
  std::uint64_t rdseb_work = 20'000'000;    // partition × finalist-tuple steps
  std::uint64_t ext_partitions = 100'000;   // unordered group seedings
  std::uint64_t ext_work = 10'000'000;      // partition × finalist-tuple steps
};

// A rule is a mapping from tournaments to win distributions. `exact` returns
// the full distribution; `sample` returns one winner. Either may be absent,
// never both. Samplers return a team index; a value >= t.n() means a padding
// dummy won (possible for rdseb with d >= 4 only).
struct Rule {
  std::string id;
  std::function<WinDistribution(const Tournament&)> exact;
  std::function<int(const Tournament&, Rng&)> sample;
};

WinDistribution uniform_rule(const Tournament& t);
WinDistribution topcycle_rule(const Tournament& t);

// Defined for n >= 6; throws RuleDomainError below that.
WinDistribution significant_only(const Tournament& t);

// Exact root-label distribution of a uniformly random d-ary bracket, by
// subset-memoized partition recursion. Mass on padding dummies is reported
// in dummy_mass, never attributed to real teams.
WinDistribution rdseb_exact(const Tournament& t, int d, const EvalCaps& caps = {});

// Independent small-scale oracle: explicit enumeration of all n_pad! * d^l
// (leaf assignment, marks) pairs. Refuses beyond ~2e7 brackets.
WinDistribution rdseb_bruteforce(const Tournament& t, int d);

// A d-ary bracket: complete tree of the given height, leaf k holds team
// leaf_teams[k], inner node v (heap order, root = 0, children d*v+1 ..
// d*v+d) carries marks[v] in [0, d).
struct Bracket {
  int d = 2;
  int height = 0;
  std::vector<int> leaf_teams;
  std::vector<int> marks;

  int leaves() const { return static_cast<int>(leaf_teams.size()); }
  int inner_nodes() const { return static_cast<int>(marks.size()); }
  int total_nodes() const { return inner_nodes() + leaves(); }
};

struct BracketRun {
  Bracket bracket;
  std::vector<int> labels;  // resolved label per node, root first
  int winner = -1;          // labels[0]
};

// Node labeling induced by `padded` (which must contain every leaf team):
// an inner node takes the Condorcet-winner of its children's labels, else
// the label of the child its mark selects.
std::vector<int> resolve_bracket(const Tournament& padded, const Bracket& b);

// Uniform leaf assignment and independent uniform marks from `rng`.
BracketRun sample_bracket(const Tournament& t, int d, Rng& rng);

// 1 - 2*(d)_k / d^(k+1), the falling-factorial manipulability bound.
// Domain 2 <= k <= d; throws std::domain_error outside it.
Rat alpha_bound(int d, int k);

// alpha*(1 - (k-1)^2/n) + (k-1)^2/n, the scaling-combinator bound.
Rat ext_alpha_bound(const Rat& alpha, int k, long n);

// Scales `base` (a rule on exactly base_n teams) to target_n > base_n teams:
// pad with dummies to base_n^d for minimal d, partition uniformly into
// base_n equal groups, advance a uniform member of each group's top cycle,
// run base on the finalists. The result always has a sampler; it has exact
// only when base has exact and the partition count is within caps.
Rule extend_rule(const Rule& base, int base_n, int target_n, const EvalCaps& caps = {});

// Registry for the stable CLI ids: "uniform", "top-cycle",
// "significant-only", "rdseb:<d>", "ext:<base-id>:<base-n>". Throws
// std::invalid_argument for unknown ids. For "ext:..." the target size is
// taken from each input tournament, so exact evaluation may throw
// FeasibilityError at call time.
Rule make_rule(const std::string& id, const EvalCaps& caps = {});

// Exact inverse-CDF sample from a distribution (common denominator must fit
// in 62 bits, which holds for every rule here). Returns t-relative index;
// dist.n() stands for "dummy".
int sample_from_exact(const WinDistribution& dist, Rng& rng);

}  // namespace trn
