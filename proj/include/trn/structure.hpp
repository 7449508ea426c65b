#pragma once

// Minimal winning groups — a team with at most k-1 losses together with the
// teams beating it — and the k=3 classification of tournaments into
// Condorcet / far-Condorcet / near-Condorcet-with-p-MW-pairs that drives the
// SignificantOnly rule. check_structural_lemmas() turns the structural
// lemmas about these groups into an executable diagnostic.

#include <string>
#include <vector>

#include "trn/teamset.hpp"
#include "trn/tournament.hpp"

namespace trn {

struct MwGroup {
  int leader;       // the team with |δ−| <= k-1
  TeamSet members;  // {leader} ∪ δ−(leader)

  int size() const { return members.count(); }
};

struct TournamentClass {
  enum class Kind { Condorcet, FarCondorcet, NearCondorcet };
  Kind kind;
  int winner = -1;    // Kind::Condorcet only
  int mw_pairs = 0;   // Kind::NearCondorcet only; in 0..3

  bool is_condorcet() const { return kind == Kind::Condorcet; }
  bool is_near() const { return kind == Kind::NearCondorcet; }
};

// One group per team with 1 <= |δ−| <= k-1, sorted by leader index.
// Precondition: t has no Condorcet-winner (callers branch on that first)
// and k >= 2; throws std::invalid_argument otherwise.
std::vector<MwGroup> mw_groups(const Tournament& t, int k);

// Fixed at k = 3, matching the rule's definition.
TournamentClass classify(const Tournament& t);

struct StructureDiag {
  TournamentClass cls;
  std::vector<MwGroup> groups;
  int significant_count = 0;
  std::vector<std::string> violations;  // empty = all lemma clauses hold

  bool pass() const { return violations.empty(); }
};

// Checks, for a near-Condorcet t (k=3): unique leader per group, pairwise
// group intersection (leader form), at most 6 significant teams, at most 3
// MW pairs with union at most 3 teams, and the 5/4/3 significant-team caps
// for exactly 1/2/3 pairs. Throws std::invalid_argument unless t is
// near-Condorcet.
StructureDiag check_structural_lemmas(const Tournament& t);

}  // namespace trn
