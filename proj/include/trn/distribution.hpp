#pragma once

// Exact win distribution of a rule: per-real-team probabilities plus the
// mass that landed on padding dummies. Always sums to exactly 1.

#include <vector>

#include "trn/rational.hpp"
#include "trn/teamset.hpp"

namespace trn {

struct WinDistribution {
  std::vector<Rat> probs;
  Rat dummy_mass;

  static WinDistribution zeros(int n) {
    WinDistribution d;
    d.probs.assign(n, Rat(0));
    return d;
  }

  int n() const { return static_cast<int>(probs.size()); }

  Rat total() const {
    Rat s = dummy_mass;
    for (const Rat& p : probs) s += p;
    return s;
  }

  // r_S: joint probability of the members of s.
  Rat mass(const TeamSet& s) const {
    Rat m(0);
    for (int i : s.members()) m += probs.at(i);
    return m;
  }

  // Entries >= 0, dummy_mass >= 0, total exactly 1.
  void validate() const {
    for (const Rat& p : probs)
      if (p.sign() < 0) throw std::logic_error("WinDistribution: negative probability");
    if (dummy_mass.sign() < 0) throw std::logic_error("WinDistribution: negative dummy mass");
    if (total() != Rat(1)) throw std::logic_error("WinDistribution: mass does not sum to 1");
  }
};

}  // namespace trn
