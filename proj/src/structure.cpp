#include "trn/structure.hpp"

#include <algorithm>

namespace trn {

std::vector<MwGroup> mw_groups(const Tournament& t, int k) {
  if (k < 2) throw std::invalid_argument("mw_groups: k must be >= 2");
  if (condorcet_winner(t))
    throw std::invalid_argument("mw_groups: tournament has a Condorcet-winner");
  std::vector<MwGroup> out;
  for (int i = 0; i < t.n(); ++i) {
    int losses = t.in_degree(i);
    if (losses >= 1 && losses <= k - 1) {
      TeamSet members = t.beaters_of(i);
      members.set(i);
      out.push_back(MwGroup{i, members});
    }
  }
  // Already sorted by leader index by construction.
  return out;
}

TournamentClass classify(const Tournament& t) {
  if (auto w = condorcet_winner(t))
    return TournamentClass{TournamentClass::Kind::Condorcet, *w, 0};
  auto groups = mw_groups(t, 3);
  if (groups.empty()) return TournamentClass{TournamentClass::Kind::FarCondorcet, -1, 0};
  int pairs = 0;
  for (const auto& g : groups)
    if (g.size() == 2) ++pairs;
  return TournamentClass{TournamentClass::Kind::NearCondorcet, -1, pairs};
}

StructureDiag check_structural_lemmas(const Tournament& t) {
  StructureDiag d;
  d.cls = classify(t);
  if (!d.cls.is_near())
    throw std::invalid_argument("check_structural_lemmas: tournament is not near-Condorcet");
  d.groups = mw_groups(t, 3);

  TeamSet significant(t.n());
  TeamSet pair_union(t.n());
  int pairs = 0;
  for (const auto& g : d.groups) {
    significant = significant | g.members;
    if (g.size() == 2) {
      ++pairs;
      pair_union = pair_union | g.members;
    }
  }
  d.significant_count = significant.count();

  auto violate = [&d](const std::string& msg) { d.violations.push_back(msg); };

  // (a) exactly one leader per member set
  for (std::size_t a = 0; a < d.groups.size(); ++a)
    for (std::size_t b = a + 1; b < d.groups.size(); ++b)
      if (d.groups[a].members == d.groups[b].members)
        violate("groups led by " + std::to_string(d.groups[a].leader) + " and " +
                std::to_string(d.groups[b].leader) + " share one member set");

  // (b) pairwise intersection, in leader form: i in MW(j) or j in MW(i)
  for (std::size_t a = 0; a < d.groups.size(); ++a)
    for (std::size_t b = a + 1; b < d.groups.size(); ++b) {
      const auto& ga = d.groups[a];
      const auto& gb = d.groups[b];
      if (!gb.members.test(ga.leader) && !ga.members.test(gb.leader))
        violate("leaders " + std::to_string(ga.leader) + " and " + std::to_string(gb.leader) +
                " are in neither of each other's groups");
      if (!ga.members.intersects(gb.members))
        violate("groups of " + std::to_string(ga.leader) + " and " + std::to_string(gb.leader) +
                " are disjoint");
    }

  // (c) global caps
  if (d.significant_count > 6)
    violate("more than 6 significant teams: " + std::to_string(d.significant_count));
  if (pairs > 3) violate("more than 3 MW pairs: " + std::to_string(pairs));
  if (pair_union.count() > 3)
    violate("union of MW pairs has more than 3 teams: " + std::to_string(pair_union.count()));

  // (d) significant-team caps for exactly 1/2/3 pairs
  static const int cap_by_pairs[4] = {6, 5, 4, 3};
  if (pairs <= 3 && d.significant_count > cap_by_pairs[pairs])
    violate("with " + std::to_string(pairs) + " MW pairs, " +
            std::to_string(d.significant_count) + " significant teams exceeds cap " +
            std::to_string(cap_by_pairs[pairs]));

  return d;
}

}  // namespace trn
