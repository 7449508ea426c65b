#include <doctest.h>

#include "trn/json_io.hpp"
#include "trn/structure.hpp"

using namespace trn;

namespace {

Tournament cycle3() {
  Tournament t(3);
  t.set_result(0, 1);
  t.set_result(1, 2);
  t.set_result(2, 0);
  return t;
}

Tournament double_cycle6() { return Tournament::parse_compact("6:5779"); }

Tournament three_pairs6() {
  // A,B,C cycle, each beating the cyclic D,E,F
  Tournament t(6);
  t.set_result(0, 1);
  t.set_result(1, 2);
  t.set_result(2, 0);
  for (int abc = 0; abc < 3; ++abc)
    for (int def = 3; def < 6; ++def) t.set_result(abc, def);
  t.set_result(3, 4);
  t.set_result(4, 5);
  t.set_result(5, 3);
  return t;
}

Tournament rotational7() {
  Tournament t(7);
  for (int i = 0; i < 7; ++i)
    for (int d = 1; d <= 3; ++d) t.set_result(i, (i + d) % 7);
  return t;
}

}  // namespace

TEST_CASE("double cycle compact form is what the tests assume") {
  Tournament t(6);
  t.set_result(0, 1);
  t.set_result(1, 2);
  t.set_result(2, 0);
  t.set_result(3, 4);
  t.set_result(4, 5);
  t.set_result(5, 3);
  t.set_result(0, 4);
  t.set_result(0, 5);
  t.set_result(3, 0);
  t.set_result(1, 3);
  t.set_result(1, 5);
  t.set_result(4, 1);
  t.set_result(2, 3);
  t.set_result(2, 4);
  t.set_result(5, 2);
  CHECK(t.compact() == "6:5779");
}

TEST_CASE("mw groups of the 3-cycle are the three pairs") {
  auto groups = mw_groups(cycle3(), 2);
  REQUIRE(groups.size() == 3);
  CHECK(groups[0].leader == 0);
  CHECK(groups[0].members == TeamSet::of(3, {0, 2}));
  CHECK(groups[1].leader == 1);
  CHECK(groups[1].members == TeamSet::of(3, {0, 1}));
  CHECK(groups[2].leader == 2);
  CHECK(groups[2].members == TeamSet::of(3, {1, 2}));
}

TEST_CASE("mw groups preconditions") {
  Tournament cc = Tournament::from_index(3, 0b011);
  CHECK_THROWS_AS(mw_groups(cc, 3), std::invalid_argument);
  CHECK_THROWS_AS(mw_groups(cycle3(), 1), std::invalid_argument);
}

TEST_CASE("double cycle: three MW triples led by A,B,C, all six teams significant") {
  Tournament t = double_cycle6();
  auto groups = mw_groups(t, 3);
  REQUIRE(groups.size() == 3);
  CHECK(groups[0].leader == 0);
  CHECK(groups[0].members == TeamSet::of(6, {0, 2, 3}));
  CHECK(groups[1].leader == 1);
  CHECK(groups[1].members == TeamSet::of(6, {0, 1, 4}));
  CHECK(groups[2].leader == 2);
  CHECK(groups[2].members == TeamSet::of(6, {1, 2, 5}));
  for (const auto& g : groups) CHECK(g.size() == 3);

  TournamentClass c = classify(t);
  CHECK(c.is_near());
  CHECK(c.mw_pairs == 0);

  StructureDiag diag = check_structural_lemmas(t);
  CHECK(diag.pass());
  CHECK(diag.significant_count == 6);  // the extremal case
}

TEST_CASE("three-pair instance: pairs {A,C},{A,B},{B,C}, nothing else") {
  Tournament t = three_pairs6();
  auto groups = mw_groups(t, 3);
  REQUIRE(groups.size() == 3);
  for (const auto& g : groups) CHECK(g.size() == 2);
  CHECK(groups[0].members == TeamSet::of(6, {0, 2}));
  CHECK(groups[1].members == TeamSet::of(6, {0, 1}));
  CHECK(groups[2].members == TeamSet::of(6, {1, 2}));

  TournamentClass c = classify(t);
  CHECK(c.is_near());
  CHECK(c.mw_pairs == 3);
  StructureDiag diag = check_structural_lemmas(t);
  CHECK(diag.pass());
  CHECK(diag.significant_count == 3);
}

TEST_CASE("classification cases") {
  CHECK(classify(Tournament::from_index(3, 0b011)).is_condorcet());
  CHECK(classify(Tournament::from_index(3, 0b011)).winner == 0);
  CHECK(classify(rotational7()).kind == TournamentClass::Kind::FarCondorcet);
  CHECK(classify(cycle3()).mw_pairs == 3);
  CHECK_THROWS_AS(check_structural_lemmas(rotational7()), std::invalid_argument);
}

TEST_CASE("classify agrees with mw_groups on every 6-team tournament") {
  int near = 0, far = 0, cond = 0;
  for (const Tournament& t : TournamentRange(6)) {
    TournamentClass c = classify(t);
    if (c.is_condorcet()) {
      ++cond;
      CHECK(condorcet_winner(t) == c.winner);
      continue;
    }
    auto groups = mw_groups(t, 3);
    if (c.kind == TournamentClass::Kind::FarCondorcet) {
      ++far;
      CHECK(groups.empty());
    } else {
      ++near;
      CHECK(!groups.empty());
      int pairs = 0;
      for (const auto& g : groups)
        if (g.size() == 2) ++pairs;
      CHECK(pairs == c.mw_pairs);
    }
  }
  CHECK(cond + far + near == 32768);
  CHECK(cond == 6 * 1024);  // winner choice x free matches among the rest
}

TEST_CASE("structural lemmas hold exhaustively at n=6") {
  int checked = 0;
  int by_pairs[4] = {0, 0, 0, 0};
  int max_sig_by_pairs[4] = {0, 0, 0, 0};
  for (const Tournament& t : TournamentRange(6)) {
    TournamentClass c = classify(t);
    if (!c.is_near()) continue;
    StructureDiag d = check_structural_lemmas(t);
    if (!d.pass()) {
      for (const auto& v : d.violations) FAIL_CHECK(v);
      REQUIRE(false);
    }
    ++checked;
    ++by_pairs[c.mw_pairs];
    max_sig_by_pairs[c.mw_pairs] = std::max(max_sig_by_pairs[c.mw_pairs], d.significant_count);
    // leaders pairwise distinct comes free from construction; check group
    // intersection in leader form explicitly
    auto groups = mw_groups(t, 3);
    for (std::size_t a = 0; a < groups.size(); ++a)
      for (std::size_t b = a + 1; b < groups.size(); ++b)
        CHECK((groups[a].members.test(groups[b].leader) ||
               groups[b].members.test(groups[a].leader)));
  }
  CHECK(checked > 0);
  // each pair count occurs, and the 6/5/4/3 caps are tight at n=6
  for (int p = 0; p <= 3; ++p) CHECK(by_pairs[p] > 0);
  CHECK(max_sig_by_pairs[0] == 6);
  CHECK(max_sig_by_pairs[1] == 5);
  CHECK(max_sig_by_pairs[2] == 4);
  CHECK(max_sig_by_pairs[3] == 3);
}

TEST_CASE("structural lemmas hold on random 7- and 8-team tournaments") {
  Rng rng(2024);
  for (int n : {7, 8}) {
    for (int trial = 0; trial < 20000; ++trial) {
      Tournament t = random_tournament(n, rng);
      if (!classify(t).is_near()) continue;
      CHECK(check_structural_lemmas(t).pass());
    }
  }
}

TEST_CASE("diagnostic serializes to the documented shape") {
  Tournament t = double_cycle6();
  Json j = to_json(check_structural_lemmas(t), t);
  CHECK(j["tournament"] == "6:5779");
  CHECK(j["class"]["kind"] == "near-condorcet");
  CHECK(j["class"]["mw_pairs"] == 0);
  CHECK(j["mw_groups"].size() == 3);
  CHECK(j["significant_count"] == 6);
  CHECK(j["violations"].empty());
}
