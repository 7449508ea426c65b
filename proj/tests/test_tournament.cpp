#include <doctest.h>

#include <cmath>
#include <set>

#include "trn/tournament.hpp"

using namespace trn;

namespace {

Tournament cycle3() {
  Tournament t(3);
  t.set_result(0, 1);
  t.set_result(1, 2);
  t.set_result(2, 0);
  return t;
}

// Double cycle on 6 teams: A,B,C cycle; D,E,F cycle;
// A beats E,F; B beats D,F; C beats D,E.
Tournament double_cycle6() {
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
  return t;
}

// i beats i+1..i+w (mod n); regular when n = 2w+1.
Tournament rotational(int n) {
  Tournament t(n);
  const int w = (n - 1) / 2;
  for (int i = 0; i < n; ++i)
    for (int d = 1; d <= w; ++d) t.set_result(i, (i + d) % n);
  if (n % 2 == 0)
    for (int i = 0; i < n / 2; ++i) t.set_result(i, (i + n / 2) % n);
  return t;
}

// Exhaustive oracle for the top cycle: the smallest dominant set, checked
// against every other dominant set for containment.
TeamSet top_cycle_bruteforce(const Tournament& t) {
  const int n = t.n();
  std::vector<std::uint64_t> dominant;
  for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
    bool ok = true;
    for (int in = 0; in < n && ok; ++in) {
      if (!((mask >> in) & 1)) continue;
      for (int out = 0; out < n; ++out)
        if (!((mask >> out) & 1) && t.beats(out, in)) {
          ok = false;
          break;
        }
    }
    if (ok) dominant.push_back(mask);
  }
  REQUIRE(!dominant.empty());
  std::uint64_t best = dominant[0];
  for (std::uint64_t m : dominant)
    if (__builtin_popcountll(m) < __builtin_popcountll(best)) best = m;
  for (std::uint64_t m : dominant) REQUIRE((best & ~m) == 0);  // minimal and unique
  return TeamSet::from_mask(n, best);
}

}  // namespace

TEST_CASE("condorcet winner detection") {
  Tournament single(1);
  CHECK(condorcet_winner(single) == 0);
  CHECK(!condorcet_winner(cycle3()).has_value());
  CHECK(!condorcet_winner(double_cycle6()).has_value());
  Tournament t = Tournament::from_index(3, 0b011);  // 0 beats 1 and 2
  CHECK(condorcet_winner(t) == 0);
}

TEST_CASE("degree identities") {
  for (int n = 2; n <= 5; ++n) {
    for (const Tournament& t : TournamentRange(n)) {
      int total = 0;
      for (int i = 0; i < n; ++i) {
        CHECK(t.out_degree(i) + t.in_degree(i) == n - 1);
        total += t.out_degree(i);
      }
      CHECK(std::uint64_t(total) == pair_count(n));
    }
  }
}

TEST_CASE("top cycle matches the brute-force minimal dominant set") {
  for (int n = 1; n <= 5; ++n)
    for (const Tournament& t : TournamentRange(n)) CHECK(top_cycle(t) == top_cycle_bruteforce(t));
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Tournament t = random_tournament(8, rng);
    CHECK(top_cycle(t) == top_cycle_bruteforce(t));
  }
}

TEST_CASE("top cycle special cases") {
  // 3-cycle on {0,1,2} all beating 3
  Tournament t(4);
  t.set_result(0, 1);
  t.set_result(1, 2);
  t.set_result(2, 0);
  t.set_result(0, 3);
  t.set_result(1, 3);
  t.set_result(2, 3);
  CHECK(top_cycle(t) == TeamSet::of(4, {0, 1, 2}));
  CHECK(top_cycle(rotational(5)).count() == 5);
  // Condorcet winner => singleton top cycle, and they agree (all n <= 5)
  for (int n = 1; n <= 5; ++n)
    for (const Tournament& x : TournamentRange(n)) {
      auto cw = condorcet_winner(x);
      TeamSet tc = top_cycle(x);
      CHECK(cw.has_value() == (tc.count() == 1));
      if (cw) CHECK(tc.test(*cw));
    }
}

TEST_CASE("adjacency variants enumerate intra-coalition orientations") {
  Tournament t = double_cycle6();
  CHECK(adjacency_variants(t, TeamSet::of(6, {0, 1})).size() == 2);
  CHECK(adjacency_variants(t, TeamSet::of(6, {0, 1, 2})).size() == 8);
  CHECK_THROWS_AS(adjacency_variants(t, TeamSet::of(6, {0})), std::invalid_argument);

  TeamSet s = TeamSet::of(6, {0, 2, 3});  // A, C, D: C and D can throw to A
  auto variants = adjacency_variants(t, s);
  bool contains_input = false;
  bool contains_condorcet_a = false;
  for (const Tournament& v : variants) {
    if (v == t) contains_input = true;
    if (condorcet_winner(v) == 0) contains_condorcet_a = true;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        if (i != j && !(s.test(i) && s.test(j))) CHECK(v.beats(i, j) == t.beats(i, j));
  }
  CHECK(contains_input);
  CHECK(contains_condorcet_a);
}

TEST_CASE("enumeration counts and uniqueness") {
  CHECK(tournament_count(2) == 2);
  CHECK(tournament_count(3) == 8);
  CHECK(tournament_count(6) == 32768);
  CHECK_THROWS_AS(tournament_count(9), std::invalid_argument);

  int condorcet = 0, cycles = 0;
  for (const Tournament& t : TournamentRange(3)) {
    if (condorcet_winner(t))
      ++condorcet;
    else
      ++cycles;
  }
  CHECK(condorcet == 6);
  CHECK(cycles == 2);

  for (int n = 2; n <= 5; ++n) {
    std::set<std::uint64_t> seen;
    for (const Tournament& t : TournamentRange(n)) {
      t.validate();
      seen.insert(t.index());
    }
    CHECK(seen.size() == tournament_count(n));
  }
}

TEST_CASE("random tournaments are deterministic and fair") {
  Rng a(123), b(123);
  CHECK(random_tournament(6, a) == random_tournament(6, b));
  Tournament one(1);
  Rng c(5);
  CHECK(random_tournament(1, c) == one);

  // 3-sigma binomial band for every ordered pair over 1e5 draws
  const int draws = 100000;
  Rng rng(99);
  int wins[6][6] = {};
  for (int i = 0; i < draws; ++i) {
    Tournament t = random_tournament(6, rng);
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        if (a != b && t.beats(a, b)) ++wins[a][b];
  }
  const double sigma = std::sqrt(draws * 0.25);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      if (a != b) CHECK(std::abs(wins[a][b] - draws / 2.0) <= 3 * sigma);
}

TEST_CASE("dummy padding") {
  Tournament t = cycle3();
  CHECK(pad_with_dummies(t, 3) == t);
  Tournament p = pad_with_dummies(t, 4);
  CHECK(p.n() == 4);
  for (int r = 0; r < 3; ++r) CHECK(p.beats(r, 3));
  Tournament q = pad_with_dummies(t, 6);
  CHECK(q.beats(3, 4));  // lower dummy beats higher
  CHECK(q.beats(3, 5));
  CHECK(q.beats(4, 5));
  CHECK_THROWS_AS(pad_with_dummies(t, 2), std::invalid_argument);

  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Tournament r = random_tournament(5, rng);
    int target = 5 + static_cast<int>(rng.bounded(6));
    TeamSet before = top_cycle(r);
    TeamSet after = top_cycle(pad_with_dummies(r, target));
    CHECK(after.count() == before.count());
    for (int i : before.members()) CHECK(after.test(i));
  }
}

TEST_CASE("text serialization round trips with diagnostics") {
  const std::string canonical = "3\n-10\n0-1\n10-\n";
  Tournament t = Tournament::parse(canonical);
  CHECK(t == cycle3());
  CHECK(t.serialize() == canonical);

  CHECK_THROWS_WITH_AS(Tournament::parse("3\n-10\n0-1\n100"), doctest::Contains("diagonal"),
                       ParseError);
  CHECK_THROWS_WITH_AS(Tournament::parse("3\n-10\n001\n10-"), doctest::Contains("diagonal"),
                       ParseError);
  CHECK_THROWS_WITH_AS(Tournament::parse("3\n-10\n0-1\n00-"),
                       doctest::Contains("asymmetric pair (0,2)"), ParseError);
  CHECK_THROWS_WITH_AS(Tournament::parse("3\n-10\n0-10\n10-"),
                       doctest::Contains("wrong row length"), ParseError);
  CHECK_THROWS_WITH_AS(Tournament::parse("3\n-10\n0-1"), doctest::Contains("expected 3"),
                       ParseError);
  CHECK_THROWS_AS(Tournament::parse("x\n"), ParseError);
  CHECK_THROWS_AS(Tournament::parse("3\n-10\n0-1\n10-\nextra\n"), ParseError);
}

TEST_CASE("compact form uses the documented bit layout") {
  // 3-cycle 0->1->2->0: pair bits (0,1)=1, (0,2)=0, (1,2)=1, LSB-first = 5.
  CHECK(cycle3().compact() == "3:5");
  CHECK(Tournament::parse_compact("3:5") == cycle3());
  CHECK(cycle3().index() == 5);

  CHECK(Tournament::from_index(3, 0b011).compact() == "3:3");
  Tournament d6 = double_cycle6();
  CHECK(Tournament::parse_compact(d6.compact()) == d6);

  for (int n = 2; n <= 5; ++n)
    for (const Tournament& t : TournamentRange(n)) {
      CHECK(Tournament::parse_compact(t.compact()) == t);
      CHECK(Tournament::parse(t.serialize()) == t);
    }

  CHECK_THROWS_AS(Tournament::parse_compact("3:55"), ParseError);   // wrong width
  CHECK_THROWS_AS(Tournament::parse_compact("3:f"), ParseError);    // padding bit set
  CHECK_THROWS_AS(Tournament::parse_compact("3|5"), ParseError);
  CHECK_THROWS_AS(Tournament::parse_compact("3:g"), ParseError);
}

TEST_CASE("pair bit layout is the enumeration layout") {
  CHECK(pair_bit(6, 0, 1) == 0);
  CHECK(pair_bit(6, 0, 5) == 4);
  CHECK(pair_bit(6, 1, 2) == 5);
  CHECK(pair_bit(6, 4, 5) == 14);
  CHECK(pair_bit(6, 5, 4) == 14);  // unordered
  for (const Tournament& t : TournamentRange(4)) {
    std::uint64_t idx = t.index();
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        CHECK(((idx >> pair_bit(4, i, j)) & 1) == (t.beats(i, j) ? 1u : 0u));
  }
}
