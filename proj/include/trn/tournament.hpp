#pragma once

// Tournament = complete directed graph on n labelled teams, stored as a
// dense beats-matrix. This header also fixes the pair-index bit layout that
// is shared by the compact serialization, the enumeration order and the
// audit's variant arithmetic: bit k of a tournament index orients the k-th
// pair (i, j), i < j, in the order (0,1), (0,2), ..., (0,n-1), (1,2), ...

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trn/rng.hpp"
#include "trn/teamset.hpp"

namespace trn {

// Malformed .trn / compact input; message carries line/column diagnostics.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Tournament {
 public:
  Tournament() : Tournament(1) {}  // the unique singleton tournament
  explicit Tournament(int n);

  // Index-based construction; bit k of `index` = 1 iff i beats j for the
  // k-th pair. Requires pair_count(n) <= 64.
  static Tournament from_index(int n, std::uint64_t index);

  static Tournament parse(const std::string& text);          // .trn matrix text
  static Tournament parse_compact(const std::string& text);  // "<n>:<hex>"

  int n() const { return n_; }

  bool beats(int i, int j) const { return m_[i * n_ + j] != 0; }

  // Records winner/loser for one match (overwrites both directions).
  void set_result(int winner, int loser);

  int out_degree(int i) const;
  int in_degree(int i) const { return n_ - 1 - out_degree(i); }
  TeamSet wins_of(int i) const;     // δ+(i): teams i beats
  TeamSet beaters_of(int i) const;  // δ−(i): teams that beat i

  std::uint64_t index() const;  // requires pair_count(n) <= 64
  std::string serialize() const;
  std::string compact() const;  // any n

  // Irreflexive, complete, antisymmetric; throws std::logic_error otherwise.
  void validate() const;

  friend bool operator==(const Tournament& a, const Tournament& b) {
    return a.n_ == b.n_ && a.m_ == b.m_;
  }

 private:
  int n_;
  std::vector<std::uint8_t> m_;
};

std::uint64_t pair_count(int n);             // C(n, 2)
int pair_bit(int n, int i, int j);           // layout position of pair {i, j}
std::vector<int> pair_bits(int n, const TeamSet& s);  // intra-s pairs, ascending

std::optional<int> condorcet_winner(const Tournament& t);

// Condorcet-winner restricted to `teams` (distinct ids): the member beating
// every other member, if any.
std::optional<int> condorcet_among(const Tournament& t, const std::vector<int>& teams);

// Minimal non-empty dominant set: no team outside it beats a member.
TeamSet top_cycle(const Tournament& t);

// Sub-tournament induced on `teams` (ascending ids); team k of the result is
// teams[k].
Tournament induced(const Tournament& t, const std::vector<int>& teams);

// All 2^C(|s|,2) orientations of the matches inside s, everything else as in
// t. Variant v orients the b-th intra-s pair (i,j), i<j, with bit b of v
// (1 = i beats j); the input t appears at its own orientation pattern.
std::vector<Tournament> adjacency_variants(const Tournament& t, const TeamSet& s);

// Enumeration. Tournaments on n teams in index order 0 .. 2^C(n,2)-1.
inline constexpr int kEnumerationCap = 8;
std::uint64_t tournament_count(int n);  // throws if n > kEnumerationCap

class TournamentRange {
 public:
  TournamentRange(int n, std::uint64_t begin, std::uint64_t end)
      : n_(n), begin_(begin), end_(end) {}
  explicit TournamentRange(int n) : TournamentRange(n, 0, tournament_count(n)) {}

  class iterator {
   public:
    iterator(int n, std::uint64_t i) : n_(n), i_(i) {}
    Tournament operator*() const { return Tournament::from_index(n_, i_); }
    iterator& operator++() { ++i_; return *this; }
    bool operator!=(const iterator& o) const { return i_ != o.i_; }
    std::uint64_t index() const { return i_; }

   private:
    int n_;
    std::uint64_t i_;
  };

  iterator begin() const { return {n_, begin_}; }
  iterator end() const { return {n_, end_}; }

 private:
  int n_;
  std::uint64_t begin_, end_;
};

// Every match an independent fair coin from `rng`.
Tournament random_tournament(int n, Rng& rng);

// Teams t.n() .. target-1 are dummies: they lose to every real team; among
// dummies the lower index beats the higher (fixed canonical orientation).
Tournament pad_with_dummies(const Tournament& t, int target);

}  // namespace trn
