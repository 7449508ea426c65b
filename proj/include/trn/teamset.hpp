#pragma once

// Subset of the teams [0, n) as a dynamic bitset. Small enough to copy by
// value everywhere; audits additionally use the packed 64-bit mask form.

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace trn {

class TeamSet {
 public:
  TeamSet() : n_(0) {}
  explicit TeamSet(int n) : n_(n), words_((n + 63) / 64, 0) {
    if (n < 0) throw std::invalid_argument("TeamSet: negative universe");
  }

  static TeamSet of(int n, std::initializer_list<int> members) {
    TeamSet s(n);
    for (int m : members) s.set(m);
    return s;
  }

  static TeamSet from_mask(int n, std::uint64_t mask) {
    if (n > 64) throw std::invalid_argument("TeamSet::from_mask: n > 64");
    TeamSet s(n);
    if (n > 0) s.words_[0] = mask;
    return s;
  }

  int universe() const { return n_; }

  bool test(int i) const {
    check(i);
    return (words_[i >> 6] >> (i & 63)) & 1;
  }
  void set(int i) {
    check(i);
    words_[i >> 6] |= std::uint64_t(1) << (i & 63);
  }
  void reset(int i) {
    check(i);
    words_[i >> 6] &= ~(std::uint64_t(1) << (i & 63));
  }

  int count() const {
    int c = 0;
    for (auto w : words_) c += __builtin_popcountll(w);
    return c;
  }
  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  std::vector<int> members() const {
    std::vector<int> out;
    for (int i = 0; i < n_; ++i)
      if (test(i)) out.push_back(i);
    return out;
  }

  std::uint64_t mask() const {
    if (n_ > 64) throw std::logic_error("TeamSet::mask: n > 64");
    return words_.empty() ? 0 : words_[0];
  }

  bool contains(const TeamSet& other) const {
    for (std::size_t w = 0; w < other.words_.size(); ++w) {
      std::uint64_t ow = other.words_[w];
      if (w >= words_.size()) {
        if (ow) return false;
      } else if (ow & ~words_[w]) {
        return false;
      }
    }
    return true;
  }

  bool intersects(const TeamSet& other) const {
    std::size_t k = std::min(words_.size(), other.words_.size());
    for (std::size_t w = 0; w < k; ++w)
      if (words_[w] & other.words_[w]) return true;
    return false;
  }

  TeamSet operator|(const TeamSet& o) const {
    TeamSet r(std::max(n_, o.n_));
    for (std::size_t w = 0; w < r.words_.size(); ++w) {
      std::uint64_t a = w < words_.size() ? words_[w] : 0;
      std::uint64_t b = w < o.words_.size() ? o.words_[w] : 0;
      r.words_[w] = a | b;
    }
    return r;
  }

  // Members of *this that are not in o (universes must agree in spirit).
  TeamSet minus(const TeamSet& o) const {
    TeamSet r = *this;
    std::size_t k = std::min(words_.size(), o.words_.size());
    for (std::size_t w = 0; w < k; ++w) r.words_[w] &= ~o.words_[w];
    return r;
  }

  friend bool operator==(const TeamSet& a, const TeamSet& b) {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }

 private:
  void check(int i) const {
    if (i < 0 || i >= n_) throw std::out_of_range("TeamSet: index out of range");
  }

  int n_;
  std::vector<std::uint64_t> words_;
};

}  // namespace trn
