#include "trn/tournament.hpp"

#include <algorithm>
#include <sstream>

namespace trn {

namespace {

std::string pos(int line, int col) {
  return "line " + std::to_string(line) + ", col " + std::to_string(col) + ": ";
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

constexpr char kHex[] = "0123456789abcdef";

}  // namespace

Tournament::Tournament(int n) : n_(n), m_(static_cast<std::size_t>(n) * n, 0) {
  if (n < 1) throw std::invalid_argument("Tournament: n must be >= 1");
}

void Tournament::set_result(int winner, int loser) {
  if (winner == loser) throw std::invalid_argument("Tournament: team cannot play itself");
  m_[winner * n_ + loser] = 1;
  m_[loser * n_ + winner] = 0;
}

int Tournament::out_degree(int i) const {
  int d = 0;
  for (int j = 0; j < n_; ++j) d += m_[i * n_ + j];
  return d;
}

TeamSet Tournament::wins_of(int i) const {
  TeamSet s(n_);
  for (int j = 0; j < n_; ++j)
    if (beats(i, j)) s.set(j);
  return s;
}

TeamSet Tournament::beaters_of(int i) const {
  TeamSet s(n_);
  for (int j = 0; j < n_; ++j)
    if (beats(j, i)) s.set(j);
  return s;
}

void Tournament::validate() const {
  for (int i = 0; i < n_; ++i) {
    if (beats(i, i)) throw std::logic_error("Tournament: reflexive edge at team " + std::to_string(i));
    for (int j = i + 1; j < n_; ++j)
      if (beats(i, j) == beats(j, i))
        throw std::logic_error("Tournament: pair (" + std::to_string(i) + "," +
                               std::to_string(j) + ") is not oriented exactly once");
  }
}

std::uint64_t pair_count(int n) {
  return static_cast<std::uint64_t>(n) * (n - 1) / 2;
}

int pair_bit(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  if (i == j || i < 0 || j >= n) throw std::invalid_argument("pair_bit: bad pair");
  // Pairs (0,*) occupy the first n-1 bits, (1,*) the next n-2, ...
  int base = i * (n - 1) - i * (i - 1) / 2;  // sum of (n-1-r) for r < i
  return base + (j - i - 1);
}

std::vector<int> pair_bits(int n, const TeamSet& s) {
  std::vector<int> out;
  auto mem = s.members();
  for (std::size_t a = 0; a < mem.size(); ++a)
    for (std::size_t b = a + 1; b < mem.size(); ++b)
      out.push_back(pair_bit(n, mem[a], mem[b]));
  std::sort(out.begin(), out.end());
  return out;
}

Tournament Tournament::from_index(int n, std::uint64_t index) {
  if (pair_count(n) > 64) throw std::invalid_argument("from_index: n too large for 64-bit index");
  Tournament t(n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++k) {
      if ((index >> k) & 1)
        t.set_result(i, j);
      else
        t.set_result(j, i);
    }
  return t;
}

std::uint64_t Tournament::index() const {
  if (pair_count(n_) > 64) throw std::logic_error("index: n too large for 64-bit index");
  std::uint64_t idx = 0;
  int k = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j, ++k)
      if (beats(i, j)) idx |= std::uint64_t(1) << k;
  return idx;
}

std::string Tournament::serialize() const {
  std::string out = std::to_string(n_) + "\n";
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j)
      out += i == j ? '-' : (beats(i, j) ? '1' : '0');
    out += '\n';
  }
  return out;
}

Tournament Tournament::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(pos(1, 1) + "missing team count");
  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(line, &used);
    while (used < line.size() && (line[used] == ' ' || line[used] == '\r')) ++used;
    if (used != line.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ParseError(pos(1, 1) + "expected an integer team count, got '" + line + "'");
  }
  if (n < 1) throw ParseError(pos(1, 1) + "team count must be >= 1");

  Tournament t(n);
  for (int i = 0; i < n; ++i) {
    const int lineno = i + 2;
    if (!std::getline(in, line))
      throw ParseError(pos(lineno, 1) + "expected " + std::to_string(n) +
                       " matrix rows, got " + std::to_string(i));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (static_cast<int>(line.size()) != n)
      throw ParseError(pos(lineno, static_cast<int>(line.size()) + 1) +
                       "wrong row length: expected " + std::to_string(n) +
                       " chars, got " + std::to_string(line.size()));
    for (int j = 0; j < n; ++j) {
      char c = line[j];
      if (i == j) {
        if (c != '-')
          throw ParseError(pos(lineno, j + 1) + "diagonal entry must be '-', got '" +
                           std::string(1, c) + "'");
      } else if (c == '1') {
        t.m_[i * n + j] = 1;
      } else if (c != '0') {
        throw ParseError(pos(lineno, j + 1) + "matrix entries must be '0' or '1', got '" +
                         std::string(1, c) + "'");
      }
    }
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty())
      throw ParseError(pos(n + 2, 1) + "unexpected content after matrix");
  }
  // Antisymmetry check with the offending pair named.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (t.beats(i, j) == t.beats(j, i))
        throw ParseError(pos(i + 2, j + 1) + "asymmetric pair (" + std::to_string(i) +
                         "," + std::to_string(j) + "): exactly one direction must be '1'");
  return t;
}

std::string Tournament::compact() const {
  const std::uint64_t bits = pair_count(n_);
  const std::size_t digits = static_cast<std::size_t>((bits + 3) / 4);
  std::string hex(digits, '0');
  int k = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j, ++k)
      if (beats(i, j)) {
        // Bit k lives in hex digit k/4 from the right.
        std::size_t d = digits - 1 - k / 4;
        int v = hex_digit(hex[d]);
        hex[d] = kHex[v | (1 << (k % 4))];
      }
  return std::to_string(n_) + ":" + hex;
}

Tournament Tournament::parse_compact(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ParseError("compact form must be '<n>:<hex>', got '" + text + "'");
  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ParseError("compact form: bad team count in '" + text + "'");
  }
  if (n < 1) throw ParseError("compact form: team count must be >= 1");
  const std::uint64_t bits = pair_count(n);
  const std::size_t digits = static_cast<std::size_t>((bits + 3) / 4);
  const std::string hex = text.substr(colon + 1);
  if (hex.size() != digits)
    throw ParseError("compact form: expected " + std::to_string(digits) +
                     " hex digits for n=" + std::to_string(n) + ", got " +
                     std::to_string(hex.size()));
  Tournament t(n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++k) {
      int v = hex_digit(hex[digits - 1 - k / 4]);
      if (v < 0)
        throw ParseError("compact form: invalid hex digit '" +
                         std::string(1, hex[digits - 1 - k / 4]) + "'");
      if ((v >> (k % 4)) & 1)
        t.set_result(i, j);
      else
        t.set_result(j, i);
    }
  // Any set bit beyond C(n,2) would silently vanish on round-trip.
  for (std::uint64_t b = bits; b < digits * 4; ++b) {
    int v = hex_digit(hex[digits - 1 - b / 4]);
    if (v < 0)
      throw ParseError("compact form: invalid hex digit");
    if ((v >> (b % 4)) & 1)
      throw ParseError("compact form: padding bits above C(n,2) must be zero");
  }
  return t;
}

std::optional<int> condorcet_winner(const Tournament& t) {
  for (int i = 0; i < t.n(); ++i)
    if (t.out_degree(i) == t.n() - 1) return i;
  return std::nullopt;
}

std::optional<int> condorcet_among(const Tournament& t, const std::vector<int>& teams) {
  for (int c : teams) {
    bool all = true;
    for (int o : teams)
      if (o != c && !t.beats(c, o)) {
        all = false;
        break;
      }
    if (all) return c;
  }
  return std::nullopt;
}

TeamSet top_cycle(const Tournament& t) {
  const int n = t.n();
  // A maximum out-degree team always belongs to the top cycle; the cycle is
  // its closure under "beats a current member".
  int start = 0;
  for (int i = 1; i < n; ++i)
    if (t.out_degree(i) > t.out_degree(start)) start = i;
  TeamSet c(n);
  c.set(start);
  bool grew = true;
  while (grew) {
    grew = false;
    for (int u = 0; u < n; ++u) {
      if (c.test(u)) continue;
      for (int v = 0; v < n; ++v)
        if (c.test(v) && t.beats(u, v)) {
          c.set(u);
          grew = true;
          break;
        }
    }
  }
  return c;
}

Tournament induced(const Tournament& t, const std::vector<int>& teams) {
  Tournament s(static_cast<int>(teams.size()));
  for (std::size_t a = 0; a < teams.size(); ++a)
    for (std::size_t b = a + 1; b < teams.size(); ++b) {
      if (t.beats(teams[a], teams[b]))
        s.set_result(static_cast<int>(a), static_cast<int>(b));
      else
        s.set_result(static_cast<int>(b), static_cast<int>(a));
    }
  return s;
}

std::vector<Tournament> adjacency_variants(const Tournament& t, const TeamSet& s) {
  if (s.count() < 2) throw std::invalid_argument("adjacency_variants: |s| must be >= 2");
  auto mem = s.members();
  const int m = static_cast<int>(mem.size() * (mem.size() - 1) / 2);
  if (m > 24) throw std::invalid_argument("adjacency_variants: coalition too large");
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t a = 0; a < mem.size(); ++a)
    for (std::size_t b = a + 1; b < mem.size(); ++b)
      pairs.emplace_back(mem[a], mem[b]);
  std::vector<Tournament> out;
  out.reserve(std::size_t(1) << m);
  for (std::uint64_t v = 0; v < (std::uint64_t(1) << m); ++v) {
    Tournament x = t;
    for (int b = 0; b < m; ++b) {
      auto [i, j] = pairs[b];
      if ((v >> b) & 1)
        x.set_result(i, j);
      else
        x.set_result(j, i);
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::uint64_t tournament_count(int n) {
  if (n < 1) throw std::invalid_argument("tournament_count: n must be >= 1");
  if (n > kEnumerationCap)
    throw std::invalid_argument("tournament_count: 2^C(" + std::to_string(n) +
                                ",2) tournaments is infeasible (cap n <= " +
                                std::to_string(kEnumerationCap) + ")");
  return std::uint64_t(1) << pair_count(n);
}

Tournament random_tournament(int n, Rng& rng) {
  Tournament t(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (rng.coin())
        t.set_result(i, j);
      else
        t.set_result(j, i);
    }
  return t;
}

Tournament pad_with_dummies(const Tournament& t, int target) {
  if (target < t.n()) throw std::invalid_argument("pad_with_dummies: target below current size");
  if (target == t.n()) return t;
  Tournament p(target);
  for (int i = 0; i < t.n(); ++i)
    for (int j = i + 1; j < t.n(); ++j) {
      if (t.beats(i, j))
        p.set_result(i, j);
      else
        p.set_result(j, i);
    }
  for (int d = t.n(); d < target; ++d) {
    for (int r = 0; r < t.n(); ++r) p.set_result(r, d);
    for (int e = d + 1; e < target; ++e) p.set_result(d, e);
  }
  return p;
}

}  // namespace trn
