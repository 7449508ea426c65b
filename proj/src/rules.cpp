#include "trn/rules.hpp"

#include <algorithm>
#include <unordered_map>

#include "trn/counting.hpp"
#include "trn/structure.hpp"

namespace trn {

namespace {

int lowest_bit(std::uint64_t mask) { return __builtin_ctzll(mask); }

std::vector<int> bit_positions(std::uint64_t mask) {
  std::vector<int> out;
  while (mask) {
    out.push_back(lowest_bit(mask));
    mask &= mask - 1;
  }
  return out;
}

// Visits every unordered partition of the bits of `mask` into `blocks`
// equal-size blocks exactly once: the block containing the lowest remaining
// bit is completed first, its members chosen in ascending combination order.
template <class F>
void equipartitions_rec(std::uint64_t mask, int blocks, std::vector<std::uint64_t>& acc,
                        const F& f) {
  if (blocks == 1) {
    acc.push_back(mask);
    f(acc);
    acc.pop_back();
    return;
  }
  const int size = __builtin_popcountll(mask) / blocks;
  const int low = lowest_bit(mask);
  const std::uint64_t rest = mask & (mask - 1);
  const std::vector<int> pool = bit_positions(rest);
  const int pick = size - 1;

  std::vector<int> idx(pick);
  for (int i = 0; i < pick; ++i) idx[i] = i;
  while (true) {
    std::uint64_t block = std::uint64_t(1) << low;
    for (int i : idx) block |= std::uint64_t(1) << pool[i];
    acc.push_back(block);
    equipartitions_rec(mask & ~block, blocks - 1, acc, f);
    acc.pop_back();

    // next combination
    int p = pick - 1;
    while (p >= 0 && idx[p] == static_cast<int>(pool.size()) - pick + p) --p;
    if (p < 0) break;
    ++idx[p];
    for (int q = p + 1; q < pick; ++q) idx[q] = idx[q - 1] + 1;
  }
}

template <class F>
void for_each_equipartition(std::uint64_t mask, int blocks, const F& f) {
  std::vector<std::uint64_t> acc;
  acc.reserve(blocks);
  equipartitions_rec(mask, blocks, acc, f);
}

struct TreePlan {
  int height = 0;
  int padded = 1;  // d^height
};

TreePlan tree_plan(int n, int d) {
  TreePlan p;
  long long cap = 1;
  while (cap < n) {
    cap *= d;
    ++p.height;
  }
  p.padded = static_cast<int>(cap);
  return p;
}

std::uint64_t full_mask(int n) {
  return n == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << n) - 1;
}

// Condorcet-winner among a handful of distinct team ids, no allocation.
int condorcet_of_children(const Tournament& t, const int* teams, int d) {
  for (int a = 0; a < d; ++a) {
    bool all = true;
    for (int b = 0; b < d; ++b)
      if (b != a && !t.beats(teams[a], teams[b])) {
        all = false;
        break;
      }
    if (all) return teams[a];
  }
  return -1;
}

using SparseDist = std::vector<std::pair<int, Rat>>;

class RdsebEvaluator {
 public:
  RdsebEvaluator(const Tournament& padded, int d) : t_(padded), d_(d) {}

  const SparseDist& eval(std::uint64_t mask) {
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
    const int size = __builtin_popcountll(mask);
    SparseDist dist;
    if (size == 1) {
      dist.emplace_back(lowest_bit(mask), Rat(1));
      return memo_.emplace(mask, std::move(dist)).first->second;
    }

    std::vector<Rat> acc(t_.n(), Rat(0));
    std::uint64_t partitions = 0;
    const Rat child_share(1, d_);
    std::vector<int> teams(d_);

    for_each_equipartition(mask, d_, [&](const std::vector<std::uint64_t>& blocks) {
      ++partitions;
      // Ensure children are memoized before taking references (the map
      // never erases, so element references stay valid).
      for (std::uint64_t b : blocks) eval(b);
      std::vector<const SparseDist*> child(d_);
      for (int b = 0; b < d_; ++b) child[b] = &memo_.at(blocks[b]);

      // Product over one finalist from each block.
      auto tuples = [&](auto&& self, int b, const Rat& p) -> void {
        if (b == d_) {
          int cw = condorcet_of_children(t_, teams.data(), d_);
          if (cw >= 0) {
            acc[cw] += p;
          } else {
            Rat share = p * child_share;
            for (int x = 0; x < d_; ++x) acc[teams[x]] += share;
          }
          return;
        }
        for (const auto& [team, prob] : *child[b]) {
          teams[b] = team;
          self(self, b + 1, p * prob);
        }
      };
      tuples(tuples, 0, Rat(1));
    });

    const Rat weight(1, static_cast<long>(partitions));
    for (int i = 0; i < t_.n(); ++i)
      if (!acc[i].is_zero()) dist.emplace_back(i, acc[i] * weight);
    return memo_.emplace(mask, std::move(dist)).first->second;
  }

 private:
  const Tournament& t_;
  int d_;
  std::unordered_map<std::uint64_t, SparseDist> memo_;
};

WinDistribution distribution_from_padded(const std::vector<std::pair<int, Rat>>& padded_dist,
                                         int real_n) {
  WinDistribution out = WinDistribution::zeros(real_n);
  for (const auto& [team, p] : padded_dist) {
    if (team < real_n)
      out.probs[team] = p;
    else
      out.dummy_mass += p;
  }
  out.validate();
  return out;
}

}  // namespace

WinDistribution uniform_rule(const Tournament& t) {
  WinDistribution d = WinDistribution::zeros(t.n());
  Rat p(1, t.n());
  for (auto& q : d.probs) q = p;
  d.validate();
  return d;
}

WinDistribution topcycle_rule(const Tournament& t) {
  WinDistribution d = WinDistribution::zeros(t.n());
  auto cycle = top_cycle(t).members();
  Rat p(1, static_cast<long>(cycle.size()));
  for (int i : cycle) d.probs[i] = p;
  d.validate();
  return d;
}

WinDistribution significant_only(const Tournament& t) {
  const int n = t.n();
  if (n < 6) throw RuleDomainError("significant-only: rule undefined below 6 teams");
  WinDistribution d = WinDistribution::zeros(n);

  TournamentClass cls = classify(t);
  if (cls.kind == TournamentClass::Kind::Condorcet) {
    d.probs[cls.winner] = Rat(1);
    d.validate();
    return d;
  }
  if (cls.kind == TournamentClass::Kind::FarCondorcet) {
    return uniform_rule(t);
  }

  auto groups = mw_groups(t, 3);
  TeamSet pair_union(n), triple_union(n);
  for (const auto& g : groups) {
    if (g.size() == 2)
      pair_union = pair_union | g.members;
    else
      triple_union = triple_union | g.members;
  }
  const int pairs = cls.mw_pairs;

  if (pairs >= 2) {
    // Union of the pairs is exactly 3 teams; they share the whole mass.
    for (int i : pair_union.members()) d.probs[i] = Rat(1, 3);
  } else if (pairs == 1) {
    TeamSet triple_only = triple_union.minus(pair_union);
    for (int i : pair_union.members()) d.probs[i] = Rat(1, 3);
    for (int i : triple_only.members()) d.probs[i] = Rat(1, 9);
    const int others = n - 2 - triple_only.count();
    Rat rest = Rat(1) - Rat(2, 3) - Rat(triple_only.count(), 9);
    TeamSet sig = pair_union | triple_only;
    Rat each = rest / Rat(others);
    for (int i = 0; i < n; ++i)
      if (!sig.test(i)) d.probs[i] = each;
  } else {
    const int sig_count = triple_union.count();
    for (int i : triple_union.members()) d.probs[i] = Rat(1, 6);
    if (sig_count < n) {
      Rat each = (Rat(1) - Rat(sig_count, 6)) / Rat(n - sig_count);
      for (int i = 0; i < n; ++i)
        if (!triple_union.test(i)) d.probs[i] = each;
    }
  }
  d.validate();
  return d;
}

std::vector<int> resolve_bracket(const Tournament& padded, const Bracket& b) {
  const int inner = b.inner_nodes();
  std::vector<int> labels(b.total_nodes(), -1);
  for (int k = 0; k < b.leaves(); ++k) labels[inner + k] = b.leaf_teams[k];
  std::vector<int> children(b.d);
  for (int v = inner - 1; v >= 0; --v) {
    for (int c = 0; c < b.d; ++c) children[c] = labels[v * b.d + 1 + c];
    int cw = condorcet_of_children(padded, children.data(), b.d);
    labels[v] = cw >= 0 ? cw : children[b.marks[v]];
  }
  return labels;
}

BracketRun sample_bracket(const Tournament& t, int d, Rng& rng) {
  if (d < 2) throw std::invalid_argument("sample_bracket: d must be >= 2");
  const TreePlan plan = tree_plan(t.n(), d);
  const Tournament padded = pad_with_dummies(t, plan.padded);

  BracketRun run;
  run.bracket.d = d;
  run.bracket.height = plan.height;
  run.bracket.leaf_teams.resize(plan.padded);
  for (int i = 0; i < plan.padded; ++i) run.bracket.leaf_teams[i] = i;
  rng.shuffle(run.bracket.leaf_teams);
  const int inner = plan.height == 0 ? 0 : static_cast<int>((sat_pow(d, plan.height) - 1) / (d - 1));
  run.bracket.marks.resize(inner);
  for (int v = 0; v < inner; ++v) run.bracket.marks[v] = static_cast<int>(rng.bounded(d));

  run.labels = resolve_bracket(padded, run.bracket);
  run.winner = run.labels[0];
  return run;
}

WinDistribution rdseb_exact(const Tournament& t, int d, const EvalCaps& caps) {
  if (d < 2) throw std::invalid_argument("rdseb_exact: d must be >= 2");
  const TreePlan plan = tree_plan(t.n(), d);
  const std::string what = "rdseb:" + std::to_string(d) + " exact on " +
                           std::to_string(plan.padded) + " padded teams";
  if (plan.padded > 64)
    throw FeasibilityError(what + ": more than 64 padded teams; use sampling", plan.padded, 64);

  std::uint64_t states = 0, work = 0;
  for (int j = 1; j <= plan.height; ++j) {
    const std::uint64_t s = sat_pow(d, j);
    const std::uint64_t st = sat_binomial(plan.padded, static_cast<unsigned>(s));
    states = sat_add(states, st);
    const std::uint64_t per =
        sat_mul(sat_equipartitions(static_cast<unsigned>(s), d), sat_pow(s / d, d));
    work = sat_add(work, sat_mul(st, per));
  }
  if (states > caps.rdseb_states)
    throw FeasibilityError(what + " needs " + std::to_string(states) +
                               " subset evaluations (cap " + std::to_string(caps.rdseb_states) +
                               "); use sampling",
                           states, caps.rdseb_states);
  if (work > caps.rdseb_work)
    throw FeasibilityError(what + " needs " + std::to_string(work) +
                               " partition-tuple steps (cap " + std::to_string(caps.rdseb_work) +
                               "); use sampling",
                           work, caps.rdseb_work);

  const Tournament padded = pad_with_dummies(t, plan.padded);
  RdsebEvaluator ev(padded, d);
  return distribution_from_padded(ev.eval(full_mask(plan.padded)), t.n());
}

WinDistribution rdseb_bruteforce(const Tournament& t, int d) {
  if (d < 2) throw std::invalid_argument("rdseb_bruteforce: d must be >= 2");
  const TreePlan plan = tree_plan(t.n(), d);
  const int inner =
      plan.height == 0 ? 0 : static_cast<int>((sat_pow(d, plan.height) - 1) / (d - 1));
  const std::uint64_t brackets =
      sat_mul(sat_factorial(plan.padded), sat_pow(d, inner));
  constexpr std::uint64_t kBruteCap = 20'000'000;
  if (brackets > kBruteCap)
    throw FeasibilityError("rdseb_bruteforce: " + std::to_string(brackets) +
                               " brackets exceeds cap " + std::to_string(kBruteCap),
                           brackets, kBruteCap);

  const Tournament padded = pad_with_dummies(t, plan.padded);
  Bracket b;
  b.d = d;
  b.height = plan.height;
  b.leaf_teams.resize(plan.padded);
  for (int i = 0; i < plan.padded; ++i) b.leaf_teams[i] = i;
  b.marks.assign(inner, 0);

  std::vector<std::uint64_t> wins(plan.padded, 0);
  do {
    std::fill(b.marks.begin(), b.marks.end(), 0);
    while (true) {
      ++wins[resolve_bracket(padded, b)[0]];
      int p = 0;
      while (p < inner && ++b.marks[p] == d) b.marks[p++] = 0;
      if (p == inner) break;
    }
  } while (std::next_permutation(b.leaf_teams.begin(), b.leaf_teams.end()));

  SparseDist dist;
  for (int i = 0; i < plan.padded; ++i)
    if (wins[i])
      dist.emplace_back(i, Rat(static_cast<long>(wins[i]), static_cast<long>(brackets)));
  return distribution_from_padded(dist, t.n());
}

Rat alpha_bound(int d, int k) {
  if (k < 2 || k > d) throw std::domain_error("alpha_bound: requires 2 <= k <= d");
  mpz_class falling = 1;
  for (int i = 0; i < k; ++i) falling *= (d - i);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(d),
                static_cast<unsigned long>(k + 1));
  mpq_class frac(2 * falling, den);
  frac.canonicalize();
  return Rat(1) - Rat(frac);
}

Rat ext_alpha_bound(const Rat& alpha, int k, long n) {
  if (alpha < Rat(0) || alpha > Rat(1))
    throw std::domain_error("ext_alpha_bound: alpha must be in [0, 1]");
  if (n < 1 || k < 2) throw std::domain_error("ext_alpha_bound: requires n >= 1, k >= 2");
  Rat c(static_cast<long>(k - 1) * (k - 1), n);
  return alpha * (Rat(1) - c) + c;
}

namespace {

struct ExtPlan {
  int d = 1;
  int padded = 0;
  int group = 0;
  std::uint64_t partitions = 0;
};

ExtPlan ext_plan(int base_n, int target_n) {
  ExtPlan p;
  long long cap = base_n;
  while (cap < target_n) {
    cap *= base_n;
    ++p.d;
  }
  p.padded = static_cast<int>(cap);
  p.group = p.padded / base_n;
  p.partitions = p.padded <= 64
                     ? sat_equipartitions(static_cast<unsigned>(p.padded), base_n)
                     : kCountSat;
  return p;
}

WinDistribution ext_exact_eval(const Rule& base, int base_n, const Tournament& t,
                               const EvalCaps& caps) {
  const ExtPlan plan = ext_plan(base_n, t.n());
  const Tournament padded = pad_with_dummies(t, plan.padded);

  std::vector<Rat> acc(plan.padded, Rat(0));
  Rat base_dummy(0);
  std::uint64_t work = 0;

  std::vector<std::vector<int>> supports(base_n);
  std::vector<int> finalists(base_n);

  for_each_equipartition(full_mask(plan.padded), base_n,
                         [&](const std::vector<std::uint64_t>& blocks) {
    Rat tuple_weight(1);
    for (int g = 0; g < base_n; ++g) {
      std::vector<int> members = bit_positions(blocks[g]);
      Tournament sub = induced(padded, members);
      supports[g].clear();
      for (int local : top_cycle(sub).members()) supports[g].push_back(members[local]);
      tuple_weight /= Rat(static_cast<long>(supports[g].size()));
    }
    auto tuples = [&](auto&& self, int g) -> void {
      if (g == base_n) {
        if (++work > caps.ext_work)
          throw FeasibilityError("ext exact: finalist-tuple work exceeds cap " +
                                     std::to_string(caps.ext_work),
                                 work, caps.ext_work);
        std::vector<int> ordered(finalists.begin(), finalists.end());
        std::sort(ordered.begin(), ordered.end());
        WinDistribution bd = base.exact(induced(padded, ordered));
        for (int i = 0; i < base_n; ++i) acc[ordered[i]] += tuple_weight * bd.probs[i];
        base_dummy += tuple_weight * bd.dummy_mass;
        return;
      }
      for (int f : supports[g]) {
        finalists[g] = f;
        self(self, g + 1);
      }
    };
    tuples(tuples, 0);
  });

  const Rat weight(1, static_cast<long>(plan.partitions));
  WinDistribution out = WinDistribution::zeros(t.n());
  for (int i = 0; i < plan.padded; ++i) {
    Rat p = acc[i] * weight;
    if (i < t.n())
      out.probs[i] = p;
    else
      out.dummy_mass += p;
  }
  out.dummy_mass += base_dummy * weight;
  out.validate();
  return out;
}

int ext_sample_eval(const Rule& base, int base_n, const Tournament& t, Rng& rng) {
  const ExtPlan plan = ext_plan(base_n, t.n());
  const Tournament padded = pad_with_dummies(t, plan.padded);

  std::vector<int> ids(plan.padded);
  for (int i = 0; i < plan.padded; ++i) ids[i] = i;
  rng.shuffle(ids);

  std::vector<int> finalists(base_n);
  for (int g = 0; g < base_n; ++g) {
    std::vector<int> block(ids.begin() + g * plan.group, ids.begin() + (g + 1) * plan.group);
    std::sort(block.begin(), block.end());
    auto cycle = top_cycle(induced(padded, block)).members();
    finalists[g] = block[cycle[rng.bounded(cycle.size())]];
  }
  std::sort(finalists.begin(), finalists.end());
  Tournament final_t = induced(padded, finalists);

  int w = base.sample ? base.sample(final_t, rng) : sample_from_exact(base.exact(final_t), rng);
  if (w >= base_n) return t.n();  // base's own padding dummy won
  int winner = finalists[w];
  return winner < t.n() ? winner : t.n();
}

}  // namespace

Rule extend_rule(const Rule& base, int base_n, int target_n, const EvalCaps& caps) {
  if (base_n < 2) throw std::invalid_argument("extend_rule: base size must be >= 2");
  if (target_n <= base_n)
    throw std::invalid_argument("extend_rule: target size must exceed base size");
  if (!base.exact && !base.sample)
    throw std::invalid_argument("extend_rule: base lacks both evaluators");

  Rule r;
  r.id = "ext:" + base.id + ":" + std::to_string(base_n);
  const ExtPlan plan = ext_plan(base_n, target_n);

  auto check_size = [target_n, id = r.id](const Tournament& t) {
    if (t.n() != target_n)
      throw RuleDomainError(id + ": rule built for " + std::to_string(target_n) +
                            " teams, input has " + std::to_string(t.n()));
  };

  if (base.exact && plan.padded <= 64 && plan.partitions <= caps.ext_partitions) {
    r.exact = [base, base_n, caps, check_size](const Tournament& t) {
      check_size(t);
      return ext_exact_eval(base, base_n, t, caps);
    };
  }
  r.sample = [base, base_n, check_size](const Tournament& t, Rng& rng) {
    check_size(t);
    return ext_sample_eval(base, base_n, t, rng);
  };
  return r;
}

int sample_from_exact(const WinDistribution& dist, Rng& rng) {
  mpz_class common = 1;
  auto fold = [&common](const Rat& p) {
    mpz_class den = p.raw().get_den();
    mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), den.get_mpz_t());
  };
  for (const Rat& p : dist.probs) fold(p);
  fold(dist.dummy_mass);
  if (!common.fits_ulong_p() || common > mpz_class("4611686018427387904"))  // 2^62
    throw std::runtime_error("sample_from_exact: common denominator too large");
  const std::uint64_t den = common.get_ui();

  const std::uint64_t u = rng.bounded(den);
  std::uint64_t cum = 0;
  for (int i = 0; i < dist.n(); ++i) {
    const mpq_class& q = dist.probs[i].raw();
    cum += mpz_get_ui(mpq_numref(q.get_mpq_t())) * (den / mpz_get_ui(mpq_denref(q.get_mpq_t())));
    if (u < cum) return i;
  }
  return dist.n();  // dummy mass bucket
}

Rule make_rule(const std::string& id, const EvalCaps& caps) {
  if (id == "uniform") {
    return Rule{id, uniform_rule,
                [](const Tournament& t, Rng& rng) { return static_cast<int>(rng.bounded(t.n())); }};
  }
  if (id == "top-cycle") {
    return Rule{id, topcycle_rule, [](const Tournament& t, Rng& rng) {
                  auto cycle = top_cycle(t).members();
                  return cycle[rng.bounded(cycle.size())];
                }};
  }
  if (id == "significant-only") {
    return Rule{id, significant_only, [](const Tournament& t, Rng& rng) {
                  return sample_from_exact(significant_only(t), rng);
                }};
  }
  if (id.rfind("rdseb:", 0) == 0) {
    int d = 0;
    try {
      std::size_t used = 0;
      d = std::stoi(id.substr(6), &used);
      if (used != id.size() - 6) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::invalid_argument("rule id '" + id + "': expected rdseb:<d>");
    }
    if (d < 2 || d > 64) throw std::invalid_argument("rule id '" + id + "': d must be in 2..64");
    return Rule{id, [d, caps](const Tournament& t) { return rdseb_exact(t, d, caps); },
                [d](const Tournament& t, Rng& rng) { return sample_bracket(t, d, rng).winner; }};
  }
  if (id.rfind("ext:", 0) == 0) {
    const std::string rest = id.substr(4);
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == rest.size())
      throw std::invalid_argument("rule id '" + id + "': expected ext:<base-id>:<base-n>");
    int base_n = 0;
    try {
      std::size_t used = 0;
      base_n = std::stoi(rest.substr(colon + 1), &used);
      if (used != rest.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::invalid_argument("rule id '" + id + "': bad base size");
    }
    Rule base = make_rule(rest.substr(0, colon), caps);
    Rule r;
    r.id = id;
    r.exact = [base, base_n, caps](const Tournament& t) {
      Rule er = extend_rule(base, base_n, t.n(), caps);
      if (!er.exact) {
        const ExtPlan plan = ext_plan(base_n, t.n());
        throw FeasibilityError("ext exact on " + std::to_string(t.n()) + " teams needs " +
                                   std::to_string(plan.partitions) +
                                   " group seedings (cap " +
                                   std::to_string(caps.ext_partitions) + "); use sampling",
                               plan.partitions, caps.ext_partitions);
      }
      return er.exact(t);
    };
    r.sample = [base, base_n, caps](const Tournament& t, Rng& rng) {
      return extend_rule(base, base_n, t.n(), caps).sample(t, rng);
    };
    return r;
  }
  throw std::invalid_argument("unknown rule id '" + id + "'");
}

}  // namespace trn
