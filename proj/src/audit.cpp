#include "trn/audit.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <thread>

#include "trn/counting.hpp"

namespace trn {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

// fn(worker, lo, hi) over [0, total) split into contiguous chunks.
template <class Fn>
void run_parallel(std::uint64_t total, int threads, Fn&& fn) {
  if (threads <= 1 || total < 2) {
    fn(0, 0, total);
    return;
  }
  const std::uint64_t chunk = (total + threads - 1) / threads;
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int w = 0; w < threads; ++w) {
    const std::uint64_t lo = w * chunk;
    const std::uint64_t hi = std::min<std::uint64_t>(total, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, &errors, w, lo, hi] {
      try {
        fn(w, lo, hi);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

constexpr std::uint64_t kMaxTableDen = std::uint64_t(1) << 62;

// All exact distributions for n, rescaled to one shared denominator so the
// scan loops compare plain integers. Row layout: n team numerators then the
// dummy numerator.
struct DistTable {
  int n = 0;
  std::uint64_t count = 0;
  std::uint64_t den = 1;
  std::vector<std::int64_t> num;

  std::int64_t at(std::uint64_t t_idx, int team) const { return num[t_idx * (n + 1) + team]; }
  std::int64_t dummy(std::uint64_t t_idx) const { return num[t_idx * (n + 1) + n]; }
};

struct RawDist {
  std::uint64_t den = 1;
  std::vector<std::int64_t> num;  // n + 1 entries
};

std::uint64_t to_u64_checked(const mpz_class& z, const char* what) {
  if (z < 0 || !z.fits_ulong_p() || mpz_class(z) > mpz_class(kMaxTableDen))
    throw AuditError(std::string(what) + ": value does not fit the integer fast path");
  return z.get_ui();
}

RawDist rationalize(const WinDistribution& d) {
  mpz_class common = 1;
  auto fold = [&common](const Rat& p) {
    mpz_class den = p.raw().get_den();
    mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), den.get_mpz_t());
  };
  for (const Rat& p : d.probs) fold(p);
  fold(d.dummy_mass);
  RawDist out;
  out.den = to_u64_checked(common, "audit: distribution denominator");
  out.num.reserve(d.probs.size() + 1);
  auto scaled = [&](const Rat& p) {
    mpz_class v = p.raw().get_num() * (common / p.raw().get_den());
    return static_cast<std::int64_t>(to_u64_checked(v, "audit: scaled numerator"));
  };
  for (const Rat& p : d.probs) out.num.push_back(scaled(p));
  out.num.push_back(scaled(d.dummy_mass));
  return out;
}

std::uint64_t lcm_u64_checked(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t g = std::gcd(a, b);
  const std::uint64_t q = a / g;
  if (b > kMaxTableDen / q)
    throw AuditError("audit: combined denominator does not fit the integer fast path");
  return q * b;
}

DistTable build_table(const Rule& rule, int n, int threads) {
  if (!rule.exact) throw AuditError("audit: rule '" + rule.id + "' has no exact evaluator");
  DistTable table;
  table.n = n;
  table.count = tournament_count(n);

  std::vector<RawDist> raw(table.count);
  run_parallel(table.count, threads, [&](int, std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t i = lo; i < hi; ++i) {
      WinDistribution d = rule.exact(Tournament::from_index(n, i));
      d.validate();
      raw[i] = rationalize(d);
    }
  });

  table.den = 1;
  for (const RawDist& r : raw) table.den = lcm_u64_checked(table.den, r.den);
  table.num.resize(table.count * (n + 1));
  run_parallel(table.count, threads, [&](int, std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t i = lo; i < hi; ++i) {
      const std::int64_t factor = static_cast<std::int64_t>(table.den / raw[i].den);
      for (int j = 0; j <= n; ++j) table.num[i * (n + 1) + j] = raw[i].num[j] * factor;
    }
  });
  return table;
}

struct Coalition {
  std::uint64_t mask = 0;
  std::vector<int> members;
  std::vector<int> bits;           // global pair-bit positions, ascending
  std::uint64_t bits_mask = 0;     // OR of (1 << bit)
};

std::vector<Coalition> make_coalitions(int n, int k) {
  std::vector<Coalition> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    const int size = __builtin_popcountll(mask);
    if (size < 2 || size > k) continue;
    Coalition c;
    c.mask = mask;
    TeamSet s = TeamSet::from_mask(n, mask);
    c.members = s.members();
    c.bits = pair_bits(n, s);
    for (int b : c.bits) c.bits_mask |= std::uint64_t(1) << b;
    out.push_back(std::move(c));
  }
  return out;  // ascending mask order
}

// Exhaustive scan candidate; ties prefer the smallest (tournament index,
// coalition mask, variant ordinal), which pins reports across worker counts.
struct Best {
  bool found = false;
  std::int64_t gain = 0;  // over the shared table denominator
  std::uint64_t t_idx = 0;
  std::uint64_t coal_mask = 0;
  std::uint64_t variant = 0;
};

bool better(const Best& a, const Best& b) {
  if (!b.found || !a.found) return a.found;
  if (a.gain != b.gain) return a.gain > b.gain;
  if (a.t_idx != b.t_idx) return a.t_idx < b.t_idx;
  if (a.coal_mask != b.coal_mask) return a.coal_mask < b.coal_mask;
  return a.variant < b.variant;
}

Tournament apply_variant(int n, std::uint64_t t_idx, const Coalition& c, std::uint64_t v) {
  std::uint64_t idx = t_idx & ~c.bits_mask;
  for (std::size_t b = 0; b < c.bits.size(); ++b)
    if ((v >> b) & 1) idx |= std::uint64_t(1) << c.bits[b];
  return Tournament::from_index(n, idx);
}

std::uint64_t exhaustive_scenarios(int n, int k) {
  std::uint64_t per_t = 0;
  for (int s = 2; s <= std::min(k, n); ++s)
    per_t = sat_add(per_t, sat_mul(sat_binomial(n, s), sat_pow(2, s * (s - 1) / 2)));
  return sat_mul(tournament_count(n), per_t);
}

}  // namespace

KsnmReport audit_ksnm_exhaustive(const Rule& rule, int n, int k, const AuditOptions& opts) {
  const auto start = Clock::now();
  if (k < 2) throw AuditError("audit: k must be >= 2");
  const std::uint64_t scenarios = exhaustive_scenarios(n, k);
  if (scenarios > opts.max_scenarios)
    throw AuditError("audit: exhaustive k-SNM at n=" + std::to_string(n) + ", k=" +
                     std::to_string(k) + " needs " + std::to_string(scenarios) +
                     " scenarios (cap " + std::to_string(opts.max_scenarios) + ")");

  const int threads = resolve_threads(opts.threads);
  const DistTable table = build_table(rule, n, threads);
  const std::vector<Coalition> coalitions = make_coalitions(n, k);
  if (coalitions.empty()) throw AuditError("audit: no coalitions of size >= 2 exist at n=" + std::to_string(n));

  std::vector<Best> bests(threads);
  run_parallel(table.count, threads, [&](int w, std::uint64_t lo, std::uint64_t hi) {
    Best local;
    for (std::uint64_t t = lo; t < hi; ++t) {
      for (const Coalition& c : coalitions) {
        std::int64_t base_rs = 0;
        for (int m : c.members) base_rs += table.at(t, m);
        const int mbits = static_cast<int>(c.bits.size());
        for (std::uint64_t v = 0; v < (std::uint64_t(1) << mbits); ++v) {
          std::uint64_t idx = t & ~c.bits_mask;
          for (int b = 0; b < mbits; ++b)
            if ((v >> b) & 1) idx |= std::uint64_t(1) << c.bits[b];
          std::int64_t rs = 0;
          for (int m : c.members) rs += table.at(idx, m);
          const Best cand{true, rs - base_rs, t, c.mask, v};
          if (better(cand, local)) local = cand;
        }
      }
    }
    bests[w] = local;
  });

  Best overall;
  for (const Best& b : bests)
    if (better(b, overall)) overall = b;

  KsnmReport r;
  r.rule_id = rule.id;
  r.n = n;
  r.k = k;
  r.exhaustive = true;
  r.threads = threads;
  r.scenarios_checked = scenarios;
  r.alpha_observed = Rat(static_cast<long>(overall.gain), static_cast<long>(table.den));
  const Coalition* wc = nullptr;
  for (const Coalition& c : coalitions)
    if (c.mask == overall.coal_mask) wc = &c;
  r.witness.base = Tournament::from_index(n, overall.t_idx);
  r.witness.coalition = TeamSet::from_mask(n, overall.coal_mask);
  r.witness.variant = apply_variant(n, overall.t_idx, *wc, overall.variant);
  r.wall_ms = ms_since(start);
  return r;
}

KsnmReport audit_ksnm_sampled(const Rule& rule, int n, int k, std::uint64_t scenarios,
                              std::uint64_t seed, const AuditOptions& opts) {
  const auto start = Clock::now();
  if (k < 2) throw AuditError("audit: k must be >= 2");
  if (!rule.exact)
    throw AuditError("audit: rule '" + rule.id +
                     "' has no exact evaluator; sampled gain comparisons still require exactness");
  const int threads = resolve_threads(opts.threads);

  struct TaskBest {
    bool found = false;
    Rat gain;
    std::uint64_t task = 0;
    std::uint64_t variant = 0;
    CollusionScenario scenario;
  };
  std::vector<TaskBest> bests(threads);
  std::vector<std::uint64_t> counted(threads, 0);

  run_parallel(scenarios, threads, [&](int w, std::uint64_t lo, std::uint64_t hi) {
    TaskBest local;
    for (std::uint64_t task = lo; task < hi; ++task) {
      Rng rng = Rng::for_task(seed, task);
      const Tournament base = random_tournament(n, rng);
      const int size = 2 + static_cast<int>(rng.bounded(std::min(k, n) - 1));
      std::vector<int> ids(n);
      std::iota(ids.begin(), ids.end(), 0);
      rng.shuffle(ids);
      ids.resize(size);
      std::sort(ids.begin(), ids.end());
      TeamSet coalition(n);
      for (int i : ids) coalition.set(i);

      const Rat base_rs = rule.exact(base).mass(coalition);
      const int mbits = size * (size - 1) / 2;

      auto consider = [&](const Tournament& variant, std::uint64_t ordinal) {
        ++counted[w];
        const Rat gain = rule.exact(variant).mass(coalition) - base_rs;
        TaskBest cand{true, gain, task, ordinal, {base, coalition, variant}};
        const bool b = !local.found || cand.gain > local.gain ||
                       (cand.gain == local.gain &&
                        (cand.task < local.task ||
                         (cand.task == local.task && cand.variant < local.variant)));
        if (b) local = std::move(cand);
      };

      if (mbits <= 10) {
        const auto variants = adjacency_variants(base, coalition);
        for (std::uint64_t v = 0; v < variants.size(); ++v) consider(variants[v], v);
      } else {
        // Greedy best response: flip one internal match at a time while the
        // coalition's mass strictly improves.
        Tournament current = base;
        Rat current_rs = base_rs;
        bool improved = true;
        std::uint64_t ordinal = 0;
        consider(current, ordinal++);
        while (improved) {
          improved = false;
          for (std::size_t a = 0; a < ids.size(); ++a)
            for (std::size_t b = a + 1; b < ids.size(); ++b) {
              Tournament flipped = current;
              if (current.beats(ids[a], ids[b]))
                flipped.set_result(ids[b], ids[a]);
              else
                flipped.set_result(ids[a], ids[b]);
              const Rat rs = rule.exact(flipped).mass(coalition);
              consider(flipped, ordinal++);
              if (rs > current_rs) {
                current = flipped;
                current_rs = rs;
                improved = true;
              }
            }
        }
      }
    }
    bests[w] = local;
  });

  TaskBest overall;
  for (TaskBest& b : bests) {
    const bool take = b.found && (!overall.found || b.gain > overall.gain ||
                                  (b.gain == overall.gain &&
                                   (b.task < overall.task ||
                                    (b.task == overall.task && b.variant < overall.variant))));
    if (take) overall = std::move(b);
  }

  KsnmReport r;
  r.rule_id = rule.id;
  r.n = n;
  r.k = k;
  r.exhaustive = false;
  r.threads = threads;
  r.seed = seed;
  r.scenarios_checked = std::accumulate(counted.begin(), counted.end(), std::uint64_t(0));
  r.alpha_observed = overall.gain;
  r.witness = overall.scenario;
  r.coverage_note =
      "lower-bound witness search over " + std::to_string(scenarios) +
      " random (T, S) scenarios with exact gain evaluation; a gain region hit with "
      "probability p per scenario is missed with probability at most (1-p)^" +
      std::to_string(scenarios);
  r.wall_ms = ms_since(start);
  return r;
}

MonotoneReport audit_monotone(const Rule& rule, int n, const AuditOptions& opts) {
  const auto start = Clock::now();
  const int threads = resolve_threads(opts.threads);
  const DistTable table = build_table(rule, n, threads);

  struct Violation {
    bool found = false;
    std::uint64_t t_idx = 0;
    int i = 0, j = 0;
  };
  std::vector<Violation> found(threads);

  run_parallel(table.count, threads, [&](int w, std::uint64_t lo, std::uint64_t hi) {
    Violation local;
    for (std::uint64_t t = lo; t < hi && !local.found; ++t) {
      for (int i = 0; i < n && !local.found; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          const int bit = pair_bit(n, i, j);
          const bool iwins = i < j ? ((t >> bit) & 1) != 0 : ((t >> bit) & 1) == 0;
          if (!iwins) continue;
          const std::uint64_t flipped = t ^ (std::uint64_t(1) << bit);
          if (table.at(flipped, i) > table.at(t, i)) {
            local = {true, t, i, j};
            break;
          }
        }
    }
    found[w] = local;
  });

  Violation first;
  for (const Violation& v : found)
    if (v.found && (!first.found || v.t_idx < first.t_idx ||
                    (v.t_idx == first.t_idx && (v.i < first.i || (v.i == first.i && v.j < first.j)))))
      first = v;

  MonotoneReport r;
  r.rule_id = rule.id;
  r.n = n;
  r.threads = threads;
  r.checks = table.count * pair_count(n);
  r.pass = !first.found;
  if (first.found) {
    MonotoneWitness w;
    w.base = Tournament::from_index(n, first.t_idx);
    w.variant = Tournament::from_index(n, first.t_idx ^ (std::uint64_t(1) << pair_bit(n, first.i, first.j)));
    w.team = first.i;
    w.before = Rat(static_cast<long>(table.at(first.t_idx, first.i)), static_cast<long>(table.den));
    std::uint64_t v_idx = first.t_idx ^ (std::uint64_t(1) << pair_bit(n, first.i, first.j));
    w.after = Rat(static_cast<long>(table.at(v_idx, first.i)), static_cast<long>(table.den));
    r.witness = std::move(w);
  }
  r.wall_ms = ms_since(start);
  return r;
}

namespace {

ConsistencyReport consistency_sweep(const Rule& rule, int n, const std::string& property,
                                    const AuditOptions& opts) {
  const auto start = Clock::now();
  if (!rule.exact) throw AuditError("audit: rule '" + rule.id + "' has no exact evaluator");
  const int threads = resolve_threads(opts.threads);
  const std::uint64_t count = tournament_count(n);

  struct Hit {
    bool found = false;
    std::uint64_t t_idx = 0;
  };
  std::vector<Hit> hits(threads);

  run_parallel(count, threads, [&](int w, std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t i = lo; i < hi && !hits[w].found; ++i) {
      const Tournament t = Tournament::from_index(n, i);
      if (property == "cc") {
        auto cw = condorcet_winner(t);
        if (!cw) continue;
        if (rule.exact(t).probs[*cw] != Rat(1)) hits[w] = {true, i};
      } else {
        const WinDistribution d = rule.exact(t);
        const TeamSet cycle = top_cycle(t);
        Rat outside = d.dummy_mass;
        for (int x = 0; x < n; ++x)
          if (!cycle.test(x)) outside += d.probs[x];
        if (!outside.is_zero()) hits[w] = {true, i};
      }
    }
  });

  Hit first;
  for (const Hit& h : hits)
    if (h.found && (!first.found || h.t_idx < first.t_idx)) first = h;

  ConsistencyReport r;
  r.rule_id = rule.id;
  r.n = n;
  r.property = property;
  r.threads = threads;
  // Condorcet tournaments: n choices of winner, the other C(n-1,2) matches free.
  r.checks = property == "cc"
                 ? sat_mul(n, sat_pow(2, static_cast<unsigned>(pair_count(n) - (n - 1))))
                 : count;
  r.pass = !first.found;
  if (first.found) r.witness = Tournament::from_index(n, first.t_idx);
  r.wall_ms = ms_since(start);
  return r;
}

}  // namespace

ConsistencyReport audit_cc(const Rule& rule, int n, const AuditOptions& opts) {
  return consistency_sweep(rule, n, "cc", opts);
}

ConsistencyReport audit_top_cycle_exact(const Rule& rule, int n, const AuditOptions& opts) {
  return consistency_sweep(rule, n, "top-cycle", opts);
}

SampledTopCycleReport audit_top_cycle_sampled(const Rule& rule, int n,
                                              std::uint64_t tournaments,
                                              std::uint64_t draws_per_tournament,
                                              std::uint64_t seed, const AuditOptions& opts) {
  const auto start = Clock::now();
  if (!rule.sample) throw AuditError("audit: rule '" + rule.id + "' has no sampler");
  const int threads = resolve_threads(opts.threads);
  std::vector<std::uint64_t> violations(threads, 0);

  run_parallel(tournaments, threads, [&](int w, std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t task = lo; task < hi; ++task) {
      Rng rng = Rng::for_task(seed, task);
      const Tournament t = random_tournament(n, rng);
      const TeamSet cycle = top_cycle(t);
      for (std::uint64_t d = 0; d < draws_per_tournament; ++d) {
        const int winner = rule.sample(t, rng);
        if (winner >= n || !cycle.test(winner)) ++violations[w];
      }
    }
  });

  SampledTopCycleReport r;
  r.rule_id = rule.id;
  r.n = n;
  r.tournaments = tournaments;
  r.draws_per_tournament = draws_per_tournament;
  r.violations = std::accumulate(violations.begin(), violations.end(), std::uint64_t(0));
  r.seed = seed;
  r.wall_ms = ms_since(start);
  return r;
}

BoundReport bound_check_exhaustive(const Rule& rule, int n, int k, const Rat& bound,
                                   const AuditOptions& opts) {
  BoundReport r;
  r.search = audit_ksnm_exhaustive(rule, n, k, opts);
  r.bound = bound;
  r.within = r.search.alpha_observed <= bound;
  return r;
}

BoundReport bound_check_sampled(const Rule& rule, int n, int k, const Rat& bound,
                                std::uint64_t scenarios, std::uint64_t seed,
                                const AuditOptions& opts) {
  BoundReport r;
  r.search = audit_ksnm_sampled(rule, n, k, scenarios, seed, opts);
  r.bound = bound;
  r.within = r.search.alpha_observed <= bound;
  return r;
}

Rat replay_gain(const Rule& rule, const CollusionScenario& s) {
  if (!rule.exact) throw AuditError("replay: rule '" + rule.id + "' has no exact evaluator");
  return rule.exact(s.variant).mass(s.coalition) - rule.exact(s.base).mass(s.coalition);
}

}  // namespace trn
