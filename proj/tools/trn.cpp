// trn — tournament rules workbench. Subcommands: eval (exact rule output),
// audit (property audits with exact verdicts), bounds (closed-form bound
// table), gen (seeded tournament files), sample (empirical frequencies).
// Exit codes: 0 success / assertion held, 1 assertion failed, 2 usage or
// parse error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "trn/audit.hpp"
#include "trn/json_io.hpp"
#include "trn/rules.hpp"

namespace {

using trn::Json;
using trn::Rat;
using trn::Rule;
using trn::Tournament;

struct GlobalOpts {
  std::string format = "text";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;  // 0 = auto-detect
  std::string output;
  bool timings = false;
};

struct AssertionFailed {};  // unwinds to exit code 1

std::ofstream g_outfile;

std::ostream& out(const GlobalOpts& g) {
  if (g.output.empty()) return std::cout;
  if (!g_outfile.is_open()) {
    g_outfile.open(g.output);
    if (!g_outfile) throw std::runtime_error("cannot open output file '" + g.output + "'");
  }
  return g_outfile;
}

Tournament load_tournament(const std::string& input, const std::string& compact) {
  if (!compact.empty() && !input.empty())
    throw std::runtime_error("give either --input or --compact, not both");
  if (!compact.empty()) return Tournament::parse_compact(compact);
  if (input.empty()) throw std::runtime_error("an input tournament is required (--input or --compact)");
  std::ifstream in(input);
  if (!in) throw std::runtime_error("cannot read input file '" + input + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return Tournament::parse(ss.str());
}

std::uint64_t require_seed(const GlobalOpts& g, const char* what) {
  if (!g.seed_set)
    throw std::runtime_error(std::string(what) + " needs --seed so the report is reproducible");
  return g.seed;
}

void emit_json(const GlobalOpts& g, const Json& j) { out(g) << j.dump(2) << "\n"; }

// Flat key,value CSV for report-shaped JSON.
void emit_csv_flat(const GlobalOpts& g, const Json& j) {
  auto& os = out(g);
  os << "key,value\n";
  for (auto& [key, value] : j.items())
    os << key << "," << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
}

void cmd_eval(const GlobalOpts& g, const std::string& rule_id, const std::string& input,
              const std::string& compact) {
  const Tournament t = load_tournament(input, compact);
  const Rule rule = trn::make_rule(rule_id);
  if (!rule.exact) throw std::runtime_error("rule '" + rule_id + "' has no exact evaluator");
  const trn::WinDistribution dist = rule.exact(t);
  if (g.format == "json") {
    Json j = to_json(dist);
    j["rule"] = rule_id;
    emit_json(g, j);
  } else if (g.format == "csv") {
    auto& os = out(g);
    os << "team,probability,float\n";
    for (int i = 0; i < dist.n(); ++i)
      os << i << "," << dist.probs[i].str() << "," << dist.probs[i].to_double() << "\n";
    if (!dist.dummy_mass.is_zero())
      os << "dummy," << dist.dummy_mass.str() << "," << dist.dummy_mass.to_double() << "\n";
  } else {
    auto& os = out(g);
    for (int i = 0; i < dist.n(); ++i)
      os << "team " << i << ": " << dist.probs[i].str() << " (~" << std::setprecision(6)
         << dist.probs[i].to_double() << ")\n";
    if (!dist.dummy_mass.is_zero())
      os << "dummy mass: " << dist.dummy_mass.str() << " (~" << dist.dummy_mass.to_double()
         << ")\n";
  }
}

struct AuditArgs {
  std::string rule_id;
  int n = 0;
  int k = 3;
  std::string property = "ksnm";
  std::string mode = "exhaustive";
  std::uint64_t samples = 1000;
  std::uint64_t tournaments = 100;
  std::uint64_t draws = 1000;
  std::string assert_alpha;
  std::string bound;
};

void cmd_audit(const GlobalOpts& g, const AuditArgs& a) {
  trn::AuditOptions opts;
  opts.threads = g.threads;
  const Rule rule = trn::make_rule(a.rule_id);
  bool held = true;
  Json report;

  if (a.property == "ksnm") {
    trn::KsnmReport r = a.mode == "exhaustive"
                            ? trn::audit_ksnm_exhaustive(rule, a.n, a.k, opts)
                            : trn::audit_ksnm_sampled(rule, a.n, a.k, a.samples,
                                                      require_seed(g, "sampled audit"), opts);
    report = to_json(r, g.timings);
    if (!a.assert_alpha.empty()) held = r.alpha_observed <= Rat::parse(a.assert_alpha);
  } else if (a.property == "monotone") {
    trn::MonotoneReport r = trn::audit_monotone(rule, a.n, opts);
    report = to_json(r, g.timings);
    held = r.pass;
  } else if (a.property == "cc") {
    trn::ConsistencyReport r = trn::audit_cc(rule, a.n, opts);
    report = to_json(r, g.timings);
    held = r.pass;
  } else if (a.property == "top-cycle") {
    if (a.mode == "exhaustive") {
      trn::ConsistencyReport r = trn::audit_top_cycle_exact(rule, a.n, opts);
      report = to_json(r, g.timings);
      held = r.pass;
    } else {
      trn::SampledTopCycleReport r = trn::audit_top_cycle_sampled(
          rule, a.n, a.tournaments, a.draws, require_seed(g, "sampled audit"), opts);
      report = to_json(r, g.timings);
      held = r.pass();
    }
  } else if (a.property == "bound") {
    if (a.bound.empty()) throw std::runtime_error("--property bound requires --bound p/q");
    trn::BoundReport r =
        a.mode == "exhaustive"
            ? trn::bound_check_exhaustive(rule, a.n, a.k, Rat::parse(a.bound), opts)
            : trn::bound_check_sampled(rule, a.n, a.k, Rat::parse(a.bound), a.samples,
                                       require_seed(g, "sampled audit"), opts);
    report = to_json(r, g.timings);
    held = r.within;
  } else {
    throw std::runtime_error("unknown property '" + a.property + "'");
  }

  if (g.format == "csv")
    emit_csv_flat(g, report);
  else if (g.format == "text") {
    auto& os = out(g);
    for (auto& [key, value] : report.items())
      os << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  } else {
    emit_json(g, report);
  }
  if (!held) throw AssertionFailed{};
}

void cmd_bounds(const GlobalOpts& g, int dmax) {
  if (dmax < 3) throw std::runtime_error("--dmax must be >= 3");
  if (g.format == "json" || g.format == "csv") {
    Json cells = Json::array();
    for (int d = 3; d <= dmax; ++d)
      for (int k = 3; k <= d; ++k) {
        Rat a = trn::alpha_bound(d, k);
        cells.push_back(Json{{"d", d},
                             {"k", k},
                             {"rational", a.str()},
                             {"decimal", a.decimal(4)},
                             {"float", a.to_double()}});
      }
    if (g.format == "json") {
      emit_json(g, Json{{"schema_version", trn::kSchemaVersion}, {"d_max", dmax}, {"cells", cells}});
    } else {
      auto& os = out(g);
      os << "d,k,rational,decimal,float\n";
      for (auto& c : cells)
        os << c["d"] << "," << c["k"] << "," << c["rational"].get<std::string>() << ","
           << c["decimal"].get<std::string>() << "," << c["float"] << "\n";
    }
    return;
  }
  auto& os = out(g);
  os << "d\\k";
  for (int k = 3; k <= dmax; ++k) os << "  " << std::setw(6) << k;
  os << "\n";
  for (int d = 3; d <= dmax; ++d) {
    os << std::setw(3) << d;
    for (int k = 3; k <= d; ++k) os << "  " << trn::alpha_bound(d, k).decimal(4);
    os << "\n";
  }
}

void cmd_gen(const GlobalOpts& g, int n, int count, const std::string& out_dir) {
  const std::uint64_t seed = require_seed(g, "gen");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create directory '" + out_dir + "': " + ec.message());
  Json files = Json::array();
  for (int i = 0; i < count; ++i) {
    trn::Rng rng = trn::Rng::for_task(seed, i);
    const Tournament t = trn::random_tournament(n, rng);
    std::ostringstream name;
    name << "t" << std::setw(4) << std::setfill('0') << i << ".trn";
    const std::string path = out_dir + "/" + name.str();
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << t.serialize();
    files.push_back(path);
  }
  if (g.format == "json")
    emit_json(g, Json{{"schema_version", trn::kSchemaVersion},
                      {"n", n},
                      {"count", count},
                      {"seed", seed},
                      {"files", files}});
  else
    for (auto& f : files) out(g) << f.get<std::string>() << "\n";
}

void cmd_sample(const GlobalOpts& g, const std::string& rule_id, const std::string& input,
                const std::string& compact, std::uint64_t samples) {
  const std::uint64_t seed = require_seed(g, "sample");
  const Tournament t = load_tournament(input, compact);
  const Rule rule = trn::make_rule(rule_id);
  if (!rule.sample) throw std::runtime_error("rule '" + rule_id + "' has no sampler");

  std::vector<std::uint64_t> counts(t.n(), 0);
  std::uint64_t dummy_wins = 0;
  trn::Rng rng(seed);
  for (std::uint64_t s = 0; s < samples; ++s) {
    const int w = rule.sample(t, rng);
    if (w >= t.n())
      ++dummy_wins;
    else
      ++counts[w];
  }

  // Exact reference alongside the empirical frequencies when feasible.
  std::optional<trn::WinDistribution> exact;
  if (rule.exact) {
    try {
      exact = rule.exact(t);
    } catch (const trn::FeasibilityError&) {
    }
  }

  if (g.format == "json") {
    Json freq = Json::array();
    for (int i = 0; i < t.n(); ++i)
      freq.push_back(Json{{"team", i},
                          {"count", counts[i]},
                          {"freq", static_cast<double>(counts[i]) / samples}});
    Json j{{"schema_version", trn::kSchemaVersion},
           {"rule", rule_id},
           {"n", t.n()},
           {"samples", samples},
           {"seed", seed},
           {"frequencies", freq},
           {"dummy_wins", dummy_wins}};
    if (exact) {
      Json ex = Json::array();
      for (const Rat& p : exact->probs) ex.push_back(p.str());
      j["exact"] = ex;
      j["exact_dummy_mass"] = exact->dummy_mass.str();
    } else {
      j["exact"] = nullptr;
    }
    emit_json(g, j);
  } else if (g.format == "csv") {
    auto& os = out(g);
    os << "team,count,freq,exact\n";
    for (int i = 0; i < t.n(); ++i)
      os << i << "," << counts[i] << "," << static_cast<double>(counts[i]) / samples << ","
         << (exact ? exact->probs[i].str() : "") << "\n";
    os << "dummy," << dummy_wins << "," << static_cast<double>(dummy_wins) / samples << ","
       << (exact ? exact->dummy_mass.str() : "") << "\n";
  } else {
    auto& os = out(g);
    for (int i = 0; i < t.n(); ++i) {
      os << "team " << i << ": " << counts[i] << " (" << std::setprecision(5)
         << static_cast<double>(counts[i]) / samples << ")";
      if (exact) os << "  exact " << exact->probs[i].str();
      os << "\n";
    }
    if (dummy_wins || (exact && !exact->dummy_mass.is_zero())) {
      os << "dummy: " << dummy_wins << " (" << static_cast<double>(dummy_wins) / samples << ")";
      if (exact) os << "  exact " << exact->dummy_mass.str();
      os << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tournament rules workbench"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may appear after the subcommand

  GlobalOpts g;
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  auto* seed_opt = app.add_option("--seed", g.seed, "RNG seed for sampled modes");
  app.add_option("--threads", g.threads, "worker count, 0 = auto")->capture_default_str();
  app.add_option("--output", g.output, "write to file instead of stdout");
  app.add_flag("--timings", g.timings, "include wall-clock timings in reports");

  std::string rule_id, input, compact;
  AuditArgs audit_args;
  int bounds_dmax = 7;
  int gen_n = 6, gen_count = 1;
  std::string gen_dir;
  std::uint64_t sample_count = 10000;

  auto* eval = app.add_subcommand("eval", "evaluate a rule exactly on one tournament");
  eval->add_option("--rule", rule_id, "rule id")->required();
  eval->add_option("--input", input, ".trn file");
  eval->add_option("--compact", compact, "compact form n:hex");

  auto* audit = app.add_subcommand("audit", "audit a rule property");
  audit->add_option("--rule", audit_args.rule_id, "rule id")->required();
  audit->add_option("--n", audit_args.n, "team count")->required();
  audit->add_option("--k", audit_args.k, "max coalition size")->capture_default_str();
  audit->add_option("--property", audit_args.property, "ksnm|monotone|cc|top-cycle|bound")
      ->check(CLI::IsMember({"ksnm", "monotone", "cc", "top-cycle", "bound"}))
      ->capture_default_str();
  audit->add_option("--mode", audit_args.mode, "exhaustive|sampled")
      ->check(CLI::IsMember({"exhaustive", "sampled"}))
      ->capture_default_str();
  audit->add_option("--samples", audit_args.samples, "sampled scenarios")->capture_default_str();
  audit->add_option("--tournaments", audit_args.tournaments, "random tournaments (sampled top-cycle)")
      ->capture_default_str();
  audit->add_option("--draws", audit_args.draws, "draws per tournament (sampled top-cycle)")
      ->capture_default_str();
  audit->add_option("--assert-alpha", audit_args.assert_alpha,
                    "exit 1 unless alpha_observed <= this rational");
  audit->add_option("--bound", audit_args.bound, "theoretical bound for --property bound");

  auto* bounds = app.add_subcommand("bounds", "closed-form alpha_{d,k} bound table");
  bounds->add_option("--dmax", bounds_dmax, "largest d")->capture_default_str();

  auto* gen = app.add_subcommand("gen", "write seeded random tournaments to files");
  gen->add_option("--n", gen_n, "team count")->required();
  gen->add_option("--count", gen_count, "how many files")->capture_default_str();
  gen->add_option("--out-dir", gen_dir, "output directory")->required();

  auto* sample = app.add_subcommand("sample", "empirical winner frequencies");
  sample->add_option("--rule", rule_id, "rule id")->required();
  sample->add_option("--input", input, ".trn file");
  sample->add_option("--compact", compact, "compact form n:hex");
  sample->add_option("--samples", sample_count, "number of draws")->capture_default_str();

  try {
    app.parse(argc, argv);
    g.seed_set = seed_opt->count() > 0;
    if (eval->parsed()) cmd_eval(g, rule_id, input, compact);
    if (audit->parsed()) cmd_audit(g, audit_args);
    if (bounds->parsed()) cmd_bounds(g, bounds_dmax);
    if (gen->parsed()) cmd_gen(g, gen_n, gen_count, gen_dir);
    if (sample->parsed()) cmd_sample(g, rule_id, input, compact, sample_count);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const AssertionFailed&) {
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
