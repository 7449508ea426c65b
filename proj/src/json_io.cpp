#include "trn/json_io.hpp"

namespace trn {

namespace {

Json rational_pair(const Rat& r) {
  return Json{{"rational", r.str()}, {"float", r.to_double()}};
}

Json witness_json(const CollusionScenario& s) {
  return Json{{"base", s.base.compact()},
              {"variant", s.variant.compact()},
              {"coalition", s.coalition.members()}};
}

}  // namespace

Json to_json(const WinDistribution& d) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = d.n();
  Json probs = Json::array();
  Json floats = Json::array();
  for (const Rat& p : d.probs) {
    probs.push_back(p.str());
    floats.push_back(p.to_double());
  }
  j["probs"] = std::move(probs);
  j["dummy_mass"] = d.dummy_mass.str();
  j["floats"] = std::move(floats);
  return j;
}

Json to_json(const KsnmReport& r, bool timings) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["rule"] = r.rule_id;
  j["n"] = r.n;
  j["k"] = r.k;
  j["mode"] = r.exhaustive ? "exhaustive" : "sampled";
  j["alpha_observed"] = rational_pair(r.alpha_observed);
  j["witness"] = witness_json(r.witness);
  j["scenarios_checked"] = r.scenarios_checked;
  j["seed"] = r.seed ? Json(*r.seed) : Json(nullptr);
  if (!r.coverage_note.empty()) j["coverage_note"] = r.coverage_note;
  if (timings) j["wall_time_ms"] = r.wall_ms;
  return j;
}

Json to_json(const MonotoneReport& r, bool timings) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["rule"] = r.rule_id;
  j["n"] = r.n;
  j["property"] = "monotone";
  j["mode"] = "exhaustive";
  j["pass"] = r.pass;
  j["checks"] = r.checks;
  if (r.witness) {
    j["witness"] = Json{{"base", r.witness->base.compact()},
                        {"variant", r.witness->variant.compact()},
                        {"team", r.witness->team},
                        {"before", rational_pair(r.witness->before)},
                        {"after", rational_pair(r.witness->after)}};
  } else {
    j["witness"] = nullptr;
  }
  if (timings) j["wall_time_ms"] = r.wall_ms;
  return j;
}

Json to_json(const ConsistencyReport& r, bool timings) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["rule"] = r.rule_id;
  j["n"] = r.n;
  j["property"] = r.property;
  j["mode"] = "exhaustive";
  j["pass"] = r.pass;
  j["checks"] = r.checks;
  j["witness"] = r.witness ? Json(r.witness->compact()) : Json(nullptr);
  if (timings) j["wall_time_ms"] = r.wall_ms;
  return j;
}

Json to_json(const SampledTopCycleReport& r, bool timings) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["rule"] = r.rule_id;
  j["n"] = r.n;
  j["property"] = "top-cycle";
  j["mode"] = "sampled";
  j["pass"] = r.pass();
  j["tournaments"] = r.tournaments;
  j["draws_per_tournament"] = r.draws_per_tournament;
  j["violations"] = r.violations;
  j["seed"] = r.seed;
  if (timings) j["wall_time_ms"] = r.wall_ms;
  return j;
}

Json to_json(const BoundReport& r, bool timings) {
  Json j = to_json(r.search, timings);
  j["property"] = "bound";
  j["bound"] = rational_pair(r.bound);
  j["within_bound"] = r.within;
  return j;
}

Json to_json(const TournamentClass& c) {
  switch (c.kind) {
    case TournamentClass::Kind::Condorcet:
      return Json{{"kind", "condorcet"}, {"winner", c.winner}};
    case TournamentClass::Kind::FarCondorcet:
      return Json{{"kind", "far-condorcet"}};
    default:
      return Json{{"kind", "near-condorcet"}, {"mw_pairs", c.mw_pairs}};
  }
}

Json to_json(const StructureDiag& d, const Tournament& t) {
  Json groups = Json::array();
  for (const MwGroup& g : d.groups)
    groups.push_back(Json{{"leader", g.leader}, {"members", g.members.members()}});
  return Json{{"schema_version", kSchemaVersion},
              {"tournament", t.compact()},
              {"class", to_json(d.cls)},
              {"mw_groups", std::move(groups)},
              {"significant_count", d.significant_count},
              {"violations", d.violations}};
}

}  // namespace trn
