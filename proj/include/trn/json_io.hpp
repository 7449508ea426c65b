#pragma once

// JSON rendering for distributions, audit reports and structure
// diagnostics. Uses ordered maps and canonical "p/q" strings so exhaustive
// reports are byte-identical across runs; wall-clock timings are opt-in for
// the same reason. Rationals never render as JSON numbers in authoritative
// fields.

#include <json.hpp>

#include "trn/audit.hpp"
#include "trn/distribution.hpp"
#include "trn/structure.hpp"

namespace trn {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const WinDistribution& d);
Json to_json(const KsnmReport& r, bool timings = false);
Json to_json(const MonotoneReport& r, bool timings = false);
Json to_json(const ConsistencyReport& r, bool timings = false);
Json to_json(const SampledTopCycleReport& r, bool timings = false);
Json to_json(const BoundReport& r, bool timings = false);
Json to_json(const StructureDiag& d, const Tournament& t);
Json to_json(const TournamentClass& c);

}  // namespace trn
