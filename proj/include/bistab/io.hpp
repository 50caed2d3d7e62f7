#pragma once

// JSON and CSV serialisation of signals and results.
//
// Signal schema:
//   {"type": "constant", "a0": 0.0}
//   {"type": "trig", "a0": 0.0, "terms": [{"amplitude": 1, "frequency": 1, "phase": 0}],
//    "rationally_independent": false}
//   {"type": "fourier_cesaro", "a0": 0.0, "a": [...], "b": [...], "N": 8}
//   {"type": "sampled", "period": 6.28, "samples": [[t, value], ...]}
// Unknown fields are rejected.

#include <string>

#include <json.hpp>

#include "bistab/criteria.hpp"
#include "bistab/dynamics.hpp"
#include "bistab/model.hpp"
#include "bistab/relaxation.hpp"
#include "bistab/signals.hpp"

namespace bistab {

using Json = nlohmann::ordered_json;

/// Throws ValidationError on schema violations.
SignalSpec signal_from_json(const Json& j);
Json to_json(const SignalSpec& s);

/// Reads a signal from a file, or parses the argument itself when it starts with '{'.
SignalSpec load_signal(const std::string& path_or_inline);

Json to_json(const ScalarDiagnostics& d);
Json to_json(const SignalBounds& b);
Json to_json(const WeightedBounds& w);
Json to_json(const IntervalEstimate& iv);
Json to_json(const RegimeCertificate& cert);
Json to_json(const PeriodicSolution& s, int samples = 0);
Json to_json(const Census& c, int samples = 0);
Json to_json(const LambdaPm& pm);
Json to_json(const LoopResult& r, bool include_loop = true);
Json to_json(const ThresholdResult& t);

/// Shortest round-trip decimal form ("%.17g"); "nan" / "inf" spelled out.
std::string csv_number(double v);

}  // namespace bistab
