#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vchoq/capacities.hpp"
#include "vchoq/errors.hpp"
#include "vchoq/functions.hpp"
#include "vchoq/verify.hpp"

namespace vchoq {

// Malformed function, capacity or target description. The message carries
// the byte position for JSON syntax errors.
class SpecError : public UsageError {
 public:
  explicit SpecError(const std::string& what) : UsageError(what) {}
};

inline constexpr std::size_t kPresetGrid = 1025;

/// Accepted forms:
///   preset:one | preset:ramp | preset:exp-gamma (or the bare preset name),
///   inline JSON {"type": "pwl"|"step", "nodes": [...], "values": [...]},
///   inline JSON {"type": "preset", "name": ..., "grid": N},
///   a path to a file holding one of the JSON objects.
/// exp-gamma (1 - e^{-t}) is sampled on a uniform grid of kPresetGrid nodes
/// unless "grid" says otherwise; the other presets are exact.
Function parse_function_spec(std::string_view spec);

/// Accepted forms: a distortion name (identity, power, moebius,
/// exp-saturation, log, sine, square), power(p), inline JSON
/// {"distortion": name, "p": 0.5}, or a path to a JSON file. "square" is the
/// convex t^2, which is not a submodular capacity. power defaults to p = 0.5.
Capacity parse_capacity_spec(std::string_view spec);

/// JSON array whose entries are target names (sin-pi, square, orbit:k, or any
/// function spec string) or function spec objects, optionally with a
/// "label" used as the target name.
std::vector<SpanTarget> parse_span_targets(std::string_view json_text);

}  // namespace vchoq
