#include "vchoq/spec_io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "vchoq/volterra.hpp"

namespace vchoq {

namespace {

using json = nlohmann::json;

json parse_json(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string(what) + ": invalid JSON at position " + std::to_string(e.byte) +
                    " (" + e.what() + ")");
  }
}

std::string read_file(std::string_view path, std::string_view what) {
  std::ifstream in{std::string(path)};
  if (!in) {
    throw SpecError(std::string(what) + ": '" + std::string(path) +
                    "' is neither a known name, inline JSON, nor a readable file");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool looks_like_json(std::string_view s) {
  const auto pos = s.find_first_not_of(" \t\r\n");
  return pos != std::string_view::npos && (s[pos] == '{' || s[pos] == '[');
}

std::vector<double> number_array(const json& j, const char* key, std::string_view what) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw SpecError(std::string(what) + ": field '" + key + "' must be an array of numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < j[key].size(); ++i) {
    const auto& v = j[key][i];
    if (!v.is_number()) {
      throw SpecError(std::string(what) + ": " + key + "[" + std::to_string(i) +
                      "] is not a number");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

Function preset(std::string_view name, std::size_t grid) {
  if (name == "one") return PiecewiseLinearFunction::constant(1.0);
  if (name == "ramp") return PiecewiseLinearFunction::ramp();
  if (name == "exp-gamma") {
    if (grid < 2) throw SpecError("function spec: preset grid must be >= 2");
    return PiecewiseLinearFunction::sample([](double t) { return -std::expm1(-t); }, grid);
  }
  throw SpecError("function spec: unknown preset '" + std::string(name) +
                  "' (expected one, ramp, exp-gamma)");
}

Function function_from_json(const json& j) {
  constexpr std::string_view what = "function spec";
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw SpecError("function spec: expected an object with a string field 'type'");
  }
  const auto type = j["type"].get<std::string>();
  try {
    if (type == "pwl") {
      return PiecewiseLinearFunction(number_array(j, "nodes", what),
                                     number_array(j, "values", what));
    }
    if (type == "step") {
      return StepFunction(number_array(j, "nodes", what), number_array(j, "values", what));
    }
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecError(std::string("function spec: ") + e.what());
  }
  if (type == "preset") {
    if (!j.contains("name") || !j["name"].is_string()) {
      throw SpecError("function spec: preset needs a string field 'name'");
    }
    std::size_t grid = kPresetGrid;
    if (j.contains("grid")) {
      if (!j["grid"].is_number_unsigned()) throw SpecError("function spec: 'grid' must be a positive integer");
      grid = j["grid"].get<std::size_t>();
    }
    return preset(j["name"].get<std::string>(), grid);
  }
  throw SpecError("function spec: unknown type '" + type + "' (expected pwl, step, preset)");
}

DistortionFunction distortion_named(const std::string& name, double p) {
  if (name == "identity") return DistortionFunction::identity();
  if (name == "power") return DistortionFunction::power(p);
  if (name == "moebius") return DistortionFunction::moebius();
  if (name == "exp-saturation") return DistortionFunction::exp_saturation();
  if (name == "log") return DistortionFunction::log1p();
  if (name == "sine") return DistortionFunction::sine();
  if (name == "square" || name == "t^2") {
    return DistortionFunction::custom(
        "t^2", [](double t) { return t * t; }, [](double t) { return 2.0 * t; }, false);
  }
  throw SpecError("capacity spec: unknown distortion '" + name +
                  "' (expected identity, power, moebius, exp-saturation, log, sine, square)");
}

Capacity capacity_from_json(const json& j) {
  if (!j.is_object() || !j.contains("distortion") || !j["distortion"].is_string()) {
    throw SpecError("capacity spec: expected an object with a string field 'distortion'");
  }
  double p = 0.5;
  if (j.contains("p")) {
    if (!j["p"].is_number()) throw SpecError("capacity spec: 'p' must be a number");
    p = j["p"].get<double>();
  }
  try {
    return Capacity::distorted(distortion_named(j["distortion"].get<std::string>(), p));
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecError(std::string("capacity spec: ") + e.what());
  }
}

std::function<double(double)> as_callable(Function f) {
  return [f = std::move(f)](double t) { return evaluate(f, t); };
}

SpanTarget target_named(const std::string& name) {
  if (name == "sin-pi") {
    return {name, [](double x) { return std::sin(std::numbers::pi * x); }};
  }
  if (name == "square") return {name, [](double x) { return x * x; }};
  if (name.rfind("orbit:", 0) == 0) {
    int k = 0;
    try {
      std::size_t used = 0;
      k = std::stoi(name.substr(6), &used);
      if (used != name.size() - 6) throw std::invalid_argument(name);
    } catch (const std::exception&) {
      throw SpecError("span target: '" + name + "' needs an integer after 'orbit:'");
    }
    if (k < 0) throw SpecError("span target: orbit index must be >= 0");
    if (k == 0) return {name, [](double) { return 1.0; }};
    return {name, [k](double x) { return orbit_closed_form(k, x); }};
  }
  return {name, as_callable(parse_function_spec(name))};
}

}  // namespace

Function parse_function_spec(std::string_view spec) {
  if (spec.rfind("preset:", 0) == 0) return preset(spec.substr(7), kPresetGrid);
  if (spec == "one" || spec == "ramp" || spec == "exp-gamma") return preset(spec, kPresetGrid);
  if (looks_like_json(spec)) return function_from_json(parse_json(spec, "function spec"));
  return function_from_json(parse_json(read_file(spec, "function spec"), "function spec"));
}

Capacity parse_capacity_spec(std::string_view spec) {
  if (looks_like_json(spec)) return capacity_from_json(parse_json(spec, "capacity spec"));
  const std::string s(spec);
  if (s.rfind("power(", 0) == 0 && s.back() == ')') {
    char* end = nullptr;
    const std::string inner = s.substr(6, s.size() - 7);
    const double p = std::strtod(inner.c_str(), &end);
    if (inner.empty() || *end != '\0') throw SpecError("capacity spec: bad exponent in '" + s + "'");
    try {
      return Capacity::distorted(DistortionFunction::power(p));
    } catch (const std::exception& e) {
      throw SpecError(std::string("capacity spec: ") + e.what());
    }
  }
  try {
    return Capacity::distorted(distortion_named(s, 0.5));
  } catch (const SpecError&) {
    if (s.find('/') == std::string::npos && s.find('.') == std::string::npos) throw;
  }
  return capacity_from_json(parse_json(read_file(spec, "capacity spec"), "capacity spec"));
}

std::vector<SpanTarget> parse_span_targets(std::string_view json_text) {
  const auto j = parse_json(json_text, "span targets");
  if (!j.is_array() || j.empty()) {
    throw SpecError("span targets: expected a non-empty JSON array");
  }
  std::vector<SpanTarget> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].is_string()) {
      out.push_back(target_named(j[i].get<std::string>()));
    } else if (j[i].is_object()) {
      std::string name = "target" + std::to_string(i);
      if (j[i].contains("label") && j[i]["label"].is_string()) {
        name = j[i]["label"].get<std::string>();
      }
      out.push_back({name, as_callable(function_from_json(j[i]))});
    } else {
      throw SpecError("span targets: entry " + std::to_string(i) +
                      " must be a name or a function object");
    }
  }
  return out;
}

}  // namespace vchoq
