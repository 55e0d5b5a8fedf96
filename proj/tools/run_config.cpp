#include "run_config.hpp"

#include <cmath>
#include <complex>
#include <fstream>

namespace nessctl {
namespace {

using nlohmann::json;

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw UsageError("'" + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw UsageError("'" + key + "' must be finite");
  return x;
}

int integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw UsageError("'" + key + "' must be an integer");
  return v.get<int>();
}

Axis axis(const json& v, const std::string& key) {
  if (v.is_number()) {
    const double x = number(v, key);
    return {x, x, 0};
  }
  if (!v.is_object()) throw UsageError("'" + key + "' must be a number or {start, stop, step}");
  for (const auto& [k, _] : v.items())
    if (k != "start" && k != "stop" && k != "step")
      throw UsageError("unknown field '" + k + "' in '" + key + "'");
  if (!v.contains("start") || !v.contains("stop") || !v.contains("step"))
    throw UsageError("'" + key + "' range needs start, stop and step");
  Axis a{number(v["start"], key), number(v["stop"], key), number(v["step"], key)};
  if (a.stop < a.start) throw UsageError("'" + key + "' range has stop < start");
  if (a.step <= 0 && a.stop != a.start) throw UsageError("'" + key + "' range needs step > 0");
  return a;
}

std::vector<int> sizes(const json& v) {
  std::vector<int> out;
  if (v.is_number_integer()) {
    out.push_back(v.get<int>());
  } else if (v.is_array()) {
    for (const auto& e : v) out.push_back(integer(e, "sizes"));
  } else if (v.is_object()) {
    const Axis a = axis(v, "sizes");
    for (double x : a.values()) {
      if (x != std::round(x)) throw UsageError("'sizes' range must hit integers");
      out.push_back(static_cast<int>(std::lround(x)));
    }
  } else {
    throw UsageError("'sizes' must be an integer, a list or {start, stop, step}");
  }
  for (int n : out)
    if (n < 1) throw UsageError("sizes must be >= 1");
  return out;
}

double rate(const json& v, const std::string& key) {
  const double x = number(v, key);
  if (x < 0) throw UsageError("'" + key + "' must be non-negative");
  return x;
}

double pairing(const json& v) {
  if (v.is_number()) return number(v, "delta");
  if (v.is_object() && v.contains("re")) {
    const double im = v.contains("im") ? number(v["im"], "delta") : 0.0;
    try {
      return ness::real_pairing(std::complex<double>(number(v["re"], "delta"), im));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  throw UsageError("'delta' must be a number or {re, im}");
}

}  // namespace

std::vector<double> Axis::values() const {
  if (step <= 0 || stop == start) return {start};
  std::vector<double> out;
  const double slack = 1e-9 * step;
  for (long k = 0;; ++k) {
    const double x = start + static_cast<double>(k) * step;
    if (x > stop + slack) break;
    out.push_back(x);
  }
  return out;
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw UsageError("config must be a JSON object");
  RunConfig c;
  for (const auto& [key, v] : doc.items()) {
    if (key == "sizes") c.sizes = sizes(v);
    else if (key == "w") c.w = axis(v, key);
    else if (key == "mu") c.mu = axis(v, key);
    else if (key == "delta") c.delta = pairing(v);
    else if (key == "gamma11") c.baths.gamma11 = rate(v, key);
    else if (key == "gamma21") c.baths.gamma21 = rate(v, key);
    else if (key == "gamma12") c.baths.gamma12 = rate(v, key);
    else if (key == "gamma22") c.baths.gamma22 = rate(v, key);
    else if (key == "trunc_tol") c.solver.trunc_tol = rate(v, key);
    else if (key == "eps_z") c.solver.eps_z = rate(v, key);
    else if (key == "eps_fold") c.solver.eps_fold = rate(v, key);
    else if (key == "max_chi") {
      if (v.is_null()) {
        c.solver.max_chi.reset();
      } else {
        c.solver.max_chi = integer(v, key);
        if (*c.solver.max_chi < 1) throw UsageError("'max_chi' must be >= 1");
      }
    } else if (key == "out") {
      if (!v.is_string()) throw UsageError("'out' must be a string");
      c.out = v.get<std::string>();
    } else if (key == "format") {
      const std::string f = v.is_string() ? v.get<std::string>() : "";
      if (f == "csv") c.format = Format::Csv;
      else if (f == "json") c.format = Format::Json;
      else throw UsageError("'format' must be \"csv\" or \"json\"");
    } else if (key == "jobs") {
      c.jobs = integer(v, key);
      if (c.jobs < 1) throw UsageError("'jobs' must be >= 1");
    } else if (key == "dump_fold") {
      if (!v.is_string()) throw UsageError("'dump_fold' must be a string");
      c.dump_fold = v.get<std::string>();
    } else {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
  if (c.sizes.empty()) throw UsageError("'sizes' must not be empty");
  return c;
}

json load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config '" + path + "': " + e.what());
  }
}

json parse_value(const std::string& text) {
  const json v = json::parse(text, nullptr, false);
  return v.is_discarded() ? json(text) : v;
}

}  // namespace nessctl
