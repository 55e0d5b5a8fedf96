#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ness/model.hpp"
#include "ness/pipeline.hpp"

namespace nessctl {

/// Bad user input; maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json };

/// A scalar or an inclusive {start, stop, step} range.
struct Axis {
  double start = 0;
  double stop = 0;
  double step = 0;

  bool swept() const { return values().size() > 1; }
  std::vector<double> values() const;
};

struct RunConfig {
  std::vector<int> sizes{4};
  Axis w{1.5, 1.5, 0};
  Axis mu{1.0, 1.0, 0};
  double delta = 1.0;
  ness::EndBathParams<double> baths{0.0, 1.0, 0.0, 1.0};
  ness::SolverOptions solver;
  std::string out;  // empty: stdout
  Format format = Format::Csv;
  int jobs = 1;
  std::string dump_fold;  // empty: no dump
};

/// Flat document, every key optional:
///   sizes      int or [int] or {start, stop, step}
///   w, mu      number or {start, stop, step}
///   delta      number, or {re, im} with im == 0
///   gamma11, gamma21, gamma12, gamma22   non-negative numbers
///   trunc_tol, max_chi (int or null), eps_z, eps_fold
///   out, format ("csv" | "json"), jobs, dump_fold
/// Unknown keys are rejected.
RunConfig parse_config(const nlohmann::json& doc);

nlohmann::json load_document(const std::string& path);

/// Text after '=' in a --set override: JSON if it parses, a string otherwise.
nlohmann::json parse_value(const std::string& text);

}  // namespace nessctl
