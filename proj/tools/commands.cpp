#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <deque>
#include <fstream>
#include <functional>
#include <future>
#include <ostream>

#include "ness/acceptance.hpp"
#include "ness/observables.hpp"
#include "ness/pipeline.hpp"

namespace nessctl {
namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct Point {
  int n;
  double w;
  double mu;
};

// Runs task(0..count-1) with at most `jobs` in flight and hands results to
// `emit` strictly in index order, as soon as each prefix is complete.
void run_ordered(std::size_t count, int jobs, const std::function<ResultRow(std::size_t)>& task,
                 const std::function<void(ResultRow)>& emit) {
  if (jobs <= 1) {
    for (std::size_t k = 0; k < count; ++k) emit(task(k));
    return;
  }
  std::deque<std::future<ResultRow>> inflight;
  for (std::size_t k = 0; k < count; ++k) {
    if (inflight.size() >= static_cast<std::size_t>(jobs)) {
      emit(inflight.front().get());
      inflight.pop_front();
    }
    inflight.push_back(std::async(std::launch::async, task, k));
  }
  while (!inflight.empty()) {
    emit(inflight.front().get());
    inflight.pop_front();
  }
}

void require_scalar_model(const RunConfig& cfg, const char* command) {
  if (cfg.w.swept() || cfg.mu.swept())
    throw UsageError(std::string(command) + " takes scalar w and mu; use phase-grid to sweep");
}

void require_eec_sizes(const RunConfig& cfg) {
  for (int n : cfg.sizes)
    if (n < 2) throw UsageError("end-to-end correlations need every size >= 2");
}

void require_no_dump(const RunConfig& cfg, const char* command) {
  if (!cfg.dump_fold.empty())
    throw UsageError(std::string("--dump-fold is only supported by ness, not ") + command);
}

json state_json(const ness::TensorState& state) {
  json spectra = json::array();
  for (const auto& sv : state.bond_spectra())
    spectra.push_back(std::vector<double>(sv.data(), sv.data() + sv.size()));
  return {{"bondDims", state.bond_dims()},
          {"peakBond", state.peak_bond()},
          {"discardedWeight", state.truncation().discarded_weight},
          {"bondSpectra", spectra}};
}

json fold_json(const ness::FoldResult<double>& fold) {
  json rotations = json::array();
  for (const auto& r : fold.rotations)
    rotations.push_back({{"pair", r.pair},
                         {"angle", r.angle},
                         {"kind", r.kind == ness::RotationKind::U ? "U" : "V"}});
  json diagonal = json::array();
  for (Eigen::Index k = 0; k < fold.diagonal.size(); ++k)
    diagonal.push_back({fold.diagonal(k).real(), fold.diagonal(k).imag()});
  return {{"N", fold.sites},          {"rotations", rotations},
          {"signs", fold.signs},      {"diagonal", diagonal},
          {"residual", fold.residual}, {"orthoBefore", fold.ortho_before},
          {"orthoAfter", fold.ortho_after}};
}

}  // namespace

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int exit_code_for(ness::Status status) {
  switch (status) {
    case ness::Status::Ok: return kOk;
    case ness::Status::NonUnique: return kDegenerate;
    default: return kNumerical;
  }
}

RowWriter::RowWriter(std::ostream& out, Format format, int occupancy_columns,
                     std::vector<std::string> extra_columns)
    : out_(out),
      format_(format),
      occupancy_columns_(occupancy_columns),
      extras_(std::move(extra_columns)) {}

void RowWriter::write(const ResultRow& row) {
  auto opt = [](const auto& v) -> std::string { return v ? format_number(*v) : ""; };
  if (format_ == Format::Json) {
    json j = {{"N", row.n},
              {"w", row.w},
              {"mu", row.mu},
              {"delta", row.delta},
              {"gamma11", row.baths.gamma11},
              {"gamma21", row.baths.gamma21},
              {"gamma12", row.baths.gamma12},
              {"gamma22", row.baths.gamma22},
              {"eec", row.eec ? json(*row.eec) : json(nullptr)}};
    if (occupancy_columns_ > 0) j["occupancy"] = row.occupancy;
    j["maxBond"] = row.max_bond ? json(*row.max_bond) : json(nullptr);
    j["foldResidual"] = row.fold_residual ? json(*row.fold_residual) : json(nullptr);
    j["orthoResidual"] = row.ortho_residual ? json(*row.ortho_residual) : json(nullptr);
    j["runtimeSeconds"] = row.runtime_seconds;
    j["status"] = std::string(ness::to_string(row.status));
    for (const auto& name : extras_) {
      const auto it = row.extra.find(name);
      j[name] = it != row.extra.end() && it->second ? json(*it->second) : json(nullptr);
    }
    out_ << j.dump() << '\n' << std::flush;
    return;
  }

  std::vector<std::string> cells;
  if (!header_done_) {
    cells = {"N", "w", "mu", "delta", "gamma11", "gamma21", "gamma12", "gamma22", "eec"};
    for (int k = 1; k <= occupancy_columns_; ++k) cells.push_back("occupancy" + std::to_string(k));
    for (const char* c : {"maxBond", "foldResidual", "orthoResidual", "runtimeSeconds", "status"})
      cells.push_back(c);
    cells.insert(cells.end(), extras_.begin(), extras_.end());
    for (std::size_t k = 0; k < cells.size(); ++k)
      out_ << (k ? "," : "") << csv_field(cells[k]);
    out_ << "\r\n";
    header_done_ = true;
    cells.clear();
  }
  cells = {std::to_string(row.n),
           format_number(row.w),
           format_number(row.mu),
           format_number(row.delta),
           format_number(row.baths.gamma11),
           format_number(row.baths.gamma21),
           format_number(row.baths.gamma12),
           format_number(row.baths.gamma22),
           opt(row.eec)};
  for (int k = 0; k < occupancy_columns_; ++k)
    cells.push_back(k < static_cast<int>(row.occupancy.size()) ? format_number(row.occupancy[k])
                                                                : "");
  cells.push_back(row.max_bond ? std::to_string(*row.max_bond) : "");
  cells.push_back(opt(row.fold_residual));
  cells.push_back(opt(row.ortho_residual));
  cells.push_back(format_number(row.runtime_seconds));
  cells.push_back(std::string(ness::to_string(row.status)));
  for (const auto& name : extras_) {
    const auto it = row.extra.find(name);
    cells.push_back(it != row.extra.end() ? opt(it->second) : "");
  }
  for (std::size_t k = 0; k < cells.size(); ++k) out_ << (k ? "," : "") << csv_field(cells[k]);
  out_ << "\r\n" << std::flush;
}

ResultRow solve_point(const RunConfig& cfg, int n, double w, double mu, bool with_eec,
                      bool with_occupancy, const std::string& fold_dump) {
  ResultRow row;
  row.n = n;
  row.w = w;
  row.mu = mu;
  row.delta = cfg.delta;
  row.baths = cfg.baths;
  const auto t0 = Clock::now();
  try {
    const auto sol = ness::solve_kitaev({n, w, mu, cfg.delta}, cfg.baths, cfg.solver);
    row.max_bond = sol.state.peak_bond();
    row.fold_residual = sol.fold.residual;
    row.ortho_residual = std::max(sol.fold.ortho_before, sol.fold.ortho_after);
    if (!fold_dump.empty()) {
      std::ofstream dump(fold_dump);
      if (!dump) throw UsageError("cannot write fold dump '" + fold_dump + "'");
      json record = fold_json(sol.fold);
      record["state"] = state_json(sol.state);
      dump << record.dump(2) << '\n';
    }
    if (with_eec && n >= 2) row.eec = ness::end_to_end_correlation(sol.state);
    if (with_occupancy) row.occupancy = ness::occupancy_profile(sol.state);
  } catch (const ness::SolverError& e) {
    row.status = e.status();
  }
  row.runtime_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return row;
}

int cmd_ness(const RunConfig& cfg, std::ostream& out) {
  require_scalar_model(cfg, "ness");
  require_eec_sizes(cfg);
  if (cfg.sizes.size() != 1) throw UsageError("ness takes exactly one size");
  const auto row =
      solve_point(cfg, cfg.sizes.front(), cfg.w.start, cfg.mu.start, true, false, cfg.dump_fold);
  RowWriter(out, cfg.format, 0).write(row);
  return exit_code_for(row.status);
}

int cmd_sweep_size(const RunConfig& cfg, std::ostream& out) {
  require_scalar_model(cfg, "sweep-size");
  require_eec_sizes(cfg);
  require_no_dump(cfg, "sweep-size");
  RowWriter writer(out, cfg.format, 0);
  run_ordered(
      cfg.sizes.size(), cfg.jobs,
      [&](std::size_t k) {
        return solve_point(cfg, cfg.sizes[k], cfg.w.start, cfg.mu.start, true, false);
      },
      [&](ResultRow row) { writer.write(row); });
  return kOk;
}

int cmd_phase_grid(const RunConfig& cfg, std::ostream& out) {
  require_eec_sizes(cfg);
  require_no_dump(cfg, "phase-grid");
  std::vector<Point> points;
  for (double w : cfg.w.values())
    for (double mu : cfg.mu.values())
      for (int n : cfg.sizes) points.push_back({n, w, mu});

  RowWriter writer(out, cfg.format, 0, {"fitSlope", "fitResidual", "equilibriumBoundaryMu"});
  const std::size_t per_point = cfg.sizes.size();
  std::vector<ResultRow> series;
  run_ordered(
      points.size(), cfg.jobs,
      [&](std::size_t k) {
        return solve_point(cfg, points[k].n, points[k].w, points[k].mu, true, false);
      },
      [&](ResultRow row) {
        series.push_back(std::move(row));
        if (series.size() < per_point) return;
        std::vector<double> xs, ys;
        for (const auto& r : series)
          if (r.status == ness::Status::Ok && r.eec) {
            xs.push_back(r.n);
            ys.push_back(*r.eec);
          }
        const auto fit = ness::fit_log_linear(xs, ys);
        for (auto& r : series) {
          r.extra["fitSlope"] = fit.points >= 2 ? std::optional(fit.slope) : std::nullopt;
          r.extra["fitResidual"] = fit.points >= 2 ? std::optional(fit.residual) : std::nullopt;
          r.extra["equilibriumBoundaryMu"] = 2 * std::abs(r.w);
          writer.write(r);
        }
        series.clear();
      });
  return kOk;
}

int cmd_occupancy(const RunConfig& cfg, std::ostream& out) {
  require_scalar_model(cfg, "occupancy");
  require_no_dump(cfg, "occupancy");
  const int widest = *std::max_element(cfg.sizes.begin(), cfg.sizes.end());
  RowWriter writer(out, cfg.format, widest);
  run_ordered(
      cfg.sizes.size(), cfg.jobs,
      [&](std::size_t k) {
        return solve_point(cfg, cfg.sizes[k], cfg.w.start, cfg.mu.start, true, true);
      },
      [&](ResultRow row) { writer.write(row); });
  return kOk;
}

int cmd_validate(std::ostream& out) {
  std::vector<ness::acceptance::CheckResult> results;
  using Check = ness::acceptance::CheckResult (*)();
  const Check checks[] = {ness::acceptance::single_site_analytic,
                          ness::acceptance::small_chain_oracle,
                          ness::acceptance::cross_oracle,
                          ness::acceptance::parity_alternation,
                          ness::acceptance::degeneracy_detection,
                          [] { return ness::acceptance::property_suite(); },
                          ness::acceptance::dense_equivalence};
  for (auto check : checks) {
    results.push_back(check());
    out << ness::acceptance::format_line(results.back()) << '\n' << std::flush;
  }
  return ness::acceptance::all_binding_passed(results) ? kOk : kNumerical;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  require_scalar_model(cfg, "bench");
  require_eec_sizes(cfg);
  require_no_dump(cfg, "bench");
  // Timings run one at a time regardless of --jobs so they do not compete.
  std::vector<ResultRow> rows;
  for (int n : cfg.sizes) {
    std::vector<ResultRow> runs;
    for (int rep = 0; rep < 3; ++rep)
      runs.push_back(solve_point(cfg, n, cfg.w.start, cfg.mu.start, true, false));
    std::sort(runs.begin(), runs.end(), [](const ResultRow& a, const ResultRow& b) {
      return a.runtime_seconds < b.runtime_seconds;
    });
    ResultRow median = runs[1];
    median.extra["runtimeMin"] = runs.front().runtime_seconds;
    median.extra["runtimeMax"] = runs.back().runtime_seconds;
    rows.push_back(std::move(median));
  }
  std::optional<double> slope;
  if (rows.size() >= 2) {
    std::vector<double> lx, t;
    for (const auto& r : rows) {
      lx.push_back(std::log(static_cast<double>(r.n)));
      t.push_back(r.runtime_seconds);
    }
    slope = ness::fit_log_linear(lx, t, 0.0).slope;
  }
  RowWriter writer(out, cfg.format, 0, {"runtimeMin", "runtimeMax", "logLogSlope"});
  for (auto& r : rows) {
    r.extra["logLogSlope"] = slope;
    writer.write(r);
  }
  return kOk;
}

}  // namespace nessctl
