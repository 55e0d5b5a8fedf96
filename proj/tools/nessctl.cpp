// nessctl: stationary states of boundary-driven Kitaev chains.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "run_config.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<int> jobs;
  std::optional<double> trunc_tol;
  std::optional<int> max_chi;
  std::optional<std::string> dump_fold;
  std::vector<std::string> set;
};

constexpr const char* kConfigHelp = R"(Config keys (flat JSON object, all optional):
  sizes      int, [int] or {start, stop, step}          default [4]
  w, mu      number or {start, stop, step}              default 1.5, 1
  delta      number (or {re, im} with im = 0)           default 1
  gamma11    loss on site 1                             default 0
  gamma21    gain on site 1                             default 1
  gamma12    loss on site N                             default 0
  gamma22    gain on site N                             default 1
  trunc_tol  SVD cutoff relative to the largest value   default 1e-12
  max_chi    bond dimension cap, null for none          default null
  eps_z      marginal-mode band relative to max|Re z|   default 1e-8
  eps_fold   folding closure tolerance                  default 1e-10
  out        output path, empty for stdout              default ""
  format     "csv" or "json" (JSON lines)               default "csv"
  jobs       concurrent pipeline runs                   default 1
  dump_fold  path for the fold JSON (ness only)         default ""
Flags override config keys; --set key=value overrides any key.
Exit codes: 0 ok, 1 usage, 2 non-unique NESS, 3 numerical failure.)";

nlohmann::json merged_document(const Flags& f) {
  nlohmann::json doc = f.config.empty() ? nlohmann::json::object()
                                        : nessctl::load_document(f.config);
  for (const auto& item : f.set) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw nessctl::UsageError("--set expects key=value, got '" + item + "'");
    doc[item.substr(0, eq)] = nessctl::parse_value(item.substr(eq + 1));
  }
  if (f.out) doc["out"] = *f.out;
  if (f.format) doc["format"] = *f.format;
  if (f.jobs) doc["jobs"] = *f.jobs;
  if (f.trunc_tol) doc["trunc_tol"] = *f.trunc_tol;
  if (f.max_chi) doc["max_chi"] = *f.max_chi;
  if (f.dump_fold) doc["dump_fold"] = *f.dump_fold;
  return doc;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file");
  sub->add_option("--out", f.out, "Output path (default stdout)");
  sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--jobs", f.jobs, "Concurrent pipeline runs")->check(CLI::PositiveNumber);
  sub->add_option("--trunc-tol", f.trunc_tol, "Relative SVD cutoff")->check(CLI::NonNegativeNumber);
  sub->add_option("--max-chi", f.max_chi, "Bond dimension cap")->check(CLI::PositiveNumber);
  sub->add_option("--dump-fold", f.dump_fold, "Write fold rotations and signs as JSON (ness)");
  sub->add_option("--set", f.set, "Override a config key, e.g. --set w=2 (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-equilibrium steady states of Kitaev chains with end baths"};
  app.footer(kConfigHelp);
  app.require_subcommand(1);

  Flags flags;
  auto* ness = app.add_subcommand("ness", "Solve one parameter point");
  auto* sweep = app.add_subcommand("sweep-size", "End-to-end correlation against chain size");
  auto* grid = app.add_subcommand("phase-grid", "Size sweeps over a (w, mu) grid with fits");
  auto* occ = app.add_subcommand("occupancy", "Site occupation profiles");
  auto* validate = app.add_subcommand("validate", "Run the built-in acceptance checks");
  auto* bench = app.add_subcommand("bench", "Median-of-three runtime per size");
  for (auto* sub : {ness, sweep, grid, occ, bench}) add_common(sub, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? nessctl::kOk : nessctl::kUsage;
  }

  try {
    if (validate->parsed()) return nessctl::cmd_validate(std::cout);

    const auto cfg = nessctl::parse_config(merged_document(flags));
    std::ofstream file;
    if (!cfg.out.empty()) {
      file.open(cfg.out, std::ios::binary);
      if (!file) throw nessctl::UsageError("cannot write '" + cfg.out + "'");
    }
    std::ostream& out = cfg.out.empty() ? std::cout : file;

    if (ness->parsed()) return nessctl::cmd_ness(cfg, out);
    if (sweep->parsed()) return nessctl::cmd_sweep_size(cfg, out);
    if (grid->parsed()) return nessctl::cmd_phase_grid(cfg, out);
    if (occ->parsed()) return nessctl::cmd_occupancy(cfg, out);
    return nessctl::cmd_bench(cfg, out);
  } catch (const nessctl::UsageError& e) {
    std::cerr << "nessctl: " << e.what() << '\n';
    return nessctl::kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "nessctl: " << e.what() << '\n';
    return nessctl::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "nessctl: numerical failure: " << e.what() << '\n';
    return nessctl::kNumerical;
  }
}
