#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ness/errors.hpp"
#include "run_config.hpp"

namespace nessctl {

enum ExitCode { kOk = 0, kUsage = 1, kDegenerate = 2, kNumerical = 3 };

struct ResultRow {
  int n = 0;
  double w = 0, mu = 0, delta = 0;
  ness::EndBathParams<double> baths;
  std::optional<double> eec;
  std::vector<double> occupancy;
  std::optional<int> max_bond;
  std::optional<double> fold_residual;
  std::optional<double> ortho_residual;
  double runtime_seconds = 0;
  ness::Status status = ness::Status::Ok;
  std::map<std::string, std::optional<double>> extra;  // command-specific columns
};

/// CSV (RFC 4180) or JSON lines. The column set is fixed at construction so
/// every CSV row lines up with the header.
class RowWriter {
 public:
  RowWriter(std::ostream& out, Format format, int occupancy_columns,
            std::vector<std::string> extra_columns = {});
  void write(const ResultRow& row);

 private:
  std::ostream& out_;
  Format format_;
  int occupancy_columns_;
  std::vector<std::string> extras_;
  bool header_done_ = false;
};

std::string csv_field(const std::string& text);
/// Shortest text that round-trips the double.
std::string format_number(double v);

/// Exit code for one row: 0 ok, 2 non-unique, 3 any other failure.
int exit_code_for(ness::Status status);

/// One pipeline run; solver failures become the row status. When `fold_dump`
/// is given, the fold data is written there as JSON.
ResultRow solve_point(const RunConfig& cfg, int n, double w, double mu, bool with_eec,
                      bool with_occupancy, const std::string& fold_dump = {});

int cmd_ness(const RunConfig& cfg, std::ostream& out);
int cmd_sweep_size(const RunConfig& cfg, std::ostream& out);
int cmd_phase_grid(const RunConfig& cfg, std::ostream& out);
int cmd_occupancy(const RunConfig& cfg, std::ostream& out);
int cmd_validate(std::ostream& out);
int cmd_bench(const RunConfig& cfg, std::ostream& out);

}  // namespace nessctl
