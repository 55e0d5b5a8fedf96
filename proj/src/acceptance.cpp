#include "ness/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>

#include "ness/errors.hpp"
#include "ness/observables.hpp"
#include "ness/oracle.hpp"
#include "ness/pipeline.hpp"

namespace ness::acceptance {
namespace {

using Clock = std::chrono::steady_clock;
using Baths = std::vector<BathChannel<double>>;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(2) << v;
  return s.str();
}

// Runs `body`, which fills passed/detail, and stamps the wall time. A check
// that overruns `limit` fails even if its numbers are fine.
CheckResult timed(int id, std::string name, std::optional<double> limit,
                  const std::function<void(CheckResult&)>& body) {
  CheckResult r;
  r.id = id;
  r.name = std::move(name);
  const auto t0 = Clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("unexpected error: ") + e.what();
  }
  r.seconds = seconds_since(t0);
  if (limit && r.seconds >= *limit) {
    r.passed = false;
    r.detail += "; runtime over the " + std::to_string(static_cast<int>(*limit)) + " s limit";
  }
  return r;
}

VectorXc folded_dense(const NessSolution& sol) { return sol.state.to_dense() * *sol.state.z0(); }

std::vector<double> grid(double start, double stop, double step) {
  std::vector<double> out;
  for (int k = 0; start + k * step <= stop + 1e-12; ++k) out.push_back(start + k * step);
  return out;
}

struct KitaevPoint {
  KitaevParams<double> model;
  EndBathParams<double> baths;
};

// Both panels at N = 2 and 3 with the mixed four-bath setup.
std::vector<KitaevPoint> small_chain_points() {
  const EndBathParams<double> baths{1.3, 2.2, 3.4, 4.1};
  std::vector<KitaevPoint> out;
  for (int n : {2, 3}) {
    for (double w : grid(0, 4, 0.5)) out.push_back({{n, w, 1.0, 1.0}, baths});
    for (double mu : grid(0, 4, 0.5)) out.push_back({{n, 1.5, mu, 1.0}, baths});
  }
  return out;
}

std::string describe(const KitaevParams<double>& p) {
  std::ostringstream s;
  s << "N=" << p.sites << " w=" << p.w << " mu=" << p.mu;
  return s.str();
}

struct Worst {
  double value = 0;
  std::string where = "-";
  void update(double v, const std::string& label) {
    if (!(v <= value)) {
      value = v;
      where = label;
    }
  }
};

int bit_value(int modes, int position) { return 1 << (modes - position); }

double dense_occupancy(const VectorXc& q, int sites, int site) {
  const int idx = bit_value(2 * sites, 2 * site - 1) | bit_value(2 * sites, 2 * site);
  return 0.5 * (1.0 + q(idx).real());
}

const EndBathParams<double> kGainBaths{0.0, 1.0, 0.0, 1.0};

// ---- property suite ------------------------------------------------------

struct Instance {
  std::string label;
  MajoranaHamiltonian<double> h;
  Baths baths;
  std::optional<KitaevParams<double>> kitaev;  // set when sign symmetry applies
  EndBathParams<double> end_baths{};
};

struct PropertyTally {
  Worst antisymmetry, eigen_relation, pairing, projector, ortho_before, ortho_after, fold,
      unitary, generator, parity, sign_symmetry;
  int failures = 0;
  std::string first_failure;
};

Instance kitaev_instance(std::string label, const KitaevParams<double>& p,
                         const EndBathParams<double>& b) {
  return {std::move(label), build_kitaev(p), end_baths(p.sites, b), p, b};
}

Instance random_generic(std::mt19937_64& rng, int index) {
  std::uniform_int_distribution<int> size(1, 4);
  std::uniform_real_distribution<double> coupling(-2.0, 2.0);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::bernoulli_distribution present(0.6);
  const int n = size(rng);
  Instance inst;
  inst.label = "random generic #" + std::to_string(index) + " (N=" + std::to_string(n) + ")";
  inst.h.sites = n;
  inst.h.coupling = RealMatrix<double>::Zero(2 * n, 2 * n);
  for (int r = 0; r < 2 * n; r += 2)
    for (int c = 1; c < 2 * n; c += 2)
      if (present(rng)) inst.h.coupling(r, c) = coupling(rng);
  for (int k = 0; k < 2; ++k) {
    BathChannel<double> b;
    b.coeffs = RealVector<double>(2 * n);
    for (int m = 0; m < 2 * n; ++m) b.coeffs(m) = coeff(rng);
    inst.baths.push_back(std::move(b));
  }
  return inst;
}

Instance random_kitaev(std::mt19937_64& rng, int index) {
  std::uniform_int_distribution<int> size(2, 4);
  std::uniform_real_distribution<double> hop(0.2, 2.5);
  std::uniform_real_distribution<double> pot(0.2, 4.0);
  std::uniform_real_distribution<double> pair(0.3, 2.0);
  std::uniform_real_distribution<double> rate(0.2, 2.0);
  const KitaevParams<double> p{size(rng), hop(rng), pot(rng), pair(rng)};
  const EndBathParams<double> b{rate(rng), rate(rng), rate(rng), rate(rng)};
  return kitaev_instance("random Kitaev #" + std::to_string(index) + " (" + describe(p) + ")",
                         p, b);
}

void check_instance(const Instance& inst, PropertyTally& t) {
  const int n = inst.h.sites;
  const auto sol = solve_ness(inst.h, inst.baths);
  const std::string& at = inst.label;

  t.antisymmetry.update(antisymmetry_residual(sol.liouvillian.generator), at);

  if (n <= 4) {
    const MatrixXc l = oracle::second_space_liouvillian(inst.h, inst.baths, false);
    const Eigen::Index full = l.rows() - 1;
    VectorXc e = l.col(full);
    e(full) -= sol.liouvillian.scalar;
    t.eigen_relation.update(e.cwiseAbs().maxCoeff(), at);
  }

  const auto& z = sol.spectrum.values;
  double pairing = 0;
  for (Eigen::Index k = 0; k < z.size(); ++k)
    pairing = std::max(pairing, (z.array() + z(k)).abs().minCoeff());
  t.pairing.update(pairing, at);

  const ComplexMatrix<double> s = stable_projector(sol.spectrum);
  const double idem = (s * s - s).cwiseAbs().maxCoeff();
  const double rank = std::abs(s.trace() - std::complex<double>(2.0 * n, 0));
  t.projector.update(std::max(idem, rank), at);

  t.ortho_before.update(sol.fold.ortho_before, at);
  t.ortho_after.update(sol.fold.ortho_after, at);
  t.fold.update(sol.fold.residual, at);

  double unitary = 0;
  for (const auto& rot : sol.fold.rotations) {
    const MatrixXc g = rotation_gate(rot, true).matrix;
    unitary = std::max(
        unitary, (g.adjoint() * g - MatrixXc::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff());
  }
  t.unitary.update(unitary, at);

  double generator = 0;
  for (int m = 3; m < 4 * n; m += 2) {
    const MatrixXc g = pair_generator(m);
    generator = std::max(generator, (g * g + MatrixXc::Identity(4, 4)).cwiseAbs().maxCoeff());
  }
  t.generator.update(generator, at);

  if (n <= 4) {
    const VectorXc q = folded_dense(sol);
    double odd = 0;
    for (Eigen::Index k = 0; k < q.size(); ++k)
      if (__builtin_popcountll(static_cast<unsigned long long>(k)) % 2 == 1)
        odd = std::max(odd, std::abs(q(k)));
    t.parity.update(odd, at);
  }

  if (inst.kitaev && inst.kitaev->sites >= 2 && inst.kitaev->sites <= 4) {
    const double ref = end_to_end_correlation(sol.state);
    double spread = 0;
    for (double sw : {1.0, -1.0})
      for (double sm : {1.0, -1.0}) {
        auto p = *inst.kitaev;
        p.w *= sw;
        p.mu *= sm;
        spread = std::max(spread,
                          std::abs(end_to_end_correlation(solve_kitaev(p, inst.end_baths).state) -
                                   ref));
      }
    t.sign_symmetry.update(spread, at);
  }
}

struct Bound {
  const char* name;
  const Worst* worst;
  double tol;
};

}  // namespace

CheckResult single_site_analytic() {
  return timed(1, "single-site analytic NESS", 1.0, [](CheckResult& r) {
    Worst worst;
    for (double gain : grid(0.5, 4.0, 0.5)) {
      const auto sol = solve_kitaev({1, 0.0, 1.0, 1.0}, {1.0, gain, 0.0, 0.0});
      worst.update(oracle::error_metric(folded_dense(sol), oracle::analytic_n1(1.0, gain)),
                   "gain=" + sci(gain));
    }
    r.passed = worst.value <= 1e-12;
    r.detail = "max err " + sci(worst.value) + " at " + worst.where + " (tol 1e-12)";
  });
}

CheckResult small_chain_oracle() {
  return timed(2, "N=2,3 against dense second-space kernel", 60.0, [](CheckResult& r) {
    Worst worst;
    int count = 0;
    for (const auto& p : small_chain_points()) {
      const auto sol = solve_kitaev(p.model, p.baths);
      const auto ref = oracle::dense_second_space_ness(build_kitaev(p.model),
                                                       end_baths(p.model.sites, p.baths));
      worst.update(oracle::error_metric(folded_dense(sol), ref.vec), describe(p.model));
      ++count;
    }
    r.passed = worst.value <= 1e-10;
    r.detail = std::to_string(count) + " points, max err " + sci(worst.value) + " at " +
               worst.where + " (tol 1e-10)";
  });
}

CheckResult cross_oracle() {
  return timed(3, "first-space vs second-space oracle", std::nullopt, [](CheckResult& r) {
    Worst worst;
    int count = 0;
    for (const auto& p : small_chain_points()) {
      const auto h = build_kitaev(p.model);
      const auto baths = end_baths(p.model.sites, p.baths);
      const auto first = oracle::dense_first_space_ness(h, baths);
      const auto second = oracle::dense_second_space_ness(h, baths);
      worst.update(oracle::error_metric(oracle::rho_to_second_space(first.rho), second.vec),
                   describe(p.model));
      ++count;
    }
    r.passed = worst.value <= 1e-10;
    r.detail = std::to_string(count) + " points, max err " + sci(worst.value) + " at " +
               worst.where + " (tol 1e-10)";
  });
}

CheckResult parity_alternation() {
  return timed(4, "odd/even EEC pattern at w=0, mu=4", 120.0, [](CheckResult& r) {
    std::ostringstream d;
    bool ok = true;

    double odd_max = 0;
    for (int n : {3, 5, 7})
      odd_max = std::max(odd_max, end_to_end_correlation(solve_kitaev({n, 0, 4, 1}, kGainBaths).state));
    ok = ok && odd_max <= 1e-10;
    d << "odd N max EEC " << sci(odd_max) << " (tol 1e-10)";

    std::vector<double> xs, eec;
    for (int n : {4, 6, 8, 10}) {
      xs.push_back(n);
      eec.push_back(end_to_end_correlation(solve_kitaev({n, 0, 4, 1}, kGainBaths).state));
    }
    bool decreasing = true;
    for (std::size_t k = 1; k < eec.size(); ++k) decreasing = decreasing && eec[k] < eec[k - 1];
    const auto fit = fit_log_linear(xs, eec);
    ok = ok && decreasing && fit.points == 4 && fit.residual <= 0.1;
    d << "; even N " << (decreasing ? "decreasing" : "NOT decreasing") << ", fit residual "
      << sci(fit.residual) << " (tol 0.1)";

    const KitaevParams<double> five{5, 0, 4, 1};
    const auto sol = solve_kitaev(five, kGainBaths);
    const auto ref = oracle::dense_second_space_ness(build_kitaev(five), end_baths(5, kGainBaths));
    double mismatch = 0, lowest = 1;
    for (int site : {1, 5}) {
      const double n = site_occupancy(sol.state, site);
      mismatch = std::max(mismatch, std::abs(n - dense_occupancy(ref.vec, 5, site)));
      lowest = std::min(lowest, n);
    }
    ok = ok && mismatch <= 1e-8 && lowest > 0.99;
    d << "; N=5 end occupancy min " << lowest << ", oracle diff " << sci(mismatch)
      << " (tol 1e-8)";

    r.passed = ok;
    r.detail = d.str();
  });
}

CheckResult degeneracy_detection() {
  return timed(5, "non-unique NESS flagged at w=1, mu=0", std::nullopt, [](CheckResult& r) {
    std::ostringstream d;
    bool ok = true;
    for (int n : {4, 8}) {
      try {
        solve_kitaev({n, 1, 0, 1}, kGainBaths);
        ok = false;
        d << "N=" << n << " solved without complaint; ";
      } catch (const SolverError& e) {
        const bool right = e.status() == Status::NonUnique;
        ok = ok && right;
        d << "N=" << n << " -> " << to_string(e.status()) << "; ";
      }
    }
    r.passed = ok;
    r.detail = d.str();
  });
}

CheckResult property_suite(int random_cases, std::uint64_t seed) {
  return timed(6, "property suite", std::nullopt, [=](CheckResult& r) {
    std::vector<Instance> cases;
    for (int n : {2, 3}) {
      cases.push_back(kitaev_instance("fixture mixed baths N=" + std::to_string(n),
                                      {n, 1.5, 1.0, 1.0}, {1.3, 2.2, 3.4, 4.1}));
      cases.push_back(kitaev_instance("fixture w=0 mu=4 N=" + std::to_string(n), {n, 0, 4, 1},
                                      kGainBaths));
    }
    cases.push_back(kitaev_instance("fixture generic N=4", {4, 1.5, 1.0, 1.0}, kGainBaths));
    cases.push_back(kitaev_instance("fixture single site", {1, 0.0, 1.0, 1.0}, {1, 3, 0, 0}));

    std::mt19937_64 rng(seed);
    for (int k = 0; k < random_cases; ++k) {
      cases.push_back(random_generic(rng, k));
      cases.push_back(random_kitaev(rng, k));
    }

    PropertyTally t;
    for (const auto& inst : cases) {
      try {
        check_instance(inst, t);
      } catch (const std::exception& e) {
        if (t.failures++ == 0) t.first_failure = inst.label + ": " + e.what();
      }
    }

    const Bound bounds[] = {
        {"antisymmetry", &t.antisymmetry, 1e-14},
        {"eigen-relation", &t.eigen_relation, 1e-10},
        {"+/- pairing", &t.pairing, 1e-8},
        {"projector", &t.projector, 1e-10},
        {"ortho before", &t.ortho_before, 1e-10},
        {"ortho after", &t.ortho_after, 1e-9},
        {"fold residual", &t.fold, 1e-10},
        {"gate unitarity", &t.unitary, 1e-12},
        {"generator square", &t.generator, 1e-14},
        {"odd parity", &t.parity, 1e-10},
        {"sign symmetry", &t.sign_symmetry, 1e-8},
    };
    bool ok = t.failures == 0;
    std::ostringstream d;
    d << cases.size() << " instances";
    for (const auto& b : bounds) {
      const bool pass = b.worst->value <= b.tol;
      ok = ok && pass;
      d << "; " << b.name << " " << sci(b.worst->value);
      if (!pass) d << " > " << sci(b.tol) << " at " << b.worst->where;
    }
    if (t.failures) d << "; " << t.failures << " solver errors, first: " << t.first_failure;
    r.passed = ok;
    r.detail = d.str();
  });
}

CheckResult dense_equivalence() {
  return timed(7, "N=4 tensor state vs dense kernel", 30.0, [](CheckResult& r) {
    const KitaevParams<double> p{4, 1.5, 1.0, 1.0};
    const auto sol = solve_kitaev(p, kGainBaths);
    const auto ref = oracle::dense_second_space_ness(build_kitaev(p), end_baths(4, kGainBaths));
    const double err = oracle::error_metric(folded_dense(sol), ref.vec);
    r.passed = err <= 1e-9;
    r.detail = "err " + sci(err) + " (tol 1e-9), max bond " + std::to_string(sol.state.max_bond());
  });
}

CheckResult runtime_scaling(double budget_seconds) {
  CheckResult res = timed(8, "runtime scaling at w=1.5, mu=1", std::nullopt, [=](CheckResult& r) {
    const auto start = Clock::now();
    std::vector<double> sizes, medians;
    std::ostringstream d;
    bool complete = true;
    for (int n : {4, 6, 8, 10, 12, 14, 16}) {
      if (medians.size() >= 2) {
        const double ratio = medians.back() / medians[medians.size() - 2];
        const double projected = 3 * medians.back() * std::max(ratio, 1.0);
        if (seconds_since(start) + projected > budget_seconds) {
          d << "stopped before N=" << n << " (projected " << sci(projected) << " s for 3 runs, "
            << sci(budget_seconds - seconds_since(start)) << " s left); ";
          complete = false;
          break;
        }
      }
      std::vector<double> runs;
      int bond = 0;
      for (int rep = 0; rep < 3; ++rep) {
        const auto t0 = Clock::now();
        const auto sol = solve_kitaev({n, 1.5, 1.0, 1.0}, kGainBaths);
        end_to_end_correlation(sol.state);
        runs.push_back(seconds_since(t0));
        bond = sol.state.peak_bond();
      }
      std::sort(runs.begin(), runs.end());
      sizes.push_back(n);
      medians.push_back(runs[1]);
      d << "N=" << n << " " << sci(runs[1]) << " s chi " << bond << "; ";
    }
    const double total = seconds_since(start);

    // Per-site growth factor over the last measured interval.
    double per_site = 0;
    if (medians.size() >= 2) {
      const std::size_t k = medians.size() - 1;
      per_site = std::pow(medians[k] / medians[k - 1], 1.0 / (sizes[k] - sizes[k - 1]));
    }
    double slope = 0;
    if (medians.size() >= 2) {
      std::vector<double> lx;
      for (double s : sizes) lx.push_back(std::log(s));
      slope = fit_log_linear(lx, medians, 0.0).slope;
    }
    const bool no_doubling = per_site < 2.0;
    r.passed = complete && total < budget_seconds && std::isfinite(slope) && no_doubling;
    d << "log-log slope " << sci(slope) << ", per-site factor " << sci(per_site) << ", total "
      << sci(total) << " s (budget " << budget_seconds << " s)";
    r.detail = d.str();
  });
  res.binding = false;
  return res;
}

std::vector<CheckResult> run_all(bool include_runtime) {
  std::vector<CheckResult> out{single_site_analytic(), small_chain_oracle(), cross_oracle(),
                               parity_alternation(),   degeneracy_detection(), property_suite(),
                               dense_equivalence()};
  if (include_runtime) out.push_back(runtime_scaling());
  return out;
}

bool all_binding_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.passed || !r.binding; });
}

std::string format_line(const CheckResult& r) {
  std::ostringstream s;
  s << (r.passed ? "PASS" : "FAIL") << (r.binding ? "" : " (non-binding)") << "  [" << r.id
    << "] " << r.name << "  " << std::fixed << std::setprecision(2) << r.seconds << " s  "
    << r.detail;
  return s.str();
}

}  // namespace ness::acceptance
