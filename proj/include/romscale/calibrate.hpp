#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "romscale/rom_integrators.hpp"
#include "romscale/rom_operators.hpp"

namespace romscale {

struct SearchResult {
  double value = 0.0;
  double lo = 0.0;  // final bracket
  double hi = 0.0;
  std::size_t evaluations = 0;
};

/// Bisection for the switch point of a predicate that is false at lo and
/// true at hi (checked first; BracketError otherwise). Stops once the
/// bracket is no wider than tol and returns its midpoint.
SearchResult bisect_threshold(const std::function<bool(double)>& stable, double lo, double hi,
                              double tol);

/// Minimizes f on [lo, hi]: a uniform pre-scan of `prescan` points picks
/// the best cell pair, then golden-section search narrows it to width tol.
/// Non-finite values count as +infinity; an all-infinite scan throws
/// BracketError.
SearchResult golden_section(const std::function<double(double)>& f, double lo, double hi,
                            double tol, std::size_t prescan = 16);

struct SweepSpec {
  std::vector<std::size_t> r_values;
  double param_lo = 0.0;
  double param_hi = 1.0;
  double tol_param = 1e-3;
  Variant variant = Variant::ML;
  double chi = 6e-3;  // EFR relaxation
  double U_ML = 1.0;  // ML velocity scale
  DeltaKind which_delta = DeltaKind::delta1;

  void validate() const;
};

/// Everything needed to run one ROM at a given truncation.
struct CalibrationCase {
  std::size_t r = 0;
  ROMOperators ops;
  Eigen::VectorXd a0;
  Eigen::VectorXd a1;
  double delta = 0.0;  // lengthscale used by the closure
};

struct CalibrationSetup {
  double t0 = 0.0;
  double dt = 0.0;
  std::size_t n_steps = 0;
  double max_snapshot_ke = 0.0;
  double ke_blowup_factor = 10.0;
};

/// Run configuration for parameter value p (alpha for ML, gamma for EFR).
RunConfig make_run_config(const SweepSpec& spec, const CalibrationCase& c,
                          const CalibrationSetup& setup, double p);
bool is_stable(const SweepSpec& spec, const CalibrationCase& c, const CalibrationSetup& setup,
               double p);

struct ThresholdResult {
  std::size_t r = 0;
  double value = 0.0;
  std::size_t evaluations = 0;
  /// Post-hoc check: stable at value + tol and unstable at value - tol.
  bool verified = false;
};

/// One threshold per case, computed concurrently over cases.
std::vector<ThresholdResult> find_threshold(const SweepSpec& spec,
                                            const std::vector<CalibrationCase>& cases,
                                            const CalibrationSetup& setup);

struct OptimumResult {
  std::size_t r = 0;
  double value = 0.0;
  double objective = 0.0;
  std::size_t evaluations = 0;
};

/// Minimizes |mean KE of the run - reference_ke| over the parameter;
/// unstable runs score +infinity.
std::vector<OptimumResult> find_optimal(const SweepSpec& spec, double reference_ke,
                                        const std::vector<CalibrationCase>& cases,
                                        const CalibrationSetup& setup);

/// One row per r of the calibration table.
struct TableRow {
  static constexpr std::array<const char*, 10> kColumns = {
      "delta1",          "delta2",          "alpha0_delta1",   "alpha0_delta2",
      "gamma0_delta1",   "gamma0_delta2",   "alpha_opt_delta1", "alpha_opt_delta2",
      "gamma_opt_delta1", "gamma_opt_delta2"};

  std::size_t r = 0;
  std::array<std::optional<double>, kColumns.size()> values{};

  std::optional<double>& at(const std::string& column);
  const std::optional<double>& at(const std::string& column) const;
};

/// Header "r,delta1,...", one CSV record per row; missing values are empty.
std::string table_report(const std::vector<TableRow>& rows);
std::vector<TableRow> parse_table_report(const std::string& csv);

}  // namespace romscale
