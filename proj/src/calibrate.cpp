#include "romscale/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "romscale/csv.hpp"
#include "romscale/error.hpp"
#include "romscale/parallel.hpp"

namespace romscale {

SearchResult bisect_threshold(const std::function<bool(double)>& stable, double lo, double hi,
                              double tol) {
  if (!(lo < hi) || !(tol > 0.0)) throw ValidationError("bisection needs lo < hi and tol > 0");
  SearchResult res;
  const bool lo_stable = stable(lo);
  const bool hi_stable = stable(hi);
  res.evaluations = 2;
  if (lo_stable || !hi_stable) {
    throw BracketError(std::string("no stability switch in [") + format_double(lo) + ", " +
                       format_double(hi) + "]: " + (lo_stable ? "stable" : "unstable") +
                       " at lo, " + (hi_stable ? "stable" : "unstable") + " at hi");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at floating-point resolution
    ++res.evaluations;
    if (stable(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  res.lo = lo;
  res.hi = hi;
  res.value = 0.5 * (lo + hi);
  return res;
}

SearchResult golden_section(const std::function<double(double)>& f, double lo, double hi,
                            double tol, std::size_t prescan) {
  if (!(lo < hi) || !(tol > 0.0)) throw ValidationError("golden section needs lo < hi and tol > 0");
  if (prescan < 3) throw ValidationError("golden section pre-scan needs at least 3 points");
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto eval = [&](double x) {
    const double v = f(x);
    return std::isfinite(v) ? v : inf;
  };

  SearchResult res;
  const double step = (hi - lo) / static_cast<double>(prescan - 1);
  std::size_t best = 0;
  double best_value = inf;
  for (std::size_t k = 0; k < prescan; ++k) {
    const double v = eval(lo + static_cast<double>(k) * step);
    if (v < best_value) {
      best_value = v;
      best = k;
    }
  }
  res.evaluations = prescan;
  if (best_value == inf) {
    throw BracketError("objective is infinite (every run unstable) across [" + format_double(lo) +
                       ", " + format_double(hi) + "]");
  }

  double a = lo + static_cast<double>(best == 0 ? 0 : best - 1) * step;
  double b = best + 1 < prescan ? lo + static_cast<double>(best + 1) * step : hi;
  const double inv_phi = 1.0 / std::numbers::phi;
  double c = b - (b - a) * inv_phi;
  double d = a + (b - a) * inv_phi;
  double fc = inf, fd = inf;
  if (b - a > tol) {
    fc = eval(c);
    fd = eval(d);
    res.evaluations += 2;
  }
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * inv_phi;
      if (b - a <= tol) break;
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * inv_phi;
      if (b - a <= tol) break;
      fd = eval(d);
    }
    ++res.evaluations;
  }
  res.lo = a;
  res.hi = b;
  res.value = 0.5 * (a + b);
  return res;
}

void SweepSpec::validate() const {
  if (!(param_lo < param_hi)) throw ValidationError("sweep needs param_lo < param_hi");
  if (!(tol_param > 0.0)) throw ValidationError("sweep tolerance must be positive");
  if (param_lo < 0.0) throw ValidationError("closure parameters are non-negative");
  if (variant == Variant::G) throw ValidationError("calibration needs the ml or efr variant");
  if (!(chi >= 0.0 && chi <= 1.0)) throw ValidationError("chi must lie in [0, 1]");
  if (!(U_ML > 0.0)) throw ValidationError("U_ML must be positive");
}

RunConfig make_run_config(const SweepSpec& spec, const CalibrationCase& c,
                          const CalibrationSetup& setup, double p) {
  RunConfig cfg;
  cfg.variant = spec.variant;
  cfg.t0 = setup.t0;
  cfg.dt = setup.dt;
  cfg.n_steps = setup.n_steps;
  cfg.max_snapshot_ke = setup.max_snapshot_ke;
  cfg.ke_blowup_factor = setup.ke_blowup_factor;
  if (spec.variant == Variant::ML) {
    cfg.ml.alpha = p;
    cfg.ml.U_ML = spec.U_ML;
    cfg.ml.delta = c.delta;
    cfg.ml.which_delta = spec.which_delta;
  } else {
    cfg.efr.gamma = p;
    cfg.efr.delta = c.delta;
    cfg.efr.chi = spec.chi;
    cfg.efr.which_delta = spec.which_delta;
  }
  return cfg;
}

bool is_stable(const SweepSpec& spec, const CalibrationCase& c, const CalibrationSetup& setup,
               double p) {
  return !run(c.ops, make_run_config(spec, c, setup, p), c.a0, c.a1).blew_up;
}

std::vector<ThresholdResult> find_threshold(const SweepSpec& spec,
                                            const std::vector<CalibrationCase>& cases,
                                            const CalibrationSetup& setup) {
  spec.validate();
  std::vector<ThresholdResult> out(cases.size());
  parallel_for(cases.size(), [&](std::size_t k) {
    const CalibrationCase& c = cases[k];
    auto stable = [&](double p) { return is_stable(spec, c, setup, p); };
    SearchResult s;
    try {
      s = bisect_threshold(stable, spec.param_lo, spec.param_hi, spec.tol_param);
    } catch (const BracketError& e) {
      throw BracketError("r = " + std::to_string(c.r) + ": " + e.what());
    }
    ThresholdResult& res = out[k];
    res.r = c.r;
    res.value = s.value;
    res.evaluations = s.evaluations;
    const double below = std::max(spec.param_lo, s.value - spec.tol_param);
    res.verified = stable(s.value + spec.tol_param) && !stable(below);
  });
  return out;
}

std::vector<OptimumResult> find_optimal(const SweepSpec& spec, double reference_ke,
                                        const std::vector<CalibrationCase>& cases,
                                        const CalibrationSetup& setup) {
  spec.validate();
  std::vector<OptimumResult> out(cases.size());
  parallel_for(cases.size(), [&](std::size_t k) {
    const CalibrationCase& c = cases[k];
    auto objective = [&](double p) {
      const ROMTrajectory t = run(c.ops, make_run_config(spec, c, setup, p), c.a0, c.a1);
      if (t.blew_up) return std::numeric_limits<double>::infinity();
      return std::abs(t.mean_ke() - reference_ke);
    };
    SearchResult s;
    try {
      s = golden_section(objective, spec.param_lo, spec.param_hi, spec.tol_param);
    } catch (const BracketError& e) {
      throw BracketError("r = " + std::to_string(c.r) + ": " + e.what());
    }
    OptimumResult& res = out[k];
    res.r = c.r;
    res.value = s.value;
    res.objective = objective(s.value);
    res.evaluations = s.evaluations + 1;
  });
  return out;
}

namespace {

std::size_t column_index(const std::string& column) {
  for (std::size_t i = 0; i < TableRow::kColumns.size(); ++i) {
    if (column == TableRow::kColumns[i]) return i;
  }
  throw ValidationError("unknown table column '" + column + "'");
}

}  // namespace

std::optional<double>& TableRow::at(const std::string& column) {
  return values[column_index(column)];
}

const std::optional<double>& TableRow::at(const std::string& column) const {
  return values[column_index(column)];
}

std::string table_report(const std::vector<TableRow>& rows) {
  std::vector<std::string> header{"r"};
  for (const char* c : TableRow::kColumns) header.emplace_back(c);
  std::string out = csv_record(header);
  for (const auto& row : rows) {
    std::vector<std::string> fields{std::to_string(row.r)};
    for (const auto& v : row.values) fields.push_back(format_optional(v));
    out += csv_record(fields);
  }
  return out;
}

std::vector<TableRow> parse_table_report(const std::string& csv) {
  const auto records = parse_csv(csv);
  if (records.empty()) throw ValidationError("table CSV has no header");
  const auto& header = records.front();
  if (header.size() != TableRow::kColumns.size() + 1 || header[0] != "r") {
    throw ValidationError("unexpected table CSV header");
  }
  std::vector<TableRow> rows;
  for (std::size_t k = 1; k < records.size(); ++k) {
    const auto& rec = records[k];
    if (rec.size() != header.size()) {
      throw ValidationError("table CSV record " + std::to_string(k) + " has " +
                            std::to_string(rec.size()) + " fields");
    }
    TableRow row;
    row.r = static_cast<std::size_t>(std::stoull(rec[0]));
    for (std::size_t i = 1; i < rec.size(); ++i) {
      row.at(header[i]) = rec[i].empty() ? std::nullopt : std::optional<double>(parse_double(rec[i]));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace romscale
