#pragma once

// Seeded batch experiments over the matrix model, their calibrated
// tolerances, and self-describing reports.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lfree/rmt.hpp"

namespace lfree::experiments {

using Json = nlohmann::ordered_json;

std::string version();
/// ISO-8601 UTC, second resolution.
std::string utc_timestamp();

struct Summary {
  double median = 0;
  double q10 = 0;
  double q90 = 0;
};

/// Linear-interpolated quantiles (type 7). Empty input is an error.
double quantile(std::vector<double> values, double q);
Summary summarize(const std::vector<double>& values);

// Calibration ---------------------------------------------------------------

/// Tolerance and pass-fraction for one finite-dimensional check.
struct Tolerance {
  double tolerance = 0;
  double required_fraction = 1.0;
};

/// Tolerances for every freeness-model assertion, read from a versioned JSON
/// fixture. The path comes from $LFREE_CALIBRATION, else the compiled default.
struct Calibration {
  int version = 0;
  std::string source;
  Tolerance kesten_matrix;     // |op_norm - 2 sqrt(2k-1)|
  Tolerance akemann_ostrand;   // |op_norm - 2 sqrt(n-1)|
  Tolerance qpq;               // |op_norm(qpq) - formula|
  Tolerance paving;            // paving norm <= bound + tol
  Tolerance dilation_sum;      // Cor. bounds on sums of dilated contractions
  double sharpness_equal = 0;  // |paving norm - bound| for equal traces
  double sharpness_margin = 0; // unequal traces exceed bound by this much
  double lfree_defect_median = 0;
  double haar_trace_median = 0;
  double moment_ratio_m30 = 0; // lower bound at m = 30 >= ratio * norm
  int defect_trend_max_len = 4;
  Json raw;

  static Calibration load(const std::optional<std::string>& path = std::nullopt);
  static Calibration from_json(const Json& j, std::string source);
  static std::string default_path();
};

// Reports -------------------------------------------------------------------

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double value = 0;
  bool pass = false;
  Json extra = Json::object();
};

struct Report {
  std::string command;
  Json params = Json::object();
  std::uint64_t seed = 0;
  double paper_value = 0;
  double tolerance = 0;
  std::string comparison;  // "abs_within", "at_most", "at_least", "median_below"
  double required_fraction = 1.0;
  std::vector<TrialRecord> trials;
  Json extra = Json::object();
  std::optional<std::string> failure;

  Summary summary() const;
  double pass_fraction() const;
  bool pass() const;

  /// Full report. The timestamp is omitted when include_timestamp is false,
  /// which makes identical runs byte-identical.
  Json to_json(bool include_timestamp = true) const;
  /// One row per trial: trial,seed,stream,value,target,tolerance,pass.
  std::string to_csv() const;
};

/// Runs fn(trial, rng) for trial = 0..trials-1 (possibly in parallel), each
/// on stream `trial` of `seed`, and returns results in trial order.
std::vector<TrialRecord> run_trials(
    int trials, std::uint64_t seed,
    const std::function<TrialRecord(int, const rmt::RngSpec&)>& fn);

// Experiments ---------------------------------------------------------------

/// op_norm(sum_i U_i + U_i*) for k i.i.d. Haar unitaries vs 2 sqrt(2k-1).
Report kesten_matrix(int k, int d, int trials, std::uint64_t seed, const Tolerance& tol);

/// op_norm(sum_i V_i) for n i.i.d. Haar unitaries vs 2 sqrt(n-1).
Report akemann_ostrand(int n, int d, int trials, std::uint64_t seed, const Tolerance& tol);

/// op_norm(q p q) for independently rotated projections vs the free formula.
Report qpq_experiment(double tau_p, double tau_q, int d, int trials, std::uint64_t seed,
                      const Tolerance& tol);

/// One partition per trial reused for `targets` independent trace-zero
/// contractions; the trial value is the max paving norm over the targets.
Report paving_experiment(int n, int d, int trials, int targets, std::uint64_t seed,
                         const Tolerance& tol);

/// Paving norm of a Haar-rotated symmetry against projections of the given
/// traces. With equal traces the target is the bound itself; otherwise the
/// norm must exceed the bound by `margin`.
Report sharpness(int n, const std::vector<double>& traces, int d, int trials,
                 std::uint64_t seed, double equal_tol, double margin);

/// Dilates n independent trace-zero contractions of size d and measures the
/// L-freeness defect of the resulting unitaries.
Report dilation_defect(int n, int d, int max_len, int trials, std::uint64_t seed,
                       double median_tol);

/// Cor. bounds on the dilated family: ||sum x_i||, ||sum U_i||, weighted sums.
Report dilation_bounds(int n, int d, int trials, std::uint64_t seed, const Tolerance& tol);

/// L-freeness defect of the conjugation orbit of a rotated symmetry.
Report orbit_defect(int n, int d, int max_len, int trials, std::uint64_t seed,
                    double median_tol);

/// L-freeness defect of n i.i.d. Haar unitaries.
Report haar_defect(int n, int d, int max_len, int trials, std::uint64_t seed,
                   double median_tol);

}  // namespace lfree::experiments
