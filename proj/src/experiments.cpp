#include "lfree/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lfree/closedform.hpp"
#include "lfree/constructions.hpp"

#ifndef LFREE_VERSION
#define LFREE_VERSION "0.0.0"
#endif
#ifndef LFREE_CALIBRATION_DEFAULT
#define LFREE_CALIBRATION_DEFAULT "calibration/calibration.json"
#endif

namespace lfree::experiments {

using rmt::DenseOperator;
using rmt::Matrix;
using rmt::RngSpec;

std::string version() { return LFREE_VERSION; }

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

Summary summarize(const std::vector<double>& values) {
  return {quantile(values, 0.5), quantile(values, 0.1), quantile(values, 0.9)};
}

// ---------------------------------------------------------------------------

namespace {

Tolerance read_tolerance(const Json& j, const char* key) {
  const auto& e = j.at("checks").at(key);
  Tolerance t;
  t.tolerance = e.at("tolerance").get<double>();
  t.required_fraction = e.value("required_fraction", 1.0);
  return t;
}

double read_scalar(const Json& j, const char* key) {
  return j.at("checks").at(key).at("tolerance").get<double>();
}

}  // namespace

std::string Calibration::default_path() {
  if (const char* env = std::getenv("LFREE_CALIBRATION"); env && *env) return env;
  return LFREE_CALIBRATION_DEFAULT;
}

Calibration Calibration::load(const std::optional<std::string>& path) {
  const std::string p = path.value_or(default_path());
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open calibration fixture: " + p);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed calibration fixture " + p + ": " + e.what());
  }
  return from_json(j, p);
}

Calibration Calibration::from_json(const Json& j, std::string source) {
  Calibration c;
  c.version = j.at("version").get<int>();
  c.source = std::move(source);
  c.kesten_matrix = read_tolerance(j, "kesten_matrix");
  c.akemann_ostrand = read_tolerance(j, "akemann_ostrand");
  c.qpq = read_tolerance(j, "qpq");
  c.paving = read_tolerance(j, "paving");
  c.dilation_sum = read_tolerance(j, "dilation_sum");
  c.sharpness_equal = read_scalar(j, "sharpness_equal");
  c.sharpness_margin = read_scalar(j, "sharpness_margin");
  c.lfree_defect_median = read_scalar(j, "lfree_defect_median");
  c.haar_trace_median = read_scalar(j, "haar_trace_median");
  c.moment_ratio_m30 = read_scalar(j, "moment_ratio_m30");
  c.defect_trend_max_len = j.at("checks").at("defect_trend").at("max_len").get<int>();
  c.raw = j;
  return c;
}

// ---------------------------------------------------------------------------

Summary Report::summary() const {
  std::vector<double> v;
  v.reserve(trials.size());
  for (const auto& t : trials) v.push_back(t.value);
  return summarize(v);
}

double Report::pass_fraction() const {
  if (trials.empty()) return 0.0;
  const auto ok = std::count_if(trials.begin(), trials.end(),
                                [](const TrialRecord& t) { return t.pass; });
  return static_cast<double>(ok) / static_cast<double>(trials.size());
}

bool Report::pass() const {
  if (failure || trials.empty()) return false;
  if (comparison == "median_below") return summary().median < tolerance;
  return pass_fraction() + 1e-12 >= required_fraction;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

namespace {

std::string sampled(std::uint64_t seed, std::uint64_t stream) {
  return RngSpec{seed, stream}.describe();
}

}  // namespace

Json Report::to_json(bool include_timestamp) const {
  Json j;
  j["command"] = command;
  j["version"] = version();
  if (include_timestamp) j["timestamp"] = utc_timestamp();
  j["params"] = params;
  j["seed"] = seed;
  j["trials"] = trials.size();
  Json per = Json::array();
  for (const auto& t : trials) {
    Json r;
    r["trial"] = t.trial;
    r["stream"] = t.stream;
    r["value"] = t.value;
    r["provenance"] = sampled(t.seed, t.stream);
    r["pass"] = t.pass;
    if (!t.extra.empty()) r["detail"] = t.extra;
    per.push_back(std::move(r));
  }
  j["per_trial"] = std::move(per);
  if (!trials.empty()) {
    const Summary s = summary();
    j["summary"] = {{"median", s.median},
                    {"q10", s.q10},
                    {"q90", s.q90},
                    {"pass_fraction", pass_fraction()},
                    {"provenance", "sampled(" + std::to_string(seed) + ",*)"}};
  }
  j["targets"] = {{"paper_value", paper_value},
                  {"tolerance", tolerance},
                  {"comparison", comparison},
                  {"required_fraction", required_fraction},
                  {"provenance", "float"}};
  if (!extra.empty()) j["extra"] = extra;
  if (failure) j["failure"] = *failure;
  j["pass"] = pass();
  return j;
}

std::string Report::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "trial,seed,stream,value,target,tolerance,pass\n";
  for (const auto& t : trials) {
    os << t.trial << ',' << t.seed << ',' << t.stream << ',' << t.value << ','
       << paper_value << ',' << tolerance << ',' << (t.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

std::vector<TrialRecord> run_trials(
    int trials, std::uint64_t seed,
    const std::function<TrialRecord(int, const RngSpec&)>& fn) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  std::vector<TrialRecord> out(static_cast<std::size_t>(trials));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < trials; ++t) {
    const auto st = static_cast<std::size_t>(t);
    try {
      const RngSpec rng{seed, static_cast<std::uint64_t>(t)};
      out[st] = fn(t, rng);
      out[st].trial = t;
      out[st].seed = seed;
      out[st].stream = rng.stream;
    } catch (...) {
      errors[st] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Report base(std::string command, std::uint64_t seed, double target, double tol,
            std::string comparison, double fraction) {
  Report r;
  r.command = std::move(command);
  r.seed = seed;
  r.paper_value = target;
  r.tolerance = tol;
  r.comparison = std::move(comparison);
  r.required_fraction = fraction;
  return r;
}

}  // namespace

Report kesten_matrix(int k, int d, int trials, std::uint64_t seed, const Tolerance& tol) {
  const double target = closedform::kesten_norm(k);
  Report r = base("kesten-matrix", seed, target, tol.tolerance, "abs_within",
                  tol.required_fraction);
  r.params = {{"k", k}, {"d", d}};
  r.trials = run_trials(trials, seed, [&](int, const RngSpec& rng) {
    Matrix sum = Matrix::Zero(d, d);
    for (int i = 0; i < k; ++i) {
      const auto u = rmt::sample_haar_unitary(d, rng.child(static_cast<std::uint64_t>(i)));
      sum += u.matrix() + u.matrix().adjoint();
    }
    TrialRecord t;
    t.value = rmt::op_norm(DenseOperator(std::move(sum)));
    t.pass = std::abs(t.value - target) <= tol.tolerance;
    return t;
  });
  return r;
}

Report akemann_ostrand(int n, int d, int trials, std::uint64_t seed, const Tolerance& tol) {
  const double target = closedform::leinert_norm(n).value;
  Report r = base("akemann-ostrand", seed, target, tol.tolerance, "abs_within",
                  tol.required_fraction);
  r.params = {{"n", n}, {"d", d}};
  r.trials = run_trials(trials, seed, [&](int, const RngSpec& rng) {
    Matrix sum = Matrix::Zero(d, d);
    for (int i = 0; i < n; ++i) {
      sum += rmt::sample_haar_unitary(d, rng.child(static_cast<std::uint64_t>(i))).matrix();
    }
    TrialRecord t;
    t.value = rmt::op_norm(DenseOperator(std::move(sum)));
    t.pass = std::abs(t.value - target) <= tol.tolerance;
    return t;
  });
  return r;
}

Report qpq_experiment(double tau_p, double tau_q, int d, int trials, std::uint64_t seed,
                      const Tolerance& tol) {
  const double target = closedform::qpq_norm(tau_p, tau_q);
  Report r = base("qpq", seed, target, tol.tolerance, "abs_within", tol.required_fraction);
  r.params = {{"tau_p", tau_p}, {"tau_q", tau_q}, {"d", d}};
  r.trials = run_trials(trials, seed, [&](int, const RngSpec& rng) {
    const auto p = rmt::sample_projection(tau_p, d, rng.child(0));
    const auto q = rmt::sample_projection(tau_q, d, rng.child(1));
    TrialRecord t;
    t.value = rmt::op_norm(q * p * q);
    t.pass = std::abs(t.value - target) <= tol.tolerance;
    return t;
  });
  return r;
}

Report paving_experiment(int n, int d, int trials, int targets, std::uint64_t seed,
                         const Tolerance& tol) {
  if (targets < 1) throw std::invalid_argument("paving: need at least one target");
  const double bound = closedform::paving_norm_bound(n).bound;
  Report r = base("pave", seed, bound, tol.tolerance, "at_most", tol.required_fraction);
  r.params = {{"n", n}, {"d", d}, {"targets", targets}};
  r.trials = run_trials(trials, seed, [&](int, const RngSpec& rng) {
    auto engine = rmt::make_engine(rng.child(1));
    auto first = constructions::random_contraction(d, engine);
    const auto inst = constructions::build_paving(n, first, rng.child(0));
    TrialRecord t;
    Json norms = Json::array();
    double worst_residual = 0;
    for (int k = 0; k < targets; ++k) {
      const auto m = constructions::measure_paving(
          k == 0 ? inst : inst.with_target(constructions::random_contraction(d, engine)));
      norms.push_back(m.norm);
      worst_residual = std::max(worst_residual, m.identity_residual);
      t.value = std::max(t.value, m.norm);
    }
    t.pass = t.value <= bound + tol.tolerance;
    t.extra = {{"target_norms", norms}, {"identity_residual", worst_residual}};
    return t;
  });
  return r;
}

Report sharpness(int n, const std::vector<double>& traces, int d, int trials,
                 std::uint64_t seed, double equal_tol, double margin) {
  const double bound = closedform::paving_norm_bound(n).bound;
  const bool equal = std::all_of(traces.begin(), traces.end(), [&](double t) {
    return std::abs(t - traces.front()) < 1e-12;
  });
  Report r = equal ? base("sharpness", seed, bound, equal_tol, "abs_within", 1.0)
                   : base("sharpness", seed, bound, margin, "at_least", 1.0);
  r.params = {{"n", n}, {"d", d}, {"traces", traces}};
  r.trials = run_trials(trials, seed, [&](int, const RngSpec& rng) {
    const auto rep = constructions::sharpness_experiment(n, traces, d, rng);
    TrialRecord t;
    t.value = rep.paving_norm;
    t.pass = equal ? std::abs(t.value - bound) <= equal_tol : t.value >= bound + margin;
    t.extra = {{"block_norms", rep.block_norms}, {"block_targets", rep.block_targets}};
    return t;
  });
  return r;
}

namespace {

std::vector<DenseOperator> independent_contractions(int n, int d, const RngSpec& rng) {
  std::vector<DenseOperator> xs;
  for (int i = 0; i < n; ++i) {
    auto engine = rmt::make_engine(rng.child(1000 + static_cast<std::uint64_t>(i)));
    xs.push_back(constructions::random_contraction(d, engine));
  }
  return xs;
}

Json defect_detail(const rmt::LFreeDefect& def) {
  return {{"worst_family", std::string(rmt::to_string(def.worst_family))},
          {"worst_word", def.worst_word},
          {"words_checked", def.words_checked}};
}

}  // namespace

Report dilation_defect(int n, int d, int max_len, int trials, std::uint64_t seed,
                       double median_tol) {
  Report r = base("dilate", seed, 0.0, median_tol, "median_below", 0.5);
  r.params = {{"n", n}, {"d", d}, {"max_len", max_len}};
  r.trials = run_trials(trials, seed, [&](int, const RngSpec& rng) {
    const auto xs = independent_contractions(n, d, rng);
    const auto dil = constructions::dilate(xs, d, rng.child(0));
    const auto def = rmt::lfree_defect(dil.unitaries, max_len);
    TrialRecord t;
    t.value = def.max_abs_trace;
    t.pass = t.value < median_tol;
    t.extra = defect_detail(def);
    t.extra["unitarity_residual"] = dil.max_unitarity_residual;
    return t;
  });
  return r;
}

Report dilation_bounds(int n, int d, int trials, std::uint64_t seed, const Tolerance& tol) {
  const double target = closedform::leinert_norm(n).value;
  Report r = base("dilate-bounds", seed, target, tol.tolerance, "at_most",
                  tol.required_fraction);
  r.params = {{"n", n}, {"d", d}};
  const std::vector<rmt::Complex> alphas(static_cast<std::size_t>(n),
                                         rmt::Complex(1.0 / std::sqrt(double(n))));
  r.trials = run_trials(trials, seed, [&](int, const RngSpec& rng) {
    const auto xs = independent_contractions(n, d, rng);
    const auto dil = constructions::dilate(xs, d, rng.child(0));
    const auto rep = constructions::dilation_sum_bound_check(dil, alphas, tol.tolerance);
    TrialRecord t;
    t.value = rep.sum_x_norm;
    t.pass = rep.pass();
    t.extra = {{"sum_u_norm", rep.sum_u_norm},
               {"weighted_x_norm", rep.weighted_x_norm},
               {"weighted_u_norm", rep.weighted_u_norm},
               {"weighted_bound", rep.weighted_bound}};
    return t;
  });
  return r;
}

Report orbit_defect(int n, int d, int max_len, int trials, std::uint64_t seed,
                    double median_tol) {
  Report r = base("orbit", seed, 0.0, median_tol, "median_below", 0.5);
  r.params = {{"n", n}, {"d", d}, {"max_len", max_len}};
  r.trials = run_trials(trials, seed, [&](int, const RngSpec& rng) {
    auto engine = rmt::make_engine(rng.child(1));
    const auto x = constructions::trace_zero_symmetry(d, engine);
    const auto inst = constructions::build_paving(n, x, rng.child(0));
    const auto def = constructions::orbit_lfree_check(inst, max_len);
    TrialRecord t;
    t.value = def.max_abs_trace;
    t.pass = t.value < median_tol;
    t.extra = defect_detail(def);
    return t;
  });
  return r;
}

Report haar_defect(int n, int d, int max_len, int trials, std::uint64_t seed,
                   double median_tol) {
  Report r = base("haar-defect", seed, 0.0, median_tol, "median_below", 0.5);
  r.params = {{"n", n}, {"d", d}, {"max_len", max_len}};
  r.trials = run_trials(trials, seed, [&](int, const RngSpec& rng) {
    std::vector<DenseOperator> us;
    for (int i = 0; i < n; ++i) {
      us.push_back(rmt::sample_haar_unitary(d, rng.child(static_cast<std::uint64_t>(i))));
    }
    const auto def = rmt::lfree_defect(us, max_len);
    TrialRecord t;
    t.value = def.max_abs_trace;
    t.pass = t.value < median_tol;
    t.extra = defect_detail(def);
    return t;
  });
  return r;
}

}  // namespace lfree::experiments
