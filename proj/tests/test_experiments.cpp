#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "lfree/experiments.hpp"

using namespace lfree::experiments;
using doctest::Approx;

TEST_CASE("quantiles") {
  CHECK(quantile({3.0, 1.0, 2.0}, 0.5) == 2.0);
  CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == 2.5);
  CHECK(quantile({5.0}, 0.9) == 5.0);
  const auto s = summarize({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(s.median == 5.0);
  CHECK(s.q10 == Approx(1.0));
  CHECK(s.q90 == Approx(9.0));
  CHECK_THROWS(quantile({}, 0.5));
}

TEST_CASE("calibration fixture loads") {
  const auto cal = Calibration::load();
  CHECK(cal.version >= 1);
  CHECK(cal.kesten_matrix.tolerance > 0);
  CHECK(cal.paving.required_fraction > 0);
  CHECK(cal.defect_trend_max_len % 2 == 0);
  CHECK_THROWS(Calibration::load(std::string("/nonexistent/calibration.json")));
  CHECK_THROWS(Calibration::from_json(Json::parse(R"({"version": 1})"), "inline"));
}

TEST_CASE("reports are deterministic and self-describing") {
  const Tolerance tol{0.25, 0.9};
  const auto a = akemann_ostrand(3, 60, 4, 17, tol);
  const auto b = akemann_ostrand(3, 60, 4, 17, tol);
  CHECK(a.to_json(false).dump() == b.to_json(false).dump());
  const auto j = a.to_json();
  CHECK(j.contains("timestamp"));
  CHECK(j["version"] == version());
  CHECK(j["per_trial"].size() == 4);
  CHECK(j["per_trial"][2]["provenance"] == "sampled(17,2)");
  CHECK(j["targets"]["paper_value"].get<double>() == Approx(2 * std::sqrt(2.0)));
  CHECK(j.contains("summary"));

  const auto csv = a.to_csv();
  CHECK(csv.rfind("trial,seed,stream,value,target,tolerance,pass\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

  const auto c = akemann_ostrand(3, 60, 4, 18, tol);
  CHECK(a.to_json(false).dump() != c.to_json(false).dump());
}

TEST_CASE("trial errors propagate") {
  CHECK_THROWS(run_trials(3, 1, [](int t, const lfree::rmt::RngSpec&) -> TrialRecord {
    if (t == 1) throw std::runtime_error("boom");
    return {};
  }));
  CHECK_THROWS(run_trials(0, 1, [](int, const lfree::rmt::RngSpec&) { return TrialRecord{}; }));
}

TEST_CASE("pass rules") {
  Report r;
  r.comparison = "median_below";
  r.tolerance = 0.5;
  for (double v : {0.1, 0.9, 0.2}) r.trials.push_back({0, 0, 0, v, v < 0.5, {}});
  CHECK(r.pass());
  r.comparison = "at_most";
  r.required_fraction = 0.9;
  CHECK_FALSE(r.pass());
  r.required_fraction = 0.6;
  CHECK(r.pass());
  r.failure = "assertion";
  CHECK_FALSE(r.pass());
}
