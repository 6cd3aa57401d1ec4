#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "lfree/closedform.hpp"

using namespace lfree::closedform;
using doctest::Approx;

TEST_CASE("kesten and leinert norms") {
  CHECK(kesten_norm(1) == 2.0);
  CHECK(kesten_norm(2) == Approx(3.464102).epsilon(1e-6));
  CHECK(kesten_norm(13) == 10.0);
  CHECK_THROWS_AS(kesten_norm(0), std::domain_error);

  const auto one = leinert_norm(1);
  CHECK(one.value == 0.0);
  CHECK(one.warning);
  CHECK(leinert_norm(2).value == 2.0);
  CHECK_FALSE(leinert_norm(2).warning);
  CHECK(leinert_norm(5).value == 4.0);
  CHECK_THROWS_AS(leinert_norm(0), std::domain_error);
}

TEST_CASE("coefficient bound") {
  std::vector<std::complex<double>> two{{std::sqrt(0.5), 0}, {0, std::sqrt(0.5)}};
  CHECK(coefficient_bound(2, two) == Approx(std::sqrt(2.0)));
  std::vector<std::complex<double>> four(4, {0.5, 0});
  CHECK(coefficient_bound(4, four) == Approx(std::sqrt(3.0)));
  for (int n = 2; n <= 20; ++n) {
    std::vector<std::complex<double>> eq(static_cast<std::size_t>(n), 1.0 / std::sqrt(n));
    CHECK(coefficient_bound(n, eq) == Approx(leinert_norm(n).value / std::sqrt(n)));
  }
  std::vector<std::complex<double>> big{{1, 0}, {0.1, 0}};
  CHECK_THROWS_AS(coefficient_bound(2, big), std::domain_error);
  CHECK_THROWS_AS(coefficient_bound(3, two), std::domain_error);
}

TEST_CASE("free projection formulas") {
  CHECK(qpq_norm(0.5, 0.5) == Approx(1.0));
  CHECK(qpq_norm(0.5, 1.0 / 3) == Approx(0.971405).epsilon(1e-6));
  CHECK(qpq_norm(0.5, 0.25) == Approx(0.933013).epsilon(1e-6));
  CHECK_THROWS_AS(qpq_norm(0.25, 0.5), std::domain_error);
  CHECK_THROWS_AS(qpq_norm(0.6, 0.5), std::domain_error);
  CHECK_THROWS_AS(qpq_norm(0.5, 0.0), std::domain_error);

  CHECK(qvq_norm(0.5) == 1.0);
  CHECK(qvq_norm(1.0 / 3) == Approx(0.942809).epsilon(1e-6));
  CHECK(qvq_norm(0.25) == Approx(std::sqrt(3.0) / 2));
  CHECK_THROWS_AS(qvq_norm(1.0), std::domain_error);

  for (int i = 1; i < 100; ++i) {
    const double t = i / 100.0;
    CHECK(qvq_norm(t) == Approx(qvq_norm(1.0 - t)));
    if (t <= 0.5) {
      CHECK(qpq_norm(0.5, t) == Approx((1.0 + qvq_norm(t)) / 2));
      for (int j = 1; j <= i; ++j) {
        const double q = j / 100.0;
        const double v = qpq_norm(t, q);
        CHECK(v <= 1.0 + 1e-15);
        CHECK(v >= t - 1e-15);
      }
    }
  }
}

TEST_CASE("paving bound and size") {
  CHECK(paving_norm_bound(2).bound == 1.0);
  CHECK(paving_norm_bound(3).bound == Approx(0.942809).epsilon(1e-6));
  CHECK(paving_norm_bound(5).bound == Approx(0.8));
  CHECK_THROWS_AS(paving_norm_bound(1), std::domain_error);
  for (int n = 2; n < 200; ++n) {
    CHECK(paving_norm_bound(n + 1).bound < paving_norm_bound(n).bound);
    CHECK(paving_norm_bound(n).bound == Approx(leinert_norm(n).value / n));
  }

  CHECK(paving_size(1.0).n == 4);
  CHECK(paving_size(0.5).n == 16);
  const auto two = paving_size(2.0);
  CHECK(two.n == 1);
  CHECK(two.vacuous);
  CHECK(paving_size(3.0).vacuous);
  CHECK_THROWS_AS(paving_size(0.0), std::domain_error);
  CHECK_THROWS_AS(paving_size(-1.0), std::domain_error);

  int previous = paving_size(0.01).n;
  for (int i = 2; i <= 200; ++i) {
    const double eps = i / 100.0;
    const auto s = paving_size(eps);
    CHECK(s.n <= previous);
    previous = s.n;
    if (s.n >= 2) CHECK(paving_norm_bound(s.n).bound <= eps);
  }
}
