#include "lfree/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lfree::closedform {

double kesten_norm(int k) {
  if (k < 1) throw std::domain_error("kesten_norm: k must be >= 1");
  return 2.0 * std::sqrt(2.0 * k - 1.0);
}

FormulaValue leinert_norm(int n) {
  if (n < 1) throw std::domain_error("leinert_norm: n must be >= 1");
  FormulaValue out{2.0 * std::sqrt(n - 1.0), std::nullopt};
  if (n == 1) {
    out.warning =
        "formula gives 0 for n = 1; the norm of a single unitary is 1 (formula holds for n >= 2)";
  }
  return out;
}

double coefficient_bound(int n, std::span<const std::complex<double>> alphas) {
  if (n < 2) throw std::domain_error("coefficient_bound: n must be >= 2");
  if (alphas.size() != static_cast<std::size_t>(n)) {
    throw std::domain_error("coefficient_bound: expected n coefficients");
  }
  double sq = 0;
  for (const auto& a : alphas) sq += std::norm(a);
  if (sq > 1.0 + 1e-12) {
    throw std::domain_error("coefficient_bound: sum |alpha_i|^2 exceeds 1");
  }
  return 2.0 * std::sqrt(1.0 - 1.0 / n);
}

double qpq_norm(double tau_p, double tau_q) {
  if (!(tau_q > 0.0 && tau_q <= tau_p && tau_p <= 0.5)) {
    throw std::domain_error("qpq_norm: requires 0 < tau_q <= tau_p <= 1/2");
  }
  return tau_p + tau_q - 2.0 * tau_p * tau_q +
         2.0 * std::sqrt(tau_p * (1.0 - tau_p) * tau_q * (1.0 - tau_q));
}

double qvq_norm(double tau_q) {
  if (!(tau_q > 0.0 && tau_q < 1.0)) {
    throw std::domain_error("qvq_norm: requires 0 < tau_q < 1");
  }
  return 2.0 * std::sqrt(tau_q * (1.0 - tau_q));
}

PavingBound paving_norm_bound(int n) {
  if (n < 2) throw std::domain_error("paving_norm_bound: n must be >= 2");
  return {n, 2.0 * std::sqrt(n - 1.0) / n};
}

PavingSize paving_size(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::domain_error("paving_size: epsilon must be positive");
  }
  PavingSize out;
  out.epsilon = epsilon;
  if (epsilon >= 2.0) {
    out.n = 1;
    out.vacuous = true;
    return out;
  }
  const double guess = std::ceil(4.0 / (epsilon * epsilon));
  if (guess > static_cast<double>(std::numeric_limits<int>::max() - 2)) {
    throw std::domain_error("paving_size: epsilon too small");
  }
  int n = std::max(1, static_cast<int>(guess));
  // Settle rounding at the boundaries of the bracket.
  while (2.0 / std::sqrt(static_cast<double>(n)) > epsilon) ++n;
  while (n > 1 && 2.0 / std::sqrt(static_cast<double>(n - 1)) <= epsilon) --n;
  out.n = n;
  out.vacuous = n == 1;
  return out;
}

}  // namespace lfree::closedform
