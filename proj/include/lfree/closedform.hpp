#pragma once

// Closed-form norm values and paving bounds. All functions are total on
// their documented domains and throw std::domain_error outside them.

#include <complex>
#include <optional>
#include <span>
#include <string>

namespace lfree::closedform {

/// 2 sqrt(2k - 1): norm of the Laplacian sum_i lambda(h_i) + lambda(h_i^-1) on F_k.
double kesten_norm(int k);

struct FormulaValue {
  double value = 0;
  /// Set when the formula is evaluated outside its free regime.
  std::optional<std::string> warning;
};

/// 2 sqrt(n - 1): norm of sum_i lambda(g_i) over a Leinert set of size n.
FormulaValue leinert_norm(int n);

/// 2 sqrt(1 - 1/n) for sum_i alpha_i u_i with sum |alpha_i|^2 <= 1.
double coefficient_bound(int n, std::span<const std::complex<double>> alphas);

/// ||qpq|| for free projections with 0 < tau(q) <= tau(p) <= 1/2.
double qpq_norm(double tau_p, double tau_q);

/// ||q v q|| = 2 sqrt(tau(q)(1 - tau(q))) for v a trace-zero symmetry free from q.
double qvq_norm(double tau_q);

struct PavingBound {
  int n = 2;
  double bound = 1;
};

/// 2 sqrt(n - 1) / n.
PavingBound paving_norm_bound(int n);

struct PavingSize {
  double epsilon = 0;
  int n = 1;
  /// n = 1: the bracketing 2/sqrt(n) <= eps holds trivially (eps >= 2).
  bool vacuous = false;
};

/// The unique n with 2 n^(-1/2) <= eps < 2 (n-1)^(-1/2). Guarantees
/// n < 4 eps^-2 + 1 and, for n >= 2, paving_norm_bound(n) <= eps.
PavingSize paving_size(double epsilon);

}  // namespace lfree::closedform
