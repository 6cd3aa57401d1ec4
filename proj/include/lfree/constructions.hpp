#pragma once

// Unitary dilation of contractions and paving by spectral projections of a
// root-of-unity unitary, in the finite-dimensional matrix model.

#include <span>
#include <stdexcept>
#include <vector>

#include "lfree/rmt.hpp"

namespace lfree::constructions {

using rmt::Complex;
using rmt::DenseOperator;
using rmt::Matrix;
using rmt::RngSpec;

/// Raised when a construction violates an identity it is supposed to satisfy
/// exactly (up to rounding). Signals a bug, not bad input.
class AssertionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Spectral square root of a self-adjoint operator. Eigenvalues in
/// [-1e-6, 0) are rounding noise and are clipped to zero.
DenseOperator psd_sqrt(const DenseOperator& x);

struct DilationResult {
  int n = 0;
  int base_dim = 0;
  /// Inputs as used, after rescaling any that exceeded norm 1 by rounding.
  std::vector<DenseOperator> inputs;
  std::vector<DenseOperator> c;  // sqrt(1 - x x*)
  std::vector<DenseOperator> d;  // -sqrt(1 - x* x)
  /// haar[i][j] is u_{i,j}; the diagonal entries haar[i][i] are empty.
  std::vector<std::vector<DenseOperator>> haar;
  /// U_1..U_n, each of dimension (n+1) * base_dim.
  std::vector<DenseOperator> unitaries;
  double max_unitarity_residual = 0;

  /// Block (row, col) of U_i, with block indices 0..n.
  Matrix block(int i, int row, int col) const;
  int dilated_dim() const { return (n + 1) * base_dim; }
};

/// Builds U_i = e00(x) x_i + e_ii(x) x_i* + e_0i(x) c_i + e_i0(x) d_i
///            + sum_{j != i} e_jj(x) u_{i,j}
/// with independent Haar u_{i,j}, and checks unitarity to 1e-8.
DilationResult dilate(std::span<const DenseOperator> xs, int d, const RngSpec& rng);

struct DilationBoundReport {
  int n = 0;
  double sum_x_norm = 0;        // ||sum x_i||
  double sum_u_norm = 0;        // ||sum U_i||
  double sum_bound = 0;         // 2 sqrt(n-1)
  double weighted_x_norm = 0;   // ||sum alpha_i x_i||
  double weighted_u_norm = 0;   // ||sum alpha_i U_i||
  double weighted_bound = 0;    // 2 sqrt(1 - 1/n)
  double tolerance = 0;
  bool sum_x_ok = false;
  bool sum_u_ok = false;
  bool weighted_ok = false;
  bool compression_ok = false;  // ||sum a x|| <= ||sum a U|| + 1e-8

  bool pass() const { return sum_x_ok && sum_u_ok && weighted_ok && compression_ok; }
};

DilationBoundReport dilation_sum_bound_check(const DilationResult& result,
                                             std::span<const Complex> alphas,
                                             double tolerance);

struct PavingInstance {
  int n = 0;
  int dim = 0;
  std::vector<DenseOperator> projections;  // p_1..p_n, each of trace 1/n
  DenseOperator u;                         // sum_j lambda^{j-1} p_j
  DenseOperator x;
  DenseOperator rotation;                  // W with p_j = W E_j W*

  /// Same partition, different target.
  PavingInstance with_target(DenseOperator target) const;
};

/// exp(2 pi i / n)
Complex root_of_unity(int n);

PavingInstance build_paving(int n, const DenseOperator& x, const RngSpec& rng);

struct PavingMeasurement {
  double norm = 0;               // ||sum_j p_j x p_j||
  double averaged_norm = 0;      // (1/n) ||sum_i u^{i-1} x u^{1-i}||
  double identity_residual = 0;  // Frobenius distance of the two operators
};

PavingMeasurement measure_paving(const PavingInstance& inst);
double paving_norm(const PavingInstance& inst);

/// L-freeness defect of the orbit {u^{i-1} x u^{1-i} : i = 1..n}.
rmt::LFreeDefect orbit_lfree_check(const PavingInstance& inst, int max_len);

struct SharpnessReport {
  int n = 0;
  int dim = 0;
  std::vector<double> traces;
  std::vector<double> block_norms;    // ||p_i v p_i||
  std::vector<double> block_targets;  // 2 sqrt(tau_i (1 - tau_i))
  double paving_norm = 0;
  double bound = 0;                   // 2 sqrt(n-1) / n
  bool equal_traces = false;
};

/// v is a Haar-rotated trace-zero symmetry; projections with the given
/// traces are placed in independent random position.
SharpnessReport sharpness_experiment(int n, std::span<const double> traces, int d,
                                     const RngSpec& rng);

// Test inputs ---------------------------------------------------------------

/// W diag(z_1, -z_1, z_2, -z_2, ...) W* with |z| <= 1: a trace-zero contraction.
DenseOperator random_contraction(int d, rmt::Engine& engine);
/// W diag(1, ..., 1, -1, ..., -1) W*, d even.
DenseOperator trace_zero_symmetry(int d, rmt::Engine& engine);

}  // namespace lfree::constructions
