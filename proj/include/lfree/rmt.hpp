#pragma once

// Finite-dimensional model of a tracial von Neumann algebra: dense complex
// matrices with the normalized trace, Haar sampling, operator norms and a
// numerical L-freeness defect.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lfree::rmt {

using Matrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

class DenseOperator {
 public:
  DenseOperator() = default;
  explicit DenseOperator(Matrix m);

  static DenseOperator identity(int d);
  static DenseOperator zero(int d);
  static DenseOperator diagonal(std::span<const Complex> entries);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

  /// (1/d) * sum of diagonal entries.
  Complex trace() const;
  DenseOperator adjoint() const { return DenseOperator(Matrix(m_.adjoint())); }

  friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b);
  friend DenseOperator operator+(const DenseOperator& a, const DenseOperator& b);
  friend DenseOperator operator-(const DenseOperator& a, const DenseOperator& b);
  friend DenseOperator operator*(Complex s, const DenseOperator& a);

 private:
  Matrix m_;
};

/// Seed plus stream: each (seed, stream) pair names an independent,
/// reproducible random sequence.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// A derived stream, for objects sampled inside a larger construction.
  RngSpec child(std::uint64_t sub) const;
  std::string describe() const;
};

using Engine = std::mt19937_64;
Engine make_engine(const RngSpec& rng);

/// Haar-distributed unitary from the QR factorization of a complex Ginibre
/// matrix, with the phases of diag(R) moved into Q.
DenseOperator sample_haar_unitary(int d, Engine& engine);
DenseOperator sample_haar_unitary(int d, const RngSpec& rng);

/// W diag(entries) W* for a Haar W.
DenseOperator rotate_diagonal(std::span<const Complex> entries, Engine& engine);

struct NormOptions {
  int dim_cap = 2000;
};

class DimensionCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest singular value via a dense Hermitian eigensolver.
double op_norm(const DenseOperator& x, const NormOptions& opts = {});

/// Rank r = tau * d projection W E W* in random position. tau * d must be an
/// integer in 1..d-1.
DenseOperator sample_projection(double tau, int d, Engine& engine);
DenseOperator sample_projection(double tau, int d, const RngSpec& rng);

double unitarity_residual(const DenseOperator& u);     // max(||UU* - 1||, ||U*U - 1||)
double idempotency_residual(const DenseOperator& p);   // ||P^2 - P||
double selfadjoint_residual(const DenseOperator& x);   // ||X - X*||

enum class WordFamily { plain_first, star_first };
std::string_view to_string(WordFamily f);

struct LFreeDefect {
  double max_abs_trace = 0;
  WordFamily worst_family = WordFamily::plain_first;
  std::vector<int> worst_word;  // 1-based indices into the family
  int max_length = 0;
  std::size_t words_checked = 0;
};

enum class DuplicatePolicy {
  reject,         // entrywise-equal members are an error
  index_distinct  // members are an indexed family; equal entries allowed
};

/// max |tau(w)| over x_{a1} x_{a2}* x_{a3} ... and x_{a1}* x_{a2} ... of even
/// length <= max_len with adjacent indices distinct.
LFreeDefect lfree_defect(std::span<const DenseOperator> family, int max_len,
                         DuplicatePolicy policy = DuplicatePolicy::reject);

/// Debug dump: "LFREEMAT", uint64 dimension, then d*d (re, im) doubles,
/// row-major, all little-endian.
void write_matrix(std::ostream& out, const DenseOperator& x);
DenseOperator read_matrix(std::istream& in);

}  // namespace lfree::rmt
