#include "lfree/rmt.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <functional>
#include <istream>
#include <map>
#include <ostream>

namespace lfree::rmt {

DenseOperator::DenseOperator(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw std::invalid_argument("operator matrix must be square");
  }
  if (m_.rows() < 1) {
    throw std::invalid_argument("operator dimension must be >= 1");
  }
  if (!m_.allFinite()) {
    throw std::invalid_argument("operator has non-finite entries");
  }
}

DenseOperator DenseOperator::identity(int d) {
  return DenseOperator(Matrix::Identity(d, d));
}

DenseOperator DenseOperator::zero(int d) { return DenseOperator(Matrix::Zero(d, d)); }

DenseOperator DenseOperator::diagonal(std::span<const Complex> entries) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(entries.size()),
                          static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = entries[i];
  }
  return DenseOperator(std::move(m));
}

Complex DenseOperator::trace() const { return m_.trace() / static_cast<double>(m_.rows()); }

namespace {

void require_same_dim(const DenseOperator& a, const DenseOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("operator dimensions differ");
}

}  // namespace

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
  require_same_dim(a, b);
  DenseOperator out;
  out.m_.noalias() = a.m_ * b.m_;
  return out;
}

DenseOperator operator+(const DenseOperator& a, const DenseOperator& b) {
  require_same_dim(a, b);
  DenseOperator out;
  out.m_ = a.m_ + b.m_;
  return out;
}

DenseOperator operator-(const DenseOperator& a, const DenseOperator& b) {
  require_same_dim(a, b);
  DenseOperator out;
  out.m_ = a.m_ - b.m_;
  return out;
}

DenseOperator operator*(Complex s, const DenseOperator& a) {
  DenseOperator out;
  out.m_ = s * a.m_;
  return out;
}

// ---------------------------------------------------------------------------

RngSpec RngSpec::child(std::uint64_t sub) const {
  // splitmix64 step keeps children of different streams apart.
  std::uint64_t z = stream + 0x9e3779b97f4a7c15ULL * (sub + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return {seed, z ^ (z >> 31)};
}

std::string RngSpec::describe() const {
  return "sampled(" + std::to_string(seed) + "," + std::to_string(stream) + ")";
}

Engine make_engine(const RngSpec& rng) {
  std::seed_seq seq{static_cast<std::uint32_t>(rng.seed),
                    static_cast<std::uint32_t>(rng.seed >> 32),
                    static_cast<std::uint32_t>(rng.stream),
                    static_cast<std::uint32_t>(rng.stream >> 32)};
  return Engine(seq);
}

DenseOperator sample_haar_unitary(int d, Engine& engine) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  Matrix g(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double re = gauss(engine);
      const double im = gauss(engine);
      g(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= mag > 0 ? rjj / mag : Complex(1.0);
  }
  return DenseOperator(std::move(q));
}

DenseOperator sample_haar_unitary(int d, const RngSpec& rng) {
  Engine engine = make_engine(rng);
  return sample_haar_unitary(d, engine);
}

DenseOperator rotate_diagonal(std::span<const Complex> entries, Engine& engine) {
  const int d = static_cast<int>(entries.size());
  const DenseOperator w = sample_haar_unitary(d, engine);
  Matrix scaled = w.matrix();
  for (int j = 0; j < d; ++j) scaled.col(j) *= entries[static_cast<std::size_t>(j)];
  Matrix out = scaled * w.matrix().adjoint();
  return DenseOperator(std::move(out));
}

double op_norm(const DenseOperator& x, const NormOptions& opts) {
  if (x.dim() > opts.dim_cap) {
    throw DimensionCapExceeded("op_norm: dimension " + std::to_string(x.dim()) +
                               " exceeds cap " + std::to_string(opts.dim_cap));
  }
  const Matrix& m = x.matrix();
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-15 * scale) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Matrix gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

DenseOperator sample_projection(double tau, int d, Engine& engine) {
  if (d < 2) throw std::invalid_argument("projection dimension must be >= 2");
  const double scaled = tau * d;
  const long r = std::lround(scaled);
  if (std::abs(scaled - static_cast<double>(r)) > 1e-9) {
    throw std::invalid_argument("tau * d is not an integer rank; adjust d");
  }
  if (r < 1 || r > d - 1) {
    throw std::invalid_argument("projection rank must be in 1..d-1");
  }
  const DenseOperator w = sample_haar_unitary(d, engine);
  const auto cols = w.matrix().leftCols(r);
  Matrix p = cols * cols.adjoint();
  return DenseOperator(std::move(p));
}

DenseOperator sample_projection(double tau, int d, const RngSpec& rng) {
  Engine engine = make_engine(rng);
  return sample_projection(tau, d, engine);
}

// Residuals are Frobenius norms, which bound the operator-norm residuals.
double unitarity_residual(const DenseOperator& u) {
  const Matrix& m = u.matrix();
  const auto id = Matrix::Identity(m.rows(), m.cols());
  const double a = (m * m.adjoint() - id).norm();
  const double b = (m.adjoint() * m - id).norm();
  return std::max(a, b);
}

double idempotency_residual(const DenseOperator& p) {
  const Matrix& m = p.matrix();
  return (m * m - m).norm();
}

double selfadjoint_residual(const DenseOperator& x) {
  return (x.matrix() - x.matrix().adjoint()).norm();
}

std::string_view to_string(WordFamily f) {
  return f == WordFamily::plain_first ? "plain_first" : "star_first";
}

// ---------------------------------------------------------------------------

namespace {

// Alternating products x_{a1} x_{a2}^* x_{a3} ... (plain letter first),
// memoized by index sequence.
class PlainProducts {
 public:
  explicit PlainProducts(std::span<const DenseOperator> family) : family_(family) {}

  const Matrix& get(const std::vector<int>& seq) {
    if (seq.size() == 1) return family_[static_cast<std::size_t>(seq[0])].matrix();
    auto it = memo_.find(seq);
    if (it != memo_.end()) return it->second;
    std::vector<int> head(seq.begin(), seq.end() - 1);
    const Matrix& left = get(head);
    const Matrix& x = family_[static_cast<std::size_t>(seq.back())].matrix();
    Matrix prod;
    if (seq.size() % 2 == 0) {
      prod.noalias() = left * x.adjoint();
    } else {
      prod.noalias() = left * x;
    }
    return memo_.emplace(seq, std::move(prod)).first->second;
  }

 private:
  std::span<const DenseOperator> family_;
  std::map<std::vector<int>, Matrix> memo_;
};

// sum_ij a_ij conj(b_ij)
Complex frobenius_inner(const Matrix& a, const Matrix& b) {
  return (a.array() * b.array().conjugate()).sum();
}

void enumerate(int n, int length, std::vector<int>& seq,
               const std::function<void(const std::vector<int>&)>& visit) {
  if (static_cast<int>(seq.size()) == length) {
    visit(seq);
    return;
  }
  for (int a = 0; a < n; ++a) {
    if (!seq.empty() && seq.back() == a) continue;
    seq.push_back(a);
    enumerate(n, length, seq, visit);
    seq.pop_back();
  }
}

}  // namespace

LFreeDefect lfree_defect(std::span<const DenseOperator> family, int max_len,
                         DuplicatePolicy policy) {
  if (family.empty()) throw std::invalid_argument("lfree_defect: empty family");
  if (max_len < 2 || max_len % 2 != 0) {
    throw std::invalid_argument("lfree_defect: max_len must be even and >= 2");
  }
  const int d = family[0].dim();
  for (const auto& x : family) {
    if (x.dim() != d) throw std::invalid_argument("lfree_defect: mismatched dimensions");
  }
  if (policy == DuplicatePolicy::reject) {
    for (std::size_t i = 0; i < family.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (family[i].matrix() == family[j].matrix()) {
          throw std::invalid_argument(
              "lfree_defect: family has equal members; alternation would be vacuous");
        }
      }
    }
  }

  LFreeDefect out;
  out.max_length = max_len;
  const int n = static_cast<int>(family.size());
  if (n < 2) return out;  // no admissible word

  PlainProducts products(family);
  const double inv_d = 1.0 / d;
  std::vector<int> seq;
  for (int k = 1; 2 * k <= max_len; ++k) {
    const int len = 2 * k;
    // Split into odd prefix/suffix lengths so both halves are plain-first
    // products or adjoints of reversed plain-first products.
    const int p = (k % 2 == 1) ? k : k - 1;
    enumerate(n, len, seq, [&](const std::vector<int>& a) {
      std::vector<int> head(a.begin(), a.begin() + p);
      std::vector<int> tail_rev(a.rbegin(), a.rend() - p);
      // plain-first: x_{a1} x_{a2}^* ... x_{a2k}^* = A(head) * A(rev tail)^*
      const Complex t_plain =
          frobenius_inner(products.get(head), products.get(tail_rev)) * inv_d;
      // star-first: x_{a1}^* x_{a2} ... x_{a2k} = A(rev head)^* * A(tail)
      std::vector<int> head_rev(head.rbegin(), head.rend());
      std::vector<int> tail(a.begin() + p, a.end());
      const Complex t_star =
          std::conj(frobenius_inner(products.get(head_rev), products.get(tail))) * inv_d;
      out.words_checked += 2;
      for (const auto& [value, fam] :
           {std::pair{t_plain, WordFamily::plain_first}, std::pair{t_star, WordFamily::star_first}}) {
        if (std::abs(value) > out.max_abs_trace || out.worst_word.empty()) {
          out.max_abs_trace = std::abs(value);
          out.worst_family = fam;
          out.worst_word.clear();
          for (int idx : a) out.worst_word.push_back(idx + 1);
        }
      }
    });
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::array<char, 8> kMagic = {'L', 'F', 'R', 'E', 'E', 'M', 'A', 'T'};

template <class T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  out.write(bytes.data(), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), sizeof(T))) {
    throw std::runtime_error("read_matrix: truncated input");
  }
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_matrix(std::ostream& out, const DenseOperator& x) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(x.dim()));
  const Matrix& m = x.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      put_le<double>(out, m(i, j).real());
      put_le<double>(out, m(i, j).imag());
    }
  }
}

DenseOperator read_matrix(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw std::runtime_error("read_matrix: bad magic");
  }
  const auto d = get_le<std::uint64_t>(in);
  if (d == 0 || d > 100000) throw std::runtime_error("read_matrix: bad dimension");
  Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double re = get_le<double>(in);
      const double im = get_le<double>(in);
      m(i, j) = Complex(re, im);
    }
  }
  return DenseOperator(std::move(m));
}

}  // namespace lfree::rmt
