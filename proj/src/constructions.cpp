#include "lfree/constructions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lfree/closedform.hpp"

namespace lfree::constructions {

using rmt::op_norm;

DenseOperator psd_sqrt(const DenseOperator& x) {
  const Matrix& m = x.matrix();
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("psd_sqrt: operator is not self-adjoint");
  }
  const Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
  Eigen::VectorXd evals = es.eigenvalues();
  if (evals.minCoeff() < -1e-6) {
    throw std::invalid_argument("psd_sqrt: operator has eigenvalue " +
                                std::to_string(evals.minCoeff()) + " < -1e-6");
  }
  evals = evals.cwiseMax(0.0).cwiseSqrt();
  const Matrix& v = es.eigenvectors();
  Matrix root = v * evals.asDiagonal() * v.adjoint();
  return DenseOperator(std::move(root));
}

// ---------------------------------------------------------------------------

Matrix DilationResult::block(int i, int row, int col) const {
  const auto& u = unitaries.at(static_cast<std::size_t>(i)).matrix();
  return u.block(static_cast<Eigen::Index>(row) * base_dim,
                 static_cast<Eigen::Index>(col) * base_dim, base_dim, base_dim);
}

namespace {

double frob_unitarity_sq(const Matrix& m) {
  const auto id = Matrix::Identity(m.rows(), m.cols());
  const double a = (m * m.adjoint() - id).squaredNorm();
  const double b = (m.adjoint() * m - id).squaredNorm();
  return std::max(a, b);
}

}  // namespace

DilationResult dilate(std::span<const DenseOperator> xs, int d, const RngSpec& rng) {
  if (xs.empty()) throw std::invalid_argument("dilate: need at least one contraction");
  if (d < 1) throw std::invalid_argument("dilate: dimension must be >= 1");
  DilationResult out;
  out.n = static_cast<int>(xs.size());
  out.base_dim = d;
  const int n = out.n;

  for (const auto& x : xs) {
    if (x.dim() != d) throw std::invalid_argument("dilate: input dimension mismatch");
    const double norm = op_norm(x);
    if (norm > 1.0 + 1e-10) {
      throw std::invalid_argument("dilate: input has norm " + std::to_string(norm) +
                                  " > 1");
    }
    out.inputs.push_back(norm > 1.0 ? (Complex(1.0 / norm) * x) : x);
  }

  // c = sqrt(1 - xx*) and d = -sqrt(1 - x*x) from one SVD x = V S W*, so
  // that x d* + c x = 0 holds to rounding. Two independent eigensolves leave
  // O(sqrt(eps)) errors wherever a singular value of x is 1.
  for (const auto& x : out.inputs) {
    Eigen::BDCSVD<Matrix> svd(x.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd s = svd.singularValues().cwiseMin(1.0);
    const Eigen::VectorXd defect = (1.0 - s.array().square()).max(0.0).sqrt().matrix();
    const Matrix& v = svd.matrixU();
    const Matrix& w = svd.matrixV();
    out.c.emplace_back(Matrix(v * defect.asDiagonal() * v.adjoint()));
    out.d.emplace_back(Matrix(-(w * defect.asDiagonal() * w.adjoint())));
  }

  out.haar.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& row = out.haar[static_cast<std::size_t>(i)];
    row.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      row[static_cast<std::size_t>(j)] = rmt::sample_haar_unitary(
          d, rng.child(static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n) +
                       static_cast<std::uint64_t>(j)));
    }
  }

  const Eigen::Index D = static_cast<Eigen::Index>(n + 1) * d;
  for (int i = 0; i < n; ++i) {
    const auto si = static_cast<std::size_t>(i);
    const Eigen::Index bi = static_cast<Eigen::Index>(i + 1) * d;
    Matrix u = Matrix::Zero(D, D);
    u.block(0, 0, d, d) = out.inputs[si].matrix();
    u.block(bi, bi, d, d) = out.inputs[si].matrix().adjoint();
    u.block(0, bi, d, d) = out.c[si].matrix();
    u.block(bi, 0, d, d) = out.d[si].matrix();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const Eigen::Index bj = static_cast<Eigen::Index>(j + 1) * d;
      u.block(bj, bj, d, d) = out.haar[si][static_cast<std::size_t>(j)].matrix();
    }

    // U_i is a direct sum of the 2x2 block [[x, c], [d, x*]] and the u_{i,j},
    // so its residual is assembled from those pieces.
    Matrix core(2 * d, 2 * d);
    core << out.inputs[si].matrix(), out.c[si].matrix(), out.d[si].matrix(),
        out.inputs[si].matrix().adjoint();
    double sq = frob_unitarity_sq(core);
    for (int j = 0; j < n; ++j) {
      if (j != i) sq += frob_unitarity_sq(out.haar[si][static_cast<std::size_t>(j)].matrix());
    }
    const double residual = std::sqrt(sq);
    out.max_unitarity_residual = std::max(out.max_unitarity_residual, residual);
    if (residual > 1e-8) {
      throw AssertionFailure("dilate: U_" + std::to_string(i + 1) +
                             " unitarity residual " + std::to_string(residual));
    }
    out.unitaries.emplace_back(std::move(u));
  }
  return out;
}

DilationBoundReport dilation_sum_bound_check(const DilationResult& result,
                                             std::span<const Complex> alphas,
                                             double tolerance) {
  const int n = result.n;
  if (alphas.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("dilation_sum_bound_check: need n coefficients");
  }
  double sq = 0;
  for (const auto& a : alphas) sq += std::norm(a);
  if (sq > 1.0 + 1e-12) {
    throw std::invalid_argument("dilation_sum_bound_check: sum |alpha|^2 exceeds 1");
  }
  const int d = result.base_dim;
  const int D = result.dilated_dim();
  Matrix sum_x = Matrix::Zero(d, d);
  Matrix wsum_x = Matrix::Zero(d, d);
  Matrix sum_u = Matrix::Zero(D, D);
  Matrix wsum_u = Matrix::Zero(D, D);
  for (int i = 0; i < n; ++i) {
    const auto si = static_cast<std::size_t>(i);
    sum_x += result.inputs[si].matrix();
    wsum_x += alphas[si] * result.inputs[si].matrix();
    sum_u += result.unitaries[si].matrix();
    wsum_u += alphas[si] * result.unitaries[si].matrix();
  }
  DilationBoundReport rep;
  rep.n = n;
  rep.tolerance = tolerance;
  rep.sum_x_norm = op_norm(DenseOperator(std::move(sum_x)));
  rep.sum_u_norm = op_norm(DenseOperator(std::move(sum_u)));
  rep.weighted_x_norm = op_norm(DenseOperator(std::move(wsum_x)));
  rep.weighted_u_norm = op_norm(DenseOperator(std::move(wsum_u)));
  rep.sum_bound = closedform::leinert_norm(n).value;
  rep.weighted_bound = n >= 2 ? 2.0 * std::sqrt(1.0 - 1.0 / n) : 1.0;
  rep.sum_x_ok = rep.sum_x_norm <= rep.sum_bound + tolerance;
  rep.sum_u_ok = rep.sum_u_norm <= rep.sum_bound + tolerance;
  rep.weighted_ok = rep.weighted_x_norm <= rep.weighted_bound + tolerance;
  rep.compression_ok = rep.weighted_x_norm <= rep.weighted_u_norm + 1e-8;
  return rep;
}

// ---------------------------------------------------------------------------

Complex root_of_unity(int n) {
  return std::polar(1.0, 2.0 * std::numbers::pi / n);
}

PavingInstance PavingInstance::with_target(DenseOperator target) const {
  if (target.dim() != dim) throw std::invalid_argument("paving target dimension mismatch");
  PavingInstance copy = *this;
  copy.x = std::move(target);
  return copy;
}

PavingInstance build_paving(int n, const DenseOperator& x, const RngSpec& rng) {
  if (n < 2) throw std::invalid_argument("build_paving: n must be >= 2");
  const int d = x.dim();
  if (d % n != 0) {
    throw std::invalid_argument("build_paving: dimension " + std::to_string(d) +
                                " is not divisible by n = " + std::to_string(n));
  }
  if (op_norm(x) > 1.0 + 1e-10) {
    throw std::invalid_argument("build_paving: target is not a contraction");
  }
  PavingInstance inst;
  inst.n = n;
  inst.dim = d;
  inst.x = x;
  inst.rotation = rmt::sample_haar_unitary(d, rng);
  const Matrix& w = inst.rotation.matrix();
  const int block = d / n;
  const Complex lambda = root_of_unity(n);
  Matrix scaled = w;
  for (int j = 0; j < n; ++j) {
    const auto cols = w.middleCols(static_cast<Eigen::Index>(j) * block, block);
    inst.projections.emplace_back(Matrix(cols * cols.adjoint()));
    scaled.middleCols(static_cast<Eigen::Index>(j) * block, block) *= std::pow(lambda, j);
  }
  inst.u = DenseOperator(Matrix(scaled * w.adjoint()));
  return inst;
}

PavingMeasurement measure_paving(const PavingInstance& inst) {
  const int n = inst.n;
  const int d = inst.dim;
  const int block = d / n;
  const Matrix& x = inst.x.matrix();
  const Matrix& w = inst.rotation.matrix();

  // p_j x p_j = V_j (V_j* x V_j) V_j* with V_j the j-th column block of W.
  Matrix compressed = Matrix::Zero(d, d);
  for (int j = 0; j < n; ++j) {
    const auto v = w.middleCols(static_cast<Eigen::Index>(j) * block, block);
    const Matrix inner = v.adjoint() * x * v;
    compressed.noalias() += v * inner * v.adjoint();
  }

  Matrix averaged = x;
  Matrix power = Matrix::Identity(d, d);
  for (int i = 1; i < n; ++i) {
    power = power * inst.u.matrix();
    averaged.noalias() += power * x * power.adjoint();
  }
  averaged /= static_cast<double>(n);

  PavingMeasurement m;
  m.identity_residual = (compressed - averaged).norm();
  if (m.identity_residual > 1e-6) {
    throw AssertionFailure("paving averaging identity violated: residual " +
                           std::to_string(m.identity_residual));
  }
  m.norm = op_norm(DenseOperator(std::move(compressed)));
  m.averaged_norm = op_norm(DenseOperator(std::move(averaged)));
  return m;
}

double paving_norm(const PavingInstance& inst) { return measure_paving(inst).norm; }

rmt::LFreeDefect orbit_lfree_check(const PavingInstance& inst, int max_len) {
  std::vector<DenseOperator> orbit{inst.x};
  Matrix power = Matrix::Identity(inst.dim, inst.dim);
  for (int i = 1; i < inst.n; ++i) {
    power = power * inst.u.matrix();
    orbit.emplace_back(Matrix(power * inst.x.matrix() * power.adjoint()));
  }
  return rmt::lfree_defect(orbit, max_len, rmt::DuplicatePolicy::index_distinct);
}

SharpnessReport sharpness_experiment(int n, std::span<const double> traces, int d,
                                     const RngSpec& rng) {
  if (n < 2 || traces.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("sharpness: need n >= 2 traces");
  }
  if (d % 2 != 0) throw std::invalid_argument("sharpness: dimension must be even");
  std::vector<int> ranks;
  int total = 0;
  double trace_sum = 0;
  for (double t : traces) {
    const double scaled = t * d;
    const long r = std::lround(scaled);
    if (std::abs(scaled - static_cast<double>(r)) > 1e-9 || r < 1) {
      throw std::invalid_argument("sharpness: trace * d must be a positive integer");
    }
    ranks.push_back(static_cast<int>(r));
    total += static_cast<int>(r);
    trace_sum += t;
  }
  if (total != d || std::abs(trace_sum - 1.0) > 1e-12) {
    throw std::invalid_argument("sharpness: traces must sum to 1");
  }

  auto engine = rmt::make_engine(rng);
  const DenseOperator v = trace_zero_symmetry(d, engine);
  const DenseOperator w = rmt::sample_haar_unitary(d, engine);

  SharpnessReport rep;
  rep.n = n;
  rep.dim = d;
  rep.traces.assign(traces.begin(), traces.end());
  rep.bound = closedform::paving_norm_bound(n).bound;
  rep.equal_traces = std::all_of(ranks.begin(), ranks.end(),
                                 [&](int r) { return r == ranks.front(); });
  Matrix sum = Matrix::Zero(d, d);
  Eigen::Index offset = 0;
  for (int i = 0; i < n; ++i) {
    const int r = ranks[static_cast<std::size_t>(i)];
    const auto cols = w.matrix().middleCols(offset, r);
    offset += r;
    const Matrix inner = cols.adjoint() * v.matrix() * cols;
    // ||p v p|| = ||V* v V|| since V is an isometry onto the range of p.
    rep.block_norms.push_back(op_norm(DenseOperator(inner)));
    rep.block_targets.push_back(closedform::qvq_norm(traces[static_cast<std::size_t>(i)]));
    sum.noalias() += cols * inner * cols.adjoint();
  }
  rep.paving_norm = op_norm(DenseOperator(std::move(sum)));
  return rep;
}

// ---------------------------------------------------------------------------

DenseOperator random_contraction(int d, rmt::Engine& engine) {
  std::uniform_real_distribution<double> radius(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<Complex> diag;
  diag.reserve(static_cast<std::size_t>(d));
  while (static_cast<int>(diag.size()) + 1 < d) {
    const Complex z = std::polar(radius(engine), angle(engine));
    diag.push_back(z);
    diag.push_back(-z);
  }
  if (static_cast<int>(diag.size()) < d) diag.emplace_back(0.0);
  return rmt::rotate_diagonal(diag, engine);
}

DenseOperator trace_zero_symmetry(int d, rmt::Engine& engine) {
  if (d % 2 != 0) throw std::invalid_argument("trace-zero symmetry needs even dimension");
  std::vector<Complex> diag(static_cast<std::size_t>(d), Complex(1.0));
  for (int i = d / 2; i < d; ++i) diag[static_cast<std::size_t>(i)] = Complex(-1.0);
  return rmt::rotate_diagonal(diag, engine);
}

}  // namespace lfree::constructions
