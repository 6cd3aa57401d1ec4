#pragma once

// Trace moments tau((L*L)^m) of convolution operators L = sum c_i lambda(g_i)
// on free products of cyclic groups, and the certified norm lower bounds
// tau((L*L)^m)^(1/2m) <= ||L||.

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "lfree/gaussian.hpp"
#include "lfree/words.hpp"

namespace lfree::moments {

struct Term {
  GaussianRational coefficient;
  words::ReducedWord word;

  bool operator==(const Term&) const = default;
};

/// Finitely supported element of the group algebra. Terms on the same word
/// are merged and zero coefficients dropped on construction.
class Convolver {
 public:
  Convolver(words::GroupPresentation pres, std::vector<Term> terms);

  /// Coefficient 1 on each word.
  static Convolver indicator(const words::GroupPresentation& pres,
                             const std::vector<words::ReducedWord>& support);

  const words::GroupPresentation& presentation() const { return pres_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t support_size() const { return terms_.size(); }

  bool operator==(const Convolver&) const = default;

 private:
  words::GroupPresentation pres_;
  std::vector<Term> terms_;  // sorted by word
};

Convolver adjoint(const Convolver& L);

/// sum_{i=1}^k lambda(h_i) + lambda(h_i^-1) on F_k.
Convolver kesten_laplacian(int k);

using ExactState =
    std::unordered_map<words::ReducedWord, GaussianRational, words::WordHash>;
using FloatState = std::unordered_map<words::ReducedWord, std::complex<long double>,
                                      words::WordHash>;

ExactState delta_identity();

/// Left convolution: (L f)(w) = sum_i c_i f(g_i^-1 w).
ExactState apply(const Convolver& L, const ExactState& state);
FloatState apply(const Convolver& L, const FloatState& state);

enum class Arithmetic { exact, floating };

struct MomentOptions {
  std::size_t support_cap = 10'000'000;
  Arithmetic arithmetic = Arithmetic::exact;
  /// Use the radial recursion for Laplacian-type convolvers on F_k.
  bool allow_radial = true;
};

class SupportCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MomentRecord {
  int m = 0;
  bool exact = true;
  std::optional<mpq_class> exact_value;
  long double float_value = 0;
  double lower_bound = 0;
  /// "sparse" (word-state propagation) or "radial" (tree recursion).
  std::string engine;

  /// Exact fraction when available, otherwise a decimal rendering.
  std::string value_string() const;
};

MomentRecord moment(const Convolver& L, int m, const MomentOptions& opts = {});

/// Moments for m = 1..max_m from one propagation.
std::vector<MomentRecord> moment_sequence(const Convolver& L, int max_m,
                                          const MomentOptions& opts = {});

double norm_lower_bound(const Convolver& L, int m, const MomentOptions& opts = {});

/// Running maximum of the lower bounds; each entry is itself a valid bound.
std::vector<double> running_max_bounds(const std::vector<MomentRecord>& records);

/// True when L = c * (sum over all 2k letters of F_k) for a single c.
bool is_radial(const Convolver& L);

}  // namespace lfree::moments
