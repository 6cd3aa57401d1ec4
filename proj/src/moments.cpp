#include "lfree/moments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace lfree::moments {

using words::GroupPresentation;
using words::ReducedWord;

Convolver::Convolver(GroupPresentation pres, std::vector<Term> terms)
    : pres_(std::move(pres)) {
  std::map<ReducedWord, GaussianRational> merged;
  for (auto& t : terms) {
    for (const auto& s : t.word.syllables()) {
      if (s.factor < 0 || static_cast<std::size_t>(s.factor) >= pres_.size()) {
        throw std::invalid_argument("convolver word does not belong to the presentation");
      }
    }
    merged[t.word] += t.coefficient;
  }
  for (auto& [w, c] : merged) {
    if (!c.is_zero()) terms_.push_back({std::move(c), w});
  }
}

Convolver Convolver::indicator(const GroupPresentation& pres,
                               const std::vector<ReducedWord>& support) {
  std::vector<Term> terms;
  for (const auto& w : support) terms.push_back({GaussianRational(1), w});
  return Convolver(pres, std::move(terms));
}

Convolver adjoint(const Convolver& L) {
  std::vector<Term> terms;
  for (const auto& t : L.terms()) {
    terms.push_back({t.coefficient.conj(), words::inverse(t.word, L.presentation())});
  }
  return Convolver(L.presentation(), std::move(terms));
}

Convolver kesten_laplacian(int k) {
  if (k < 1) throw std::invalid_argument("Laplacian needs k >= 1");
  const auto pres = GroupPresentation::free_group(k);
  std::vector<Term> terms;
  for (int i = 0; i < k; ++i) {
    terms.push_back({GaussianRational(1), ReducedWord::generator(i, 1, pres)});
    terms.push_back({GaussianRational(1), ReducedWord::generator(i, -1, pres)});
  }
  return Convolver(pres, std::move(terms));
}

ExactState delta_identity() {
  ExactState s;
  s.emplace(ReducedWord{}, GaussianRational(1));
  return s;
}

namespace {

template <class State, class Coef>
State apply_impl(const Convolver& L, const std::vector<Coef>& coefs, const State& state,
                 std::size_t cap) {
  State out;
  out.reserve(state.size() * L.terms().size());
  const auto& pres = L.presentation();
  for (const auto& [w, value] : state) {
    for (std::size_t t = 0; t < coefs.size(); ++t) {
      // lambda(g) delta_w = delta_{g w}
      auto target = words::multiply(L.terms()[t].word, w, pres);
      auto [it, inserted] = out.try_emplace(std::move(target));
      it->second += coefs[t] * value;
      if (inserted && out.size() > cap) {
        throw SupportCapExceeded("state support exceeded cap of " + std::to_string(cap) +
                                 " words");
      }
    }
  }
  std::erase_if(out, [](const auto& kv) {
    if constexpr (std::is_same_v<State, ExactState>) {
      return kv.second.is_zero();
    } else {
      return kv.second == std::complex<long double>(0);
    }
  });
  return out;
}

std::vector<GaussianRational> exact_coefs(const Convolver& L) {
  std::vector<GaussianRational> c;
  for (const auto& t : L.terms()) c.push_back(t.coefficient);
  return c;
}

std::vector<std::complex<long double>> float_coefs(const Convolver& L) {
  std::vector<std::complex<long double>> c;
  for (const auto& t : L.terms()) {
    c.emplace_back(static_cast<long double>(t.coefficient.re.get_d()),
                   static_cast<long double>(t.coefficient.im.get_d()));
  }
  return c;
}

double log_of(const mpq_class& q) {
  long e_num = 0;
  long e_den = 0;
  const double n = mpz_get_d_2exp(&e_num, q.get_num_mpz_t());
  const double d = mpz_get_d_2exp(&e_den, q.get_den_mpz_t());
  return std::log(n) - std::log(d) + static_cast<double>(e_num - e_den) * std::log(2.0);
}

double bound_from(const MomentRecord& r) {
  if (r.exact) {
    if (sgn(*r.exact_value) <= 0) return 0.0;
    return std::exp(log_of(*r.exact_value) / (2.0 * r.m));
  }
  if (r.float_value <= 0) return 0.0;
  return static_cast<double>(std::exp(std::log(r.float_value) / (2.0L * r.m)));
}

void finish(MomentRecord& r) { r.lower_bound = bound_from(r); }

std::vector<MomentRecord> radial_sequence(const Convolver& L, int max_m, bool exact) {
  const int degree = static_cast<int>(L.terms().size());  // 2k
  const GaussianRational& c = L.terms().front().coefficient;
  const mpq_class c2 = c.norm();
  // a[r]: coefficient of any word of length r in A^j delta_e.
  std::vector<mpz_class> a{1};
  std::vector<MomentRecord> out;
  mpq_class scale = 1;
  for (int m = 1; m <= max_m; ++m) {
    // (A f)(w) = f(parent) + sum over the 2k-1 children; at e all 2k
    // neighbours are children.
    std::vector<mpz_class> per_word(a.size() + 1, 0);
    for (std::size_t r = 0; r < per_word.size(); ++r) {
      if (r == 0) {
        per_word[0] = a.size() > 1 ? degree * a[1] : mpz_class(0);
      } else {
        per_word[r] = a[r - 1] + (r + 1 < a.size() ? (degree - 1) * a[r + 1] : mpz_class(0));
      }
    }
    a = std::move(per_word);
    scale *= c2;
    mpz_class total = 0;
    mpz_class sphere = 1;  // number of words of length r
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == 1) sphere = degree;
      if (r > 1) sphere *= degree - 1;
      total += sphere * a[r] * a[r];
    }
    MomentRecord rec;
    rec.m = m;
    rec.engine = "radial";
    const mpq_class value = scale * mpq_class(total);
    if (exact) {
      rec.exact = true;
      rec.exact_value = value;
    } else {
      rec.exact = false;
      rec.float_value = static_cast<long double>(value.get_d());
      if (!std::isfinite(static_cast<double>(rec.float_value))) {
        rec.float_value = std::exp(static_cast<long double>(log_of(value)));
      }
    }
    finish(rec);
    out.push_back(std::move(rec));
  }
  return out;
}

template <class State, class Coef, class Norm>
std::vector<MomentRecord> sparse_sequence(const Convolver& L, int max_m,
                                          const MomentOptions& opts, State state,
                                          Norm&& norm_sq) {
  // tau((L*L)^m) = || B_m delta_e ||^2 with B_m = ... L* L (m factors,
  // rightmost L): B_m^* B_m = (L*L)^m for both parities of m.
  const Convolver Lstar = adjoint(L);
  const auto cL = [&] {
    if constexpr (std::is_same_v<State, ExactState>) return exact_coefs(L);
    else return float_coefs(L);
  }();
  const auto cLstar = [&] {
    if constexpr (std::is_same_v<State, ExactState>) return exact_coefs(Lstar);
    else return float_coefs(Lstar);
  }();
  std::vector<MomentRecord> out;
  for (int m = 1; m <= max_m; ++m) {
    if (m % 2 == 1) {
      state = apply_impl(L, cL, state, opts.support_cap);
    } else {
      state = apply_impl(Lstar, cLstar, state, opts.support_cap);
    }
    MomentRecord rec;
    rec.m = m;
    rec.engine = "sparse";
    norm_sq(state, rec);
    finish(rec);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

ExactState apply(const Convolver& L, const ExactState& state) {
  return apply_impl(L, exact_coefs(L), state, static_cast<std::size_t>(-1));
}

FloatState apply(const Convolver& L, const FloatState& state) {
  return apply_impl(L, float_coefs(L), state, static_cast<std::size_t>(-1));
}

bool is_radial(const Convolver& L) {
  const auto& pres = L.presentation();
  if (!pres.is_free()) return false;
  const auto k = pres.size();
  if (L.terms().size() != 2 * k) return false;
  const auto& c = L.terms().front().coefficient;
  for (const auto& t : L.terms()) {
    if (!(t.coefficient == c)) return false;
    const auto& syl = t.word.syllables();
    if (syl.size() != 1 || (syl[0].exponent != 1 && syl[0].exponent != -1)) return false;
  }
  // Terms are distinct single letters and there are 2k of them, so every
  // letter h_i^{+-1} occurs exactly once.
  return true;
}

std::vector<MomentRecord> moment_sequence(const Convolver& L, int max_m,
                                          const MomentOptions& opts) {
  if (max_m < 1) throw std::invalid_argument("moment order m must be >= 1");
  const bool exact = opts.arithmetic == Arithmetic::exact;
  if (L.terms().empty()) {
    std::vector<MomentRecord> zeros;
    for (int m = 1; m <= max_m; ++m) {
      MomentRecord r;
      r.m = m;
      r.exact = exact;
      if (exact) r.exact_value = mpq_class(0);
      r.engine = "sparse";
      zeros.push_back(std::move(r));
    }
    return zeros;
  }
  if (opts.allow_radial && is_radial(L)) {
    return radial_sequence(L, max_m, exact);
  }
  if (exact) {
    return sparse_sequence<ExactState, GaussianRational>(
        L, max_m, opts, delta_identity(), [](const ExactState& s, MomentRecord& rec) {
          mpq_class total = 0;
          for (const auto& [w, v] : s) total += v.norm();
          rec.exact = true;
          rec.exact_value = total;
        });
  }
  FloatState start;
  start.emplace(ReducedWord{}, 1.0L);
  return sparse_sequence<FloatState, std::complex<long double>>(
      L, max_m, opts, std::move(start), [](const FloatState& s, MomentRecord& rec) {
        long double total = 0;
        for (const auto& [w, v] : s) total += std::norm(v);
        rec.exact = false;
        rec.float_value = total;
      });
}

MomentRecord moment(const Convolver& L, int m, const MomentOptions& opts) {
  auto seq = moment_sequence(L, m, opts);
  return std::move(seq.back());
}

double norm_lower_bound(const Convolver& L, int m, const MomentOptions& opts) {
  return moment(L, m, opts).lower_bound;
}

std::vector<double> running_max_bounds(const std::vector<MomentRecord>& records) {
  std::vector<double> out;
  double best = 0;
  for (const auto& r : records) {
    best = std::max(best, r.lower_bound);
    out.push_back(best);
  }
  return out;
}

std::string MomentRecord::value_string() const {
  if (exact && exact_value) return exact_value->get_str();
  std::ostringstream os;
  os.precision(21);
  os << float_value;
  return os.str();
}

}  // namespace lfree::moments
