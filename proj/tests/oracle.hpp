#pragma once

// Brute-force reference implementations used only by the tests. They work
// on raw letter strings and share no code with the library.

#include <cctype>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace oracle {

/// Orders by generator symbol: 0 for Z, k for Z/k.
using Orders = std::map<char, int>;

/// Rewrites to a fixpoint: deletes "xX"/"Xx" pairs for infinite generators,
/// and for a generator of order k first rewrites X as x^(k-1), then deletes
/// runs of k copies of x. The result is the unique normal form.
inline std::string reduce(std::string s, const Orders& orders) {
  std::string expanded;
  for (char c : s) {
    const char lo = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const int k = orders.at(lo);
    if (k != 0 && c != lo) {
      expanded.append(static_cast<std::size_t>(k - 1), lo);
    } else {
      expanded.push_back(c);
    }
  }
  s = expanded;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const char a = s[i];
      const char b = s[i + 1];
      const char la = static_cast<char>(std::tolower(static_cast<unsigned char>(a)));
      if (orders.at(la) == 0 && a != b &&
          la == std::tolower(static_cast<unsigned char>(b))) {
        s.erase(i, 2);
        changed = true;
        break;
      }
      const int k = orders.at(la);
      if (k != 0 && i + static_cast<std::size_t>(k) <= s.size() &&
          s.compare(i, static_cast<std::size_t>(k), std::string(static_cast<std::size_t>(k), a)) == 0) {
        s.erase(i, static_cast<std::size_t>(k));
        changed = true;
        break;
      }
    }
  }
  return s;
}

inline std::string invert(const std::string& w, const Orders& orders) {
  std::string out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const char c = *it;
    const char lo = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    (void)orders.at(lo);
    out.push_back(c == lo ? static_cast<char>(std::toupper(lo)) : lo);
  }
  return out;
}

/// Appends letters to an already reduced word, cancelling at the seam only.
/// Equivalent to reduce(w + letters) because w is in normal form.
inline void append_reduced(std::string& w, const std::string& letters, const Orders& orders) {
  for (char c : letters) {
    const char lo = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const int k = orders.at(lo);
    if (k == 0) {
      if (!w.empty() && w.back() != c &&
          std::tolower(static_cast<unsigned char>(w.back())) == lo) {
        w.pop_back();
      } else {
        w.push_back(c);
      }
      continue;
    }
    const int copies = c == lo ? 1 : k - 1;
    for (int r = 0; r < copies; ++r) {
      std::size_t run = 0;
      while (run < w.size() && w[w.size() - 1 - run] == lo) ++run;
      if (static_cast<int>(run) == k - 1) {
        w.resize(w.size() - run);
      } else {
        w.push_back(lo);
      }
    }
  }
}

struct Gauss {
  mpq_class re{0}, im{0};
};

inline Gauss mul(const Gauss& a, const Gauss& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

/// tau((L* L)^m) for L = sum_t c_t g_t by summing over all 2m-letter index
/// sequences: conj(c_a1) c_b1 conj(c_a2) c_b2 ... [g_a1^-1 g_b1 g_a2^-1 ... = e].
/// Reduction is incremental over the prefix; coefficients are scaled to
/// Gaussian integers by a common denominator so the products stay in mpz.
inline Gauss moment(const std::vector<std::pair<Gauss, std::string>>& terms, int m,
                    const Orders& orders) {
  const int n = static_cast<int>(terms.size());
  mpz_class den = 1;
  for (const auto& t : terms) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.first.re.get_den_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.first.im.get_den_mpz_t());
  }
  std::vector<std::string> inv;
  std::vector<mpz_class> cre, cim;
  for (const auto& t : terms) {
    inv.push_back(invert(t.second, orders));
    const mpq_class re = t.first.re * den;
    const mpq_class im = t.first.im * den;
    cre.push_back(re.get_num());
    cim.push_back(im.get_num());
  }
  mpz_class total_re = 0, total_im = 0, tmp;
  const auto levels = static_cast<std::size_t>(2 * m + 1);
  std::vector<std::string> prefix(levels);
  std::vector<mpz_class> re(levels), im(levels);
  re[0] = 1;
  im[0] = 0;
  std::vector<int> idx(static_cast<std::size_t>(2 * m), 0);
  // Odometer over n^(2m) sequences with cached reduced prefixes.
  int level = 0;
  while (level >= 0) {
    const auto L = static_cast<std::size_t>(level);
    if (level == 2 * m) {
      if (prefix[L].empty()) {
        total_re += re[L];
        total_im += im[L];
      }
      --level;
      if (level >= 0) ++idx[static_cast<std::size_t>(level)];
      continue;
    }
    auto& i = idx[L];
    if (i == n) {
      i = 0;
      --level;
      if (level >= 0) ++idx[static_cast<std::size_t>(level)];
      continue;
    }
    const auto I = static_cast<std::size_t>(i);
    const bool adjoint = level % 2 == 0;
    prefix[L + 1] = prefix[L];
    append_reduced(prefix[L + 1], adjoint ? inv[I] : terms[I].second, orders);
    // (a + bi)(c + di), with d negated for the adjoint factor.
    const mpz_class& c = cre[I];
    mpz_class& out_re = re[L + 1];
    mpz_class& out_im = im[L + 1];
    mpz_mul(out_re.get_mpz_t(), re[L].get_mpz_t(), c.get_mpz_t());
    mpz_mul(tmp.get_mpz_t(), im[L].get_mpz_t(), cim[I].get_mpz_t());
    if (adjoint) out_re += tmp; else out_re -= tmp;
    mpz_mul(out_im.get_mpz_t(), im[L].get_mpz_t(), c.get_mpz_t());
    mpz_mul(tmp.get_mpz_t(), re[L].get_mpz_t(), cim[I].get_mpz_t());
    if (adjoint) out_im -= tmp; else out_im += tmp;
    ++level;
  }
  mpz_class scale;
  mpz_pow_ui(scale.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(2 * m));
  Gauss total{mpq_class(total_re, scale), mpq_class(total_im, scale)};
  total.re.canonicalize();
  total.im.canonicalize();
  return total;
}

}  // namespace oracle
