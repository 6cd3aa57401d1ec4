#pragma once

#include <complex>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace lfree {

/// Exact complex number with rational real and imaginary parts.
struct GaussianRational {
  mpq_class re{0};
  mpq_class im{0};

  GaussianRational() = default;
  GaussianRational(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }
  GaussianRational(long r) : re(r), im(0) {}

  /// Every finite double is a dyadic rational, so this is exact.
  static GaussianRational from_complex(std::complex<double> z);

  /// Accepts "3", "-2/5", "0.25", "i", "-i", "1/2+3/4i", "2-i".
  static GaussianRational parse(std::string_view text);

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }

  GaussianRational conj() const { return {re, -im}; }
  mpq_class norm() const { return re * re + im * im; }  // |z|^2
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) {
    return a += b;
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }

  std::string to_string() const;
};

}  // namespace lfree
