#include "lfree/gaussian.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace lfree {

namespace {

mpq_class parse_real(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty number");
  std::string text(s);
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    text.erase(0, 1);
  }
  if (text.empty()) throw std::invalid_argument("sign without digits");
  mpq_class value;
  if (auto dot = text.find('.'); dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("bad decimal '" + std::string(s) + "'");
    }
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, text.size() - dot - 1);
    value = mpq_class(mpz_class(digits, 10), den);
  } else {
    if (text.find_first_not_of("0123456789/") != std::string::npos ||
        text.front() == '/' || text.back() == '/') {
      throw std::invalid_argument("bad rational '" + std::string(s) + "'");
    }
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
      value = mpq_class(mpz_class(text, 10));
    } else {
      const mpz_class num(text.substr(0, slash), 10);
      const mpz_class den(text.substr(slash + 1), 10);
      if (den == 0) throw std::invalid_argument("zero denominator");
      value = mpq_class(num, den);
    }
  }
  value.canonicalize();
  return negative ? mpq_class(-value) : value;
}

}  // namespace

GaussianRational GaussianRational::from_complex(std::complex<double> z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::invalid_argument("non-finite coefficient");
  }
  mpq_class r;
  mpq_class i;
  mpq_set_d(r.get_mpq_t(), z.real());
  mpq_set_d(i.get_mpq_t(), z.imag());
  return {r, i};
}

GaussianRational GaussianRational::parse(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw std::invalid_argument("empty coefficient");
  try {
    if (s.back() != 'i') return {parse_real(s), 0};
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
      if (s[k] == '+' || s[k] == '-') {
        split = k;
        break;
      }
    }
    const std::string real_part = split == std::string::npos ? "" : s.substr(0, split);
    std::string imag_part = split == std::string::npos ? s : s.substr(split);
    if (imag_part.empty() || imag_part == "+") imag_part = "1";
    if (imag_part == "-") imag_part = "-1";
    return {real_part.empty() ? mpq_class(0) : parse_real(real_part), parse_real(imag_part)};
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("cannot parse coefficient '" + std::string(text) +
                                "': " + e.what());
  }
}

std::string GaussianRational::to_string() const {
  if (sgn(im) == 0) return re.get_str();
  std::string out;
  if (sgn(re) != 0) out = re.get_str();
  mpq_class a = abs(im);
  if (sgn(im) < 0) {
    out += "-";
  } else if (!out.empty()) {
    out += "+";
  }
  if (a != 1) out += a.get_str();
  return out + "i";
}

}  // namespace lfree
