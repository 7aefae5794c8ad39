#pragma once

#include <gmpxx.h>

#include <complex>
#include <optional>
#include <string>
#include <string_view>

namespace forge {

using Rational = mpq_class;

/// Complex number with rational real and imaginary parts. Closed under
/// + - * / and conjugation, so every identity the constructions rely on
/// can be checked with ==.
class GaussianRational {
 public:
  GaussianRational() : re_(0), im_(0) {}
  GaussianRational(long re, long im = 0) : re_(re), im_(im) {}
  GaussianRational(const Rational& re, const Rational& im = Rational(0)) : re_(re), im_(im) {
    re_.canonicalize();
    im_.canonicalize();
  }

  const Rational& real() const noexcept { return re_; }
  const Rational& imag() const noexcept { return im_; }
  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational re = re_ * o.re_ - im_ * o.im_;
    Rational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return GaussianRational(Rational(-a.re_), Rational(-a.im_)); }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

 private:
  Rational re_;
  Rational im_;
};

inline GaussianRational conj(const GaussianRational& z) { return GaussianRational(z.real(), Rational(-z.imag())); }

/// Squared modulus |z|^2 (exact).
inline Rational norm(const GaussianRational& z) { return Rational(z.real() * z.real() + z.imag() * z.imag()); }

inline std::complex<double> to_complex(const GaussianRational& z) { return {z.real().get_d(), z.imag().get_d()}; }
inline std::complex<double> to_complex(const std::complex<double>& z) { return z; }

/// "p/q" or "p" in lowest terms.
std::string to_string(const Rational& q);
std::string to_string(const GaussianRational& z);

/// Parses "p", "-p", "p/q". Returns nullopt for anything else (decimals included).
std::optional<Rational> parse_rational(std::string_view text);

/// A complex literal from the command line or a JSON file: "3", "-1/2",
/// "2i", "-i", "1/2-3/4i", "0.25+1.5i". `exact` is set when both parts are
/// rational literals.
struct ParsedComplex {
  bool exact = false;
  GaussianRational exact_value;
  std::complex<double> value;
};

/// Throws std::invalid_argument on malformed input.
ParsedComplex parse_complex(std::string_view text);

}  // namespace forge
