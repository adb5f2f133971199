#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>

#include <gmpxx.h>

namespace superloop {

using Rational = mpq_class;

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);

/// Exact complex number with rational real and imaginary parts.
class ComplexRational {
public:
  ComplexRational() = default;
  ComplexRational(long re) : re_(re) {}
  ComplexRational(int re) : re_(re) {}
  ComplexRational(Rational re) : re_(std::move(re)) { re_.canonicalize(); }
  ComplexRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static ComplexRational i() { return {Rational(0), Rational(1)}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  ComplexRational conj() const { return {re_, -im_}; }
  Rational norm2() const { return re_ * re_ + im_ * im_; }
  ComplexRational inverse() const;

  ComplexRational& operator+=(const ComplexRational& o);
  ComplexRational& operator-=(const ComplexRational& o);
  ComplexRational& operator*=(const ComplexRational& o);
  ComplexRational& operator/=(const ComplexRational& o);

  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
  friend ComplexRational operator/(ComplexRational a, const ComplexRational& b) { return a /= b; }
  ComplexRational operator-() const { return {-re_, -im_}; }

  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const ComplexRational& a, const ComplexRational& b) { return !(a == b); }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }
  std::string str() const;

private:
  Rational re_{0};
  Rational im_{0};
};

std::ostream& operator<<(std::ostream& os, const ComplexRational& z);

ComplexRational pow(const ComplexRational& base, long exponent);

/// i^k for integer k.
ComplexRational i_pow(long k);

}  // namespace superloop
