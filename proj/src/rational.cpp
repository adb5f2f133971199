#include "superloop/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace superloop {

Rational parse_rational(const std::string& text) {
  Rational r;
  if (text.empty() || r.set_str(text, 10) != 0) {
    throw std::invalid_argument("malformed rational: '" + text + "'");
  }
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

ComplexRational ComplexRational::inverse() const {
  const Rational n = norm2();
  if (sgn(n) == 0) throw std::domain_error("division by zero complex rational");
  return {re_ / n, -im_ / n};
}

ComplexRational& ComplexRational::operator+=(const ComplexRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

ComplexRational& ComplexRational::operator-=(const ComplexRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

ComplexRational& ComplexRational::operator*=(const ComplexRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  if (sgn(o.im_) == 0) {
    re_ *= o.re_;
    im_ *= o.re_;
    return *this;
  }
  if (sgn(im_) == 0) {
    im_ = re_ * o.im_;
    re_ *= o.re_;
    return *this;
  }
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

ComplexRational& ComplexRational::operator/=(const ComplexRational& o) {
  return *this *= o.inverse();
}

std::string ComplexRational::str() const {
  if (sgn(im_) == 0) return re_.get_str();
  if (sgn(re_) == 0) return im_.get_str() + "i";
  return "(" + re_.get_str() + (sgn(im_) > 0 ? "+" : "") + im_.get_str() + "i)";
}

std::ostream& operator<<(std::ostream& os, const ComplexRational& z) { return os << z.str(); }

ComplexRational pow(const ComplexRational& base, long exponent) {
  if (exponent < 0) return pow(base.inverse(), -exponent);
  ComplexRational result(1);
  ComplexRational b = base;
  while (exponent > 0) {
    if (exponent & 1) result *= b;
    exponent >>= 1;
    if (exponent) b *= b;
  }
  return result;
}

ComplexRational i_pow(long k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1};
    case 1: return {Rational(0), Rational(1)};
    case 2: return {-1};
    default: return {Rational(0), Rational(-1)};
  }
}

}  // namespace superloop
