#include "mqv/scalar.hpp"

#include <algorithm>
#include <cctype>

#include "mqv/errors.hpp"

namespace mqv {

GaussRational& GaussRational::operator*=(const GaussRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussRational& GaussRational::operator/=(const GaussRational& o) {
  if (o.is_zero()) throw ContractViolation("division by zero in Q(i)");
  if (sgn(o.im_) == 0) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  return *this *= o.inverse();
}

GaussRational GaussRational::inverse() const {
  if (is_zero()) throw ContractViolation("inverse of zero in Q(i)");
  if (sgn(im_) == 0) return GaussRational(Rational(1) / re_, Rational(0));
  Rational n = norm2();
  return GaussRational(re_ / n, -im_ / n);
}

GaussRational GaussRational::pow(long exponent) const {
  GaussRational base = exponent < 0 ? inverse() : *this;
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent) : static_cast<unsigned long>(exponent);
  GaussRational result(1L);
  while (e != 0) {
    if (e & 1UL) result *= base;
    e >>= 1U;
    if (e != 0) base *= base;
  }
  return result;
}

std::size_t GaussRational::height() const {
  auto bits = [](const Rational& r) {
    return mpz_sizeinbase(r.get_num_mpz_t(), 2) + mpz_sizeinbase(r.get_den_mpz_t(), 2);
  };
  return bits(re_) + bits(im_);
}

Rational GaussRational::max_abs() const {
  Rational a = abs(re_);
  Rational b = abs(im_);
  return a < b ? b : a;
}

std::string rational_to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string GaussRational::to_string() const {
  std::string out = rational_to_string(re_);
  if (sgn(im_) < 0) {
    out += "-" + rational_to_string(Rational(-im_)) + "*i";
  } else {
    out += "+" + rational_to_string(im_) + "*i";
  }
  return out;
}

namespace {

std::string strip(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s = strip(text);
  if (s.empty()) throw ContractViolation("empty rational literal");
  if (s.front() == '+') s.erase(0, 1);
  for (char c : s) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-')) {
      throw ContractViolation("malformed rational literal '" + std::string(text) + "'");
    }
  }
  Rational r;
  if (r.set_str(s, 10) != 0) throw ContractViolation("malformed rational literal '" + std::string(text) + "'");
  if (sgn(r.get_den()) == 0) throw ContractViolation("zero denominator in '" + std::string(text) + "'");
  r.canonicalize();
  return r;
}

GaussRational GaussRational::parse(std::string_view text) {
  std::string s = strip(text);
  if (s.empty()) throw ContractViolation("empty scalar literal");
  if (s.back() != 'i') return GaussRational(parse_rational(s), Rational(0));

  // Imaginary part present: find the sign that separates the real part (not at position 0).
  std::string body = s.substr(0, s.size() - 1);
  if (!body.empty() && body.back() == '*') body.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if (body[k] == '+' || body[k] == '-') {
      split = k;
      break;
    }
  }
  std::string re_part = split == std::string::npos ? "" : body.substr(0, split);
  std::string im_part = split == std::string::npos ? body : body.substr(split);
  if (im_part.empty() || im_part == "+") im_part = "1";
  if (im_part == "-") im_part = "-1";
  Rational re = re_part.empty() ? Rational(0) : parse_rational(re_part);
  return GaussRational(re, parse_rational(im_part));
}

Rational ratio(long p, long q) {
  if (q == 0) throw ContractViolation("zero denominator");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

}  // namespace mqv
