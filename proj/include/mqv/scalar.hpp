#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace mqv {

using Rational = mpq_class;
using Complex = std::complex<double>;

/// Element of Q(i) with arbitrary-precision rational parts.
class GaussRational {
 public:
  GaussRational() = default;
  GaussRational(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  GaussRational(const Rational& re) : re_(re) {}  // NOLINT
  GaussRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }
  static GaussRational fraction(long num, long den) { return GaussRational(Rational(num, den), Rational(0)); }
  static GaussRational imag_unit() { return GaussRational(Rational(0), Rational(1)); }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussRational conj() const { return GaussRational(re_, -im_); }
  /// |z|^2 as a rational.
  Rational norm2() const { return re_ * re_ + im_ * im_; }
  GaussRational inverse() const;
  /// Integer power; negative exponents invert. Throws on 0^negative.
  GaussRational pow(long exponent) const;

  /// Rough bit-size used for pivot selection.
  std::size_t height() const;
  /// max(|re|, |im|)
  Rational max_abs() const;

  Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }

  /// Canonical serialization "p/q+r/s*i" in lowest terms.
  std::string to_string() const;
  /// Accepts "p", "p/q", "p/q+r/s*i", "p/q-r/s*i", "r/s*i", "i", "-i".
  static GaussRational parse(std::string_view text);

  GaussRational& operator+=(const GaussRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussRational& operator*=(const GaussRational& o);
  GaussRational& operator/=(const GaussRational& o);

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  friend GaussRational operator-(const GaussRational& a) { return GaussRational(-a.re_, -a.im_); }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }

 private:
  Rational re_{0};
  Rational im_{0};
};

std::string rational_to_string(const Rational& r);
Rational parse_rational(std::string_view text);
/// p/q in lowest terms (mpq_class(p, q) alone does not canonicalize).
Rational ratio(long p, long q);

/// Compile-time description of the two scalar modes.
template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<GaussRational> {
  static constexpr bool exact = true;
  static constexpr const char* mode_name = "exact";
  static GaussRational zero() { return {}; }
  static GaussRational one() { return GaussRational(1L); }
  static bool is_zero(const GaussRational& v) { return v.is_zero(); }
  static double magnitude(const GaussRational& v) { return std::abs(v.to_complex()); }
};

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static constexpr const char* mode_name = "float";
  static Complex zero() { return {0.0, 0.0}; }
  static Complex one() { return {1.0, 0.0}; }
  static bool is_zero(const Complex& v) { return v == Complex{}; }
  static double magnitude(const Complex& v) { return std::abs(v); }
};

template <typename T>
concept ExactScalar = ScalarTraits<T>::exact;

}  // namespace mqv
