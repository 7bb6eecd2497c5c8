#pragma once

// Closed intervals with rational endpoints, for certified sign decisions
// about real algebraic quantities, and exact complex rationals.

#include <algorithm>
#include <string>
#include <utility>

#include <mpfr.h>

#include "cma/arith/bigint.hpp"

namespace cma {

class RationalInterval {
 public:
  RationalInterval() = default;
  explicit RationalInterval(const BigRat& v) : lo_(v), hi_(v) {}
  RationalInterval(BigRat lo, BigRat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (hi_ < lo_) throw InvalidArgument("exact_arith", "interval with lo > hi");
  }

  const BigRat& lo() const { return lo_; }
  const BigRat& hi() const { return hi_; }
  BigRat width() const { return hi_ - lo_; }
  BigRat midpoint() const { return (lo_ + hi_) / 2; }
  bool contains(const BigRat& v) const { return lo_ <= v && v <= hi_; }
  bool contains_zero() const { return contains(BigRat(0)); }
  bool positive() const { return lo_ > 0; }
  bool negative() const { return hi_ < 0; }

  friend RationalInterval operator+(const RationalInterval& a, const RationalInterval& b) {
    return {a.lo_ + b.lo_, a.hi_ + b.hi_};
  }
  friend RationalInterval operator-(const RationalInterval& a, const RationalInterval& b) {
    return {a.lo_ - b.hi_, a.hi_ - b.lo_};
  }
  RationalInterval operator-() const { return {-hi_, -lo_}; }
  friend RationalInterval operator*(const RationalInterval& a, const RationalInterval& b) {
    BigRat c[4] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
    return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
  }
  RationalInterval& operator+=(const RationalInterval& o) { return *this = *this + o; }
  RationalInterval& operator*=(const RationalInterval& o) { return *this = *this * o; }

  /// Outward rounding of both endpoints to multiples of 2^-bits.
  RationalInterval rounded_outward(unsigned bits) const {
    BigInt scale = BigInt(1) << bits;
    return {make_rat(floor_rat(lo_ * scale), scale), make_rat(ceil_rat(hi_ * scale), scale)};
  }

  std::string str() const { return "[" + to_string(lo_) + ", " + to_string(hi_) + "]"; }

 private:
  BigRat lo_ = 0, hi_ = 0;
};

namespace detail {

/// RAII holder for an MPFR number.
class MpfrValue {
 public:
  explicit MpfrValue(unsigned bits) { mpfr_init2(v_, static_cast<mpfr_prec_t>(bits)); }
  ~MpfrValue() { mpfr_clear(v_); }
  MpfrValue(const MpfrValue&) = delete;
  MpfrValue& operator=(const MpfrValue&) = delete;
  mpfr_ptr get() { return v_; }

  /// Exact value as a rational (MPFR numbers are dyadic).
  BigRat to_rational() {
    if (!mpfr_number_p(v_)) throw InvalidArgument("exact_arith", "non-finite MPFR value");
    if (mpfr_zero_p(v_)) return 0;
    BigInt m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v_);
    if (e >= 0) return BigRat(m << static_cast<unsigned long>(e));
    return make_rat(m, BigInt(1) << static_cast<unsigned long>(-e));
  }

 private:
  mpfr_t v_;
};

inline BigRat log_bound(const BigRat& x, unsigned bits, bool upper) {
  const mpfr_rnd_t rnd = upper ? MPFR_RNDU : MPFR_RNDD;
  MpfrValue v(bits);
  mpfr_set_q(v.get(), x.get_mpq_t(), rnd);
  mpfr_log(v.get(), v.get(), rnd);
  return v.to_rational();
}

}  // namespace detail

/// Certified enclosure of log(x) for x inside a strictly positive interval.
inline RationalInterval log_interval(const RationalInterval& x, unsigned bits) {
  if (!x.positive()) throw InvalidArgument("exact_arith", "log of an interval touching zero");
  return {detail::log_bound(x.lo(), bits, false), detail::log_bound(x.hi(), bits, true)};
}

/// Enclosure of log(p) for a positive integer p.
inline RationalInterval log_interval(const BigInt& p, unsigned bits) {
  return log_interval(RationalInterval(BigRat(p)), bits);
}

/// Exact complex rational.
struct ComplexQ {
  BigRat re = 0, im = 0;

  ComplexQ() = default;
  ComplexQ(BigRat r, BigRat i = 0) : re(std::move(r)), im(std::move(i)) {}
  ComplexQ(const BigInt& r) : re(r) {}
  ComplexQ(int r) : re(r) {}

  BigRat norm_sq() const { return re * re + im * im; }
  ComplexQ conj() const { return {re, -im}; }

  friend ComplexQ operator+(const ComplexQ& a, const ComplexQ& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexQ operator-(const ComplexQ& a, const ComplexQ& b) {
    return {a.re - b.re, a.im - b.im};
  }
  ComplexQ operator-() const { return {-re, -im}; }
  friend ComplexQ operator*(const ComplexQ& a, const ComplexQ& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend ComplexQ operator/(const ComplexQ& a, const ComplexQ& b) {
    BigRat d = b.norm_sq();
    if (d == 0) throw InvalidArgument("exact_arith", "complex division by zero");
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  ComplexQ& operator+=(const ComplexQ& o) { return *this = *this + o; }
  ComplexQ& operator*=(const ComplexQ& o) { return *this = *this * o; }
  friend bool operator==(const ComplexQ& a, const ComplexQ& b) {
    return a.re == b.re && a.im == b.im;
  }

  ComplexQ rounded(unsigned bits) const { return {round_dyadic(re, bits), round_dyadic(im, bits)}; }
};

}  // namespace cma
