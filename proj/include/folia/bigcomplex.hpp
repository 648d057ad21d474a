#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <gmpxx.h>

#include <optional>
#include <string>

namespace folia {

// Complex coefficient backed by a pair of MPFR floats with a session-wide
// precision.  Equality is approximate: two values are equal when they differ
// by at most the session tolerance (default 1e-30).  Configure once, before
// any value is created; values built afterwards all carry the same precision.
class BigComplex {
  public:
    using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>>;
    static constexpr bool is_exact = false;

    static void configure(unsigned bits, const std::string& epsilon = "1e-30");
    static unsigned precision_bits();
    static Real epsilon();

    BigComplex() : re_(0), im_(0) {}
    BigComplex(long v) : re_(v), im_(0) {}
    BigComplex(const mpz_class& v) : re_(v.get_str()), im_(0) {}
    BigComplex(const mpq_class& v)
        : re_(Real(v.get_num().get_str()) / Real(v.get_den().get_str())), im_(0) {}
    BigComplex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}

    static BigComplex root_of_unity(unsigned n, long j);
    static BigComplex from_strings(const std::string& re, const std::string& im);

    const Real& re() const { return re_; }
    const Real& im() const { return im_; }

    bool is_zero() const;
    bool is_rational() const { return true; }  // no exact structure to expose

    BigComplex operator-() const { return {-re_, -im_}; }
    BigComplex& operator+=(const BigComplex& o) { re_ += o.re_; im_ += o.im_; return *this; }
    BigComplex& operator-=(const BigComplex& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
    BigComplex& operator*=(const BigComplex& o) { *this = *this * o; return *this; }

    friend BigComplex operator+(BigComplex a, const BigComplex& b) { return a += b; }
    friend BigComplex operator-(BigComplex a, const BigComplex& b) { return a -= b; }
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
        return a * b.inverse();
    }
    friend bool operator==(const BigComplex& a, const BigComplex& b);
    friend bool operator!=(const BigComplex& a, const BigComplex& b) { return !(a == b); }

    BigComplex inverse() const;
    BigComplex conj() const { return {re_, -im_}; }
    BigComplex pow(long e) const;

    Real abs2() const { return re_ * re_ + im_ * im_; }
    bool is_unit_modulus() const;
    unsigned multiplicative_order() const;
    std::optional<BigComplex> kth_root(unsigned k) const;

    std::string str() const;
    std::string re_string() const;
    std::string im_string() const;

  private:
    Real re_, im_;
};

inline BigComplex operator*(const mpq_class& a, const BigComplex& b) { return BigComplex(a) * b; }

std::string to_string(const BigComplex& a);

}  // namespace folia
