#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "folia/rational_util.hpp"

namespace folia {

// Shared, immutable data of the field Q(zeta_m): the m-th cyclotomic
// polynomial, the power basis 1, zeta, ..., zeta^{phi(m)-1}, and a table of
// all reduced powers zeta^t, 0 <= t < m.  Instances are cached per conductor;
// once built they are never mutated, so values can share them across threads.
class CycloField {
  public:
    static std::shared_ptr<const CycloField> get(unsigned conductor);

    unsigned conductor() const { return m_; }
    unsigned degree() const { return degree_; }

    // x^t mod Phi_m as integer coordinates in the power basis, 0 <= t < m.
    const std::vector<mpz_class>& power(unsigned t) const { return powers_[t % m_]; }

    // Phi_m, monic, integer coefficients, index = degree.
    const std::vector<mpz_class>& minpoly() const { return minpoly_; }

  private:
    explicit CycloField(unsigned m);

    unsigned m_;
    unsigned degree_;
    std::vector<mpz_class> minpoly_;
    std::vector<std::vector<mpz_class>> powers_;
};

// One element of a cyclotomic field (or a plain rational when no field is
// attached).  Coordinates are exact rationals in the power basis.  Values are
// immutable in spirit: every operation returns a fresh value.
//
// Mixed-conductor arithmetic promotes both operands into Q(zeta_lcm); the
// session conductor chosen at input-parsing time makes this a no-op in
// practice.
class Cyclo {
  public:
    static constexpr bool is_exact = true;

    Cyclo() : c_(1, mpq_class(0)) {}
    Cyclo(long v) : c_(1, mpq_class(v)) {}
    Cyclo(const mpz_class& v) : c_(1, mpq_class(v)) {}
    Cyclo(const mpq_class& v) : c_(1, v) {}
    Cyclo(std::shared_ptr<const CycloField> f, std::vector<mpq_class> coords);

    // zeta_n^j, living in Q(zeta_m); requires n | m.  When n is not 1, 2 or 4
    // the working conductor is expected to be a multiple of lcm(n, 4) so that
    // the imaginary unit is available alongside; see working_conductor().
    static Cyclo root_of_unity(std::shared_ptr<const CycloField> f, unsigned n, long j);

    // The conductor actually used for requested root-of-unity order n:
    // n itself when n divides 4, otherwise lcm(n, 4) (adjoins i).
    static unsigned working_conductor(unsigned n) {
        return (4 % n == 0) ? n : lcm_u(n, 4);
    }

    const std::shared_ptr<const CycloField>& field() const { return field_; }
    unsigned conductor() const { return field_ ? field_->conductor() : 1; }

    bool is_zero() const;
    bool is_rational() const;
    // Rational value; throws when the element has a nonzero zeta-component.
    mpq_class rational() const;

    Cyclo operator-() const;
    Cyclo& operator+=(const Cyclo& o) { *this = *this + o; return *this; }
    Cyclo& operator-=(const Cyclo& o) { *this = *this - o; return *this; }
    Cyclo& operator*=(const Cyclo& o) { *this = *this * o; return *this; }

    friend Cyclo operator+(const Cyclo& a, const Cyclo& b);
    friend Cyclo operator-(const Cyclo& a, const Cyclo& b);
    friend Cyclo operator*(const Cyclo& a, const Cyclo& b);
    friend Cyclo operator/(const Cyclo& a, const Cyclo& b) { return a * b.inverse(); }
    friend bool operator==(const Cyclo& a, const Cyclo& b);
    friend bool operator!=(const Cyclo& a, const Cyclo& b) { return !(a == b); }

    Cyclo inverse() const;
    Cyclo conj() const;  // complex conjugation: zeta -> zeta^{-1}
    Cyclo pow(long e) const;

    bool is_unit_modulus() const { return (*this * conj()) == Cyclo(1); }

    // Smallest q >= 1 with a^q = 1, or 0 when a is not a root of unity.
    unsigned multiplicative_order() const;

    // Searches for y in the field with y^k = this, assuming the value has the
    // shape rational * zeta^j.  Returns nullopt when no such root lies in the
    // field.
    std::optional<Cyclo> kth_root(unsigned k) const;

    // Power-basis coordinates, padded to the field degree.
    const std::vector<mpq_class>& coords() const { return c_; }

    Cyclo promoted(const std::shared_ptr<const CycloField>& f) const;

    std::string str() const;

  private:
    static void align(Cyclo& a, Cyclo& b);
    void reduce(std::vector<mpq_class>& raw) const;

    std::shared_ptr<const CycloField> field_;  // nullptr: plain rational
    std::vector<mpq_class> c_;
};

inline Cyclo operator*(const mpq_class& a, const Cyclo& b) { return Cyclo(a) * b; }

std::string to_string(const Cyclo& a);

}  // namespace folia
