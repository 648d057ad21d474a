#include "folia/bigcomplex.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace folia {

namespace {

struct Session {
    unsigned bits = 256;
    BigComplex::Real eps{"1e-30"};
};

Session& session() {
    static Session s = [] {
        BigComplex::Real::default_precision(78);  // ~256 bits in decimal digits
        return Session{};
    }();
    return s;
}

}  // namespace

void BigComplex::configure(unsigned bits, const std::string& epsilon) {
    if (bits < 16) throw std::invalid_argument("bigfloat precision too small");
    unsigned digits = (unsigned)std::ceil(bits * 0.30103) + 2;
    Real::default_precision(digits);
    session().bits = bits;
    session().eps = Real(epsilon);
}

unsigned BigComplex::precision_bits() { return session().bits; }

BigComplex::Real BigComplex::epsilon() { return session().eps; }

bool BigComplex::is_zero() const {
    const Real e = epsilon();
    return abs(re_) <= e && abs(im_) <= e;
}

bool operator==(const BigComplex& a, const BigComplex& b) {
    return (a - b).is_zero();
}

BigComplex BigComplex::inverse() const {
    Real n = abs2();
    if (n == 0) throw std::domain_error("BigComplex: division by zero");
    return {re_ / n, -im_ / n};
}

BigComplex BigComplex::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    BigComplex base = *this, acc(1);
    unsigned long k = (unsigned long)e;
    while (k) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

BigComplex BigComplex::root_of_unity(unsigned n, long j) {
    if (n == 0) throw std::invalid_argument("root_of_unity: order 0");
    Real pi = atan(Real(1)) * 4;
    Real arg = 2 * pi * Real(j) / Real((long)n);
    return {cos(arg), sin(arg)};
}

BigComplex BigComplex::from_strings(const std::string& re, const std::string& im) {
    return {Real(re), Real(im)};
}

bool BigComplex::is_unit_modulus() const {
    return abs(abs2() - 1) <= epsilon();
}

unsigned BigComplex::multiplicative_order() const {
    if (!is_unit_modulus()) return 0;
    BigComplex one(1);
    BigComplex p = *this;
    const unsigned bound = 512;  // probe limit; beyond this treat as irrational rotation
    for (unsigned d = 1; d <= bound; ++d) {
        if (p == one) return d;
        p = p * *this;
    }
    return 0;
}

std::optional<BigComplex> BigComplex::kth_root(unsigned k) const {
    if (k == 0) return std::nullopt;
    Real r2 = abs2();
    if (r2 == 0) return BigComplex(0);
    Real r = sqrt(r2);
    Real theta = atan2(im_, re_);
    Real rr = exp(log(r) / Real((long)k));
    Real ta = theta / Real((long)k);
    return BigComplex(rr * cos(ta), rr * sin(ta));
}

std::string BigComplex::re_string() const { return re_.str(); }
std::string BigComplex::im_string() const { return im_.str(); }

std::string BigComplex::str() const {
    std::ostringstream os;
    os << "(" << re_.str(20) << "," << im_.str(20) << ")";
    return os.str();
}

std::string to_string(const BigComplex& a) { return a.str(); }

}  // namespace folia
