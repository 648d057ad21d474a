#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace folia {

inline mpq_class parse_rational(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("not a rational: '" + s + "'");
    q.canonicalize();
    return q;
}

inline mpz_class factorial(unsigned n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline mpz_class binomial(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// Exact integer k-th root, or nullopt when x is not a perfect k-th power.
inline std::optional<mpz_class> exact_root(const mpz_class& x, unsigned k) {
    if (k == 0) throw std::invalid_argument("exact_root: k = 0");
    if (x < 0) return std::nullopt;
    mpz_class r;
    int exact = mpz_root(r.get_mpz_t(), x.get_mpz_t(), k);
    if (!exact) return std::nullopt;
    return r;
}

inline std::optional<mpq_class> exact_root(const mpq_class& x, unsigned k) {
    auto num = exact_root(mpz_class(x.get_num()), k);
    auto den = exact_root(mpz_class(x.get_den()), k);
    if (!num || !den) return std::nullopt;
    return mpq_class(*num, *den);
}

inline unsigned gcd_u(unsigned a, unsigned b) {
    while (b) { unsigned t = a % b; a = b; b = t; }
    return a;
}

inline unsigned lcm_u(unsigned a, unsigned b) {
    if (a == 0 || b == 0) return a + b;
    return a / gcd_u(a, b) * b;
}

}  // namespace folia
