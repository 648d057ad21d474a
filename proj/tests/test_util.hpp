#pragma once

#include <random>
#include <vector>

#include "folia/cyclotomic.hpp"
#include "folia/germ.hpp"
#include "folia/power_series.hpp"

namespace folia::testutil {

// Deterministic generator for test data.
class Gen {
  public:
    explicit Gen(unsigned long seed) : rng_(seed) {}

    long integer(long lo, long hi) {
        return std::uniform_int_distribution<long>(lo, hi)(rng_);
    }

    mpq_class rational(long max_num = 6, long max_den = 4) {
        long num = integer(-max_num, max_num);
        long den = integer(1, max_den);
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    }

    mpq_class nonzero_rational(long max_num = 6, long max_den = 4) {
        for (;;) {
            mpq_class q = rational(max_num, max_den);
            if (q != 0) return q;
        }
    }

    Cyclo cyclo(long max_num = 6) { return Cyclo(rational(max_num)); }

    Cyclo cyclo_mixed(const std::shared_ptr<const CycloField>& f, long max_num = 3) {
        Cyclo v(rational(max_num));
        if (integer(0, 1))
            v += Cyclo(rational(max_num)) *
                 Cyclo::root_of_unity(f, f->conductor(), integer(0, f->conductor() - 1));
        return v;
    }

    // random series with given valuation and nonzero leading coefficient
    PowerSeries<Cyclo> series(int trunc, int valuation = 0) {
        std::vector<Cyclo> c(trunc + 1, Cyclo(0));
        for (int j = valuation; j <= trunc; ++j) c[j] = cyclo();
        if (valuation <= trunc && c[valuation].is_zero()) c[valuation] = Cyclo(1);
        return PowerSeries<Cyclo>(std::move(c));
    }

    // tangent-to-identity germ of given tangency order
    GermDiffeo<Cyclo> tangent_germ(int trunc, int order) {
        std::vector<Cyclo> c(trunc + 1, Cyclo(0));
        c[1] = Cyclo(1);
        for (int j = order + 1; j <= trunc; ++j) c[j] = cyclo(3);
        if (order + 1 <= trunc && c[order + 1].is_zero()) c[order + 1] = Cyclo(1);
        return GermDiffeo<Cyclo>(PowerSeries<Cyclo>(std::move(c)));
    }

    // germ with prescribed linear part
    GermDiffeo<Cyclo> germ_with_linear(const Cyclo& a, int trunc) {
        std::vector<Cyclo> c(trunc + 1, Cyclo(0));
        c[1] = a;
        for (int j = 2; j <= trunc; ++j) c[j] = cyclo(3);
        return GermDiffeo<Cyclo>(PowerSeries<Cyclo>(std::move(c)));
    }

    std::mt19937_64& rng() { return rng_; }

  private:
    std::mt19937_64 rng_;
};

// ---- independent oracles ---------------------------------------------------

// plain polynomial product, no truncation tricks
template <class K>
std::vector<K> naive_poly_mul(const std::vector<K>& a, const std::vector<K>& b) {
    std::vector<K> c(a.size() + b.size() - 1, K(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

// outer(inner) by explicit powers of inner, truncated at the end
template <class K>
std::vector<K> naive_substitution(const std::vector<K>& outer, const std::vector<K>& inner,
                                  int trunc) {
    std::vector<K> acc(trunc + 1, K(0));
    std::vector<K> power{K(1)};
    for (size_t j = 0; j < outer.size(); ++j) {
        for (size_t t = 0; t < power.size() && t <= (size_t)trunc; ++t)
            acc[t] += outer[j] * power[t];
        power = naive_poly_mul(power, inner);
        if (power.size() > (size_t)trunc + 1) power.resize(trunc + 1);
    }
    return acc;
}

// Lagrange inversion: g_n = (1/n) [w^{n-1}] (w / f(w))^n
template <class K>
std::vector<K> lagrange_inverse(const std::vector<K>& f, int trunc) {
    // f has f[0] = 0, f[1] != 0; (w/f) = 1 / (f/w)
    std::vector<K> fw(f.begin() + 1, f.end());
    // reciprocal of fw to order trunc
    std::vector<K> r(trunc + 1, K(0));
    K inv0 = fw[0].inverse();
    r[0] = inv0;
    for (int m = 1; m <= trunc; ++m) {
        K acc(0);
        for (int j = 1; j <= m && j < (int)fw.size(); ++j) acc += fw[j] * r[m - j];
        r[m] = -(inv0 * acc);
    }
    std::vector<K> g(trunc + 1, K(0));
    std::vector<K> rp{K(1)};
    for (int n = 1; n <= trunc; ++n) {
        rp = naive_poly_mul(rp, r);  // (w/f)^n
        if (rp.size() > (size_t)trunc + 1) rp.resize(trunc + 1);
        g[n] = K(1) / K(n) * rp[n - 1];
    }
    return g;
}

// coefficients of z (1 - c z^k)^{-1/k} through trunc: the closed-form flow of
// zdot = z^{k+1} at time c/k (generalized binomial series, exact rationals)
inline PowerSeries<Cyclo> binomial_flow(int k, const mpq_class& c, int trunc) {
    std::vector<Cyclo> out(trunc + 1, Cyclo(0));
    mpq_class coeff = 1;
    // (1 - u)^{-1/k} = sum_m binom(-1/k, m) (-u)^m, u = c z^k
    mpq_class mk(-1, k);
    mpq_class term = 1;
    for (int m = 0; 1 + m * k <= trunc; ++m) {
        if (m > 0) {
            mpq_class bin = (mk - (m - 1)) / m;
            term *= bin * (-c);
        }
        out[1 + m * k] = Cyclo(term);
    }
    return PowerSeries<Cyclo>(std::move(out));
}

}  // namespace folia::testutil
