#pragma once

#include <stdexcept>
#include <vector>

#include "folia/power_series.hpp"

namespace folia {

// f'(0) != 1 / largest k with f(z) = z + o(z^k) / coincides with z through
// the whole truncation.  Verdicts are truncation-certified and the identity
// case is never conflated with the exact identity.
struct TangencyVerdict {
    enum class Kind { not_tangent, tangent, identity_to_order };
    Kind kind;
    int order = 0;  // meaningful for `tangent`: f in Diff_k, k = order

    bool is_identity() const { return kind == Kind::identity_to_order; }
    bool tangent_at_least(int k) const {
        return kind == Kind::identity_to_order || (kind == Kind::tangent && order >= k);
    }
};

// A truncated formal diffeomorphism of (C,0): series with zero constant term
// and invertible linear coefficient.
template <class K>
class GermDiffeo {
  public:
    GermDiffeo() : s_(PowerSeries<K>::identity(1)) {}
    explicit GermDiffeo(PowerSeries<K> s) : s_(std::move(s)) {
        if (!s_.coeff(0).is_zero())
            throw std::invalid_argument("GermDiffeo: nonzero constant term");
        if (s_.coeff(1).is_zero())
            throw std::invalid_argument("GermDiffeo: zero linear coefficient");
    }
    static GermDiffeo identity(int trunc) { return GermDiffeo(PowerSeries<K>::identity(trunc)); }
    static GermDiffeo linear(K a, int trunc) {
        return GermDiffeo(PowerSeries<K>::monomial(std::move(a), 1, trunc));
    }

    const PowerSeries<K>& series() const { return s_; }
    int trunc_order() const { return s_.trunc_order(); }
    K linear_part() const { return s_.coeff(1); }

    GermDiffeo compose(const GermDiffeo& g) const {
        return GermDiffeo(s_.compose(g.s_));
    }
    GermDiffeo inverse() const { return GermDiffeo(s_.comp_inverse()); }

    GermDiffeo iterate(long n) const {
        if (n < 0) return inverse().iterate(-n);
        GermDiffeo acc = identity(trunc_order());
        for (long i = 0; i < n; ++i) acc = acc.compose(*this);
        return acc;
    }

    GermDiffeo truncated(int trunc) const { return GermDiffeo(s_.truncated(trunc)); }

    bool is_identity() const { return tangency().is_identity(); }

    TangencyVerdict tangency() const {
        if (s_.coeff(1) != K(1)) return {TangencyVerdict::Kind::not_tangent, 0};
        PowerSeries<K> d = s_ - PowerSeries<K>::identity(s_.trunc_order());
        int v = d.valuation();
        if (v > s_.trunc_order()) return {TangencyVerdict::Kind::identity_to_order, s_.trunc_order()};
        return {TangencyVerdict::Kind::tangent, v - 1};
    }

    friend bool operator==(const GermDiffeo& a, const GermDiffeo& b) { return a.s_ == b.s_; }
    friend bool operator!=(const GermDiffeo& a, const GermDiffeo& b) { return !(a == b); }

    std::string str() const { return s_.str(); }

  private:
    PowerSeries<K> s_;
};

template <class K>
GermDiffeo<K> commutator(const GermDiffeo<K>& f, const GermDiffeo<K>& g) {
    return f.compose(g).compose(f.inverse()).compose(g.inverse());
}

template <class K>
GermDiffeo<K> conjugate(const GermDiffeo<K>& h, const GermDiffeo<K>& f) {
    // h^{-1} o f o h
    return h.inverse().compose(f).compose(h);
}

// A truncated vector field a(z) d/dz with a(0) = 0.
template <class K>
class VectorFieldGerm {
  public:
    VectorFieldGerm() : s_(1) {}
    explicit VectorFieldGerm(PowerSeries<K> s) : s_(std::move(s)) {
        if (!s_.coeff(0).is_zero())
            throw std::invalid_argument("VectorFieldGerm: does not vanish at 0");
    }
    static VectorFieldGerm zero(int trunc) { return VectorFieldGerm(PowerSeries<K>(trunc)); }

    const PowerSeries<K>& series() const { return s_; }
    int trunc_order() const { return s_.trunc_order(); }
    bool is_zero() const { return s_.is_zero(); }
    int valuation() const { return s_.valuation(); }

    friend VectorFieldGerm operator+(const VectorFieldGerm& a, const VectorFieldGerm& b) {
        return VectorFieldGerm(a.s_ + b.s_);
    }
    friend VectorFieldGerm operator*(const K& t, const VectorFieldGerm& a) {
        return VectorFieldGerm(t * a.s_);
    }
    friend bool operator==(const VectorFieldGerm& a, const VectorFieldGerm& b) {
        return a.s_ == b.s_;
    }
    friend bool operator!=(const VectorFieldGerm& a, const VectorFieldGerm& b) {
        return !(a == b);
    }

  private:
    PowerSeries<K> s_;
};

// v_{k,lambda} = z^{k+1} / (1 + lambda z^k) d/dz, truncated.
template <class K>
VectorFieldGerm<K> make_v(int k, const K& lambda, int trunc) {
    if (k < 1) throw std::invalid_argument("make_v: k must be >= 1");
    PowerSeries<K> denom = PowerSeries<K>::constant(K(1), trunc) +
                           PowerSeries<K>::monomial(lambda, k, trunc);
    return VectorFieldGerm<K>(denom.reciprocal().shifted(k + 1));
}

namespace detail {

// derivative without dropping the truncation order; the top slot is padded
// with zero and is only consumed by products against series of valuation >= 1
template <class K>
PowerSeries<K> derivative_padded(const PowerSeries<K>& f) {
    int n = f.trunc_order();
    std::vector<K> c(n + 1, K(0));
    for (int j = 1; j <= n; ++j) c[j - 1] = K(j) * f.coeff(j);
    return PowerSeries<K>(std::move(c));
}

template <class K>
double magnitude_estimate(const PowerSeries<K>& f) {
    if constexpr (K::is_exact) {
        return f.is_zero() ? 0.0 : 1.0;
    } else {
        double m = 0;
        for (const auto& c : f.coeffs()) {
            double d = c.abs2().template convert_to<double>();
            if (d > m) m = d;
        }
        return m;
    }
}

}  // namespace detail

// Time-t flow of dz/dt = v(z), computed as the Lie series
//   exp(t v) z = sum_m t^m/m! v^m(z).
// With v'(0) = 0 the series terminates exactly within the truncation.  A
// nonzero linear part exp(t v'(0)) generally leaves an exact coefficient
// field, so that case is restricted to the inexact backend.
template <class K>
GermDiffeo<K> exp_field(const VectorFieldGerm<K>& v, const K& t) {
    const PowerSeries<K>& a = v.series();
    int n = a.trunc_order();
    if (K::is_exact && !a.coeff(1).is_zero() && !t.is_zero())
        throw std::domain_error(
            "exp_field: nonzero linear part of the field requires the bigfloat backend "
            "(exp(t v'(0)) is not representable exactly)");
    PowerSeries<K> flow = PowerSeries<K>::identity(n);
    if (t.is_zero() || v.is_zero()) return GermDiffeo<K>(flow);
    PowerSeries<K> term = flow;  // v^0(z) = z
    K tpow(1);
    mpz_class fact(1);
    const int cap = K::is_exact ? n + 2 : std::max(64, 8 * n);
    for (int m = 1; m <= cap; ++m) {
        term = a * detail::derivative_padded(term);
        tpow = tpow * t;
        fact *= m;
        PowerSeries<K> contrib = (tpow / K(fact)) * term;
        flow = flow + contrib;
        if constexpr (K::is_exact) {
            if (term.is_zero()) break;
        } else {
            if (detail::magnitude_estimate(contrib) == 0.0) break;
        }
    }
    return GermDiffeo<K>(flow);
}

// Unique v with exp_field(v, 1) = f to the truncation order, for f tangent to
// the identity.  Solved order by order: appending c z^n to v shifts the flow
// at order n by exactly c and leaves lower orders unchanged.
template <class K>
VectorFieldGerm<K> log_germ(const GermDiffeo<K>& f) {
    if (!f.tangency().tangent_at_least(1))
        throw std::invalid_argument("log_germ: germ is not tangent to the identity");
    int n = f.trunc_order();
    PowerSeries<K> v(n);
    for (int m = 2; m <= n; ++m) {
        GermDiffeo<K> e = exp_field(VectorFieldGerm<K>(v), K(1));
        K c = f.series().coeff(m) - e.series().coeff(m);
        if (!c.is_zero()) v = v.with_coeff(m, v.coeff(m) + c);
    }
    return VectorFieldGerm<K>(v);
}

// The k leading coefficients of a germ; linear coefficient is nonzero.
template <class K>
struct JetElement {
    int order;
    std::vector<K> coeffs;  // coeffs[0] = linear part

    static JetElement from_germ(const GermDiffeo<K>& f, int k) {
        if (k < 1 || k > f.trunc_order())
            throw std::invalid_argument("JetElement: order outside truncation");
        std::vector<K> c;
        for (int j = 1; j <= k; ++j) c.push_back(f.series().coeff(j));
        return JetElement{k, std::move(c)};
    }
    K linear_part() const { return coeffs.at(0); }
};

// Conjugation action of a k-jet with linear part lambda on the fiber C of the
// jet exact sequence: a -> lambda^{-k} a.
template <class K>
K jet_adjoint_linear(const JetElement<K>& g, const K& a) {
    if (g.linear_part().is_zero())
        throw std::invalid_argument("jet_adjoint_linear: zero linear part");
    return g.linear_part().pow(-(long)g.order) * a;
}

// Conjugation action on the fiber C^{nu+1}: the vector (b_{k+1},...,b_{k+nu+1})
// keeps all slots but the last, which picks up (nu-k) a_{nu+1} b; the acted
// slot couples to the first vector entry (fixed convention, the displayed
// index is ambiguous in isolation).
template <class K>
std::vector<K> jet_adjoint_tangent(int nu, int k, const K& a_nu1, std::vector<K> b) {
    if (b.empty()) throw std::invalid_argument("jet_adjoint_tangent: empty vector");
    b.back() += K(nu - k) * a_nu1 * b.front();
    return b;
}

}  // namespace folia
