#pragma once

#include <optional>
#include <stdexcept>
#include <utility>

#include "folia/germ.hpp"

namespace folia {

// Result of reducing a germ to its formal model.  For the resonant kind the
// certified identity is
//     conjugator^{-1} o f o conjugator = a * exp(flow_time * v_{k, flow_time * lambda})
// with a^k = 1.  When the homothety normalizing the leading coefficient has a
// k-th root in the coefficient field, flow_time is 1 and the right-hand side
// is the strict model a * exp(v_{k, lambda}).  The invariants (a, k, lambda)
// never depend on that normalization.
template <class K>
struct ElementNormalForm {
    enum class Kind { linearizable, resonant };
    Kind kind;
    K a;
    int k = 0;
    K lambda{0};
    K flow_time{1};      // flow time of the certificate model
    K raw_flow_time{1};  // leading coefficient of the reduced tangent part
    GermDiffeo<K> conjugator;      // certificate conjugator (homothety applied)
    GermDiffeo<K> conjugator_raw;  // tangent-to-identity certificate, flow time = raw
    int certified_order = 0;
    bool finite_order = false;  // linearizable via a finite-order certificate
    unsigned finite_order_q = 0;

    bool is_resonant() const { return kind == Kind::resonant; }
    // lambda parameter of the model group E_{k, .} that contains the reduced
    // image of f under conjugator_raw
    K group_lambda() const { return lambda * raw_flow_time; }
};

namespace detail {

// Sequential conjugacy solve f o psi = psi o W with psi tangent to the
// identity and W = a z + (resonant orders only).  Appending e z^n to psi
// changes the two sides at order n by a*e and a^n*e respectively; appending
// w z^n to W changes the right side by exactly w.
template <class K>
std::pair<GermDiffeo<K>, PowerSeries<K>> prenormal(const GermDiffeo<K>& f, unsigned unity_order) {
    int n_max = f.trunc_order();
    K a = f.linear_part();
    PowerSeries<K> psi = PowerSeries<K>::identity(n_max);
    PowerSeries<K> w = PowerSeries<K>::monomial(a, 1, n_max);
    std::vector<K> apow(n_max + 1, K(1));
    for (int j = 1; j <= n_max; ++j) apow[j] = apow[j - 1] * a;
    for (int n = 2; n <= n_max; ++n) {
        K lhs = f.series().truncated(n).compose(psi.truncated(n)).coeff(n);
        K rhs = psi.truncated(n).compose(w.truncated(n)).coeff(n);
        K delta = lhs - rhs;
        if (delta.is_zero()) continue;
        bool resonant = unity_order > 0 && (unsigned)(n - 1) % unity_order == 0;
        if (resonant) {
            w = w.with_coeff(n, w.coeff(n) + delta);
        } else {
            psi = psi.with_coeff(n, psi.coeff(n) + delta / (apow[n] - a));
        }
    }
    return {GermDiffeo<K>(psi), w};
}

// Reduce a tangent-to-identity germ G with tangency order k to the polynomial
// form T = z + beta z^{k+1} + gamma z^{2k+1} by a tangent conjugation rho:
// G o rho = rho o T.  The homological slope at order n is (n-2k-1) beta, zero
// exactly at the modulus slot n = 2k+1.
template <class K>
struct TangentReduction {
    GermDiffeo<K> rho;
    K beta, gamma;
};

template <class K>
TangentReduction<K> reduce_tangent(const GermDiffeo<K>& g, int k) {
    int n_max = g.trunc_order();
    if (2 * k + 1 > n_max)
        throw std::invalid_argument(
            "normal form: truncation order too small to certify lambda (need N >= 2k+1 with k=" +
            std::to_string(k) + ")");
    K beta = g.series().coeff(k + 1);
    if (beta.is_zero()) throw std::logic_error("reduce_tangent: wrong tangency order");
    PowerSeries<K> rho = PowerSeries<K>::identity(n_max);
    PowerSeries<K> t = PowerSeries<K>::identity(n_max).with_coeff(k + 1, beta);
    for (int n = k + 2; n <= n_max; ++n) {
        K lhs = g.series().truncated(n).compose(rho.truncated(n)).coeff(n);
        K rhs = rho.truncated(n).compose(t.truncated(n)).coeff(n);
        K delta = lhs - rhs;
        if (delta.is_zero()) continue;
        if (n == 2 * k + 1) {
            t = t.with_coeff(n, t.coeff(n) + delta);
        } else {
            int m = n - k;
            rho = rho.with_coeff(m, rho.coeff(m) + delta / (K(n - 2 * k - 1) * beta));
        }
    }
    return {GermDiffeo<K>(rho), beta, t.coeff(2 * k + 1)};
}

template <class K>
std::optional<K> field_kth_root(const K& x, unsigned k) {
    if constexpr (K::is_exact) {
        return x.kth_root(k);
    } else {
        return x.kth_root(k);  // principal numeric root always exists
    }
}

}  // namespace detail

// Formal classification of a single germ: linearizable(a) or resonant
// (a, k, lambda), with an explicit truncated conjugator and the certified
// truncation order.
template <class K>
ElementNormalForm<K> normal_form_element(const GermDiffeo<K>& f) {
    int n_max = f.trunc_order();
    K a = f.linear_part();
    unsigned q = a.multiplicative_order();

    auto [psi, w] = detail::prenormal(f, q);
    PowerSeries<K> tangent_tail = w - PowerSeries<K>::monomial(a, 1, n_max);

    ElementNormalForm<K> out;
    out.a = a;
    out.certified_order = n_max;
    if (tangent_tail.is_zero()) {
        out.kind = ElementNormalForm<K>::Kind::linearizable;
        out.conjugator = psi;
        out.conjugator_raw = psi;
        if (q > 0) {
            out.finite_order = true;
            out.finite_order_q = q;
        }
        return out;
    }
    if (q == 0)
        throw std::logic_error("normal_form_element: resonant term with non-resonant linear part");

    int k = tangent_tail.valuation() - 1;
    GermDiffeo<K> g(a.inverse() * w);  // tangent part; conjugations by the
                                       // resonant group commute with a*z
    auto red = detail::reduce_tangent(g, k);

    K t = red.beta;
    K mu = K(k + 1) * t / K(2) - red.gamma / t;  // model a*exp(t v_{k,mu})
    K lambda = mu / t;                           // strict invariant

    GermDiffeo<K> model_tangent = exp_field(make_v<K>(k, mu, n_max), t);
    auto red_m = detail::reduce_tangent(model_tangent, k);
    if (red_m.beta != red.beta || red_m.gamma != red.gamma)
        throw std::logic_error("normal_form_element: model reduction mismatch");

    GermDiffeo<K> chi = red.rho.compose(red_m.rho.inverse());
    GermDiffeo<K> conj_raw = psi.compose(chi);

    out.kind = ElementNormalForm<K>::Kind::resonant;
    out.k = k;
    out.lambda = lambda;
    out.raw_flow_time = t;
    out.conjugator_raw = conj_raw;
    if (auto sigma = detail::field_kth_root(t.inverse(), (unsigned)k)) {
        out.flow_time = K(1);
        out.conjugator = conj_raw.compose(GermDiffeo<K>::linear(*sigma, n_max));
    } else {
        out.flow_time = t;
        out.conjugator = conj_raw;
    }
    return out;
}

// The model germ named by a normal form: a * exp(flow_time * v_{k, flow_time*lambda}).
template <class K>
GermDiffeo<K> normal_form_model(const ElementNormalForm<K>& nf, int trunc) {
    if (nf.kind == ElementNormalForm<K>::Kind::linearizable)
        return GermDiffeo<K>::linear(nf.a, trunc);
    GermDiffeo<K> e =
        exp_field(make_v<K>(nf.k, nf.flow_time * nf.lambda, trunc), nf.flow_time);
    return GermDiffeo<K>(nf.a * e.series());
}

// true iff g commutes with h to the truncation order
template <class K>
bool centralizer_check(const GermDiffeo<K>& h, const GermDiffeo<K>& g) {
    return commutator(h, g).is_identity();
}

// F(g) = 1/g(z)^nu - 1/z^nu + lambda log(g(z)/z), expanded as a truncated
// Laurent series (the pole cancels when g is tangent at order >= nu).
// Readouts: a(g) = -F[0], b(g) = F[1], c(g) = F[2] in the nu = 1 chart, and
// generally a_k(g) is the z^k coefficient.
template <class K>
LaurentSeries<K> translation_cocycle(const GermDiffeo<K>& g, int nu, const K& lambda) {
    if (nu < 1) throw std::invalid_argument("translation_cocycle: nu must be >= 1");
    if (!g.tangency().tangent_at_least(nu))
        throw std::invalid_argument("translation_cocycle: germ is not tangent at order >= nu");
    int n = g.trunc_order();
    PowerSeries<K> u = g.series().divided_by_z() -
                       PowerSeries<K>::constant(K(1), n - 1);  // g/z - 1, valuation >= nu
    PowerSeries<K> inv_pow = (PowerSeries<K>::constant(K(1), n - 1) + u).pow((unsigned)nu)
                                 .reciprocal() -
                             PowerSeries<K>::constant(K(1), n - 1);
    // 1/g^nu - 1/z^nu = z^{-nu} ((1+u)^{-nu} - 1); the bracket has valuation >= nu
    std::vector<K> coeffs = inv_pow.coeffs();
    LaurentSeries<K> F(-nu, std::move(coeffs));
    if (!lambda.is_zero()) {
        PowerSeries<K> lg = log1p_series(u);
        F = F + LaurentSeries<K>::from_power_series(lambda * lg);
    }
    return F;
}

// The additive functionals of the translation cocycle per generator.
template <class K>
struct TranslationCocycleClasses {
    std::vector<K> a, b, c, a_k;
};

template <class K>
TranslationCocycleClasses<K> translation_classes(const std::vector<GermDiffeo<K>>& gens, int nu,
                                                 const K& lambda, int k) {
    TranslationCocycleClasses<K> out;
    for (const auto& g : gens) {
        LaurentSeries<K> F = translation_cocycle(g, nu, lambda);
        out.a.push_back(-F.coeff(0));
        out.b.push_back(F.coeff(1));
        out.c.push_back(F.coeff(2));
        out.a_k.push_back(F.coeff(k));
    }
    return out;
}

}  // namespace folia
