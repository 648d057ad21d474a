#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "folia/germ.hpp"

namespace folia {

// Formal meromorphic 1-form in one variable: (Laurent series) dz.  The
// logarithmic residue is the z^{-1} coefficient.
template <class K>
struct FormalOneForm {
    LaurentSeries<K> laurent;

    int pole_order() const { return laurent.pole_order(); }
    K residue() const { return laurent.residue(); }

    friend bool operator==(const FormalOneForm& a, const FormalOneForm& b) {
        return a.laurent == b.laurent;
    }
    friend bool operator!=(const FormalOneForm& a, const FormalOneForm& b) { return !(a == b); }
    friend FormalOneForm operator+(const FormalOneForm& a, const FormalOneForm& b) {
        return {a.laurent + b.laurent};
    }
    friend FormalOneForm operator*(const K& s, const FormalOneForm& a) {
        return {s * a.laurent};
    }
};

// omega_{k,lambda} = dz/z^{k+1} + lambda dz/z, trusted through z^trunc.
template <class K>
FormalOneForm<K> omega_form(int k, const K& lambda, int trunc) {
    if (k < 1) throw std::invalid_argument("omega_form: k must be >= 1");
    std::vector<K> c(trunc + k + 2, K(0));
    c[0] = K(1);
    c[k] = lambda;  // z^{-1} slot
    return {LaurentSeries<K>(-k - 1, std::move(c))};
}

template <class K>
FormalOneForm<K> logarithmic_form(int trunc) {
    std::vector<K> c(trunc + 2, K(0));
    c[0] = K(1);
    return {LaurentSeries<K>(-1, std::move(c))};
}

// Pullback f^* omega = (omega o f) f'.  A pole of order m consumes m + 1
// orders of the germ: the result is trusted through
// min(f.trunc - 1 - m, omega.trunc), and the call reports when that is not
// enough to resolve the pole.
template <class K>
FormalOneForm<K> pullback(const GermDiffeo<K>& f, const FormalOneForm<K>& omega) {
    int m = omega.pole_order();
    int out_trunc = std::min(f.trunc_order() - 1 - m, omega.laurent.trunc_order());
    if (out_trunc < 0)
        throw std::invalid_argument(
            "pullback: insufficient truncation order to resolve the pole (a pole of order " +
            std::to_string(m) + " needs germ order >= " + std::to_string(m + 1) + ")");
    int n = f.trunc_order();
    PowerSeries<K> fp = f.series().derivative();                    // trusted n-1
    PowerSeries<K> u = f.series().divided_by_z();                   // unit, trusted n-1
    PowerSeries<K> uinv = u.reciprocal();

    LaurentSeries<K> acc(out_trunc, {K(0)});
    // negative exponents: c_j z^j u^j * f', j = -m..-1
    PowerSeries<K> upow = PowerSeries<K>::constant(K(1), n - 1);
    std::vector<PowerSeries<K>> uinv_pows(m + 1, upow);
    for (int e = 1; e <= m; ++e) uinv_pows[e] = uinv_pows[e - 1] * uinv;
    for (int j = -m; j <= -1; ++j) {
        const K& cj = omega.laurent.coeff(j);
        if (cj.is_zero()) continue;
        PowerSeries<K> body = (cj * uinv_pows[-j]) * fp;  // trusted n-1
        std::vector<K> cs = body.coeffs();
        acc = acc + LaurentSeries<K>(j, std::move(cs));
    }
    // nonnegative exponents: c_j f^j f'
    PowerSeries<K> fpow = PowerSeries<K>::constant(K(1), n);
    for (int j = 0; j <= omega.laurent.trunc_order() && j <= out_trunc + 1; ++j) {
        const K& cj = omega.laurent.coeff(j);
        if (!cj.is_zero()) {
            PowerSeries<K> body = (cj * fpow.truncated(n - 1)) * fp;
            acc = acc + LaurentSeries<K>::from_power_series(body);
        }
        fpow = fpow * f.series();
    }
    // clamp to the trusted window
    std::vector<K> out(out_trunc + m + 1, K(0));
    for (int j = -m; j <= out_trunc; ++j) out[j + m] = acc.coeff(j);
    return {LaurentSeries<K>(-m, std::move(out))};
}

template <class K>
bool preserves_form(const GermDiffeo<K>& f, const FormalOneForm<K>& omega) {
    FormalOneForm<K> p = pullback(f, omega);
    return p.laurent == omega.laurent;
}

// multiplier c with f^* omega = c omega, when the pullback stays on the line
template <class K>
std::optional<K> line_multiplier(const GermDiffeo<K>& f, const FormalOneForm<K>& omega) {
    FormalOneForm<K> p = pullback(f, omega);
    int lead = omega.laurent.lead();
    K base = omega.laurent.coeff(lead);
    if (base.is_zero()) throw std::invalid_argument("line_multiplier: zero leading coefficient");
    K c = p.laurent.coeff(lead) / base;
    return (p.laurent == (c * omega).laurent) ? std::optional<K>(c) : std::nullopt;
}

// What all generators preserve, strongest first: the logarithmic form dz/z
// (linear maps), an omega_{k,lambda}, or the line C dz/z^{k+1}.
template <class K>
struct InvariantFormResult {
    enum class Kind { logarithmic, e_model, line, none };
    Kind kind;
    int k = 0;
    K lambda{0};
    int certified_order = 0;
};

template <class K>
InvariantFormResult<K> invariant_form_search(const std::vector<GermDiffeo<K>>& gens) {
    if (gens.empty()) throw std::invalid_argument("invariant_form_search: no generators");
    int n = gens[0].trunc_order();
    bool all_linear = true;
    for (const auto& g : gens)
        if (!(g.series() == PowerSeries<K>::monomial(g.linear_part(), 1, n))) all_linear = false;
    if (all_linear) return {InvariantFormResult<K>::Kind::logarithmic, 0, K(0), n};

    // candidate pole orders: tangency orders present, else a small sweep
    std::vector<int> ks;
    for (const auto& g : gens) {
        auto t = g.tangency();
        if (t.kind == TangencyVerdict::Kind::tangent) ks.push_back(t.order);
    }
    if (ks.empty())
        for (int k = 1; k <= (n - 3) / 2; ++k) ks.push_back(k);

    for (int k : ks) {
        if (n < 2 * (k + 1) + 2) continue;  // pullback budget
        int ot = n - k - 2;
        // solve for lambda in f^*(omega_{k,0} + lambda dz/z) = omega_{k,0} + lambda dz/z
        bool ok = true;
        std::optional<K> lambda;
        for (const auto& g : gens) {
            FormalOneForm<K> d1 = {pullback(g, omega_form(k, K(0), ot)).laurent -
                                   omega_form(k, K(0), ot).laurent};
            FormalOneForm<K> d2 = {pullback(g, logarithmic_form<K>(ot)).laurent -
                                   logarithmic_form<K>(ot).laurent};
            if (d1.laurent.is_zero() && d2.laurent.is_zero()) continue;  // any lambda
            if (d2.laurent.is_zero()) { ok = false; break; }
            // lambda = -coeff(d1)/coeff(d2) at the leading order of d2
            int l = d2.laurent.lead();
            while (l <= d2.laurent.trunc_order() && d2.laurent.coeff(l).is_zero()) ++l;
            if (l > d2.laurent.trunc_order()) { ok = false; break; }
            K cand = -(d1.laurent.coeff(l) / d2.laurent.coeff(l));
            if ((d1.laurent + (cand * d2.laurent)).is_zero()) {
                if (lambda && *lambda != cand) { ok = false; break; }
                lambda = cand;
            } else {
                ok = false;
                break;
            }
        }
        if (ok) {
            K lam = lambda ? *lambda : K(0);
            // re-verify at full strength
            bool verified = true;
            for (const auto& g : gens)
                if (!preserves_form(g, omega_form(k, lam, ot))) verified = false;
            if (verified) return {InvariantFormResult<K>::Kind::e_model, k, lam, ot};
        }
    }
    for (int k : ks) {
        if (n < 2 * (k + 1) + 2) continue;
        int ot = n - k - 2;
        FormalOneForm<K> line = omega_form(k, K(0), ot);
        bool ok = true;
        for (const auto& g : gens)
            if (!line_multiplier(g, line)) { ok = false; break; }
        if (ok) return {InvariantFormResult<K>::Kind::line, k, K(0), ot};
    }
    return {InvariantFormResult<K>::Kind::none, 0, K(0), n};
}

// ---------------------------------------------------------------------------
// Bivariate polynomial algebra for the projective-triple identities.  Values
// are exact in the quotient ring C[x,y] / (total degree > cap); ring
// operations take the minimum cap of their inputs and d lowers it by one.
template <class K>
class BivariatePoly {
  public:
    explicit BivariatePoly(int cap) : cap_(check(cap)), c_((cap + 1) * (cap + 1), K(0)) {}
    static BivariatePoly constant(K v, int cap) {
        BivariatePoly p(cap);
        p.set(0, 0, std::move(v));
        return p;
    }

    int cap() const { return cap_; }
    const K& at(int i, int j) const {
        static const K zero(0);
        if (i < 0 || j < 0 || i + j > cap_) return zero;
        return c_[i * (cap_ + 1) + j];
    }
    void set(int i, int j, K v) {
        if (i < 0 || j < 0 || i + j > cap_)
            throw std::out_of_range("BivariatePoly: monomial beyond cap");
        c_[i * (cap_ + 1) + j] = std::move(v);
    }

    bool is_zero() const {
        for (const auto& v : c_)
            if (!v.is_zero()) return false;
        return true;
    }
    int total_degree() const {
        int d = -1;
        for (int i = 0; i <= cap_; ++i)
            for (int j = 0; i + j <= cap_; ++j)
                if (!at(i, j).is_zero() && i + j > d) d = i + j;
        return d;
    }
    K constant_term() const { return at(0, 0); }

    BivariatePoly truncated(int cap) const {
        BivariatePoly p(cap);
        for (int i = 0; i <= cap; ++i)
            for (int j = 0; i + j <= cap; ++j) p.set(i, j, at(i, j));
        return p;
    }

    BivariatePoly operator-() const {
        BivariatePoly p = *this;
        for (auto& v : p.c_) v = -v;
        return p;
    }
    friend BivariatePoly operator+(const BivariatePoly& a, const BivariatePoly& b) {
        int cap = std::min(a.cap_, b.cap_);
        BivariatePoly p(cap);
        for (int i = 0; i <= cap; ++i)
            for (int j = 0; i + j <= cap; ++j) p.set(i, j, a.at(i, j) + b.at(i, j));
        return p;
    }
    friend BivariatePoly operator-(const BivariatePoly& a, const BivariatePoly& b) {
        return a + (-b);
    }
    friend BivariatePoly operator*(const BivariatePoly& a, const BivariatePoly& b) {
        int cap = std::min(a.cap_, b.cap_);
        BivariatePoly p(cap);
        for (int i = 0; i <= std::min(a.cap_, cap); ++i)
            for (int j = 0; i + j <= a.cap_ && i + j <= cap; ++j) {
                if (a.at(i, j).is_zero()) continue;
                for (int s = 0; i + s <= cap; ++s)
                    for (int t = 0; s + t <= b.cap_ && i + s + j + t <= cap; ++t)
                        if (!b.at(s, t).is_zero())
                            p.set(i + s, j + t, p.at(i + s, j + t) + a.at(i, j) * b.at(s, t));
            }
        return p;
    }
    friend BivariatePoly operator*(const K& s, const BivariatePoly& a) {
        BivariatePoly p = a;
        for (auto& v : p.c_) v = s * v;
        return p;
    }
    friend bool operator==(const BivariatePoly& a, const BivariatePoly& b) {
        return (a - b).is_zero();
    }
    friend bool operator!=(const BivariatePoly& a, const BivariatePoly& b) { return !(a == b); }

    BivariatePoly dx() const {  // partial derivative in x, cap drops by one
        BivariatePoly p(std::max(cap_ - 1, 0));
        for (int i = 1; i <= cap_; ++i)
            for (int j = 0; i + j <= cap_; ++j)
                if (i - 1 + j <= p.cap_) p.set(i - 1, j, K(i) * at(i, j));
        return p;
    }
    BivariatePoly dy() const {
        BivariatePoly p(std::max(cap_ - 1, 0));
        for (int i = 0; i <= cap_; ++i)
            for (int j = 1; i + j <= cap_; ++j)
                if (i + j - 1 <= p.cap_) p.set(i, j - 1, K(j) * at(i, j));
        return p;
    }

    // multiplicative inverse of a unit (nonzero constant term), iterated in
    // total degree
    BivariatePoly inverse() const {
        if (at(0, 0).is_zero())
            throw std::invalid_argument("BivariatePoly: not a unit (zero constant term)");
        K inv0 = at(0, 0).inverse();
        BivariatePoly u = *this - constant(at(0, 0), cap_);  // higher part
        BivariatePoly acc = constant(inv0, cap_);
        BivariatePoly pw = constant(K(1), cap_);
        for (int d = 1; d <= cap_; ++d) {
            pw = pw * u;
            if (pw.is_zero()) break;
            K sign = (d % 2 == 0) ? K(1) : K(-1);
            acc = acc + (sign * inv0.pow(d + 1)) * pw;
        }
        return acc;
    }

  private:
    static int check(int cap) {
        if (cap < 0) throw std::invalid_argument("BivariatePoly: negative cap");
        return cap;
    }
    int cap_;
    std::vector<K> c_;
};

template <class K>
struct PolyOneForm {  // A dx + B dy
    BivariatePoly<K> a, b;

    friend PolyOneForm operator+(const PolyOneForm& u, const PolyOneForm& v) {
        return {u.a + v.a, u.b + v.b};
    }
    friend PolyOneForm operator-(const PolyOneForm& u, const PolyOneForm& v) {
        return {u.a - v.a, u.b - v.b};
    }
    friend PolyOneForm operator*(const BivariatePoly<K>& f, const PolyOneForm& u) {
        return {f * u.a, f * u.b};
    }
    friend PolyOneForm operator*(const K& s, const PolyOneForm& u) {
        return {s * u.a, s * u.b};
    }
    bool is_zero() const { return a.is_zero() && b.is_zero(); }
    friend bool operator==(const PolyOneForm& u, const PolyOneForm& v) {
        return (u - v).is_zero();
    }
};

template <class K>
struct PolyTwoForm {  // C dx ^ dy
    BivariatePoly<K> c;
    bool is_zero() const { return c.is_zero(); }
};

template <class K>
PolyOneForm<K> d_of(const BivariatePoly<K>& f) {
    return {f.dx(), f.dy()};
}

template <class K>
PolyTwoForm<K> d_of(const PolyOneForm<K>& w) {
    return {w.b.dx() - w.a.dy()};
}

template <class K>
PolyTwoForm<K> wedge(const PolyOneForm<K>& u, const PolyOneForm<K>& v) {
    return {u.a * v.b - u.b * v.a};
}

// Projective triple (w0, w1, w2) with the structure equations
//   d w0 = w0 ^ w1,  d w1 = 2 w0 ^ w2,  d w2 = w1 ^ w2.
template <class K>
struct ProjectiveTriple {
    PolyOneForm<K> w0, w1, w2;
};

// Residuals, written wedge-side minus d-side, so that e.g. the (dy, dx, 0)
// triple reports residual dy ^ dx on the first equation.
template <class K>
struct TripleReport {
    PolyTwoForm<K> r0, r1, r2;
    bool all_zero() const { return r0.is_zero() && r1.is_zero() && r2.is_zero(); }
};

template <class K>
TripleReport<K> triple_check(const ProjectiveTriple<K>& t) {
    return {{wedge(t.w0, t.w1).c - d_of(t.w0).c},
            {K(2) * wedge(t.w0, t.w2).c - d_of(t.w1).c},
            {wedge(t.w1, t.w2).c - d_of(t.w2).c}};
}

// Gauge action: first the f-block
//   (w0, w1, w2) -> (f w0, w1 - df/f, (1/f) w2)
// then the g-block
//   (w0, w1, w2) -> (w0, w1 + 2 g w0, w2 + g w1 + g^2 w0 - dg).
template <class K>
ProjectiveTriple<K> gauge_transform(const ProjectiveTriple<K>& t, const BivariatePoly<K>& f,
                                    const BivariatePoly<K>& g) {
    if (f.constant_term().is_zero())
        throw std::invalid_argument("gauge_transform: f is not a unit");
    BivariatePoly<K> finv = f.inverse();
    PolyOneForm<K> w0 = f * t.w0;
    PolyOneForm<K> w1 = t.w1 - finv * d_of(f);
    PolyOneForm<K> w2 = finv * t.w2;
    PolyOneForm<K> w1g = w1 + K(2) * (g * w0);
    PolyOneForm<K> w2g = w2 + g * w1 + (g * g) * w0 - d_of(g);
    return {w0, w1g, w2g};
}

}  // namespace folia
