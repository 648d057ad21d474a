#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "folia/rational_util.hpp"

namespace folia {

// Truncated formal power series over a coefficient field K.  Truncation is
// inclusive: order N means coefficients of z^0..z^N are trusted.  Ring
// operations return series at the minimum truncation order of their inputs.
// Values are immutable after construction; all operations are pure.
template <class K>
class PowerSeries {
  public:
    PowerSeries() : c_(1, K(0)) {}
    explicit PowerSeries(int trunc) : c_(check(trunc) + 1, K(0)) {}
    PowerSeries(std::vector<K> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) c_.assign(1, K(0));
    }

    static PowerSeries zero(int trunc) { return PowerSeries(trunc); }
    static PowerSeries constant(K v, int trunc) {
        PowerSeries f(trunc);
        f.c_[0] = std::move(v);
        return f;
    }
    // the identity series z
    static PowerSeries identity(int trunc) { return monomial(K(1), 1, trunc); }
    static PowerSeries monomial(K v, int degree, int trunc) {
        PowerSeries f(trunc);
        if (degree <= trunc) f.c_[degree] = std::move(v);
        return f;
    }

    int trunc_order() const { return (int)c_.size() - 1; }
    const K& coeff(int j) const {
        if (j < 0 || j > trunc_order())
            throw std::out_of_range("PowerSeries: coefficient index " + std::to_string(j) +
                                    " outside truncation " + std::to_string(trunc_order()));
        return c_[j];
    }
    const std::vector<K>& coeffs() const { return c_; }

    PowerSeries with_coeff(int j, K v) const {
        PowerSeries f = *this;
        f.c_.at(j) = std::move(v);
        return f;
    }

    PowerSeries truncated(int trunc) const {
        check(trunc);
        PowerSeries f = *this;
        f.c_.resize(trunc + 1, K(0));
        return f;
    }

    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](const K& v) { return v.is_zero(); });
    }

    // smallest j with nonzero coefficient, or trunc_order()+1 when zero
    int valuation() const {
        for (int j = 0; j <= trunc_order(); ++j)
            if (!c_[j].is_zero()) return j;
        return trunc_order() + 1;
    }

    PowerSeries operator-() const {
        PowerSeries f = *this;
        for (auto& v : f.c_) v = -v;
        return f;
    }

    friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
        int n = std::min(a.trunc_order(), b.trunc_order());
        std::vector<K> c(n + 1);
        for (int j = 0; j <= n; ++j) c[j] = a.c_[j] + b.c_[j];
        return PowerSeries(std::move(c));
    }
    friend PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) {
        int n = std::min(a.trunc_order(), b.trunc_order());
        std::vector<K> c(n + 1);
        for (int j = 0; j <= n; ++j) c[j] = a.c_[j] - b.c_[j];
        return PowerSeries(std::move(c));
    }
    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
        int n = std::min(a.trunc_order(), b.trunc_order());
        std::vector<K> c(n + 1, K(0));
        for (int i = 0; i <= n; ++i) {
            if (a.c_[i].is_zero()) continue;
            for (int j = 0; i + j <= n; ++j)
                if (!b.c_[j].is_zero()) c[i + j] += a.c_[i] * b.c_[j];
        }
        return PowerSeries(std::move(c));
    }
    friend PowerSeries operator*(const K& s, const PowerSeries& a) {
        PowerSeries f = a;
        for (auto& v : f.c_) v = s * v;
        return f;
    }
    friend bool operator==(const PowerSeries& a, const PowerSeries& b) {
        int n = std::min(a.trunc_order(), b.trunc_order());
        for (int j = 0; j <= n; ++j)
            if (a.c_[j] != b.c_[j]) return false;
        return true;
    }
    friend bool operator!=(const PowerSeries& a, const PowerSeries& b) { return !(a == b); }

    // Composition outer(inner); requires inner(0) = 0.  Horner evaluation,
    // truncated to the shared order.
    PowerSeries compose(const PowerSeries& inner) const {
        if (!inner.c_[0].is_zero())
            throw std::invalid_argument("ps_compose: inner series has nonzero constant term");
        int n = std::min(trunc_order(), inner.trunc_order());
        PowerSeries in = inner.truncated(n);
        PowerSeries acc = PowerSeries::constant(c_[std::min(trunc_order(), n)], n);
        for (int j = std::min(trunc_order(), n) - 1; j >= 0; --j) {
            acc = acc * in;
            acc.c_[0] += c_[j];
        }
        return acc;
    }

    // Termwise derivative; output truncation drops by one.
    PowerSeries derivative() const {
        int n = trunc_order();
        std::vector<K> c(std::max(n, 1), K(0));
        for (int j = 1; j <= n; ++j) c[j - 1] = K(j) * c_[j];
        return PowerSeries(std::move(c));
    }

    // Multiplicative inverse; requires nonzero constant term.
    PowerSeries reciprocal() const {
        if (c_[0].is_zero())
            throw std::invalid_argument("ps_reciprocal: zero constant term");
        int n = trunc_order();
        std::vector<K> g(n + 1, K(0));
        K inv0 = c_[0].inverse();
        g[0] = inv0;
        for (int m = 1; m <= n; ++m) {
            K acc(0);
            for (int j = 1; j <= m; ++j)
                if (!c_[j].is_zero()) acc += c_[j] * g[m - j];
            g[m] = -(inv0 * acc);
        }
        return PowerSeries(std::move(g));
    }

    // Compositional inverse g with f(g(z)) = g(f(z)) = z to the truncation
    // order; requires f(0) = 0 and invertible linear coefficient.
    PowerSeries comp_inverse() const {
        if (!c_[0].is_zero())
            throw std::invalid_argument("ps_comp_inverse: nonzero constant term");
        if (c_[1].is_zero())
            throw std::invalid_argument("ps_comp_inverse: zero linear coefficient");
        int n = trunc_order();
        K inv1 = c_[1].inverse();
        std::vector<K> g(n + 1, K(0));
        g[1] = inv1;
        // order-by-order: the z^m coefficient of f(g) is linear in g_m
        for (int m = 2; m <= n; ++m) {
            PowerSeries partial{std::vector<K>(g.begin(), g.begin() + m + 1)};
            K defect = truncated(m).compose(partial.truncated(m)).coeff(m);
            g[m] = -(inv1 * defect);
        }
        return PowerSeries(std::move(g));
    }

    // f(z)/z for series with f(0)=0; trusted through trunc-1.
    PowerSeries divided_by_z() const {
        if (!c_[0].is_zero())
            throw std::invalid_argument("divided_by_z: nonzero constant term");
        std::vector<K> c(std::max<size_t>(c_.size() - 1, 1), K(0));
        for (size_t j = 1; j < c_.size(); ++j) c[j - 1] = c_[j];
        return PowerSeries(std::move(c));
    }

    PowerSeries shifted(int k) const {  // multiply by z^k, same truncation
        PowerSeries f(trunc_order());
        for (int j = 0; j + k <= trunc_order(); ++j) f.c_[j + k] = c_[j];
        return f;
    }

    PowerSeries pow(unsigned e) const {
        PowerSeries acc = constant(K(1), trunc_order());
        PowerSeries base = *this;
        while (e) {
            if (e & 1) acc = acc * base;
            if (e >>= 1) base = base * base;
        }
        return acc;
    }

    std::string str() const {
        std::string s;
        for (int j = 0; j <= trunc_order(); ++j) {
            if (c_[j].is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += to_string(c_[j]) + "*z^" + std::to_string(j);
        }
        if (s.empty()) s = "0";
        return s + " + O(z^" + std::to_string(trunc_order() + 1) + ")";
    }

  private:
    static int check(int trunc) {
        if (trunc < 0) throw std::invalid_argument("PowerSeries: negative truncation order");
        return trunc;
    }
    std::vector<K> c_;
};

// log(1+u) for u with u(0)=0, truncated.
template <class K>
PowerSeries<K> log1p_series(const PowerSeries<K>& u) {
    if (!u.coeff(0).is_zero())
        throw std::invalid_argument("log1p_series: nonzero constant term");
    int n = u.trunc_order();
    PowerSeries<K> acc(n), p = PowerSeries<K>::constant(K(1), n);
    for (int m = 1; m <= n; ++m) {
        p = p * u;
        if (p.is_zero()) break;
        K s = K(1) / K(m);
        if (m % 2 == 0) s = -s;
        acc = acc + s * p;
    }
    return acc;
}

// Truncated Laurent series: coefficients for z^lead .. z^trunc.  The leading
// coefficient is nonzero whenever lead < 0 (normalized on construction).
template <class K>
class LaurentSeries {
  public:
    LaurentSeries() : lead_(0), c_(1, K(0)) {}
    LaurentSeries(int lead, std::vector<K> coeffs) : lead_(lead), c_(std::move(coeffs)) {
        if (c_.empty()) c_.assign(1, K(0));
        normalize();
    }
    static LaurentSeries from_power_series(const PowerSeries<K>& f) {
        return LaurentSeries(0, f.coeffs());
    }

    int lead() const { return lead_; }
    int trunc_order() const { return lead_ + (int)c_.size() - 1; }
    int pole_order() const { return lead_ < 0 ? -lead_ : 0; }

    const K& coeff(int j) const {
        static const K zero(0);
        if (j < lead_) return zero;
        if (j > trunc_order())
            throw std::out_of_range("LaurentSeries: coefficient beyond truncation");
        return c_[j - lead_];
    }
    K residue() const { return lead_ <= -1 && trunc_order() >= -1 ? coeff(-1) : K(0); }

    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](const K& v) { return v.is_zero(); });
    }

    friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
        int lead = std::min(a.lead_, b.lead_);
        int top = std::min(a.trunc_order(), b.trunc_order());
        std::vector<K> c(top - lead + 1, K(0));
        for (int j = lead; j <= top; ++j) {
            K v(0);
            if (j >= a.lead_ && j <= a.trunc_order()) v += a.coeff(j);
            if (j >= b.lead_ && j <= b.trunc_order()) v += b.coeff(j);
            c[j - lead] = v;
        }
        return LaurentSeries(lead, std::move(c));
    }
    friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) {
        return a + (K(-1) * b);
    }
    friend LaurentSeries operator*(const K& s, const LaurentSeries& a) {
        LaurentSeries f = a;
        for (auto& v : f.c_) v = s * v;
        return f;
    }
    friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
        // truncation: trusted orders combine as min(la + tb, lb + ta)
        int lead = a.lead_ + b.lead_;
        int top = std::min(a.lead_ + b.trunc_order(), b.lead_ + a.trunc_order());
        std::vector<K> c(top - lead + 1, K(0));
        for (int i = a.lead_; i <= a.trunc_order(); ++i) {
            if (a.coeff(i).is_zero()) continue;
            for (int j = b.lead_; j <= b.trunc_order() && i + j <= top; ++j)
                if (!b.coeff(j).is_zero()) c[i + j - lead] += a.coeff(i) * b.coeff(j);
        }
        return LaurentSeries(lead, std::move(c));
    }
    friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
        int lead = std::min(a.lead_, b.lead_);
        int top = std::min(a.trunc_order(), b.trunc_order());
        for (int j = lead; j <= top; ++j) {
            K va = (j >= a.lead_) ? a.coeff(j) : K(0);
            K vb = (j >= b.lead_) ? b.coeff(j) : K(0);
            if (va != vb) return false;
        }
        return true;
    }
    friend bool operator!=(const LaurentSeries& a, const LaurentSeries& b) { return !(a == b); }

    std::string str() const {
        std::string s;
        for (int j = lead_; j <= trunc_order(); ++j) {
            if (coeff(j).is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += to_string(coeff(j)) + "*z^" + std::to_string(j);
        }
        if (s.empty()) s = "0";
        return s + " + O(z^" + std::to_string(trunc_order() + 1) + ")";
    }

  private:
    void normalize() {
        while (lead_ < 0 && c_[0].is_zero()) {
            c_.erase(c_.begin());
            ++lead_;
            if (c_.empty()) {
                c_.assign(1, K(0));
                lead_ = 0;
                break;
            }
        }
    }
    int lead_;
    std::vector<K> c_;
};

}  // namespace folia
