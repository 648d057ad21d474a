#pragma once

#include <optional>
#include <vector>

#include "folia/transition.hpp"

namespace folia {

// Result of the log-affine constructor.  On success the edge germs satisfy
//   1/y_i - 1/y_j + lambda log(y_i/y_j) = a_ij
// exactly through the certified order; on failure the offending order and the
// class coordinates of the non-proportional cocycle are reported.
template <class K>
struct LogAffineResult {
    bool ok = false;
    K lambda{0};
    std::vector<K> base_class;  // a_ij per canonical edge
    std::optional<TransitionSystem<K>> system;
    std::vector<std::vector<K>> edge_tails;  // residual relation coefficients per edge
    int fail_order = 0;
    std::vector<K> fail_class;
    int certified_order = 0;
};

namespace detail {

// F_ij = 1/phi_ij(y_j) - 1/y_j + lambda log(phi_ij(y_j)/y_j), a power series
// in y_j (the pole cancels since phi is tangent to the identity)
template <class K>
PowerSeries<K> log_affine_relation(const TransitionSystem<K>& t, int i, int j, const K& lambda) {
    const PowerSeries<K>& phi = t.germ(i, j).series();
    int n = phi.trunc_order();
    PowerSeries<K> u = phi.divided_by_z() - PowerSeries<K>::constant(K(1), n - 1);
    PowerSeries<K> bracket = (PowerSeries<K>::constant(K(1), n - 1) + u).reciprocal() -
                             PowerSeries<K>::constant(K(1), n - 1);
    // 1/phi - 1/y = y^{-1} (u^{-1} ... ) ; bracket has valuation >= 1
    PowerSeries<K> f = bracket.divided_by_z();  // trusted n-2
    if (!lambda.is_zero()) f = f + lambda * log1p_series(u).truncated(n - 2);
    return f;
}

template <class K>
TwistedCochain<K> log_affine_cochain(const TransitionSystem<K>& t, const K& lambda, int order) {
    TwistedCochain<K> out = TwistedCochain<K>::zero(*t.complex(), 1);
    for (int e = 0; e < t.complex()->num_edges(); ++e) {
        auto [i, j] = t.complex()->edges()[e];
        out.values[e] = log_affine_relation(t, i, j, lambda).coeff(order);
    }
    return out;
}

// decompose c = x * a + coboundary(h); returns (x, h) or nullopt
template <class K>
std::optional<std::pair<K, std::vector<K>>> split_on_line(const UnitaryLocalSystem<K>& sys,
                                                          const TwistedCochain<K>& a,
                                                          const TwistedCochain<K>& c) {
    Matrix<K> d0 = coboundary0(sys);
    Matrix<K> m(d0.rows(), 1 + d0.cols());
    for (int e = 0; e < d0.rows(); ++e) {
        m.at(e, 0) = a.values[e];
        for (int v = 0; v < d0.cols(); ++v) m.at(e, 1 + v) = d0.at(e, v);
    }
    auto x = solve_pinned(m, c.values);
    if (!x) return std::nullopt;
    return std::make_pair((*x)[0], std::vector<K>(x->begin() + 1, x->end()));
}

}  // namespace detail

// Order-by-order construction of the log-affine relations of a nu = 1 system
// with trivial unitary part: at each order the cocycle of the relation defect
// is projected onto the line spanned by the base class; the log term absorbs
// the first-order component and later components are removed by the two
// coordinate changes
//   y -> y - (lambda_n / (n-1)) y^{n+1}   and   1/z_i = 1/y_i - A_i y_i^n.
// A defect transverse to the line is an honest failure (reported, not fatal).
template <class K>
LogAffineResult<K> log_affine_construct(const TransitionSystem<K>& seed, int target_order) {
    LogAffineResult<K> out;
    const auto& c = *seed.complex();
    int n = seed.trunc_order();
    if (target_order > n - 2)
        throw std::invalid_argument(
            "log_affine_construct: germ truncation must exceed the target order by 2");
    UnitaryLocalSystem<K> sys = seed.linear_system();
    if (!sys.weights_all_one())
        throw std::invalid_argument("log_affine_construct: linear parts must be trivial");

    // base class
    TwistedCochain<K> a = detail::log_affine_cochain(seed, K(0), 0);
    {
        TwistedCochain<K> da = apply_coboundary(sys, a);
        if (!da.is_zero())
            throw std::invalid_argument("log_affine_construct: base data is not a cocycle");
        auto h1 = cohomology(sys).h1;
        bool nonzero = false;
        for (const auto& v : h1.project(a.values))
            if (!v.is_zero()) nonzero = true;
        if (!nonzero)
            throw std::invalid_argument("log_affine_construct: base class is trivial");
    }
    out.base_class = a.values;

    TransitionSystem<K> t = seed;

    // lambda from the first-order component
    {
        TwistedCochain<K> b = detail::log_affine_cochain(t, K(0), 1);
        auto split = detail::split_on_line(sys, a, b);
        if (!split) {
            out.fail_order = 1;
            out.fail_class = cohomology(sys).h1.project(b.values);
            return out;
        }
        out.lambda = split->first;
    }
    const K lambda = out.lambda;

    for (int order = 1; order <= target_order; ++order) {
        TwistedCochain<K> cc = detail::log_affine_cochain(t, lambda, order);
        if (cc.is_zero()) continue;
        auto split = detail::split_on_line(sys, a, cc);
        if (!split) {
            out.fail_order = order;
            out.fail_class = cohomology(sys).h1.project(cc.values);
            return out;
        }
        K ln = split->first;
        if (!ln.is_zero()) {
            if (order == 1)
                throw std::logic_error("log_affine_construct: first-order line component "
                                       "survived the log normalization");
            // y -> y - (ln/(n-1)) y^{n+1}, the same change at every vertex
            K kappa = ln / K(order - 1);
            PowerSeries<K> psi = PowerSeries<K>::identity(n).with_coeff(order + 1, -kappa);
            std::vector<GermDiffeo<K>> ch(c.num_vertices(), GermDiffeo<K>(psi));
            t = t.with_vertex_changes(ch);
            cc = detail::log_affine_cochain(t, lambda, order);
            split = detail::split_on_line(sys, a, cc);
            if (!split || !split->first.is_zero())
                throw std::logic_error("log_affine_construct: line component not removed");
        }
        // coboundary step: 1/z_i = 1/y_i - A_i y_i^order with A = -h
        const std::vector<K>& h = split->second;
        std::vector<GermDiffeo<K>> ch;
        ch.reserve(c.num_vertices());
        for (int v = 0; v < c.num_vertices(); ++v) {
            K A = -h[v];
            // z = y / (1 - A y^{order+1})
            PowerSeries<K> denom = PowerSeries<K>::constant(K(1), n) -
                                   PowerSeries<K>::monomial(A, order + 1, n);
            ch.push_back(GermDiffeo<K>(denom.reciprocal().shifted(1)));
        }
        t = t.with_vertex_changes(ch);
        if (!detail::log_affine_cochain(t, lambda, order).is_zero())
            throw std::logic_error("log_affine_construct: defect not removed at order " +
                                   std::to_string(order));
    }

    out.ok = true;
    out.certified_order = target_order;
    out.system = t;
    for (int e = 0; e < c.num_edges(); ++e) {
        auto [i, j] = c.edges()[e];
        PowerSeries<K> f = detail::log_affine_relation(t, i, j, lambda);
        out.edge_tails.push_back(f.truncated(target_order).coeffs());
    }
    return out;
}

}  // namespace folia
