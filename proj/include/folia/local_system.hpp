#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "folia/surface.hpp"

namespace folia {

// Rank-one unitary local system on a surface complex: one unit-modulus weight
// per canonical edge (i<j), with weight(j,i) = weight(i,j)^{-1}, and the
// ordered product around every triangle equal to 1 (flatness).
template <class K>
class UnitaryLocalSystem {
  public:
    UnitaryLocalSystem(std::shared_ptr<const SurfaceComplex> complex, std::vector<K> weights)
        : c_(std::move(complex)), w_(std::move(weights)) {
        if ((int)w_.size() != c_->num_edges())
            throw std::invalid_argument("UnitaryLocalSystem: weight count mismatch");
        for (const auto& w : w_)
            if (!w.is_unit_modulus())
                throw std::invalid_argument("UnitaryLocalSystem: weight is not unit-modulus");
        for (int f = 0; f < c_->num_faces(); ++f) {
            const auto& t = c_->faces()[f];
            K prod = weight(t[0], t[1]) * weight(t[1], t[2]) * weight(t[2], t[0]);
            if (prod != K(1))
                throw std::invalid_argument("UnitaryLocalSystem: not flat on a triangle");
        }
    }

    static UnitaryLocalSystem trivial(std::shared_ptr<const SurfaceComplex> complex) {
        std::vector<K> w(complex->num_edges(), K(1));
        return UnitaryLocalSystem(std::move(complex), std::move(w));
    }

    const std::shared_ptr<const SurfaceComplex>& complex() const { return c_; }

    // weight of the oriented edge (i, j)
    K weight(int i, int j) const {
        int e = c_->edge_index(i, j);
        return i < j ? w_[e] : w_[e].inverse();
    }

    UnitaryLocalSystem power(long k) const {
        std::vector<K> w;
        w.reserve(w_.size());
        for (const auto& v : w_) w.push_back(v.pow(k));
        return UnitaryLocalSystem(c_, std::move(w));
    }

    UnitaryLocalSystem tensor(const UnitaryLocalSystem& o) const {
        std::vector<K> w;
        for (size_t e = 0; e < w_.size(); ++e) w.push_back(w_[e] * o.w_[e]);
        return UnitaryLocalSystem(c_, std::move(w));
    }

    bool weights_all_one() const {
        for (const auto& w : w_)
            if (w != K(1)) return false;
        return true;
    }

    // Unit 0-cochain u with weight(i,j) = u_i / u_j for all edges, when the
    // local system is trivial (trivial monodromy); nullopt otherwise.
    // Propagated along the spanning tree, so u is deterministic with u_0 = 1.
    std::optional<std::vector<K>> trivialization() const {
        std::vector<K> u(c_->num_vertices(), K(1));
        const auto& parent = c_->tree_parent();
        // process vertices in BFS order: parent links always point backwards
        std::vector<int> order;
        order.reserve(u.size());
        std::vector<bool> placed(u.size(), false);
        placed[0] = true;
        for (size_t guard = 0; order.size() + 1 < u.size() && guard < u.size(); ++guard)
            for (int v = 1; v < (int)u.size(); ++v)
                if (!placed[v] && placed[parent[v]]) {
                    // weight(parent, v) = u_parent / u_v
                    u[v] = weight(parent[v], v).inverse() * u[parent[v]];
                    placed[v] = true;
                    order.push_back(v);
                }
        for (const auto& [a, b] : c_->edges())
            if (weight(a, b) != u[a] * u[b].inverse()) return std::nullopt;
        return u;
    }

    bool is_trivial() const { return trivialization().has_value(); }

  private:
    std::shared_ptr<const SurfaceComplex> c_;
    std::vector<K> w_;  // per canonical edge (i<j)
};

// Cochain with local coefficients: one value per vertex / canonical edge /
// sorted triangle.  Values on re-oriented simplices follow the twisted
// alternating rules and are produced by the evaluation helpers below.
template <class K>
struct TwistedCochain {
    int degree = 0;
    std::vector<K> values;

    static TwistedCochain zero(const SurfaceComplex& c, int degree) {
        int n = degree == 0 ? c.num_vertices() : degree == 1 ? c.num_edges() : c.num_faces();
        return TwistedCochain{degree, std::vector<K>(n, K(0))};
    }

    bool is_zero() const {
        for (const auto& v : values)
            if (!v.is_zero()) return false;
        return true;
    }

    friend TwistedCochain operator+(const TwistedCochain& a, const TwistedCochain& b) {
        TwistedCochain r = a;
        for (size_t i = 0; i < r.values.size(); ++i) r.values[i] += b.values[i];
        return r;
    }
    friend TwistedCochain operator-(const TwistedCochain& a, const TwistedCochain& b) {
        TwistedCochain r = a;
        for (size_t i = 0; i < r.values.size(); ++i) r.values[i] -= b.values[i];
        return r;
    }
    friend TwistedCochain operator*(const K& s, const TwistedCochain& a) {
        TwistedCochain r = a;
        for (auto& v : r.values) v = s * v;
        return r;
    }
};

// value of a degree-1 cochain on the oriented edge (i, j):
// u(j,i) = -T(j,i) u(i,j), where T is the system transport.
template <class K>
K edge_value(const UnitaryLocalSystem<K>& sys, const TwistedCochain<K>& u, int i, int j) {
    const auto& c = *sys.complex();
    int e = c.edge_index(i, j);
    if (i < j) return u.values[e];
    return -(sys.weight(i, j) * u.values[e]);
}

}  // namespace folia
