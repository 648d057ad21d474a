#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "folia/linalg.hpp"
#include "folia/local_system.hpp"

namespace folia {

// Coboundary matrices of the twisted simplicial complex, assembled with the
// fixed vertex order:
//   (d0 h)_{ij}  = T_ij h_j - h_i                 (rows: canonical edges)
//   (d1 a)_{ijk} = a_ij + T_ij a_jk - a_ik        (rows: sorted triangles)
template <class K>
Matrix<K> coboundary0(const UnitaryLocalSystem<K>& sys) {
    const auto& c = *sys.complex();
    Matrix<K> m(c.num_edges(), c.num_vertices());
    for (int e = 0; e < c.num_edges(); ++e) {
        auto [i, j] = c.edges()[e];
        m.at(e, j) += sys.weight(i, j);
        m.at(e, i) -= K(1);
    }
    return m;
}

template <class K>
Matrix<K> coboundary1(const UnitaryLocalSystem<K>& sys) {
    const auto& c = *sys.complex();
    Matrix<K> m(c.num_faces(), c.num_edges());
    for (int f = 0; f < c.num_faces(); ++f) {
        auto [i, j, k] = c.sorted_faces()[f];
        m.at(f, c.edge_index(i, j)) += K(1);
        m.at(f, c.edge_index(j, k)) += sys.weight(i, j);
        m.at(f, c.edge_index(i, k)) -= K(1);
    }
    return m;
}

template <class K>
TwistedCochain<K> apply_coboundary(const UnitaryLocalSystem<K>& sys,
                                   const TwistedCochain<K>& u) {
    if (u.degree >= 2) throw std::invalid_argument("apply_coboundary: degree too high");
    Matrix<K> m = u.degree == 0 ? coboundary0(sys) : coboundary1(sys);
    return TwistedCochain<K>{u.degree + 1, m.apply(u.values)};
}

// Basis of H^degree: representative cocycles plus a projection onto class
// coordinates (coboundaries project to zero).
template <class K>
class CohomologyBasis {
  public:
    CohomologyBasis(int degree, int ambient_cols, Matrix<K> prev_coboundary,
                    std::vector<std::vector<K>> reps)
        : degree_(degree),
          reps_(std::move(reps)),
          prev_cols_(prev_coboundary.cols()),
          proj_(make_projector(prev_coboundary, reps_, ambient_cols)),
          ambient_(ambient_cols) {}

    int degree() const { return degree_; }
    int dimension() const { return (int)reps_.size(); }
    const std::vector<std::vector<K>>& representatives() const { return reps_; }

    // class coordinates of a cocycle in this basis
    std::vector<K> project(const std::vector<K>& z) const {
        if ((int)z.size() != ambient_) throw std::invalid_argument("project: size mismatch");
        if (reps_.empty() && prev_cols_ == 0) return {};
        auto x = solve_pinned(proj_, z);
        if (!x) throw std::domain_error("project: vector is not a cocycle of this system");
        return std::vector<K>(x->begin() + prev_cols_, x->end());
    }

  private:
    static Matrix<K> make_projector(const Matrix<K>& prev,
                                    const std::vector<std::vector<K>>& reps, int ambient) {
        Matrix<K> right(ambient, (int)reps.size());
        for (int j = 0; j < (int)reps.size(); ++j)
            for (int i = 0; i < ambient; ++i) right.at(i, j) = reps[j][i];
        if (prev.cols() == 0) return right;
        return prev.augmented(right);
    }

    int degree_;
    std::vector<std::vector<K>> reps_;
    int prev_cols_;
    Matrix<K> proj_;  // [previous coboundary | representatives]
    int ambient_;
};

template <class K>
struct CohomologyData {
    CohomologyBasis<K> h0, h1, h2;
    std::array<int, 3> dims() const { return {h0.dimension(), h1.dimension(), h2.dimension()}; }
};

// Full twisted cohomology of the complex, by exact elimination.
template <class K>
CohomologyData<K> cohomology(const UnitaryLocalSystem<K>& sys) {
    const auto& c = *sys.complex();
    Matrix<K> d0 = coboundary0(sys);
    Matrix<K> d1 = coboundary1(sys);

    Echelon<K> e0(d0);
    std::vector<std::vector<K>> h0_reps = e0.kernel_basis();
    CohomologyBasis<K> h0(0, c.num_vertices(), Matrix<K>(c.num_vertices(), 0),
                          std::move(h0_reps));

    // H1: kernel vectors of d1 that are independent modulo the image of d0
    Echelon<K> e1(d1);
    std::vector<std::vector<K>> ker1 = e1.kernel_basis();
    std::vector<std::vector<K>> h1_reps;
    if (!ker1.empty()) {
        Echelon<K> joint(d0.augmented(Matrix<K>::from_columns(ker1)));
        for (int col : joint.pivot_columns())
            if (col >= c.num_vertices()) h1_reps.push_back(ker1[col - c.num_vertices()]);
    }
    CohomologyBasis<K> h1(1, c.num_edges(), d0, std::move(h1_reps));

    // H2: standard face vectors independent modulo the image of d1
    std::vector<std::vector<K>> h2_reps;
    {
        std::vector<std::vector<K>> id;
        for (int f = 0; f < c.num_faces(); ++f) {
            std::vector<K> v(c.num_faces(), K(0));
            v[f] = K(1);
            id.push_back(std::move(v));
        }
        Echelon<K> joint(d1.augmented(Matrix<K>::from_columns(id)));
        for (int col : joint.pivot_columns())
            if (col >= c.num_edges()) h2_reps.push_back(id[col - c.num_edges()]);
    }
    CohomologyBasis<K> h2(2, c.num_faces(), d1, std::move(h2_reps));

    return {std::move(h0), std::move(h1), std::move(h2)};
}

// Primitive with free variables pinned to zero, or the class coordinates of
// the cocycle when it is not a coboundary.
template <class K>
using CoboundaryResult = std::variant<TwistedCochain<K>, std::vector<K>>;

template <class K>
CoboundaryResult<K> solve_coboundary(const UnitaryLocalSystem<K>& sys,
                                     const TwistedCochain<K>& z) {
    const auto& c = *sys.complex();
    if (z.degree != 1 && z.degree != 2)
        throw std::invalid_argument("solve_coboundary: degree must be 1 or 2");
    if (z.degree == 1) {
        TwistedCochain<K> dz = apply_coboundary(sys, z);
        for (int f = 0; f < c.num_faces(); ++f)
            if (!dz.values[f].is_zero())
                throw std::invalid_argument(
                    "solve_coboundary: input is not a cocycle (fails on triangle " +
                    std::to_string(f) + ")");
    }
    Matrix<K> d = z.degree == 1 ? coboundary0(sys) : coboundary1(sys);
    if (auto x = solve_pinned(d, z.values))
        return TwistedCochain<K>{z.degree - 1, std::move(*x)};
    auto data = cohomology(sys);
    const CohomologyBasis<K>& basis = z.degree == 1 ? data.h1 : data.h2;
    return basis.project(z.values);
}

// Value of a degree-2 cochain (based at the smallest vertex of each sorted
// triangle) on an arbitrary orientation of that triangle:
//   c_{sigma(ijk)} = sign(sigma) * T(first, i) * c_{ijk}.
template <class K>
K triangle_value(const UnitaryLocalSystem<K>& sys, const TwistedCochain<K>& c2,
                 int face, std::array<int, 3> oriented) {
    const auto& c = *sys.complex();
    auto s = c.sorted_faces()[face];
    K val = c2.values[face];
    std::array<int, 3> t = oriented;
    int sign = 1;
    // sort t, tracking the permutation sign
    if (t[0] > t[1]) { std::swap(t[0], t[1]); sign = -sign; }
    if (t[1] > t[2]) { std::swap(t[1], t[2]); sign = -sign; }
    if (t[0] > t[1]) { std::swap(t[0], t[1]); sign = -sign; }
    if (t != s) throw std::invalid_argument("triangle_value: vertex set mismatch");
    K transport = oriented[0] == s[0] ? K(1) : sys.weight(oriented[0], s[0]);
    K out = transport * val;
    return sign > 0 ? out : -out;
}

// Alexander-Whitney product of twisted 1-cochains: on a sorted triangle,
// (u cup v)(ijk) = u(ij) * B_ij(v(jk)), the weight of the first edge (in v's
// system B) acting on the second factor.  The result lives in the tensor
// system based at the smallest vertex.
template <class K>
TwistedCochain<K> cup_cochain(const UnitaryLocalSystem<K>& sys_u,
                              const UnitaryLocalSystem<K>& sys_v,
                              const TwistedCochain<K>& u, const TwistedCochain<K>& v) {
    const auto& c = *sys_u.complex();
    TwistedCochain<K> out = TwistedCochain<K>::zero(c, 2);
    for (int f = 0; f < c.num_faces(); ++f) {
        auto [i, j, k] = c.sorted_faces()[f];
        out.values[f] =
            edge_value(sys_u, u, i, j) * sys_v.weight(i, j) * edge_value(sys_v, v, j, k);
    }
    return out;
}

// Pairing of a 2-cochain with trivial-monodromy coefficients against the
// fundamental cycle: values are transported to trivial coefficients via a
// spanning-tree trivialization and summed with orientation signs.
template <class K>
K pair_with_fundamental(const UnitaryLocalSystem<K>& sys, const TwistedCochain<K>& c2) {
    const auto& c = *sys.complex();
    auto u = sys.trivialization();
    if (!u)
        throw std::invalid_argument(
            "pair_with_fundamental: coefficient system has nontrivial monodromy");
    K acc(0);
    for (int f = 0; f < c.num_faces(); ++f) {
        K v = (*u)[c.sorted_faces()[f][0]].inverse() * c2.values[f];
        acc += c.face_signs()[f] > 0 ? v : -v;
    }
    return acc;
}

// Cup product of two twisted 1-cochains whose systems are dual, evaluated
// against the fundamental 2-cycle.
template <class K>
K cup_product(const UnitaryLocalSystem<K>& sys_u, const UnitaryLocalSystem<K>& sys_v,
              const TwistedCochain<K>& u, const TwistedCochain<K>& v) {
    auto tensor = sys_u.tensor(sys_v);
    if (!tensor.is_trivial())
        throw std::invalid_argument("cup_product: coefficient systems are not dual");
    return pair_with_fundamental(tensor, cup_cochain(sys_u, sys_v, u, v));
}

}  // namespace folia
