#pragma once

#include <vector>

#include "folia/cohomology.hpp"
#include "folia/cyclotomic.hpp"
#include "folia/transition.hpp"

namespace folia {

// Integer 1-cocycles spanning H^1(Y; Q): the rational representatives of the
// trivial-coefficient cohomology basis with denominators cleared.
inline std::vector<std::vector<long>> integer_cocycle_basis(
    const std::shared_ptr<const SurfaceComplex>& c) {
    auto triv = UnitaryLocalSystem<Cyclo>::trivial(c);
    auto h1 = cohomology(triv).h1;
    std::vector<std::vector<long>> out;
    for (const auto& rep : h1.representatives()) {
        mpz_class den(1);
        for (const auto& v : rep) {
            mpq_class q = v.rational();
            den = den * q.get_den() / gcd(mpz_class(den), mpz_class(q.get_den()));
        }
        std::vector<long> w;
        for (const auto& v : rep) {
            mpq_class q = v.rational() * den;
            q.canonicalize();
            w.push_back((long)mpz_class(q.get_num()).get_si());
        }
        out.push_back(std::move(w));
    }
    return out;
}

// Flat unitary system with weights zeta_n^{e(edge)} for an integer 1-cocycle e.
inline UnitaryLocalSystem<Cyclo> unit_system(const std::shared_ptr<const SurfaceComplex>& c,
                                             unsigned n, const std::vector<long>& exponents) {
    auto f = CycloField::get(Cyclo::working_conductor(n));
    std::vector<Cyclo> w;
    w.reserve(exponents.size());
    for (long e : exponents) w.push_back(Cyclo::root_of_unity(f, n, e));
    return UnitaryLocalSystem<Cyclo>(c, std::move(w));
}

inline std::vector<long> combine_cocycles(const std::vector<std::vector<long>>& basis,
                                          const std::vector<long>& multipliers) {
    std::vector<long> out(basis.at(0).size(), 0);
    for (size_t r = 0; r < basis.size(); ++r)
        for (size_t e = 0; e < out.size(); ++e) out[e] += multipliers.at(r) * basis[r][e];
    return out;
}

// Transition seed with trivial unitary part on the torus: relations
// y_j - y_i = a_ij y_i^2 + b_ij y_i^3 with {a_ij} a nonzero integer class
// (Ueda type 1) and {b_ij} an independent class that keeps the higher
// obstruction classes generic.
inline TransitionSystem<Cyclo> torus_nu1_seed(int trunc) {
    auto c = SurfaceComplex::canonical(1);
    auto basis = integer_cocycle_basis(c);
    std::vector<GermDiffeo<Cyclo>> germs;
    for (int e = 0; e < c->num_edges(); ++e) {
        PowerSeries<Cyclo> alpha =
            PowerSeries<Cyclo>::monomial(Cyclo(basis[0][e]), 2, trunc) +
            PowerSeries<Cyclo>::monomial(Cyclo(basis[1][e]), 3, trunc);
        germs.push_back(TransitionSystem<Cyclo>::germ_from_relation(Cyclo(1), alpha));
    }
    return TransitionSystem<Cyclo>(c, std::move(germs), 1);
}

// Genus-2 seed of Ueda type 2 with unitary part of order 3: t = zeta_3^{c},
// relations t_ij y_j - y_i = a_ij y_i^3 with {a_ij} a nonzero class in
// H^1(Sigma_{-2}).
inline TransitionSystem<Cyclo> genus2_nu2_seed(int trunc) {
    auto c = SurfaceComplex::canonical(2);
    auto basis = integer_cocycle_basis(c);
    // pick a combination whose order-3 system is nontrivial
    UnitaryLocalSystem<Cyclo> t = unit_system(c, 3, basis[0]);
    for (size_t r = 0; r < basis.size() && t.is_trivial(); ++r)
        t = unit_system(c, 3, basis[r]);
    if (t.is_trivial()) throw std::logic_error("genus2 seed: no nontrivial order-3 system");

    auto sys_m2 = t.power(-2);
    auto h1 = cohomology(sys_m2).h1;
    if (h1.dimension() == 0) throw std::logic_error("genus2 seed: H1(Sigma_{-2}) is trivial");
    const auto& rep = h1.representatives()[0];
    // order-5 class chosen to pair nontrivially with the Ueda class, so that
    // the first trivial-coefficient obstruction class is nonzero
    auto sys_m4 = t.power(-4);
    auto h1_m4 = cohomology(sys_m4).h1;
    std::vector<Cyclo> rep5;
    for (const auto& cand : h1_m4.representatives()) {
        Cyclo pairing = cup_product(sys_m2, sys_m4, TwistedCochain<Cyclo>{1, rep},
                                    TwistedCochain<Cyclo>{1, cand});
        if (!pairing.is_zero()) {
            rep5 = cand;
            break;
        }
    }
    if (rep5.empty()) throw std::logic_error("genus2 seed: degenerate cup pairing");

    std::vector<GermDiffeo<Cyclo>> germs;
    for (int e = 0; e < c->num_edges(); ++e) {
        auto [i, j] = c->edges()[e];
        // higher classes (order 4 in the trivial-weight Sigma_{-3}, order 5
        // in Sigma_{-4}) keep the later obstruction classes generic
        PowerSeries<Cyclo> alpha =
            PowerSeries<Cyclo>::monomial(rep[e], 3, trunc) +
            PowerSeries<Cyclo>::monomial(Cyclo(basis[1][e]), 4, trunc) +
            PowerSeries<Cyclo>::monomial(rep5[e], 5, trunc);
        germs.push_back(TransitionSystem<Cyclo>::germ_from_relation(t.weight(i, j), alpha));
    }
    return TransitionSystem<Cyclo>(c, std::move(germs), 2);
}

}  // namespace folia
