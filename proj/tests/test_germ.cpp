#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "folia/bigcomplex.hpp"
#include "folia/germ.hpp"
#include "test_util.hpp"

using namespace folia;
using testutil::Gen;
using PS = PowerSeries<Cyclo>;
using G = GermDiffeo<Cyclo>;

namespace {
G from_ints(std::vector<long> v) {
    std::vector<Cyclo> c;
    for (long x : v) c.emplace_back(x);
    return G(PS(std::move(c)));
}
G moebius_impl(int trunc) {  // z/(1-z)
    std::vector<Cyclo> c(trunc + 1, Cyclo(1));
    c[0] = Cyclo(0);
    return G(PS(std::move(c)));
}
}  // namespace

TEST_CASE("composition basics") {
    CHECK(from_ints({0, 2}).compose(from_ints({0, 3})) == from_ints({0, 6}));
    G f = from_ints({0, 1, 1, 0, 0, 0});
    CHECK(f.compose(f.inverse()).is_identity());
    // z/(1-z) composed with itself: z/(1-2z)
    G m = moebius_impl(5);
    G mm = m.compose(m);
    G expect(PS({Cyclo(0), Cyclo(1), Cyclo(2), Cyclo(4), Cyclo(8), Cyclo(16)}));
    CHECK(mm == expect);
}

TEST_CASE("tangency order verdicts") {
    CHECK(from_ints({0, 2}).tangency().kind == TangencyVerdict::Kind::not_tangent);
    G f = from_ints({0, 1, 0, 1, 0, 0, 0, 0, 0});  // z + z^3 at N = 8
    auto t = f.tangency();
    CHECK(t.kind == TangencyVerdict::Kind::tangent);
    CHECK(t.order == 2);
    CHECK(G::identity(8).tangency().kind == TangencyVerdict::Kind::identity_to_order);
    CHECK(G::identity(8).is_identity());
}

TEST_CASE("commutator basics") {
    CHECK(commutator(from_ints({0, 2}), from_ints({0, 3})).is_identity());

    auto v1 = make_v<Cyclo>(1, Cyclo(0), 10);
    G f = exp_field(v1, Cyclo(1));
    G g = exp_field(v1, Cyclo(2));
    CHECK(commutator(f, g).is_identity());

    auto v2 = make_v<Cyclo>(2, Cyclo(0), 10);
    G h = exp_field(v2, Cyclo(1));
    G c = commutator(f, h);
    CHECK(!c.is_identity());
    auto t = c.tangency();
    CHECK(t.kind == TangencyVerdict::Kind::tangent);
    CHECK(t.order >= 3);
}

TEST_CASE("filtration law [Diff_p, Diff_q] in Diff_{p+q}") {
    Gen gen(23);
    for (int rep = 0; rep < 20; ++rep) {
        int p = (int)gen.integer(1, 3);
        int q = (int)gen.integer(1, 3);
        int n = p + q + 2 + (int)gen.integer(0, 3);
        G f = gen.tangent_germ(n, p);
        G g = gen.tangent_germ(n, q);
        CHECK(f.tangency().order == p);
        CHECK(g.tangency().order == q);
        CHECK(commutator(f, g).tangency().tangent_at_least(p + q));
    }
}

TEST_CASE("exp_field closed forms") {
    // zdot = z^2 at time 1: z/(1-z)
    G flow = exp_field(VectorFieldGerm<Cyclo>(PS::monomial(Cyclo(1), 2, 4)), Cyclo(1));
    CHECK(flow == from_ints({0, 1, 1, 1, 1}));

    CHECK(exp_field(make_v<Cyclo>(2, Cyclo(5), 8), Cyclo(0)).is_identity());

    // zdot = z^3 at time 1/2: z (1 - z^2)^{-1/2}
    G half = exp_field(VectorFieldGerm<Cyclo>(PS::monomial(Cyclo(1), 3, 5)),
                       Cyclo(mpq_class(1, 2)));
    CHECK(half.series() == testutil::binomial_flow(2, mpq_class(1), 5));
    CHECK(half.series().coeff(3) == Cyclo(mpq_class(1, 2)));
    CHECK(half.series().coeff(5) == Cyclo(mpq_class(3, 8)));
}

TEST_CASE("exp_field rejects nonzero linear part on the exact backend") {
    VectorFieldGerm<Cyclo> v(PS({Cyclo(0), Cyclo(1), Cyclo(1)}));
    CHECK_THROWS_AS(exp_field(v, Cyclo(1)), std::domain_error);
    // the bigfloat backend accepts it
    BigComplex::configure(128);
    VectorFieldGerm<BigComplex> vb(
        PowerSeries<BigComplex>({BigComplex(0), BigComplex(1), BigComplex(1)}));
    GermDiffeo<BigComplex> fb = exp_field(vb, BigComplex(1));
    // linear part = e
    BigComplex e = fb.linear_part();
    BigComplex expect = BigComplex::from_strings(
        "2.71828182845904523536028747135266249775724709369996", "0");
    CHECK(e == expect);
}

TEST_CASE("log_germ inverts exp_field") {
    auto v = make_v<Cyclo>(2, Cyclo(5), 9);
    G f = exp_field(v, Cyclo(1));
    CHECK(log_germ(f) == v);

    CHECK(log_germ(G::identity(6)).is_zero());

    // z/(1-z) -> z^2 d/dz
    CHECK(log_germ(moebius_impl(8)) ==
          VectorFieldGerm<Cyclo>(PS::monomial(Cyclo(1), 2, 8)));

    CHECK_THROWS_AS(log_germ(from_ints({0, 2})), std::invalid_argument);
}

TEST_CASE("exp/log round trip on random fields") {
    Gen gen(31);
    for (int rep = 0; rep < 10; ++rep) {
        PS s = gen.series(10, 2);
        VectorFieldGerm<Cyclo> v(s);
        CHECK(log_germ(exp_field(v, Cyclo(1))) == v);
    }
}

TEST_CASE("one-parameter group law") {
    Gen gen(37);
    for (int rep = 0; rep < 8; ++rep) {
        VectorFieldGerm<Cyclo> v(gen.series(10, 2));
        Cyclo s = gen.cyclo(4), t = gen.cyclo(4);
        CHECK(exp_field(v, s).compose(exp_field(v, t)) == exp_field(v, s + t));
    }
}

TEST_CASE("make_v expansions") {
    CHECK(make_v<Cyclo>(1, Cyclo(0), 6).series() == PS::monomial(Cyclo(1), 2, 6));
    CHECK(make_v<Cyclo>(1, Cyclo(1), 4).series() ==
          PS({Cyclo(0), Cyclo(0), Cyclo(1), Cyclo(-1), Cyclo(1)}));
    CHECK(make_v<Cyclo>(2, Cyclo(3), 6).series() ==
          PS({Cyclo(0), Cyclo(0), Cyclo(0), Cyclo(1), Cyclo(0), Cyclo(-3), Cyclo(0)}));
    CHECK_THROWS_AS(make_v<Cyclo>(0, Cyclo(1), 4), std::invalid_argument);
}

TEST_CASE("jet adjoint on the linear fiber") {
    auto g = JetElement<Cyclo>::from_germ(from_ints({0, 2, 1, 1}), 3);
    CHECK(jet_adjoint_linear(g, Cyclo(5)) == Cyclo(mpq_class(5, 8)));

    auto id_jet = JetElement<Cyclo>::from_germ(from_ints({0, 1, 4}), 2);
    CHECK(jet_adjoint_linear(id_jet, Cyclo(7)) == Cyclo(7));

    auto f12 = CycloField::get(12);
    Cyclo i = Cyclo::root_of_unity(f12, 4, 1);
    auto gi = JetElement<Cyclo>{4, {i}};
    CHECK(jet_adjoint_linear(gi, Cyclo(1)) == Cyclo(1));
}

TEST_CASE("jet adjoint agrees with conjugation at the first nonlinear order") {
    Gen gen(41);
    for (int rep = 0; rep < 10; ++rep) {
        int k = (int)gen.integer(1, 3);
        int n = k + 2;
        Cyclo lam = gen.cyclo(4);
        while (lam.is_zero()) lam = gen.cyclo(4);
        G g = gen.germ_with_linear(lam, n);
        Cyclo a = gen.cyclo(4);
        G f(PS::identity(n) + PS::monomial(a, k + 1, n));
        // g o f o g^{-1} carries a to lambda^{-k} a at order k+1
        G conj = g.compose(f).compose(g.inverse());
        CHECK(conj.series().coeff(k + 1) ==
              jet_adjoint_linear(JetElement<Cyclo>{k, {lam}}, a));
    }
}

TEST_CASE("jet adjoint on the tangent fiber") {
    std::vector<Cyclo> b{Cyclo(1), Cyclo(1), Cyclo(1)};
    auto out = jet_adjoint_tangent(1, 3, Cyclo(2), b);
    CHECK(out[0] == Cyclo(1));
    CHECK(out[1] == Cyclo(1));
    CHECK(out[2] == Cyclo(-3));

    // a_{nu+1} = 0 leaves the vector unchanged
    auto same = jet_adjoint_tangent(2, 5, Cyclo(0), b);
    CHECK(same == b);

    // nu = k kills the update term
    auto same2 = jet_adjoint_tangent(3, 3, Cyclo(7), b);
    CHECK(same2 == b);
}
