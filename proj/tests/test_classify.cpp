#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "folia/group_analysis.hpp"
#include "folia/normal_form.hpp"
#include "test_util.hpp"

using namespace folia;
using testutil::Gen;
using PS = PowerSeries<Cyclo>;
using G = GermDiffeo<Cyclo>;

namespace {

G moebius(int trunc) {  // z/(1-z) = exp(v_{1,0})
    std::vector<Cyclo> c(trunc + 1, Cyclo(1));
    c[0] = Cyclo(0);
    return G(PS(std::move(c)));
}

G model_germ(const Cyclo& a, int k, const Cyclo& lambda, const Cyclo& t, int trunc) {
    return G(a * exp_field(make_v<Cyclo>(k, lambda, trunc), t).series());
}

void check_certificate(const G& f, const ElementNormalForm<Cyclo>& nf) {
    G reduced = conjugate(nf.conjugator, f);
    G model = normal_form_model(nf, f.trunc_order());
    CHECK(reduced == model);
}

}  // namespace

TEST_CASE("normal form of the basic parabolic germ") {
    auto nf = normal_form_element(moebius(10));
    REQUIRE(nf.kind == ElementNormalForm<Cyclo>::Kind::resonant);
    CHECK(nf.a == Cyclo(1));
    CHECK(nf.k == 1);
    CHECK(nf.lambda == Cyclo(0));
    CHECK(nf.flow_time == Cyclo(1));
    check_certificate(moebius(10), nf);
}

TEST_CASE("normal form of a hyperbolic germ is linearizable") {
    G f(PS({Cyclo(0), Cyclo(2), Cyclo(1), Cyclo(0), Cyclo(0), Cyclo(0)}));
    auto nf = normal_form_element(f);
    REQUIRE(nf.kind == ElementNormalForm<Cyclo>::Kind::linearizable);
    CHECK(nf.a == Cyclo(2));
    CHECK(!nf.finite_order);
    CHECK(conjugate(nf.conjugator, f) == G::linear(Cyclo(2), 5));
}

TEST_CASE("conjugation invariance of the resonant invariants") {
    G base = moebius(12);
    G g(PS::identity(12) + PS::monomial(Cyclo(1), 3, 12));  // z + z^3
    G f = g.compose(base).compose(g.inverse());
    auto nf = normal_form_element(f);
    REQUIRE(nf.kind == ElementNormalForm<Cyclo>::Kind::resonant);
    CHECK(nf.a == Cyclo(1));
    CHECK(nf.k == 1);
    CHECK(nf.lambda == Cyclo(0));
    check_certificate(f, nf);
}

TEST_CASE("invariants are stable under 100 random tangent conjugations") {
    Gen gen(101);
    auto f12 = CycloField::get(12);
    for (int rep = 0; rep < 100; ++rep) {
        int k = (int)gen.integer(1, 3);
        int n = 2 * k + 4;
        Cyclo lambda = gen.cyclo(4);
        long aord = gen.integer(1, k);
        while (k % aord != 0) aord = gen.integer(1, k);
        Cyclo a = Cyclo::root_of_unity(f12, (unsigned)(12 / gcd_u(12, (unsigned)aord) == 0 ? 1 : aord), 1);
        a = Cyclo::root_of_unity(f12, (unsigned)aord, 1);
        G base = model_germ(a, k, lambda, Cyclo(1), n);
        G h = gen.tangent_germ(n, (int)gen.integer(1, 2));
        G f = h.compose(base).compose(h.inverse());
        auto nf = normal_form_element(f);
        REQUIRE(nf.kind == ElementNormalForm<Cyclo>::Kind::resonant);
        CHECK(nf.a == a);
        CHECK(nf.k == k);
        CHECK(nf.lambda == lambda);
    }
}

TEST_CASE("finite order germs are linearizable with a certificate") {
    G g(PS::identity(8) + PS::monomial(Cyclo(2), 2, 8));
    G f = g.compose(G::linear(Cyclo(-1), 8)).compose(g.inverse());
    auto nf = normal_form_element(f);
    REQUIRE(nf.kind == ElementNormalForm<Cyclo>::Kind::linearizable);
    CHECK(nf.a == Cyclo(-1));
    CHECK(nf.finite_order);
    CHECK(nf.finite_order_q == 2);
    CHECK(f.iterate(2).is_identity());
    CHECK(conjugate(nf.conjugator, f) == G::linear(Cyclo(-1), 8));
}

TEST_CASE("flow time falls back when the homothety needs a missing root") {
    // exp(2 v_{2,3}): leading coefficient 2, and sqrt(1/2) is not in Q(zeta_12)
    G f = model_germ(Cyclo(1), 2, Cyclo(3), Cyclo(2), 12);
    auto nf = normal_form_element(f);
    REQUIRE(nf.kind == ElementNormalForm<Cyclo>::Kind::resonant);
    CHECK(nf.k == 2);
    CHECK(nf.flow_time == Cyclo(2));
    CHECK(nf.lambda == Cyclo(mpq_class(3, 2)));  // strict invariant of the time-2 flow
    CHECK(nf.group_lambda() == Cyclo(3));
    check_certificate(f, nf);
}

TEST_CASE("centralizer checks") {
    CHECK(centralizer_check(G::linear(Cyclo(2), 8), G::linear(Cyclo(3), 8)));
    G f(PS({Cyclo(0), Cyclo(1), Cyclo(1), Cyclo(0), Cyclo(0)}));
    CHECK(!centralizer_check(G::linear(Cyclo(2), 4), f));

    // h = a exp(v_{2,3}), a^2 = 1; its centralizer contains b exp(t v_{2,3}), b^2 = 1
    G h = model_germ(Cyclo(-1), 2, Cyclo(3), Cyclo(1), 10);
    G g = model_germ(Cyclo(-1), 2, Cyclo(3), Cyclo(mpq_class(5, 7)), 10);
    CHECK(centralizer_check(h, g));
    CHECK(centralizer_check(h, model_germ(Cyclo(1), 2, Cyclo(3), Cyclo(2), 10)));
    CHECK(!centralizer_check(h, moebius(10)));
}

TEST_CASE("translation cocycle expansion") {
    G g(PS({Cyclo(0), Cyclo(1), Cyclo(1), Cyclo(0), Cyclo(0), Cyclo(0)}));  // z + z^2
    auto F = translation_cocycle(g, 1, Cyclo(0));
    CHECK(-F.coeff(0) == Cyclo(1));   // a(g) = 1
    CHECK(F.coeff(1) == Cyclo(1));    // b(g) = 1
    CHECK(F.coeff(2) == Cyclo(-1));   // c(g) = -1
    CHECK(F.coeff(3) == Cyclo(1));

    CHECK(translation_cocycle(G::identity(6), 1, Cyclo(0)).is_zero());
    CHECK_THROWS_AS(translation_cocycle(G::linear(Cyclo(2), 6), 1, Cyclo(0)),
                    std::invalid_argument);
}

TEST_CASE("translation cocycle laws on random pairs") {
    Gen gen(59);
    for (int rep = 0; rep < 20; ++rep) {
        int n = 10;
        G g = gen.tangent_germ(n, 1);
        G h = gen.tangent_germ(n, 1);
        auto Fg = translation_cocycle(g, 1, Cyclo(0));
        auto Fh = translation_cocycle(h, 1, Cyclo(0));
        auto Fgh = translation_cocycle(g.compose(h), 1, Cyclo(0));
        // F0(gh) = F0(g) o h + F0(h)
        std::vector<Cyclo> cs;
        for (int j = 0; j <= Fg.trunc_order(); ++j) cs.push_back(Fg.coeff(j));
        PS Fg_ps(cs);
        PS composed = Fg_ps.compose(h.series().truncated(Fg_ps.trunc_order()));
        auto rhs = LaurentSeries<Cyclo>::from_power_series(composed) + Fh;
        CHECK(Fgh == rhs);
        // b additivity and the coboundary identity for c
        CHECK(Fgh.coeff(1) == Fg.coeff(1) + Fh.coeff(1));
        CHECK(Fgh.coeff(2) ==
              Fg.coeff(2) + Fh.coeff(2) + Fg.coeff(1) * (-Fh.coeff(0)));
    }
}

TEST_CASE("group analysis: linear generators") {
    std::vector<G> gens{G::linear(Cyclo(2), 10), G::linear(Cyclo(3), 10)};
    auto v = group_analyze(gens, 0);
    CHECK(v.abelian_generators);
    CHECK(v.kind == GroupVerdict<Cyclo>::Kind::linearizable);
    REQUIRE(v.model.has_value());
    CHECK(v.model->model == GroupModel::L);
}

TEST_CASE("group analysis: finite linear shadow") {
    auto f12 = CycloField::get(12);
    Cyclo i = Cyclo::root_of_unity(f12, 4, 1);
    G g(PS::identity(10) + PS::monomial(Cyclo(1), 3, 10));
    std::vector<G> gens{conjugate(g, G::linear(Cyclo(-1), 10)),
                        conjugate(g, G::linear(i, 10))};
    auto v = group_analyze(gens, 0);
    CHECK(v.abelian_generators);
    CHECK(v.kind == GroupVerdict<Cyclo>::Kind::finite_linear);
    REQUIRE(v.model.has_value());
    CHECK(v.model->model == GroupModel::LQ);
}

TEST_CASE("group analysis: two tangency orders witness non-solvability") {
    int n = 14;
    G f = exp_field(make_v<Cyclo>(1, Cyclo(0), n), Cyclo(1));
    G g = exp_field(make_v<Cyclo>(2, Cyclo(0), n), Cyclo(1));
    auto v = group_analyze(std::vector<G>{f, g}, 0);
    REQUIRE(v.kind == GroupVerdict<Cyclo>::Kind::nonsolvable_witness);
    REQUIRE(!v.witness_germs.empty());
    // witnesses re-verify by direct computation
    std::vector<G> invs{f.inverse(), g.inverse()};
    for (size_t i = 0; i < v.witness_words.size(); ++i)
        CHECK(word_germ(std::vector<G>{f, g}, invs, v.witness_words[i]) == v.witness_germs[i]);
    CHECK(v.witness_germs.back().tangency().order >= n - 1);
}

TEST_CASE("group analysis: the exceptional solvable model A(1)") {
    int n = 12;
    G f = moebius(n);  // z/(1-z) = exp(v_{1,0})
    G g = G::linear(Cyclo(-1), n);  // e^{2 pi i / 2} z
    auto v = group_analyze(std::vector<G>{f, g}, 0);
    CHECK(!v.abelian_generators);
    REQUIRE(v.kind == GroupVerdict<Cyclo>::Kind::solvable_model);
    REQUIRE(v.model.has_value());
    CHECK(v.model->model == GroupModel::A);
    CHECK(v.model->k == 1);
}

TEST_CASE("conjugate_into_model: abelian flows reduce to E(1,0)") {
    int n = 12;
    G g(PS::identity(n) + PS::monomial(Cyclo(1), 2, n));  // z + z^2
    G a = conjugate(g.inverse(), exp_field(make_v<Cyclo>(1, Cyclo(0), n), Cyclo(1)));
    G b = conjugate(g.inverse(), exp_field(make_v<Cyclo>(1, Cyclo(0), n), Cyclo(2)));
    auto mc = conjugate_into_model(std::vector<G>{a, b}, 0);
    REQUIRE(mc.ok);
    CHECK(mc.model.model == GroupModel::E);
    CHECK(mc.model.k == 1);
    CHECK(mc.model.lambda == Cyclo(0));
    for (const auto& u : mc.images) CHECK(germ_in_E(u, 1, Cyclo(0)));
    // verdict side
    auto v = group_analyze(std::vector<G>{a, b}, 0);
    CHECK(v.kind == GroupVerdict<Cyclo>::Kind::abelian);
    CHECK(v.abelian_generators);
}

TEST_CASE("conjugate_into_model: single linear generator") {
    auto mc = conjugate_into_model(std::vector<G>{G::linear(Cyclo(2), 8)}, 0);
    REQUIRE(mc.ok);
    CHECK(mc.model.model == GroupModel::L);
    CHECK(mc.conjugator.is_identity());
}

TEST_CASE("conjugate_into_model: resonant single generator lands in E(2,3)") {
    G f = model_germ(Cyclo(-1), 2, Cyclo(3), Cyclo(1), 14);
    auto mc = conjugate_into_model(std::vector<G>{f}, 0);
    REQUIRE(mc.ok);
    CHECK(mc.model.model == GroupModel::E);
    CHECK(mc.model.k == 2);
    CHECK(mc.model.lambda == Cyclo(3));
}

TEST_CASE("center shadow of the A(1) example group") {
    int n = 12;
    G f = moebius(n);
    G g = G::linear(Cyclo(-1), n);
    Gen gen(71);
    // candidates that do commute with both generators must be linear with a
    // root-of-unity coefficient
    std::vector<G> candidates{G::linear(Cyclo(-1), n), G::linear(Cyclo(1), n),
                              model_germ(Cyclo(1), 1, Cyclo(0), Cyclo(3), n),
                              model_germ(Cyclo(-1), 1, Cyclo(0), Cyclo(1), n),
                              gen.tangent_germ(n, 1), gen.germ_with_linear(Cyclo(2), n)};
    for (const auto& h : candidates) {
        if (centralizer_check(h, f) && centralizer_check(h, g)) {
            CHECK(germ_in_L(h));
            CHECK(h.linear_part().multiplicative_order() > 0);
        }
    }
    // and the identity-linear candidates really are in the center
    CHECK(centralizer_check(G::linear(Cyclo(1), n), f));
}

TEST_CASE("group analysis rejects an empty generator list") {
    CHECK_THROWS_AS(group_analyze(std::vector<G>{}, 0), std::invalid_argument);
}
