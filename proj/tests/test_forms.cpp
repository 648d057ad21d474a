#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "folia/forms.hpp"
#include "folia/group_analysis.hpp"
#include "test_util.hpp"

using namespace folia;
using testutil::Gen;
using PS = PowerSeries<Cyclo>;
using G = GermDiffeo<Cyclo>;
using BP = BivariatePoly<Cyclo>;

namespace {

G model_germ(const Cyclo& a, int k, const Cyclo& lambda, const Cyclo& t, int trunc) {
    return G(a * exp_field(make_v<Cyclo>(k, lambda, trunc), t).series());
}

// independent exterior calculus oracle on sparse monomial maps
using Mono = std::map<std::pair<int, int>, Cyclo>;
Mono to_mono(const BP& p) {
    Mono m;
    for (int i = 0; i <= p.cap(); ++i)
        for (int j = 0; i + j <= p.cap(); ++j)
            if (!p.at(i, j).is_zero()) m[{i, j}] = p.at(i, j);
    return m;
}
Mono mono_mul(const Mono& a, const Mono& b, int cap) {
    Mono c;
    for (const auto& [ia, va] : a)
        for (const auto& [ib, vb] : b) {
            int x = ia.first + ib.first, y = ia.second + ib.second;
            if (x + y > cap) continue;
            auto key = std::make_pair(x, y);
            auto it = c.find(key);
            if (it == c.end()) c[key] = va * vb;
            else it->second += va * vb;
        }
    return c;
}
Mono mono_dx(const Mono& a) {
    Mono c;
    for (const auto& [i, v] : a)
        if (i.first > 0) c[{i.first - 1, i.second}] = Cyclo(i.first) * v;
    return c;
}
Mono mono_dy(const Mono& a) {
    Mono c;
    for (const auto& [i, v] : a)
        if (i.second > 0) c[{i.first, i.second - 1}] = Cyclo(i.second) * v;
    return c;
}
bool mono_equal(const Mono& a, const Mono& b, int cap) {
    for (int i = 0; i <= cap; ++i)
        for (int j = 0; i + j <= cap; ++j) {
            Cyclo va(0), vb(0);
            auto ia = a.find({i, j});
            auto ib = b.find({i, j});
            if (ia != a.end()) va = ia->second;
            if (ib != b.end()) vb = ib->second;
            if (va != vb) return false;
        }
    return true;
}

BP random_poly(Gen& gen, int degree, int cap) {
    BP p(cap);
    for (int i = 0; i <= degree; ++i)
        for (int j = 0; i + j <= degree; ++j) p.set(i, j, gen.cyclo(3));
    return p;
}

ProjectiveTriple<Cyclo> base_integrable_triple(Gen& gen, int cap) {
    // (dH, 0, phi(H) dH) for H = y and a random polynomial phi
    BP zero(cap);
    BP phi(cap);
    for (int d = 0; d <= 2; ++d) phi.set(0, d, gen.cyclo(3));
    PolyOneForm<Cyclo> w0{zero, BP::constant(Cyclo(1), cap)};        // dy
    PolyOneForm<Cyclo> w1{zero, zero};
    PolyOneForm<Cyclo> w2{zero, phi};                                // phi(y) dy
    return {w0, w1, w2};
}

}  // namespace

TEST_CASE("pullback basics") {
    int n = 10;
    // a z preserves dz/z
    CHECK(preserves_form(G::linear(Cyclo(5), n), logarithmic_form<Cyclo>(n - 2)));
    // a z scales dz/z^{k+1} by a^{-k}
    for (int k : {1, 2, 3}) {
        auto line = omega_form(k, Cyclo(0), n - k - 2);
        auto p = pullback(G::linear(Cyclo(3), n), line);
        CHECK(p.laurent == (Cyclo(3).pow(-k) * line.laurent));
        auto m = line_multiplier(G::linear(Cyclo(3), n), line);
        REQUIRE(m.has_value());
        CHECK(*m == Cyclo(3).pow(-k));
    }
}

TEST_CASE("flows of v_{k,lambda} preserve omega_{k,lambda} exactly") {
    Gen gen(3);
    for (int rep = 0; rep < 10; ++rep) {
        int k = (int)gen.integer(1, 3);
        int n = 16 + k + 2;
        Cyclo lambda = gen.cyclo(4);
        Cyclo t = gen.cyclo(4);
        G f = exp_field(make_v<Cyclo>(k, lambda, n), t);
        CHECK(preserves_form(f, omega_form(k, lambda, 16)));
    }
}

TEST_CASE("A_k elements preserve the line C dz/z^{k+1}") {
    int k = 2, n = 16;
    // z/(1 - b z^k)^{1/k} = time-(b/k) flow of z^{k+1} d/dz
    G f = exp_field(make_v<Cyclo>(k, Cyclo(0), n), Cyclo(mpq_class(5, 3)));
    auto line = omega_form(k, Cyclo(0), n - k - 2);
    auto m = line_multiplier(f, line);
    REQUIRE(m.has_value());
    CHECK(*m == Cyclo(1));  // the flow preserves the form itself
    // a generic germ does not preserve the line
    Gen gen(7);
    G junk = gen.germ_with_linear(Cyclo(2), n);
    CHECK(!line_multiplier(junk, line).has_value());
}

TEST_CASE("invariant form search finds the strongest structure") {
    int n = 16;
    std::vector<G> linear{G::linear(Cyclo(2), n), G::linear(Cyclo(3), n)};
    auto r1 = invariant_form_search(linear);
    CHECK(r1.kind == InvariantFormResult<Cyclo>::Kind::logarithmic);

    std::vector<G> e_gens{model_germ(Cyclo(1), 2, Cyclo(3), Cyclo(1), n),
                          model_germ(Cyclo(-1), 2, Cyclo(3), Cyclo(2), n)};
    auto r2 = invariant_form_search(e_gens);
    CHECK(r2.kind == InvariantFormResult<Cyclo>::Kind::e_model);
    CHECK(r2.k == 2);
    CHECK(r2.lambda == Cyclo(3));

    // {z/(1-z), 2z}: the line C dz/z^2 survives, the form itself does not
    std::vector<Cyclo> mob(n + 1, Cyclo(1));
    mob[0] = Cyclo(0);
    std::vector<G> a_gens{G(PS(mob)), G::linear(Cyclo(2), n)};
    auto r3 = invariant_form_search(a_gens);
    CHECK(r3.kind == InvariantFormResult<Cyclo>::Kind::line);
    CHECK(r3.k == 1);
}

TEST_CASE("symmetry characterization both directions") {
    Gen gen(11);
    auto f12 = CycloField::get(12);
    for (int rep = 0; rep < 15; ++rep) {
        int k = (int)gen.integer(1, 3);
        int n = 16 + k + 2;
        Cyclo lambda = gen.cyclo(3);
        // member: a exp(t v) with a^k = 1
        std::vector<unsigned> divs;
        for (unsigned d = 1; d <= (unsigned)k; ++d)
            if (k % d == 0) divs.push_back(d);
        unsigned q = divs[gen.integer(0, (long)divs.size() - 1)];
        Cyclo a = Cyclo::root_of_unity(f12, q, gen.integer(0, q - 1));
        G member = model_germ(a, k, lambda, gen.cyclo(3), n);
        CHECK(preserves_form(member, omega_form(k, lambda, 16)));
        CHECK(germ_in_E(member, k, lambda));
        // non-member: perturb one coefficient
        G outsider(member.series() +
                   PS::monomial(Cyclo(1), (int)gen.integer(2, k + 2), n));
        if (outsider.series() != member.series()) {
            CHECK(!preserves_form(outsider, omega_form(k, lambda, 16)));
            CHECK(!germ_in_E(outsider, k, lambda));
        }
    }
}

TEST_CASE("pullback is functorial and conjugation-equivariant") {
    Gen gen(13);
    int n = 24;
    G g = gen.germ_with_linear(Cyclo(2), n);
    G h = gen.tangent_germ(n, 1);
    auto omega = omega_form(2, Cyclo(5), 8);
    auto lhs = pullback(g.compose(h), omega);
    auto rhs = pullback(h, pullback(g, omega));
    CHECK(lhs.laurent == rhs.laurent);

    // a conjugated symmetry preserves the transported form
    G f = model_germ(Cyclo(1), 2, Cyclo(5), Cyclo(3), n);
    G conj_f = conjugate(h, f);
    auto transported = pullback(h, omega_form(2, Cyclo(5), 12));
    auto back = pullback(conj_f, transported);
    // compare on the common trusted window
    CHECK(back.laurent == transported.laurent);
}

TEST_CASE("triple_check on the stated examples") {
    int cap = 8;
    Gen gen(17);
    auto t0 = base_integrable_triple(gen, cap);
    CHECK(triple_check(t0).all_zero());

    // (dy, dx, 0): fails the first equation with residual dy ^ dx
    BP zero(cap);
    PolyOneForm<Cyclo> dy{zero, BP::constant(Cyclo(1), cap)};
    PolyOneForm<Cyclo> dx{BP::constant(Cyclo(1), cap), zero};
    ProjectiveTriple<Cyclo> bad{dy, dx, {zero, zero}};
    auto rep = triple_check(bad);
    CHECK(!rep.r0.is_zero());
    CHECK(rep.r0.c == BP::constant(Cyclo(-1), cap - 1));  // dy^dx = -dx^dy
    CHECK(rep.r1.is_zero());
    CHECK(rep.r2.is_zero());
}

TEST_CASE("triple residuals match an independent exterior-calculus oracle") {
    Gen gen(19);
    int cap = 8;
    for (int rep = 0; rep < 5; ++rep) {
        ProjectiveTriple<Cyclo> t{{random_poly(gen, 3, cap), random_poly(gen, 3, cap)},
                                  {random_poly(gen, 3, cap), random_poly(gen, 3, cap)},
                                  {random_poly(gen, 3, cap), random_poly(gen, 3, cap)}};
        auto r = triple_check(t);
        int ocap = cap - 1;
        // oracle: wedge(u,v) = u.a v.b - u.b v.a ; d(w) = dx(w.b) - dy(w.a)
        auto wedge_o = [&](const PolyOneForm<Cyclo>& u, const PolyOneForm<Cyclo>& v) {
            Mono p = mono_mul(to_mono(u.a), to_mono(v.b), ocap);
            Mono q = mono_mul(to_mono(u.b), to_mono(v.a), ocap);
            for (auto& [k, val] : q) {
                auto it = p.find(k);
                if (it == p.end()) p[k] = -val;
                else it->second -= val;
            }
            return p;
        };
        auto d_o = [&](const PolyOneForm<Cyclo>& w) {
            Mono p = mono_dx(to_mono(w.b));
            Mono q = mono_dy(to_mono(w.a));
            for (auto& [k, val] : q) {
                auto it = p.find(k);
                if (it == p.end()) p[k] = -val;
                else it->second -= val;
            }
            return p;
        };
        auto sub = [&](Mono a, const Mono& b) {
            for (const auto& [k, val] : b) {
                auto it = a.find(k);
                if (it == a.end()) a[k] = -val;
                else it->second -= val;
            }
            return a;
        };
        CHECK(mono_equal(to_mono(r.r0.c), sub(wedge_o(t.w0, t.w1), d_o(t.w0)), ocap));
        Mono two_w02 = wedge_o(t.w0, t.w2);
        for (auto& [k, v] : two_w02) v = Cyclo(2) * v;
        CHECK(mono_equal(to_mono(r.r1.c), sub(two_w02, d_o(t.w1)), ocap));
        CHECK(mono_equal(to_mono(r.r2.c), sub(wedge_o(t.w1, t.w2), d_o(t.w2)), ocap));
    }
}

TEST_CASE("gauge transforms: identity, the stated f-example, invariance") {
    Gen gen(23);
    int cap = 12;
    auto t = base_integrable_triple(gen, cap);

    auto same = gauge_transform(t, BP::constant(Cyclo(1), cap), BP(cap));
    CHECK(same.w0 == t.w0);
    CHECK(same.w1 == t.w1);
    CHECK(same.w2 == t.w2);

    // f = 1 + x on (dy, 0, y dy)
    BP zero(cap);
    BP one = BP::constant(Cyclo(1), cap);
    BP f = one;
    f.set(1, 0, Cyclo(1));  // 1 + x
    BP ypoly(cap);
    ypoly.set(0, 1, Cyclo(1));
    ProjectiveTriple<Cyclo> base{{zero, one}, {zero, zero}, {zero, ypoly}};
    auto moved = gauge_transform(base, f, BP(cap));
    CHECK(moved.w0.b == f);          // (1+x) dy
    CHECK(moved.w0.a.is_zero());
    // w1 = -dx/(1+x): the dx part is -(1+x)^{-1}
    CHECK(moved.w1.a == (Cyclo(-1) * f.inverse()));
    CHECK(moved.w1.b.is_zero());
    // w2 = y dy / (1+x)
    CHECK(moved.w2.b == (ypoly * f.inverse()));
    CHECK(moved.w2.a.is_zero());

    // integrable stays integrable under random gauges
    for (int rep = 0; rep < 6; ++rep) {
        BP fu = random_poly(gen, 2, cap);
        fu.set(0, 0, Cyclo(1) + gen.cyclo(2) * gen.cyclo(2));
        if (fu.constant_term().is_zero()) fu.set(0, 0, Cyclo(1));
        BP g = random_poly(gen, 2, cap);
        auto tt = gauge_transform(t, fu, g);
        CHECK(triple_check(tt).all_zero());
    }
}

TEST_CASE("gauge actions compose: (f1,g1) then (f2,g2) = (f1 f2, g2 + g1/f2)") {
    Gen gen(29);
    int cap = 12;
    auto t = base_integrable_triple(gen, cap);
    BP f1 = random_poly(gen, 1, cap);
    f1.set(0, 0, Cyclo(1));
    BP f2 = random_poly(gen, 1, cap);
    f2.set(0, 0, Cyclo(2));
    BP g1 = random_poly(gen, 1, cap);
    BP g2 = random_poly(gen, 1, cap);
    auto two_step = gauge_transform(gauge_transform(t, f1, g1), f2, g2);
    auto one_step = gauge_transform(t, f1 * f2, g2 + g1 * f2.inverse());
    CHECK(two_step.w0 == one_step.w0);
    CHECK(two_step.w1 == one_step.w1);
    CHECK(two_step.w2 == one_step.w2);
}

TEST_CASE("gauge rejects a non-unit f") {
    int cap = 6;
    Gen gen(31);
    auto t = base_integrable_triple(gen, cap);
    BP f(cap);
    f.set(1, 0, Cyclo(1));  // x is not a unit
    CHECK_THROWS_AS(gauge_transform(t, f, BP(cap)), std::invalid_argument);
}

TEST_CASE("insufficient truncation to resolve a pole is reported") {
    G f = G::identity(4);
    auto omega = omega_form(4, Cyclo(0), 4);
    CHECK_THROWS_AS(pullback(f, omega), std::invalid_argument);
}
