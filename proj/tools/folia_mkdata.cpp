// Writes the example input files under a target directory (default: data/).

#include <filesystem>
#include <fstream>
#include <iostream>

#include "folia/builders.hpp"
#include "folia/json_io.hpp"

using namespace folia;

namespace {

void dump(const std::filesystem::path& dir, const std::string& name, const json& j) {
    std::ofstream out(dir / name);
    out << j.dump(2) << "\n";
    std::cout << "wrote " << (dir / name).string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    std::filesystem::path dir = argc > 1 ? argv[1] : "data";
    std::filesystem::create_directories(dir);

    CycloCodec c4{CycloField::get(4)};
    CycloCodec c12{CycloField::get(12)};
    CycloCodec c20{CycloField::get(20)};

    // z/(1-z), the basic parabolic germ
    {
        int n = 16;
        std::vector<Cyclo> cs(n + 1, Cyclo(1));
        cs[0] = Cyclo(0);
        GermDiffeo<Cyclo> moebius{PowerSeries<Cyclo>(cs)};
        dump(dir, "germ_parabolic.json", germ_to_json(moebius, c4));
    }

    // a rotated flow: -exp(v_{2,3})
    {
        GermDiffeo<Cyclo> f(Cyclo(-1) *
                            exp_field(make_v<Cyclo>(2, Cyclo(3), 16), Cyclo(1)).series());
        dump(dir, "germ_resonant.json", germ_to_json(f, c4));
    }

    // generators of a non-solvable group: exp(v_{1,0}), exp(v_{2,0})
    {
        int n = 14;
        json j;
        j["schema"] = kSchema;
        j["field"] = c4.name();
        j["generators"] = json::array(
            {germ_to_json(exp_field(make_v<Cyclo>(1, Cyclo(0), n), Cyclo(1)), c4),
             germ_to_json(exp_field(make_v<Cyclo>(2, Cyclo(0), n), Cyclo(1)), c4)});
        dump(dir, "group_nonsolvable.json", j);
    }

    // the exceptional solvable pair z/(1-z), -z
    {
        int n = 14;
        std::vector<Cyclo> cs(n + 1, Cyclo(1));
        cs[0] = Cyclo(0);
        json j;
        j["schema"] = kSchema;
        j["field"] = c4.name();
        j["generators"] =
            json::array({germ_to_json(GermDiffeo<Cyclo>{PowerSeries<Cyclo>(cs)}, c4),
                         germ_to_json(GermDiffeo<Cyclo>::linear(Cyclo(-1), n), c4)});
        dump(dir, "group_exceptional.json", j);
    }

    // genus-2 complex with an order-5 unitary system
    {
        auto c = SurfaceComplex::canonical(2);
        auto basis = integer_cocycle_basis(c);
        auto sys = unit_system(c, 5, basis[0]);
        json j;
        j["schema"] = kSchema;
        j["field"] = c20.name();
        j["complex"] = complex_to_json(*c);
        j["system"] = local_system_to_json(sys, c20);
        dump(dir, "cohomology_genus2_order5.json", j);
    }

    // transition seeds
    dump(dir, "seed_torus_nu1.json", transition_to_json(torus_nu1_seed(12), c4));
    dump(dir, "seed_genus2_nu2.json", transition_to_json(genus2_nu2_seed(12), c12));

    // log-affine seed on the torus (exact Moebius relations)
    {
        auto c = SurfaceComplex::canonical(1);
        auto basis = integer_cocycle_basis(c);
        int n = 12;
        std::vector<GermDiffeo<Cyclo>> germs;
        for (int e = 0; e < c->num_edges(); ++e) {
            PowerSeries<Cyclo> denom =
                PowerSeries<Cyclo>::constant(Cyclo(1), n) +
                PowerSeries<Cyclo>::monomial(Cyclo(basis[0][e]), 1, n);
            germs.push_back(GermDiffeo<Cyclo>(denom.reciprocal().shifted(1)));
        }
        TransitionSystem<Cyclo> seed(c, std::move(germs), 1);
        dump(dir, "seed_log_affine.json", transition_to_json(seed, c4));
    }

    // a projective triple failing the first structure equation
    {
        int cap = 8;
        BivariatePoly<Cyclo> zero(cap);
        BivariatePoly<Cyclo> one = BivariatePoly<Cyclo>::constant(Cyclo(1), cap);
        ProjectiveTriple<Cyclo> bad{{zero, one}, {one, zero}, {zero, zero}};
        dump(dir, "triple_dy_dx.json", triple_to_json(bad, 3, c4));
    }

    // an integrable triple (dy, 0, (1 + y^2) dy)
    {
        int cap = 8;
        BivariatePoly<Cyclo> zero(cap);
        BivariatePoly<Cyclo> one = BivariatePoly<Cyclo>::constant(Cyclo(1), cap);
        BivariatePoly<Cyclo> phi = one;
        phi.set(0, 2, Cyclo(1));
        ProjectiveTriple<Cyclo> t{{zero, one}, {zero, zero}, {zero, phi}};
        dump(dir, "triple_integrable.json", triple_to_json(t, 3, c4));
    }
    return 0;
}
