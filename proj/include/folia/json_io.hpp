#pragma once

#include <json.hpp>

#include <memory>
#include <string>

#include "folia/bigcomplex.hpp"
#include "folia/cyclotomic.hpp"
#include "folia/forms.hpp"
#include "folia/germ.hpp"
#include "folia/local_system.hpp"
#include "folia/transition.hpp"

namespace folia {

using nlohmann::json;

inline constexpr const char* kSchema = "folia/1";

struct SchemaError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline void require_field(const json& j, const char* key) {
    if (!j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
}

// ---- field tags -----------------------------------------------------------

template <class K>
struct FieldTag;

template <>
struct FieldTag<Cyclo> {
    static std::string name(const std::shared_ptr<const CycloField>& f) {
        return "cyclotomic:" + std::to_string(f ? f->conductor() : 1);
    }
};

template <>
struct FieldTag<BigComplex> {
    static std::string name() {
        return "bigfloat:" + std::to_string(BigComplex::precision_bits());
    }
};

// conductor of every cyclotomic value in a document
inline std::shared_ptr<const CycloField> document_field(const std::vector<Cyclo>& values) {
    unsigned m = 1;
    for (const auto& v : values) m = lcm_u(m, v.conductor());
    return CycloField::get(m);
}

// ---- coefficients ---------------------------------------------------------

inline json coeff_to_json(const Cyclo& v, const std::shared_ptr<const CycloField>& f) {
    json a = json::array();
    Cyclo p = v.promoted(f);
    for (const auto& q : p.coords()) a.push_back(q.get_str());
    return a;
}

inline json coeff_to_json(const BigComplex& v) {
    return json::array({v.re_string(), v.im_string()});
}

inline Cyclo coeff_from_json_cyclo(const json& j, const std::shared_ptr<const CycloField>& f) {
    if (!j.is_array() || j.size() != f->degree())
        throw SchemaError("cyclotomic coefficient must be an array of " +
                          std::to_string(f->degree()) + " rational strings");
    std::vector<mpq_class> c;
    for (const auto& s : j) c.push_back(parse_rational(s.get<std::string>()));
    return Cyclo(f, std::move(c));
}

inline BigComplex coeff_from_json_big(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw SchemaError("bigfloat coefficient must be [re, im] decimal strings");
    return BigComplex::from_strings(j[0].get<std::string>(), j[1].get<std::string>());
}

// backend-homogeneous helpers (the field context argument is ignored by the
// bigfloat side)
struct CycloCodec {
    std::shared_ptr<const CycloField> field;
    std::string name() const { return FieldTag<Cyclo>::name(field); }
    json write(const Cyclo& v) const { return coeff_to_json(v, field); }
    Cyclo read(const json& j) const { return coeff_from_json_cyclo(j, field); }
};

struct BigCodec {
    std::string name() const { return FieldTag<BigComplex>::name(); }
    json write(const BigComplex& v) const { return coeff_to_json(v); }
    BigComplex read(const json& j) const { return coeff_from_json_big(j); }
};

template <class K>
struct CodecFor;
template <>
struct CodecFor<Cyclo> {
    using type = CycloCodec;
};
template <>
struct CodecFor<BigComplex> {
    using type = BigCodec;
};

template <class K>
using Codec = typename CodecFor<K>::type;

// parse "cyclotomic:n" / "bigfloat:p"
struct BackendSpec {
    bool cyclotomic = true;
    unsigned conductor = 4;
    unsigned bits = 256;

    static BackendSpec parse(const std::string& s) {
        BackendSpec b;
        auto colon = s.find(':');
        std::string kind = s.substr(0, colon);
        std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
        if (kind == "cyclotomic") {
            b.cyclotomic = true;
            b.conductor = arg.empty() ? 4 : (unsigned)std::stoul(arg);
            if (b.conductor == 0) throw SchemaError("conductor must be positive");
        } else if (kind == "bigfloat") {
            b.cyclotomic = false;
            b.bits = arg.empty() ? 256 : (unsigned)std::stoul(arg);
        } else {
            throw SchemaError("unknown backend '" + s + "'");
        }
        return b;
    }
};

// ---- series / germs / fields ----------------------------------------------

template <class K, class C>
json series_to_json(const PowerSeries<K>& s, const C& codec, const std::string& kind) {
    json j;
    j["schema"] = kSchema;
    j["kind"] = kind;
    j["field"] = codec.name();
    j["trunc"] = s.trunc_order();
    json cs = json::array();
    for (const auto& c : s.coeffs()) cs.push_back(codec.write(c));
    j["coeffs"] = cs;
    return j;
}

template <class K, class C>
PowerSeries<K> series_from_json(const json& j, const C& codec) {
    require_field(j, "trunc");
    require_field(j, "coeffs");
    int trunc = j["trunc"].get<int>();
    if (trunc < 0) throw SchemaError("'trunc' must be nonnegative");
    const json& cs = j["coeffs"];
    if (!cs.is_array() || (int)cs.size() != trunc + 1)
        throw SchemaError("'coeffs' must hold trunc+1 entries");
    std::vector<K> c;
    for (const auto& e : cs) c.push_back(codec.read(e));
    return PowerSeries<K>(std::move(c));
}

template <class K, class C>
json germ_to_json(const GermDiffeo<K>& g, const C& codec) {
    return series_to_json(g.series(), codec, "germ");
}

template <class K, class C>
GermDiffeo<K> germ_from_json(const json& j, const C& codec) {
    return GermDiffeo<K>(series_from_json<K>(j, codec));
}

template <class K, class C>
json field_germ_to_json(const VectorFieldGerm<K>& v, const C& codec) {
    return series_to_json(v.series(), codec, "field");
}

// ---- complexes / systems ---------------------------------------------------

inline json complex_to_json(const SurfaceComplex& c) {
    json j;
    j["schema"] = kSchema;
    j["vertices"] = c.num_vertices();
    json ts = json::array();
    for (const auto& t : c.faces()) ts.push_back(json::array({t[0], t[1], t[2]}));
    j["triangles"] = ts;
    return j;
}

inline std::shared_ptr<const SurfaceComplex> complex_from_json(const json& j) {
    require_field(j, "vertices");
    require_field(j, "triangles");
    std::vector<std::array<int, 3>> faces;
    for (const auto& t : j["triangles"]) {
        if (!t.is_array() || t.size() != 3) throw SchemaError("triangle must be [i,j,k]");
        faces.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
    }
    return std::make_shared<SurfaceComplex>(j["vertices"].get<int>(), std::move(faces));
}

template <class K, class C>
json local_system_to_json(const UnitaryLocalSystem<K>& sys, const C& codec) {
    json j;
    j["schema"] = kSchema;
    j["field"] = codec.name();
    json es = json::array();
    const auto& c = *sys.complex();
    for (int e = 0; e < c.num_edges(); ++e) {
        auto [a, b] = c.edges()[e];
        es.push_back(json::array({json::array({a, b}), codec.write(sys.weight(a, b))}));
    }
    j["edges"] = es;
    return j;
}

template <class K, class C>
UnitaryLocalSystem<K> local_system_from_json(const json& j,
                                             std::shared_ptr<const SurfaceComplex> c,
                                             const C& codec) {
    require_field(j, "edges");
    std::vector<K> w(c->num_edges(), K(0));
    std::vector<bool> seen(c->num_edges(), false);
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2) throw SchemaError("edge entry must be [[i,j], w]");
        int a = e[0][0].get<int>(), b = e[0][1].get<int>();
        K v = codec.read(e[1]);
        int idx = c->edge_index(a, b);
        if (a > b) v = v.inverse();
        w[idx] = v;
        seen[idx] = true;
    }
    for (bool s : seen)
        if (!s) throw SchemaError("local system is missing an edge weight");
    return UnitaryLocalSystem<K>(std::move(c), std::move(w));
}

template <class K, class C>
json transition_to_json(const TransitionSystem<K>& t, const C& codec) {
    json j;
    j["schema"] = kSchema;
    j["field"] = codec.name();
    j["nu"] = t.declared_nu();
    j["trunc"] = t.trunc_order();
    j["complex"] = complex_to_json(*t.complex());
    json es = json::array();
    const auto& c = *t.complex();
    for (int e = 0; e < c.num_edges(); ++e) {
        auto [a, b] = c.edges()[e];
        json entry;
        entry["edge"] = json::array({a, b});
        entry["germ"] = germ_to_json(t.germ(a, b), codec);
        es.push_back(entry);
    }
    j["edges"] = es;
    return j;
}

template <class K, class C>
TransitionSystem<K> transition_from_json(const json& j, const C& codec) {
    require_field(j, "complex");
    require_field(j, "edges");
    require_field(j, "nu");
    auto c = complex_from_json(j["complex"]);
    std::vector<std::optional<GermDiffeo<K>>> fw(c->num_edges());
    std::vector<std::optional<GermDiffeo<K>>> bw(c->num_edges());
    for (const auto& e : j["edges"]) {
        require_field(e, "edge");
        require_field(e, "germ");
        int a = e["edge"][0].get<int>(), b = e["edge"][1].get<int>();
        GermDiffeo<K> g = germ_from_json<K>(e["germ"], codec);
        int idx = c->edge_index(a, b);
        (a < b ? fw : bw)[idx] = std::move(g);
    }
    std::vector<GermDiffeo<K>> germs;
    for (int e = 0; e < c->num_edges(); ++e) {
        auto [a, b] = c->edges()[e];
        if (fw[e] && bw[e]) {
            if (!fw[e]->compose(*bw[e]).is_identity())
                throw SchemaError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                                  "): the two orientations are not inverse germs");
            germs.push_back(*fw[e]);
        } else if (fw[e]) {
            germs.push_back(*fw[e]);
        } else if (bw[e]) {
            germs.push_back(bw[e]->inverse());
        } else {
            throw SchemaError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                              ") has no germ");
        }
    }
    return TransitionSystem<K>(std::move(c), std::move(germs), j["nu"].get<int>());
}

// ---- 1-forms and triples ----------------------------------------------------

template <class K, class C>
json one_form_to_json(const FormalOneForm<K>& w, const C& codec) {
    json j;
    j["schema"] = kSchema;
    j["field"] = codec.name();
    j["pole"] = w.pole_order();
    j["trunc"] = w.laurent.trunc_order();
    json cs = json::array();
    for (int e = w.laurent.lead(); e <= w.laurent.trunc_order(); ++e)
        cs.push_back(codec.write(w.laurent.coeff(e)));
    j["coeffs"] = cs;
    return j;
}

template <class K, class C>
FormalOneForm<K> one_form_from_json(const json& j, const C& codec) {
    require_field(j, "pole");
    require_field(j, "coeffs");
    int pole = j["pole"].get<int>();
    if (pole < 0) throw SchemaError("'pole' must be nonnegative");
    std::vector<K> c;
    for (const auto& e : j["coeffs"]) c.push_back(codec.read(e));
    return {LaurentSeries<K>(-pole, std::move(c))};
}

template <class K, class C>
json bivariate_to_json(const BivariatePoly<K>& p, const C& codec) {
    json a = json::array();
    for (int i = 0; i <= p.cap(); ++i)
        for (int j = 0; i + j <= p.cap(); ++j)
            if (!p.at(i, j).is_zero()) a.push_back(json::array({i, j, codec.write(p.at(i, j))}));
    return a;
}

template <class K, class C>
BivariatePoly<K> bivariate_from_json(const json& j, int cap, const C& codec) {
    BivariatePoly<K> p(cap);
    for (const auto& m : j) {
        if (!m.is_array() || m.size() != 3) throw SchemaError("monomial must be [i, j, coeff]");
        p.set(m[0].get<int>(), m[1].get<int>(), codec.read(m[2]));
    }
    return p;
}

template <class K, class C>
json triple_to_json(const ProjectiveTriple<K>& t, int degree, const C& codec) {
    json j;
    j["schema"] = kSchema;
    j["field"] = codec.name();
    j["degree"] = degree;
    auto one_form = [&](const PolyOneForm<K>& w) {
        json f;
        f["dx"] = bivariate_to_json(w.a, codec);
        f["dy"] = bivariate_to_json(w.b, codec);
        return f;
    };
    j["omega0"] = one_form(t.w0);
    j["omega1"] = one_form(t.w1);
    j["omega2"] = one_form(t.w2);
    return j;
}

template <class K, class C>
ProjectiveTriple<K> triple_from_json(const json& j, const C& codec) {
    require_field(j, "degree");
    int degree = j["degree"].get<int>();
    int cap = 2 * degree + 2;
    auto one_form = [&](const json& f) {
        require_field(f, "dx");
        require_field(f, "dy");
        return PolyOneForm<K>{bivariate_from_json<K>(f["dx"], cap, codec),
                              bivariate_from_json<K>(f["dy"], cap, codec)};
    };
    require_field(j, "omega0");
    require_field(j, "omega1");
    require_field(j, "omega2");
    return {one_form(j["omega0"]), one_form(j["omega1"]), one_form(j["omega2"])};
}

}  // namespace folia
