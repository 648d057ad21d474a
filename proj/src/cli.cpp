#include "folia/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "folia/cohomology.hpp"
#include "folia/group_analysis.hpp"
#include "folia/json_io.hpp"
#include "folia/log_affine.hpp"
#include "folia/normal_form.hpp"

namespace folia::cli {

namespace {

struct Options {
    std::string input;
    int order = 16;
    std::string backend;
    unsigned long seed = 0;
    bool pretty = false;
    int power = 1;
};

json load_input(const std::string& path) {
    json j;
    if (path == "-") {
        std::cin >> j;
        return j;
    }
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open input file '" + path + "'");
    in >> j;
    return j;
}

std::string field_of(const json& j) {
    require_field(j, "field");
    return j["field"].get<std::string>();
}

// run fn with the codec selected by the document's field tag
template <class Fn>
int with_backend(const json& input, const Options& opt, Fn&& fn) {
    std::string field = field_of(input);
    BackendSpec spec = BackendSpec::parse(field);
    if (!opt.backend.empty()) {
        BackendSpec req = BackendSpec::parse(opt.backend);
        if (req.cyclotomic != spec.cyclotomic)
            throw SchemaError("--backend kind does not match the input field '" + field + "'");
        if (!req.cyclotomic) spec.bits = req.bits;
        if (req.cyclotomic && spec.conductor % req.conductor != 0 &&
            req.conductor % spec.conductor != 0)
            throw SchemaError("--backend conductor is incompatible with the input field");
        if (req.cyclotomic) spec.conductor = lcm_u(spec.conductor, req.conductor);
    }
    if (spec.cyclotomic) {
        CycloCodec codec{CycloField::get(spec.conductor)};
        return fn(codec, (Cyclo*)nullptr);
    }
    BigComplex::configure(spec.bits);
    BigCodec codec;
    return fn(codec, (BigComplex*)nullptr);
}

void emit(std::ostream& out, const json& j, const Options& opt) {
    out << (opt.pretty ? j.dump(2) : j.dump()) << "\n";
}

template <class K, class C>
json word_witnesses(const GroupVerdict<K>& v, const C& codec) {
    json ws = json::array();
    for (size_t i = 0; i < v.witness_words.size(); ++i) {
        json w;
        w["word"] = word_str(v.witness_words[i]);
        w["letters"] = v.witness_words[i].letters;
        w["germ"] = germ_to_json(v.witness_germs[i], codec);
        ws.push_back(w);
    }
    return ws;
}

int cmd_classify(const Options& opt, std::ostream& out) {
    json input = load_input(opt.input);
    return with_backend(input, opt, [&](auto codec, auto* tag) {
        using K = std::remove_pointer_t<decltype(tag)>;
        GermDiffeo<K> f = germ_from_json<K>(input, codec);
        if (opt.order < f.trunc_order()) f = f.truncated(opt.order);
        ElementNormalForm<K> nf = normal_form_element(f);
        json r;
        r["schema"] = kSchema;
        r["command"] = "classify-germ";
        r["certified_order"] = nf.certified_order;
        r["a"] = codec.write(nf.a);
        if (nf.kind == ElementNormalForm<K>::Kind::linearizable) {
            r["kind"] = "linearizable";
            r["finite_order"] = nf.finite_order;
            if (nf.finite_order) r["order_of_linear_part"] = nf.finite_order_q;
        } else {
            r["kind"] = "resonant";
            r["k"] = nf.k;
            r["lambda"] = codec.write(nf.lambda);
            r["flow_time"] = codec.write(nf.flow_time);
        }
        r["conjugator"] = germ_to_json(nf.conjugator, codec);
        emit(out, r, opt);
        return 0;
    });
}

int cmd_group_analyze(const Options& opt, std::ostream& out) {
    json input = load_input(opt.input);
    return with_backend(input, opt, [&](auto codec, auto* tag) {
        using K = std::remove_pointer_t<decltype(tag)>;
        require_field(input, "generators");
        std::vector<GermDiffeo<K>> gens;
        for (const auto& g : input["generators"]) {
            GermDiffeo<K> germ = germ_from_json<K>(g, codec);
            if (opt.order < germ.trunc_order()) germ = germ.truncated(opt.order);
            gens.push_back(std::move(germ));
        }
        GroupVerdict<K> v = group_analyze(gens, opt.seed);
        json r;
        r["schema"] = kSchema;
        r["command"] = "group-analyze";
        r["verdict"] = v.kind_name();
        r["abelian_generators"] = v.abelian_generators;
        r["certified_order"] = v.certified_order;
        if (v.model) r["model"] = v.model->name();
        if (v.conjugator) r["conjugator"] = germ_to_json(*v.conjugator, codec);
        if (!v.witness_words.empty()) r["witnesses"] = word_witnesses(v, codec);
        if (!v.note.empty()) r["note"] = v.note;
        emit(out, r, opt);
        return 0;
    });
}

int cmd_cohomology(const Options& opt, std::ostream& out) {
    json input = load_input(opt.input);
    return with_backend(input, opt, [&](auto codec, auto* tag) {
        using K = std::remove_pointer_t<decltype(tag)>;
        require_field(input, "complex");
        require_field(input, "system");
        auto c = complex_from_json(input["complex"]);
        auto sys = local_system_from_json<K>(input["system"], c, codec);
        if (opt.power != 1) sys = sys.power(opt.power);
        auto h = cohomology(sys);
        json r;
        r["schema"] = kSchema;
        r["command"] = "cohomology";
        r["h"] = json::array({h.h0.dimension(), h.h1.dimension(), h.h2.dimension()});
        auto basis = [&](const CohomologyBasis<K>& b) {
            json reps = json::array();
            for (const auto& rep : b.representatives()) {
                json v = json::array();
                for (const auto& x : rep) v.push_back(codec.write(x));
                reps.push_back(v);
            }
            return reps;
        };
        r["basis1"] = basis(h.h1);
        r["basis2"] = basis(h.h2);
        emit(out, r, opt);
        return 0;
    });
}

int cmd_ueda(const Options& opt, std::ostream& out) {
    json input = load_input(opt.input);
    return with_backend(input, opt, [&](auto codec, auto* tag) {
        using K = std::remove_pointer_t<decltype(tag)>;
        TransitionSystem<K> t = transition_from_json<K>(input, codec);
        auto res = compute_ueda(t);
        json r;
        r["schema"] = kSchema;
        r["command"] = "ueda";
        if (res.finite) {
            r["utype"] = res.utype;
            json cs = json::array();
            for (const auto& x : res.class_coords) cs.push_back(codec.write(x));
            r["class"] = cs;
        } else {
            r["utype"] = "infinity_at_order_" + std::to_string(res.utype);
        }
        emit(out, r, opt);
        return 0;
    });
}

int cmd_construct(const Options& opt, std::ostream& out) {
    json input = load_input(opt.input);
    return with_backend(input, opt, [&](auto codec, auto* tag) {
        using K = std::remove_pointer_t<decltype(tag)>;
        TransitionSystem<K> t = transition_from_json<K>(input, codec);
        auto res = construct_formal_foliation(t, opt.order);
        json r;
        r["schema"] = kSchema;
        r["command"] = "construct";
        r["order"] = opt.order;
        json log = json::array();
        for (const auto& step : res.log) {
            json entry{{"order", step.reached_order}, {"action", step.action}};
            if (!step.class_coords.empty()) entry["repaired_class"] = step.class_coords;
            log.push_back(entry);
        }
        r["log"] = log;
        r["order_valid"] = res.system.validate().order_valid;
        r["final"] = transition_to_json(res.system, codec);
        emit(out, r, opt);
        return 0;
    });
}

int cmd_log_affine(const Options& opt, std::ostream& out) {
    json input = load_input(opt.input);
    return with_backend(input, opt, [&](auto codec, auto* tag) {
        using K = std::remove_pointer_t<decltype(tag)>;
        TransitionSystem<K> t = transition_from_json<K>(input, codec);
        LogAffineResult<K> res = log_affine_construct(t, opt.order);
        json r;
        r["schema"] = kSchema;
        r["command"] = "log-affine";
        json base = json::array();
        for (const auto& x : res.base_class) base.push_back(codec.write(x));
        r["base_class"] = base;
        if (res.ok) {
            r["lambda"] = codec.write(res.lambda);
            r["certified_order"] = res.certified_order;
            emit(out, r, opt);
            return 0;
        }
        r["fail_order"] = res.fail_order;
        json cls = json::array();
        for (const auto& x : res.fail_class) cls.push_back(codec.write(x));
        r["fail_class"] = cls;
        emit(out, r, opt);
        return 2;
    });
}

int cmd_forms_check(const Options& opt, std::ostream& out) {
    json input = load_input(opt.input);
    return with_backend(input, opt, [&](auto codec, auto* tag) {
        using K = std::remove_pointer_t<decltype(tag)>;
        ProjectiveTriple<K> t = triple_from_json<K>(input, codec);
        TripleReport<K> rep = triple_check(t);
        json r;
        r["schema"] = kSchema;
        r["command"] = "forms-check";
        r["all_zero"] = rep.all_zero();
        auto res = [&](const PolyTwoForm<K>& w) {
            json v;
            v["zero"] = w.is_zero();
            v["residual"] = bivariate_to_json(w.c, codec);
            return v;
        };
        r["eq0"] = res(rep.r0);
        r["eq1"] = res(rep.r1);
        r["eq2"] = res(rep.r2);
        emit(out, r, opt);
        return 0;
    });
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"folia: exact formal germ dynamics, twisted surface cohomology and "
                 "order-by-order foliation construction"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* cmd, bool needs_input = true) {
        if (needs_input)
            cmd->add_option("input", opt.input, "input JSON file ('-' for stdin)")->required();
        cmd->add_option("--order", opt.order, "target / truncation order (default 16)");
        cmd->add_option("--backend", opt.backend, "cyclotomic:n | bigfloat:p");
        cmd->add_option("--seed", opt.seed, "sampling seed (default 0)");
        cmd->add_flag("--pretty", opt.pretty, "indented report");
        bool dummy = false;
        cmd->add_flag("--json", dummy, "compact report (default)");
    };

    auto* classify = app.add_subcommand("classify-germ", "normal form of a single germ");
    add_common(classify);
    auto* group = app.add_subcommand("group-analyze", "classify a finitely generated subgroup");
    add_common(group);
    auto* coh = app.add_subcommand("cohomology", "twisted cohomology of a surface complex");
    add_common(coh);
    coh->add_option("--power", opt.power, "tensor power of the local system (default 1)");
    auto* ueda = app.add_subcommand("ueda", "Ueda type and class of a transition system");
    add_common(ueda);
    auto* construct = app.add_subcommand("construct", "order-by-order formal foliation");
    add_common(construct);
    auto* logaff = app.add_subcommand("log-affine", "log-affine relation constructor");
    add_common(logaff);
    auto* forms = app.add_subcommand("forms-check", "projective triple structure equations");
    add_common(forms);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help
            out << app.help() << std::flush;
            return 0;
        }
        err << e.what() << "\n";
        return 1;
    }

    try {
        if (classify->parsed()) return cmd_classify(opt, out);
        if (group->parsed()) return cmd_group_analyze(opt, out);
        if (coh->parsed()) return cmd_cohomology(opt, out);
        if (ueda->parsed()) return cmd_ueda(opt, out);
        if (construct->parsed()) return cmd_construct(opt, out);
        if (logaff->parsed()) return cmd_log_affine(opt, out);
        if (forms->parsed()) return cmd_forms_check(opt, out);
    } catch (const SchemaError& e) {
        err << json{{"error", e.what()}}.dump() << "\n";
        return 1;
    } catch (const json::exception& e) {
        err << json{{"error", e.what()}}.dump() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << json{{"error", e.what()}}.dump() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        err << json{{"error", e.what()}, {"kind", "mathematical"}}.dump() << "\n";
        return 2;
    }
    err << "no subcommand\n";
    return 1;
}

}  // namespace folia::cli
