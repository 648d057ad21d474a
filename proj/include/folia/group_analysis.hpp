#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "folia/forms.hpp"
#include "folia/normal_form.hpp"

namespace folia {

// A word in the generators: 1-based indices, negative means inverse.
struct Word {
    std::vector<int> letters;
};

inline std::string word_str(const Word& w) {
    std::string s;
    for (int l : w.letters) {
        if (!s.empty()) s += ".";
        s += (l < 0 ? "G" + std::to_string(-l) + "'" : "G" + std::to_string(l));
    }
    return s.empty() ? "e" : s;
}

template <class K>
GermDiffeo<K> word_germ(const std::vector<GermDiffeo<K>>& gens,
                        const std::vector<GermDiffeo<K>>& inverses, const Word& w) {
    GermDiffeo<K> acc = GermDiffeo<K>::identity(gens.at(0).trunc_order());
    for (int l : w.letters) acc = acc.compose(l > 0 ? gens.at(l - 1) : inverses.at(-l - 1));
    return acc;
}

// All words of length <= 4 plus `extra` seeded random words of length <= 8.
inline std::vector<Word> sample_words(int num_gens, unsigned long seed, int extra = 50) {
    std::vector<Word> out;
    std::vector<Word> frontier{Word{}};
    for (int len = 1; len <= 4; ++len) {
        std::vector<Word> next;
        for (const auto& w : frontier)
            for (int g = 1; g <= num_gens; ++g)
                for (int s : {+1, -1}) {
                    Word e = w;
                    e.letters.push_back(s * g);
                    out.push_back(e);
                    next.push_back(std::move(e));
                }
        frontier = std::move(next);
    }
    std::mt19937_64 rng(seed ^ 0x5eed5eedULL);
    std::uniform_int_distribution<int> len_d(5, 8), gen_d(1, num_gens), sign_d(0, 1);
    for (int i = 0; i < extra; ++i) {
        Word w;
        int len = len_d(rng);
        for (int j = 0; j < len; ++j)
            w.letters.push_back((sign_d(rng) ? 1 : -1) * gen_d(rng));
        out.push_back(std::move(w));
    }
    return out;
}

enum class GroupModel { L, LQ, E, A };

template <class K>
struct ModelDesc {
    GroupModel model;
    int k = 0;
    K lambda{0};

    std::string name() const {
        switch (model) {
            case GroupModel::L: return "L";
            case GroupModel::LQ: return "L_Q";
            case GroupModel::E: return "E(" + std::to_string(k) + "," + to_string(lambda) + ")";
            case GroupModel::A: return "A(" + std::to_string(k) + ")";
        }
        return "?";
    }
};

// Conjugation of a generator set into one of the model groups.
template <class K>
struct ModelConjugation {
    bool ok = false;
    GermDiffeo<K> conjugator;
    ModelDesc<K> model{GroupModel::L};
    std::vector<GermDiffeo<K>> images;
    int failing_generator = -1;
    std::string error;
};

template <class K>
bool germ_in_L(const GermDiffeo<K>& u) {
    return u.series() ==
           PowerSeries<K>::monomial(u.linear_part(), 1, u.trunc_order());
}

// membership in E_{k,lambda} = { a exp(t v_{k,lambda}) : a^k = 1 }
template <class K>
bool germ_in_E(const GermDiffeo<K>& u, int k, const K& lambda) {
    K a = u.linear_part();
    if (a.pow(k) != K(1)) return false;
    PowerSeries<K> tangent = a.inverse() * u.series();
    if (tangent.trunc_order() < k + 1) return false;
    K t = tangent.coeff(k + 1);
    GermDiffeo<K> model = exp_field(make_v<K>(k, lambda, u.trunc_order()), t);
    return tangent == model.series();
}

// membership in A_k: preserves the line C dz/z^{k+1}
template <class K>
bool germ_in_A(const GermDiffeo<K>& u, int k) {
    if (u.trunc_order() < 2 * (k + 1) + 2) return false;
    return line_multiplier(u, omega_form(k, K(0), u.trunc_order() - k - 2)).has_value();
}

template <class K>
bool finite_order_certified(const GermDiffeo<K>& g) {
    unsigned q = g.linear_part().multiplicative_order();
    return q > 0 && g.iterate(q).is_identity();
}

namespace detail {

// Sequentially conjugate a commuting, individually linearizable family into
// the linear group; each step's normal-form conjugator preserves the
// linearity already achieved.
template <class K>
std::optional<GermDiffeo<K>> simultaneous_linearizer(const std::vector<GermDiffeo<K>>& gens) {
    int n = gens.at(0).trunc_order();
    GermDiffeo<K> phi = GermDiffeo<K>::identity(n);
    for (const auto& g : gens) {
        GermDiffeo<K> u = conjugate(phi, g);
        if (germ_in_L(u)) continue;
        ElementNormalForm<K> nf = normal_form_element(u);
        if (nf.kind != ElementNormalForm<K>::Kind::linearizable) return std::nullopt;
        phi = phi.compose(nf.conjugator);
    }
    for (const auto& g : gens)
        if (!germ_in_L(conjugate(phi, g))) return std::nullopt;
    return phi;
}

}  // namespace detail

template <class K>
ModelConjugation<K> conjugate_into_model(const std::vector<GermDiffeo<K>>& gens,
                                         unsigned long seed = 0) {
    ModelConjugation<K> out;
    if (gens.empty()) {
        out.error = "empty generator list";
        return out;
    }
    int n = gens[0].trunc_order();
    std::vector<GermDiffeo<K>> invs;
    for (const auto& g : gens) invs.push_back(g.inverse());

    bool all_linear = true, all_finite = true;
    for (const auto& g : gens) {
        if (!germ_in_L(g)) all_linear = false;
        if (!finite_order_certified(g)) all_finite = false;
    }
    if (all_linear) {
        out.ok = true;
        out.conjugator = GermDiffeo<K>::identity(n);
        out.model = {all_finite ? GroupModel::LQ : GroupModel::L};
        out.images = gens;
        return out;
    }

    // distinguished element: minimal positive tangency order among the
    // generators and the sampled words
    std::optional<GermDiffeo<K>> distinguished;
    int best_order = n + 1;
    auto consider = [&](const GermDiffeo<K>& g) {
        auto tv = g.tangency();
        if (tv.kind == TangencyVerdict::Kind::tangent && tv.order < best_order) {
            best_order = tv.order;
            distinguished = g;
        }
    };
    for (const auto& g : gens) consider(g);
    for (const auto& w : sample_words((int)gens.size(), seed)) consider(word_germ(gens, invs, w));

    if (!distinguished) {
        // no tangent element found: linearizable territory
        if (auto phi = detail::simultaneous_linearizer(gens)) {
            out.ok = true;
            out.conjugator = *phi;
            out.model = {all_finite ? GroupModel::LQ : GroupModel::L};
            for (const auto& g : gens) out.images.push_back(conjugate(*phi, g));
            return out;
        }
        out.error = "no tangent element, but simultaneous linearization failed";
        return out;
    }

    ElementNormalForm<K> nf = normal_form_element(*distinguished);
    if (nf.kind != ElementNormalForm<K>::Kind::resonant) {
        out.error = "distinguished tangent element reduced to the identity";
        return out;
    }
    GermDiffeo<K> phi = nf.conjugator_raw;
    int k = nf.k;
    K lambda = nf.group_lambda();
    std::vector<GermDiffeo<K>> images;
    for (const auto& g : gens) images.push_back(conjugate(phi, g));

    bool all_e = true;
    for (size_t i = 0; i < images.size(); ++i)
        if (!germ_in_E(images[i], k, lambda)) {
            all_e = false;
            out.failing_generator = (int)i;
            break;
        }
    if (all_e) {
        out.ok = true;
        out.conjugator = phi;
        out.model = {GroupModel::E, k, lambda};
        out.images = std::move(images);
        return out;
    }
    bool all_a = true;
    for (size_t i = 0; i < images.size(); ++i)
        if (!germ_in_A(images[i], k)) {
            all_a = false;
            out.failing_generator = (int)i;
            break;
        }
    if (all_a) {
        out.ok = true;
        out.conjugator = phi;
        out.model = {GroupModel::A, k};
        out.images = std::move(images);
        return out;
    }
    out.error = "generator " + std::to_string(out.failing_generator) +
                " does not land in E or A at the certified order";
    return out;
}

// Truncation-certified analysis of a finitely generated subgroup.
template <class K>
struct GroupVerdict {
    enum class Kind {
        abelian,
        solvable_model,
        nonsolvable_witness,
        linearizable,
        finite_linear,
        undetermined
    };
    Kind kind = Kind::undetermined;
    bool abelian_generators = false;
    std::optional<ModelDesc<K>> model;
    std::optional<GermDiffeo<K>> conjugator;
    std::vector<Word> witness_words;
    std::vector<GermDiffeo<K>> witness_germs;
    int certified_order = 0;
    std::string note;

    std::string kind_name() const {
        switch (kind) {
            case Kind::abelian: return "abelian";
            case Kind::solvable_model: return "solvable_model";
            case Kind::nonsolvable_witness: return "nonsolvable_witness";
            case Kind::linearizable: return "linearizable";
            case Kind::finite_linear: return "finite_linear";
            case Kind::undetermined: return "undetermined_at_order_N";
        }
        return "?";
    }
};

template <class K>
GroupVerdict<K> group_analyze(const std::vector<GermDiffeo<K>>& gens, unsigned long seed = 0) {
    if (gens.empty()) throw std::invalid_argument("group_analyze: empty generator list");
    GroupVerdict<K> out;
    int n = gens[0].trunc_order();
    out.certified_order = n;
    std::vector<GermDiffeo<K>> invs;
    for (const auto& g : gens) invs.push_back(g.inverse());

    // (1) pairwise commutators of the generators
    bool abelian = true;
    for (size_t i = 0; i < gens.size() && abelian; ++i)
        for (size_t j = i + 1; j < gens.size() && abelian; ++j)
            if (!commutator(gens[i], gens[j]).is_identity()) abelian = false;
    out.abelian_generators = abelian;

    // sampled words and their tangent-to-identity part
    std::vector<Word> words = sample_words((int)gens.size(), seed);
    std::vector<std::pair<Word, GermDiffeo<K>>> tangent_samples;
    bool sampled_finite = true;
    {
        int random_checked = 0;
        std::vector<Word> gen_words;
        for (int g = 1; g <= (int)gens.size(); ++g) gen_words.push_back(Word{{g}});
        for (const auto& g : gens)
            if (!finite_order_certified(g)) sampled_finite = false;
        for (const auto& w : words) {
            GermDiffeo<K> u = word_germ(gens, invs, w);
            auto tv = u.tangency();
            if (tv.kind == TangencyVerdict::Kind::tangent)
                tangent_samples.emplace_back(w, u);
            if (w.letters.size() >= 5 && sampled_finite && random_checked < 50) {
                ++random_checked;
                if (!finite_order_certified(u)) sampled_finite = false;
            }
        }
    }

    // (2) sampled derived/tangent subgroup trivial -> linear territory
    if (tangent_samples.empty()) {
        if (abelian && sampled_finite) {
            out.kind = GroupVerdict<K>::Kind::finite_linear;
            out.model = ModelDesc<K>{GroupModel::LQ};
        } else if (abelian || gens.size() == 1) {
            out.kind = GroupVerdict<K>::Kind::linearizable;
            out.model = ModelDesc<K>{GroupModel::L};
        } else {
            out.kind = GroupVerdict<K>::Kind::undetermined;
            out.note = "no tangent samples found, but generators do not commute";
            return out;
        }
        auto mc = conjugate_into_model(gens, seed);
        if (mc.ok) out.conjugator = mc.conjugator;
        return out;
    }

    // (3) two distinct tangency orders -> non-solvability witness chain
    int min_order = n + 1, max_order = -1;
    const GermDiffeo<K>* min_g = nullptr;
    const Word* min_w = nullptr;
    const GermDiffeo<K>* other_g = nullptr;
    const Word* other_w = nullptr;
    for (const auto& [w, u] : tangent_samples) {
        int k = u.tangency().order;
        if (k < min_order) {
            min_order = k;
            min_g = &u;
            min_w = &w;
        }
        if (k > max_order) {
            max_order = k;
            other_g = &u;
            other_w = &w;
        }
    }
    if (min_order != max_order) {
        // chain of commutators with the minimal-order element
        Word chain_word = *other_w;
        GermDiffeo<K> chain = *other_g;
        out.witness_words.push_back(*min_w);
        out.witness_germs.push_back(*min_g);
        out.witness_words.push_back(chain_word);
        out.witness_germs.push_back(chain);
        int reached = chain.tangency().order;
        while (reached < n - 1) {
            GermDiffeo<K> next = commutator(*min_g, chain);
            auto tv = next.tangency();
            if (tv.kind != TangencyVerdict::Kind::tangent) break;  // fell past truncation
            Word next_word;
            next_word.letters = min_w->letters;
            // commutator word [min, chain]
            for (int l : chain_word.letters) next_word.letters.push_back(l);
            for (auto it = min_w->letters.rbegin(); it != min_w->letters.rend(); ++it)
                next_word.letters.push_back(-*it);
            for (auto it = chain_word.letters.rbegin(); it != chain_word.letters.rend(); ++it)
                next_word.letters.push_back(-*it);
            chain = next;
            chain_word = next_word;
            reached = tv.order;
            out.witness_words.push_back(chain_word);
            out.witness_germs.push_back(chain);
        }
        if (reached >= n - 1) {
            out.kind = GroupVerdict<K>::Kind::nonsolvable_witness;
            out.note = "commutator chain reaches tangency order " + std::to_string(reached);
        } else {
            out.kind = GroupVerdict<K>::Kind::undetermined;
            out.note = "distinct tangency orders, but the witness chain died at order " +
                       std::to_string(reached);
        }
        return out;
    }

    // (4) single tangency order: attempt conjugation into a model
    auto mc = conjugate_into_model(gens, seed);
    if (mc.ok) {
        out.kind = abelian ? GroupVerdict<K>::Kind::abelian : GroupVerdict<K>::Kind::solvable_model;
        out.model = mc.model;
        out.conjugator = mc.conjugator;
        return out;
    }
    out.kind = GroupVerdict<K>::Kind::undetermined;
    out.note = mc.error;
    return out;
}

}  // namespace folia
