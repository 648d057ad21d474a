#include "folia/surface.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace folia {

namespace {

std::pair<int, int> key(int i, int j) { return {std::min(i, j), std::max(i, j)}; }

// Flip face orientations along a BFS of the dual graph until every edge is
// traversed once in each direction; throws when the surface is unorientable
// or an edge fails the two-face condition.
std::vector<std::array<int, 3>> orient_consistently(int nv,
                                                    std::vector<std::array<int, 3>> faces) {
    std::map<std::pair<int, int>, std::vector<int>> edge_faces;
    for (int f = 0; f < (int)faces.size(); ++f) {
        const auto& t = faces[f];
        for (int e = 0; e < 3; ++e) {
            int a = t[e], b = t[(e + 1) % 3];
            if (a == b || a < 0 || b < 0 || a >= nv || b >= nv)
                throw std::invalid_argument("SurfaceComplex: degenerate face");
            edge_faces[key(a, b)].push_back(f);
        }
    }
    for (const auto& [k, fs] : edge_faces)
        if (fs.size() != 2)
            throw std::invalid_argument("SurfaceComplex: edge (" + std::to_string(k.first) +
                                        "," + std::to_string(k.second) + ") borders " +
                                        std::to_string(fs.size()) + " faces, expected 2");

    auto traverses = [&](const std::array<int, 3>& t, int a, int b) {
        // true when the oriented boundary of t contains the directed edge a->b
        for (int e = 0; e < 3; ++e)
            if (t[e] == a && t[(e + 1) % 3] == b) return true;
        return false;
    };

    std::vector<int> state(faces.size(), 0);  // 0 unseen, 1 fixed
    std::deque<int> queue;
    for (int f0 = 0; f0 < (int)faces.size(); ++f0) {
        if (state[f0]) continue;
        state[f0] = 1;
        queue.push_back(f0);
        while (!queue.empty()) {
            int f = queue.front();
            queue.pop_front();
            const auto t = faces[f];
            for (int e = 0; e < 3; ++e) {
                int a = t[e], b = t[(e + 1) % 3];
                for (int g : edge_faces[key(a, b)]) {
                    if (g == f) continue;
                    bool needs_flip = traverses(faces[g], a, b);  // must traverse b->a
                    if (!state[g]) {
                        if (needs_flip) std::swap(faces[g][1], faces[g][2]);
                        state[g] = 1;
                        queue.push_back(g);
                    } else if (needs_flip) {
                        throw std::invalid_argument("SurfaceComplex: surface is not orientable");
                    }
                }
            }
        }
    }
    return faces;
}

int permutation_sign(std::array<int, 3> t) {
    int sign = 1;
    if (t[0] > t[1]) { std::swap(t[0], t[1]); sign = -sign; }
    if (t[1] > t[2]) { std::swap(t[1], t[2]); sign = -sign; }
    if (t[0] > t[1]) { std::swap(t[0], t[1]); sign = -sign; }
    return sign;
}

}  // namespace

SurfaceComplex::SurfaceComplex(int vertices, std::vector<std::array<int, 3>> faces)
    : nv_(vertices), faces_(orient_consistently(vertices, std::move(faces))) {
    std::set<std::pair<int, int>> eset;
    for (const auto& t : faces_)
        for (int e = 0; e < 3; ++e) eset.insert(key(t[e], t[(e + 1) % 3]));
    for (const auto& [a, b] : eset) {
        edge_idx_[{a, b}] = (int)edges_.size();
        edges_.push_back({a, b});
    }
    for (const auto& t : faces_) {
        std::array<int, 3> s = t;
        std::sort(s.begin(), s.end());
        sorted_faces_.push_back(s);
        face_signs_.push_back(permutation_sign(t));
    }
    validate();

    tree_parent_.assign(nv_, -2);
    std::deque<int> queue{0};
    tree_parent_[0] = -1;
    std::vector<std::vector<int>> adj(nv_);
    for (const auto& [a, b] : edges_) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : adj[v])
            if (tree_parent_[w] == -2) {
                tree_parent_[w] = v;
                queue.push_back(w);
            }
    }
    for (int v = 0; v < nv_; ++v)
        if (tree_parent_[v] == -2)
            throw std::invalid_argument("SurfaceComplex: not connected");
}

int SurfaceComplex::edge_index(int i, int j) const {
    auto it = edge_idx_.find(key(i, j));
    if (it == edge_idx_.end())
        throw std::out_of_range("SurfaceComplex: no edge (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
    return it->second;
}

bool SurfaceComplex::has_edge(int i, int j) const {
    return edge_idx_.count(key(i, j)) > 0;
}

void SurfaceComplex::validate() const {
    // each edge must be traversed exactly once in each direction
    std::map<std::pair<int, int>, int> directed;
    for (const auto& t : faces_)
        for (int e = 0; e < 3; ++e) {
            int a = t[e], b = t[(e + 1) % 3];
            if (++directed[{a, b}] > 1)
                throw std::invalid_argument("SurfaceComplex: inconsistent orientation");
        }
    for (const auto& [a, b] : edges_)
        if (!directed.count({a, b}) || !directed.count({b, a}))
            throw std::invalid_argument("SurfaceComplex: edge not traversed both ways");
    int chi = euler_characteristic();
    if (chi > 2 || chi % 2 != 0)
        throw std::invalid_argument("SurfaceComplex: Euler characteristic " +
                                    std::to_string(chi) + " is not that of a closed surface");
}

std::shared_ptr<const SurfaceComplex> SurfaceComplex::canonical(int genus) {
    if (genus != 1 && genus != 2)
        throw std::invalid_argument("canonical_complex: unsupported genus " +
                                    std::to_string(genus));
    // K7 on the torus: faces {i, i+1, i+3} and {i, i+2, i+3} mod 7.
    std::vector<std::array<int, 3>> torus;
    for (int i = 0; i < 7; ++i) {
        torus.push_back({i, (i + 1) % 7, (i + 3) % 7});
        torus.push_back({i, (i + 2) % 7, (i + 3) % 7});
    }
    if (genus == 1) {
        static auto g1 = std::make_shared<const SurfaceComplex>(7, torus);
        return g1;
    }
    // Connected sum of two copies: remove one face from each and glue along
    // the boundary triangle, identifying its three vertices pairwise.
    static auto g2 = [&] {
        std::array<int, 3> cut = torus[0];  // {0,1,3}
        std::vector<std::array<int, 3>> faces;
        for (size_t f = 1; f < torus.size(); ++f) faces.push_back(torus[f]);
        // second copy: vertex v maps to cut vertex when on the glued triangle,
        // else to 7 + fresh index
        std::vector<int> rename(7, -1);
        rename[cut[0]] = cut[0];
        rename[cut[1]] = cut[1];
        rename[cut[2]] = cut[2];
        int next = 7;
        for (int v = 0; v < 7; ++v)
            if (rename[v] < 0) rename[v] = next++;
        for (size_t f = 1; f < torus.size(); ++f)
            faces.push_back({rename[torus[f][0]], rename[torus[f][1]], rename[torus[f][2]]});
        return std::make_shared<const SurfaceComplex>(next, faces);
    }();
    return g2;
}

}  // namespace folia
