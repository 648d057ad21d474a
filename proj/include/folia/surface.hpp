#pragma once

#include <array>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace folia {

// Triangulated closed oriented surface.  Vertices are 0..n-1 and carry the
// natural total order (used by every ordering-sensitive construction: cochain
// bases, Alexander-Whitney products, coefficient extraction).  Faces are
// stored as consistently oriented triples; edges are identified by their
// vertex pair and receive the canonical orientation (i,j) with i < j.
class SurfaceComplex {
  public:
    SurfaceComplex(int vertices, std::vector<std::array<int, 3>> faces);

    // genus 1: the 7-vertex torus triangulation with 14 faces (complete graph
    // K7 embedded on the torus); genus 2: connected sum of two copies of it,
    // 11 vertices / 39 edges / 26 faces.
    static std::shared_ptr<const SurfaceComplex> canonical(int genus);

    int num_vertices() const { return nv_; }
    int num_edges() const { return (int)edges_.size(); }
    int num_faces() const { return (int)faces_.size(); }
    int euler_characteristic() const { return nv_ - num_edges() + num_faces(); }
    int genus() const { return (2 - euler_characteristic()) / 2; }

    // canonical edges (i < j), sorted lexicographically
    const std::vector<std::array<int, 2>>& edges() const { return edges_; }
    // oriented faces as given (consistent orientation)
    const std::vector<std::array<int, 3>>& faces() const { return faces_; }
    // faces sorted ascending, with the sign of the permutation from the
    // stored orientation to the sorted order (+1 / -1)
    const std::vector<std::array<int, 3>>& sorted_faces() const { return sorted_faces_; }
    const std::vector<int>& face_signs() const { return face_signs_; }

    int edge_index(int i, int j) const;
    bool has_edge(int i, int j) const;

    // spanning tree as parent links (parent of root = -1), BFS from vertex 0
    const std::vector<int>& tree_parent() const { return tree_parent_; }

  private:
    void validate() const;

    int nv_;
    std::vector<std::array<int, 3>> faces_;
    std::vector<std::array<int, 3>> sorted_faces_;
    std::vector<int> face_signs_;
    std::vector<std::array<int, 2>> edges_;
    std::map<std::pair<int, int>, int> edge_idx_;
    std::vector<int> tree_parent_;
};

}  // namespace folia
