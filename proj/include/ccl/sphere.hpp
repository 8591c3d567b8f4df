#pragma once

// Geodesic icosphere with an antipode table, and a small union-find.

#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "ccl/errors.hpp"
#include "ccl/vec3.hpp"

namespace ccl {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n = 0) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rank_;
};

/// Midpoint-subdivided icosahedron on the unit sphere. Central symmetry is
/// exact in floating point, so antipode() is a true involution.
class Icosphere {
 public:
  explicit Icosphere(int depth) : depth_(depth) {
    if (depth < 0 || depth > 9) throw PreconditionError("icosphere depth must be in [0, 9]");
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::array<Vec3d, 12> base{Vec3d{-1, t, 0}, Vec3d{1, t, 0},   Vec3d{-1, -t, 0}, Vec3d{1, -t, 0},
                               Vec3d{0, -1, t}, Vec3d{0, 1, t},   Vec3d{0, -1, -t}, Vec3d{0, 1, -t},
                               Vec3d{t, 0, -1}, Vec3d{t, 0, 1},   Vec3d{-t, 0, -1}, Vec3d{-t, 0, 1}};
    for (const auto& v : base) vertices_.push_back(normalized(v));
    faces_ = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
              {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
              {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    for (int d = 0; d < depth; ++d) subdivide();
    build_antipodes();
  }

  int depth() const { return depth_; }
  const std::vector<Vec3d>& vertices() const { return vertices_; }
  const std::vector<std::array<std::size_t, 3>>& faces() const { return faces_; }
  std::size_t antipode(std::size_t v) const { return antipode_[v]; }

  /// Unique undirected edges; edge_index maps (a, b) with a < b to its slot.
  std::vector<std::array<std::size_t, 2>> edges() const {
    std::vector<std::array<std::size_t, 2>> out;
    for (const auto& f : faces_)
      for (int e = 0; e < 3; ++e) {
        std::size_t a = f[e], b = f[(e + 1) % 3];
        if (a < b) out.push_back({a, b});
      }
    return out;
  }

  /// Vertex adjacency lists.
  std::vector<std::vector<std::size_t>> neighbours() const {
    std::vector<std::vector<std::size_t>> adj(vertices_.size());
    for (const auto& f : faces_)
      for (int e = 0; e < 3; ++e) {
        std::size_t a = f[e], b = f[(e + 1) % 3];
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
    for (auto& n : adj) {
      std::sort(n.begin(), n.end());
      n.erase(std::unique(n.begin(), n.end()), n.end());
    }
    return adj;
  }

 private:
  void subdivide() {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> cache;
    auto midpoint = [&](std::size_t a, std::size_t b) {
      auto key = std::minmax(a, b);
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
      vertices_.push_back(normalized(vertices_[a] + vertices_[b]));
      std::size_t idx = vertices_.size() - 1;
      cache.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<std::size_t, 3>> next;
    next.reserve(faces_.size() * 4);
    for (const auto& f : faces_) {
      std::size_t ab = midpoint(f[0], f[1]), bc = midpoint(f[1], f[2]), ca = midpoint(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces_ = std::move(next);
  }

  void build_antipodes() {
    std::map<std::array<double, 3>, std::size_t> index;
    for (std::size_t n = 0; n < vertices_.size(); ++n) index.emplace(vertices_[n].c, n);
    antipode_.resize(vertices_.size());
    for (std::size_t n = 0; n < vertices_.size(); ++n) {
      auto it = index.find((-vertices_[n]).c);
      if (it == index.end()) throw Error("icosphere lost central symmetry");
      antipode_[n] = it->second;
    }
  }

  int depth_;
  std::vector<Vec3d> vertices_;
  std::vector<std::array<std::size_t, 3>> faces_;
  std::vector<std::size_t> antipode_;
};

}  // namespace ccl
