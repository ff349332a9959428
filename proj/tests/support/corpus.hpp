#pragma once

// Shared corpus graphs and definition-level oracles for the test suites.

#include <cmath>
#include <vector>

#include "kgkms/graph_io.hpp"
#include "kgkms/kgraph.hpp"
#include "kgkms/measures.hpp"
#include "kgkms/spectral.hpp"

namespace kgkms::testing {

inline KGraph validated(const GraphSpec& spec, int cap = 4) {
  return KGraph::validate(spec.skeleton, spec.rules, KGraphOptions{cap});
}

/// The single-vertex 2-graph with 2 blue and 3 red loops (product squares).
inline const KGraph& g23() {
  static KGraph g = validated(make_single_vertex({2, 3}), 8);
  return g;
}

/// One loop of each color.
inline const KGraph& g11() {
  static KGraph g = validated(make_single_vertex({1, 1}));
  return g;
}

/// Two blue loops, one red loop: the red coordinate graph is a cycle.
inline const KGraph& g21() {
  static KGraph g = validated(make_single_vertex({2, 1}));
  return g;
}

/// Single-vertex 3-graph, product squares everywhere.
inline const KGraph& prod3() {
  static KGraph g = validated(make_single_vertex({2, 2, 2}));
  return g;
}

/// Single-vertex 3-graph with index-flip squares on the pair (2, 3); the
/// (2,3)-tails of equal-index loops coincide.
inline const KGraph& flip3() {
  static KGraph g = validated(make_single_vertex_flip({2, 2, 2}, 2, 3));
  return g;
}

/// Two vertices with every blue and every red edge present (A_1 = A_2 = the
/// all-ones matrix) and the index-aligned squares b_{vw} r_{wu} = r_{vw} b_{wu}.
inline GraphSpec two_vertex_complete_spec() {
  GraphSpec spec;
  spec.skeleton.rank = 2;
  spec.skeleton.vertices = {"u", "w"};
  const char* names[2] = {"u", "w"};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      spec.skeleton.edges.push_back(
          {"b" + std::to_string(x) + std::to_string(y), 1, names[x], names[y]});
      spec.skeleton.edges.push_back(
          {"r" + std::to_string(x) + std::to_string(y), 2, names[x], names[y]});
    }
  auto b = [](int x, int y) { return "b" + std::to_string(x) + std::to_string(y); };
  auto r = [](int x, int y) { return "r" + std::to_string(x) + std::to_string(y); };
  for (int v = 0; v < 2; ++v)
    for (int w = 0; w < 2; ++w)
      for (int u = 0; u < 2; ++u)
        spec.rules.squares.push_back({1, 2, {b(v, w), r(w, u)}, {r(v, w), b(w, u)}});
  return spec;
}

inline const KGraph& two_vertex_complete() {
  static KGraph g = validated(two_vertex_complete_spec());
  return g;
}

/// Two vertices; color 1 is the identity (one loop per vertex, reducible),
/// color 2 is the complete graph.
inline GraphSpec identity_reducible_spec() {
  GraphSpec spec;
  spec.skeleton.rank = 2;
  spec.skeleton.vertices = {"u", "w"};
  const char* names[2] = {"u", "w"};
  for (int x = 0; x < 2; ++x) {
    spec.skeleton.edges.push_back({"b" + std::to_string(x), 1, names[x], names[x]});
    for (int y = 0; y < 2; ++y)
      spec.skeleton.edges.push_back(
          {"r" + std::to_string(x) + std::to_string(y), 2, names[x], names[y]});
  }
  auto b = [](int x) { return "b" + std::to_string(x); };
  auto r = [](int x, int y) { return "r" + std::to_string(x) + std::to_string(y); };
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      spec.rules.squares.push_back({1, 2, {b(x), r(x, y)}, {r(x, y), b(y)}});
  return spec;
}

/// Single-vertex 3-graph whose index-flip squares on (1,2) and (1,3) clash
/// with product squares on (2,3): the two ways of sorting an anti-sorted
/// 3-letter word disagree.
inline GraphSpec cube_inconsistent_spec() {
  GraphSpec spec;
  spec.skeleton.rank = 3;
  spec.skeleton.vertices = {"v"};
  for (int c = 1; c <= 3; ++c)
    for (int t = 1; t <= 2; ++t)
      spec.skeleton.edges.push_back(
          {"c" + std::to_string(c) + "e" + std::to_string(t), c, "v", "v"});
  auto id = [](int c, int t) { return "c" + std::to_string(c) + "e" + std::to_string(t); };
  for (int a = 1; a <= 2; ++a)
    for (int b = 1; b <= 2; ++b) {
      spec.rules.squares.push_back({1, 2, {id(1, a), id(2, b)}, {id(2, a), id(1, b)}});
      spec.rules.squares.push_back({1, 3, {id(1, a), id(3, b)}, {id(3, a), id(1, b)}});
      spec.rules.squares.push_back({2, 3, {id(2, a), id(3, b)}, {id(3, b), id(2, a)}});
    }
  return spec;
}

/// Definition-level Lambda^min: try every (eta, zeta) of the right degrees.
inline std::vector<std::pair<Path, Path>> lambda_min_bruteforce(const KGraph& g, const Path& mu,
                                                                const Path& nu) {
  std::vector<std::pair<Path, Path>> out;
  Degree top = mu.degree().join(nu.degree());
  for (const Path& eta : g.paths_at(mu.source(), top - mu.degree()))
    for (const Path& zeta : g.paths_at(nu.source(), top - nu.degree()))
      if (g.compose(mu, eta) == g.compose(nu, zeta)) out.emplace_back(eta, zeta);
  return out;
}

/// All paths with degree <= cap, over all degrees in the box.
inline std::vector<Path> paths_up_to(const KGraph& g, const Degree& cap) {
  std::vector<Path> all;
  for_each_degree_leq(cap, [&](const Degree& n) {
    for (const Path& p : g.paths(n)) all.push_back(p);
  });
  return all;
}

/// Standard normalized setup on a corpus graph: the dynamics (1, ln rho_2,
/// ...) that keeps color 1 in J and the rest in K, when that is legal.
struct Setup {
  const KGraph* g;
  VertexMatrices m;
  SpectralData s;
  Dynamics dyn;
};

inline Setup setup_j1(const KGraph& g) {
  Setup st{&g, vertex_matrices(g), {}, {}};
  st.s = common_pf(g, st.m);
  std::vector<double> r;
  r.push_back(1.0);
  for (int c = 2; c <= g.rank(); ++c) r.push_back(std::log(st.s.rho[static_cast<size_t>(c - 1)]));
  st.dyn = normalize_dynamics(st.s, r);
  return st;
}

}  // namespace kgkms::testing
