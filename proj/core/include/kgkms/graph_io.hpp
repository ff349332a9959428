#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kgkms/skeleton.hpp"

namespace kgkms {

struct GraphSpec {
  Skeleton skeleton;
  FactorizationRules rules;
};

/// Graph spec files are JSON:
///   { "rank": 2,
///     "vertices": ["v"],
///     "edges":   [{"id": "a1", "color": 1, "range": "v", "source": "v"}, ...],
///     "squares": [{"i": 1, "j": 2, "ef": ["a1","f1"], "fe": ["f1","a1"]}, ...] }
GraphSpec read_graph_spec(std::istream& in);
GraphSpec read_graph_spec_file(const std::string& path);
std::string write_graph_spec(const GraphSpec& spec);
void write_graph_spec_file(const GraphSpec& spec, const std::string& path);

/// Single-vertex k-graph with counts[c-1] loops of color c and the
/// index-preserving "product" squares e_i f_j = f_j e_i.
GraphSpec make_single_vertex(const std::vector<int>& counts);

/// Same skeleton, but for one chosen color pair (i, j) the squares swap the
/// loop indices instead: e_a f_b = f_a e_b. With equal counts on i and j this
/// makes the (i, j) tails periodic.
GraphSpec make_single_vertex_flip(const std::vector<int>& counts, int flip_i, int flip_j);

/// k colors walking one common n-cycle; every vertex matrix is the same
/// cyclic permutation, so the graph is coordinatewise irreducible with
/// rho = (1, ..., 1).
GraphSpec make_product_of_cycles(int rank, int length);

}  // namespace kgkms
