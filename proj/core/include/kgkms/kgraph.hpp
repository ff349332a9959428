#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kgkms/degree.hpp"
#include "kgkms/errors.hpp"
#include "kgkms/skeleton.hpp"

namespace kgkms {

using VertexIx = int;
using EdgeIx = int;

/// A finite path in canonical form: the word lists edge indices color-block by
/// color-block (all color-1 edges first), composable left to right with the
/// range at the left end. Two paths are equal iff their canonical data agree.
class Path {
public:
  Path() = default;
  Path(Degree d, VertexIx range, VertexIx source, std::vector<EdgeIx> word)
      : d_(std::move(d)), range_(range), source_(source), word_(std::move(word)) {}

  const Degree& degree() const { return d_; }
  VertexIx range() const { return range_; }
  VertexIx source() const { return source_; }
  std::span<const EdgeIx> word() const { return word_; }
  bool is_vertex() const { return word_.empty(); }

  friend bool operator==(const Path& a, const Path& b) {
    return a.range_ == b.range_ && a.word_ == b.word_;
  }
  friend auto operator<=>(const Path& a, const Path& b) {
    if (auto c = std::lexicographical_compare_three_way(
            a.word_.begin(), a.word_.end(), b.word_.begin(), b.word_.end());
        c != 0)
      return c;
    return a.range_ <=> b.range_;
  }

private:
  Degree d_;
  VertexIx range_ = -1;
  VertexIx source_ = -1;
  std::vector<EdgeIx> word_;
};

struct DenseEdge {
  std::string id;
  int color = 0;  // 1..k
  VertexIx range = -1;
  VertexIx source = -1;
};

struct KGraphOptions {
  int degree_cap = 4;  // per-color cap on memoized path tables
};

/// Run every validation check and return the full list of violations
/// (empty means the pair presents a k-graph).
std::vector<ValidationIssue> check(const Skeleton& sk, const FactorizationRules& rules);

class KGraph {
public:
  /// Compiles a validated k-graph; throws ValidationError carrying every
  /// violated check otherwise.
  static KGraph validate(const Skeleton& sk, const FactorizationRules& rules,
                         KGraphOptions opts = {});

  int rank() const { return rank_; }
  int vertex_count() const { return static_cast<int>(vertex_ids_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::string& vertex_id(VertexIx v) const { return vertex_ids_[static_cast<size_t>(v)]; }
  VertexIx vertex_index(const std::string& id) const;
  const DenseEdge& edge(EdgeIx e) const { return edges_[static_cast<size_t>(e)]; }
  EdgeIx edge_index(const std::string& id) const;
  const Degree& degree_cap() const { return cap_; }

  /// Edges e with r(e) = v of the given color, ascending edge index.
  std::span<const EdgeIx> out_edges(VertexIx v, int color) const;

  Path vertex_path(VertexIx v) const { return Path(Degree(rank_), v, v, {}); }
  Path edge_path(EdgeIx e) const;
  /// Canonical path from any composable word (normalizes the color order).
  Path path_from_word(std::span<const EdgeIx> word) const;

  Path compose(const Path& a, const Path& b) const;
  Path segment(const Path& p, const Degree& from, const Degree& to) const;
  std::pair<Path, Path> split(const Path& p, const Degree& at) const;

  /// Lambda^n (or v Lambda^n), canonical order, memoized up to the degree cap.
  const std::vector<Path>& paths(const Degree& n) const;
  std::vector<Path> paths_at(VertexIx v, const Degree& n) const;

  /// Lambda^min(mu, nu): pairs (eta, zeta) with mu.eta = nu.zeta of minimal
  /// common degree d(mu) v d(nu).
  std::vector<std::pair<Path, Path>> lambda_min(const Path& mu, const Path& nu) const;
  /// Minimal common extensions { mu.eta : (eta, zeta) in Lambda^min(mu, nu) }.
  std::vector<Path> mce(const Path& mu, const Path& nu) const;

  const Skeleton& skeleton() const { return skeleton_; }
  const FactorizationRules& rules() const { return rules_; }

private:
  KGraph() = default;
  friend std::vector<ValidationIssue> check(const Skeleton&, const FactorizationRules&);
  static KGraph build_checked(const Skeleton& sk, const FactorizationRules& rules,
                              const KGraphOptions& opts, std::vector<ValidationIssue>& issues);

  // Adjacent-letter square swap; word[t], word[t+1] must have distinct colors.
  void swap_adjacent(std::vector<EdgeIx>& word, size_t t) const;
  void normalize_word(std::vector<EdgeIx>& word) const;
  void enumerate(VertexIx v, const Degree& n, std::vector<Path>& out) const;

  int rank_ = 0;
  Degree cap_;
  std::vector<std::string> vertex_ids_;
  std::vector<DenseEdge> edges_;
  std::map<std::string, VertexIx> vertex_by_id_;
  std::map<std::string, EdgeIx> edge_by_id_;
  // out_[v * rank + (color-1)] lists edges with range v, ascending.
  std::vector<std::vector<EdgeIx>> out_;
  // Square maps keyed by the edge pair as written in a word.
  std::map<std::pair<EdgeIx, EdgeIx>, std::pair<EdgeIx, EdgeIx>> sorted_to_anti_;
  std::map<std::pair<EdgeIx, EdgeIx>, std::pair<EdgeIx, EdgeIx>> anti_to_sorted_;
  Skeleton skeleton_;
  FactorizationRules rules_;

  mutable std::mutex memo_mutex_;
  mutable std::map<Degree, std::vector<Path>> memo_;

public:
  KGraph(const KGraph& other);
  KGraph& operator=(const KGraph& other);
  KGraph(KGraph&&) noexcept;
  KGraph& operator=(KGraph&&) noexcept;
  ~KGraph() = default;
};

}  // namespace kgkms
