#include "kgkms/kgraph.hpp"

#include <algorithm>
#include <set>

namespace kgkms {

namespace {

// Normalize a composable word to canonical color order. `leftmost` picks which
// adjacent inversion is rewritten first; any choice yields the same canonical
// word precisely when the squares are cube-consistent, so the validator runs
// both extremes against each other.
template <typename SwapFn>
void bubble(std::vector<EdgeIx>& word, const std::vector<DenseEdge>& edges, bool leftmost,
            SwapFn&& swap_at) {
  auto color = [&](EdgeIx e) { return edges[static_cast<size_t>(e)].color; };
  for (;;) {
    int pos = -1;
    for (size_t t = 0; t + 1 < word.size(); ++t) {
      if (color(word[t]) > color(word[t + 1])) {
        pos = static_cast<int>(t);
        if (leftmost) break;
      }
    }
    if (pos < 0) return;
    swap_at(word, static_cast<size_t>(pos));
  }
}

}  // namespace

KGraph::KGraph(const KGraph& other)
    : rank_(other.rank_),
      cap_(other.cap_),
      vertex_ids_(other.vertex_ids_),
      edges_(other.edges_),
      vertex_by_id_(other.vertex_by_id_),
      edge_by_id_(other.edge_by_id_),
      out_(other.out_),
      sorted_to_anti_(other.sorted_to_anti_),
      anti_to_sorted_(other.anti_to_sorted_),
      skeleton_(other.skeleton_),
      rules_(other.rules_) {
  std::scoped_lock lock(other.memo_mutex_);
  memo_ = other.memo_;
}

KGraph& KGraph::operator=(const KGraph& other) {
  if (this == &other) return *this;
  KGraph tmp(other);
  *this = std::move(tmp);
  return *this;
}

KGraph::KGraph(KGraph&& other) noexcept { *this = std::move(other); }

KGraph& KGraph::operator=(KGraph&& other) noexcept {
  if (this == &other) return *this;
  rank_ = other.rank_;
  cap_ = std::move(other.cap_);
  vertex_ids_ = std::move(other.vertex_ids_);
  edges_ = std::move(other.edges_);
  vertex_by_id_ = std::move(other.vertex_by_id_);
  edge_by_id_ = std::move(other.edge_by_id_);
  out_ = std::move(other.out_);
  sorted_to_anti_ = std::move(other.sorted_to_anti_);
  anti_to_sorted_ = std::move(other.anti_to_sorted_);
  skeleton_ = std::move(other.skeleton_);
  rules_ = std::move(other.rules_);
  std::scoped_lock lock(other.memo_mutex_);
  memo_ = std::move(other.memo_);
  return *this;
}

VertexIx KGraph::vertex_index(const std::string& id) const {
  auto it = vertex_by_id_.find(id);
  if (it == vertex_by_id_.end()) fail(Errc::bad_params, "unknown vertex id '" + id + "'");
  return it->second;
}

EdgeIx KGraph::edge_index(const std::string& id) const {
  auto it = edge_by_id_.find(id);
  if (it == edge_by_id_.end()) fail(Errc::bad_params, "unknown edge id '" + id + "'");
  return it->second;
}

std::span<const EdgeIx> KGraph::out_edges(VertexIx v, int color) const {
  return out_[static_cast<size_t>(v) * rank_ + (color - 1)];
}

Path KGraph::edge_path(EdgeIx e) const {
  const DenseEdge& de = edges_[static_cast<size_t>(e)];
  return Path(Degree::unit(rank_, de.color), de.range, de.source, {e});
}

void KGraph::swap_adjacent(std::vector<EdgeIx>& word, size_t t) const {
  EdgeIx x = word[t];
  EdgeIx y = word[t + 1];
  int cx = edges_[static_cast<size_t>(x)].color;
  int cy = edges_[static_cast<size_t>(y)].color;
  if (cx == cy) fail(Errc::internal_check_failed, "square swap on a same-color pair");
  const auto& map = cx < cy ? sorted_to_anti_ : anti_to_sorted_;
  auto it = map.find({x, y});
  if (it == map.end())
    fail(Errc::internal_check_failed,
         "missing square for pair (" + edges_[static_cast<size_t>(x)].id + ", " +
             edges_[static_cast<size_t>(y)].id + ")");
  word[t] = it->second.first;
  word[t + 1] = it->second.second;
}

void KGraph::normalize_word(std::vector<EdgeIx>& word) const {
  bubble(word, edges_, /*leftmost=*/true,
         [this](std::vector<EdgeIx>& w, size_t t) { swap_adjacent(w, t); });
}

Path KGraph::path_from_word(std::span<const EdgeIx> word) const {
  if (word.empty()) fail(Errc::bad_params, "path_from_word needs a nonempty word");
  Degree d(rank_);
  for (size_t t = 0; t < word.size(); ++t) {
    const DenseEdge& de = edges_[static_cast<size_t>(word[t])];
    d[de.color - 1] += 1;
    if (t + 1 < word.size() && de.source != edges_[static_cast<size_t>(word[t + 1])].range)
      fail(Errc::not_composable, "word is not composable at position " + std::to_string(t));
  }
  std::vector<EdgeIx> w(word.begin(), word.end());
  normalize_word(w);
  VertexIx range = edges_[static_cast<size_t>(w.front())].range;
  VertexIx source = edges_[static_cast<size_t>(w.back())].source;
  return Path(std::move(d), range, source, std::move(w));
}

Path KGraph::compose(const Path& a, const Path& b) const {
  if (a.source() != b.range())
    fail(Errc::not_composable,
         "s(" + std::to_string(a.source()) + ") != r(" + std::to_string(b.range()) + ")");
  if (a.is_vertex()) return b;
  if (b.is_vertex()) return a;
  std::vector<EdgeIx> w;
  w.reserve(a.word().size() + b.word().size());
  w.insert(w.end(), a.word().begin(), a.word().end());
  w.insert(w.end(), b.word().begin(), b.word().end());
  normalize_word(w);
  return Path(a.degree() + b.degree(), a.range(), b.source(), std::move(w));
}

std::pair<Path, Path> KGraph::split(const Path& p, const Degree& at) const {
  if (!at.leq(p.degree())) fail(Errc::out_of_range, "split degree exceeds the path degree");
  std::vector<EdgeIx> w(p.word().begin(), p.word().end());
  std::vector<EdgeIx> head;
  auto color = [this](EdgeIx e) { return edges_[static_cast<size_t>(e)].color; };
  for (int c = 1; c <= rank_; ++c) {
    for (int cnt = 0; cnt < at.at_color(c); ++cnt) {
      size_t pos = 0;
      while (pos < w.size() && color(w[pos]) != c) ++pos;
      if (pos == w.size()) fail(Errc::internal_check_failed, "degree bookkeeping broke in split");
      for (size_t t = pos; t > 0; --t) swap_adjacent(w, t - 1);
      head.push_back(w.front());
      w.erase(w.begin());
    }
  }
  VertexIx mid = head.empty() ? p.range() : edges_[static_cast<size_t>(head.back())].source;
  Path head_path = head.empty() ? vertex_path(p.range()) : Path(at, p.range(), mid, std::move(head));
  if (w.empty()) return {std::move(head_path), vertex_path(mid)};
  normalize_word(w);
  Path tail_path(p.degree() - at, mid, p.source(), std::move(w));
  return {std::move(head_path), std::move(tail_path)};
}

Path KGraph::segment(const Path& p, const Degree& from, const Degree& to) const {
  if (!from.leq(to) || !to.leq(p.degree()))
    fail(Errc::out_of_range, "segment needs from <= to <= d(path)");
  Path tail = split(p, from).second;
  return split(tail, to - from).first;
}

void KGraph::enumerate(VertexIx v, const Degree& n, std::vector<Path>& out) const {
  // Canonical words have a fixed color pattern, so a DFS over out-edges in
  // index order emits them in lexicographic order.
  std::vector<int> pattern;
  for (int c = 1; c <= rank_; ++c)
    for (int t = 0; t < n.at_color(c); ++t) pattern.push_back(c);
  std::vector<EdgeIx> word(pattern.size());
  auto dfs = [&](auto&& self, size_t pos, VertexIx cur) -> void {
    if (pos == pattern.size()) {
      out.emplace_back(n, v, cur, word);
      return;
    }
    for (EdgeIx e : out_edges(cur, pattern[pos])) {
      word[pos] = e;
      self(self, pos + 1, edges_[static_cast<size_t>(e)].source);
    }
  };
  dfs(dfs, 0, v);
}

const std::vector<Path>& KGraph::paths(const Degree& n) const {
  if (n.rank() != rank_) fail(Errc::bad_params, "degree rank mismatch");
  if (!n.leq(cap_))
    fail(Errc::cap_exceeded, "degree " + n.to_string() + " exceeds cap " + cap_.to_string());
  std::scoped_lock lock(memo_mutex_);
  auto it = memo_.find(n);
  if (it != memo_.end()) return it->second;
  std::vector<Path> all;
  for (VertexIx v = 0; v < vertex_count(); ++v) enumerate(v, n, all);
  std::sort(all.begin(), all.end());
  return memo_.emplace(n, std::move(all)).first->second;
}

std::vector<Path> KGraph::paths_at(VertexIx v, const Degree& n) const {
  std::vector<Path> out;
  for (const Path& p : paths(n))
    if (p.range() == v) out.push_back(p);
  return out;
}

std::vector<std::pair<Path, Path>> KGraph::lambda_min(const Path& mu, const Path& nu) const {
  std::vector<std::pair<Path, Path>> out;
  if (mu.range() != nu.range()) return out;
  Degree g = mu.degree().join(nu.degree());
  for (const Path& eta : paths_at(mu.source(), g - mu.degree())) {
    Path sigma = compose(mu, eta);
    auto [prefix, zeta] = split(sigma, nu.degree());
    if (prefix == nu) out.emplace_back(eta, zeta);
  }
  return out;
}

std::vector<Path> KGraph::mce(const Path& mu, const Path& nu) const {
  std::vector<Path> out;
  for (const auto& [eta, zeta] : lambda_min(mu, nu)) out.push_back(compose(mu, eta));
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

KGraph KGraph::build_checked(const Skeleton& sk, const FactorizationRules& rules,
                             const KGraphOptions& opts, std::vector<ValidationIssue>& issues) {
  KGraph g;
  bool structural_ok = true;  // ids resolvable, colors in range
  bool squares_ok = true;
  auto issue = [&](Errc c, std::string detail) { issues.push_back({c, std::move(detail)}); };

  g.rank_ = sk.rank;
  if (sk.rank < 1) {
    issue(Errc::bad_params, "rank must be >= 1");
    structural_ok = false;
  }
  if (sk.vertices.empty()) {
    issue(Errc::bad_params, "vertex set is empty");
    structural_ok = false;
  }
  if (!structural_ok) return g;

  g.vertex_ids_ = sk.vertices;
  std::sort(g.vertex_ids_.begin(), g.vertex_ids_.end());
  for (size_t v = 0; v < g.vertex_ids_.size(); ++v) {
    if (!g.vertex_by_id_.emplace(g.vertex_ids_[v], static_cast<VertexIx>(v)).second) {
      issue(Errc::bad_params, "duplicate vertex id '" + g.vertex_ids_[v] + "'");
      structural_ok = false;
    }
  }

  std::vector<SkeletonEdge> sorted_edges = sk.edges;
  std::sort(sorted_edges.begin(), sorted_edges.end(),
            [](const SkeletonEdge& a, const SkeletonEdge& b) { return a.id < b.id; });
  for (const SkeletonEdge& e : sorted_edges) {
    if (e.color < 1 || e.color > sk.rank) {
      issue(Errc::bad_params, "edge '" + e.id + "' has color outside 1.." + std::to_string(sk.rank));
      structural_ok = false;
      continue;
    }
    auto rv = g.vertex_by_id_.find(e.range);
    auto sv = g.vertex_by_id_.find(e.source);
    if (rv == g.vertex_by_id_.end() || sv == g.vertex_by_id_.end()) {
      issue(Errc::bad_params, "edge '" + e.id + "' references an unknown vertex");
      structural_ok = false;
      continue;
    }
    EdgeIx ix = static_cast<EdgeIx>(g.edges_.size());
    if (!g.edge_by_id_.emplace(e.id, ix).second) {
      issue(Errc::bad_params, "duplicate edge id '" + e.id + "'");
      structural_ok = false;
      continue;
    }
    g.edges_.push_back({e.id, e.color, rv->second, sv->second});
  }
  if (!structural_ok) return g;

  g.out_.assign(g.vertex_ids_.size() * static_cast<size_t>(sk.rank), {});
  for (EdgeIx e = 0; e < g.edge_count(); ++e) {
    const DenseEdge& de = g.edges_[static_cast<size_t>(e)];
    g.out_[static_cast<size_t>(de.range) * sk.rank + (de.color - 1)].push_back(e);
  }

  // No sources: every vertex receives at least one edge of every color.
  for (VertexIx v = 0; v < g.vertex_count(); ++v)
    for (int c = 1; c <= sk.rank; ++c)
      if (g.out_edges(v, c).empty())
        issue(Errc::no_sources,
              "vertex '" + g.vertex_id(v) + "' has no color-" + std::to_string(c) + " edge");

  // Factorization squares, pair by pair.
  auto color_of = [&](EdgeIx e) { return g.edges_[static_cast<size_t>(e)].color; };
  auto src = [&](EdgeIx e) { return g.edges_[static_cast<size_t>(e)].source; };
  auto rng = [&](EdgeIx e) { return g.edges_[static_cast<size_t>(e)].range; };
  auto edge_name = [&](EdgeIx e) { return g.edges_[static_cast<size_t>(e)].id; };

  for (const Square& sq : rules.squares) {
    if (sq.i < 1 || sq.j < 1 || sq.i > sk.rank || sq.j > sk.rank || sq.i >= sq.j) {
      issue(Errc::bad_params, "square has a bad color pair (" + std::to_string(sq.i) + "," +
                                  std::to_string(sq.j) + ")");
      squares_ok = false;
      continue;
    }
    auto find_edge = [&](const std::string& id) -> std::optional<EdgeIx> {
      auto it = g.edge_by_id_.find(id);
      if (it == g.edge_by_id_.end()) {
        issue(Errc::bad_params, "square references unknown edge '" + id + "'");
        squares_ok = false;
        return std::nullopt;
      }
      return it->second;
    };
    auto e = find_edge(sq.ef.first);
    auto f = find_edge(sq.ef.second);
    auto fh = find_edge(sq.fe.first);
    auto eh = find_edge(sq.fe.second);
    if (!e || !f || !fh || !eh) continue;
    std::string tag = "(" + edge_name(*e) + "," + edge_name(*f) + ") ~ (" + edge_name(*fh) + "," +
                      edge_name(*eh) + ")";
    if (color_of(*e) != sq.i || color_of(*f) != sq.j || color_of(*fh) != sq.j ||
        color_of(*eh) != sq.i) {
      issue(Errc::bad_params, "square " + tag + " has edges of the wrong colors");
      squares_ok = false;
      continue;
    }
    if (src(*e) != rng(*f) || src(*fh) != rng(*eh)) {
      issue(Errc::endpoint_mismatch, "square " + tag + " has a non-composable side");
      squares_ok = false;
      continue;
    }
    if (rng(*fh) != rng(*e) || src(*eh) != src(*f)) {
      issue(Errc::endpoint_mismatch, "square " + tag + " does not preserve range/source");
      squares_ok = false;
      continue;
    }
    if (!g.sorted_to_anti_.emplace(std::make_pair(*e, *f), std::make_pair(*fh, *eh)).second) {
      issue(Errc::not_bijective, "pair (" + edge_name(*e) + "," + edge_name(*f) +
                                     ") appears in more than one square");
      squares_ok = false;
    }
    if (!g.anti_to_sorted_.emplace(std::make_pair(*fh, *eh), std::make_pair(*e, *f)).second) {
      issue(Errc::not_bijective, "pair (" + edge_name(*fh) + "," + edge_name(*eh) +
                                     ") appears in more than one square");
      squares_ok = false;
    }
  }

  // Totality on both sides makes each squares_{ij} a bijection.
  for (int i = 1; i <= sk.rank; ++i) {
    for (int j = i + 1; j <= sk.rank; ++j) {
      for (EdgeIx e = 0; e < g.edge_count(); ++e) {
        if (color_of(e) != i) continue;
        for (EdgeIx f = 0; f < g.edge_count(); ++f) {
          if (color_of(f) != j || src(e) != rng(f)) continue;
          if (!g.sorted_to_anti_.count({e, f})) {
            issue(Errc::not_bijective, "no square for composable pair (" + edge_name(e) + "," +
                                           edge_name(f) + "), colors (" + std::to_string(i) + "," +
                                           std::to_string(j) + ")");
            squares_ok = false;
          }
        }
      }
      for (EdgeIx f = 0; f < g.edge_count(); ++f) {
        if (color_of(f) != j) continue;
        for (EdgeIx e = 0; e < g.edge_count(); ++e) {
          if (color_of(e) != i || src(f) != rng(e)) continue;
          if (!g.anti_to_sorted_.count({f, e})) {
            issue(Errc::not_bijective, "no square covering the pair (" + edge_name(f) + "," +
                                           edge_name(e) + "), colors (" + std::to_string(j) + "," +
                                           std::to_string(i) + ")");
            squares_ok = false;
          }
        }
      }
    }
  }

  // Cube consistency: for k >= 3 the two ways of sorting a strictly
  // color-decreasing 3-letter word must agree.
  if (squares_ok && sk.rank >= 3) {
    auto try_swap = [&](std::vector<EdgeIx>& w, size_t t) { g.swap_adjacent(w, t); };
    for (EdgeIx z = 0; z < g.edge_count(); ++z) {
      int cz = color_of(z);
      for (int cy = 1; cy < cz; ++cy) {
        for (EdgeIx y : g.out_edges(src(z), cy)) {
          int cyy = color_of(y);
          for (int cx = 1; cx < cyy; ++cx) {
            for (EdgeIx x : g.out_edges(src(y), cx)) {
              std::vector<EdgeIx> left = {z, y, x};
              std::vector<EdgeIx> right = left;
              bubble(left, g.edges_, /*leftmost=*/true, try_swap);
              bubble(right, g.edges_, /*leftmost=*/false, try_swap);
              if (left != right) {
                issue(Errc::cube_inconsistent,
                      "3-path (" + edge_name(z) + "," + edge_name(y) + "," + edge_name(x) +
                          ") normalizes to two different words");
              }
            }
          }
        }
      }
    }
  }

  g.cap_ = Degree(sk.rank);
  for (int c = 1; c <= sk.rank; ++c) g.cap_.set_color(c, opts.degree_cap);
  g.skeleton_ = sk;
  g.rules_ = rules;
  return g;
}

std::vector<ValidationIssue> check(const Skeleton& sk, const FactorizationRules& rules) {
  std::vector<ValidationIssue> issues;
  KGraph::build_checked(sk, rules, {}, issues);
  return issues;
}

KGraph KGraph::validate(const Skeleton& sk, const FactorizationRules& rules, KGraphOptions opts) {
  std::vector<ValidationIssue> issues;
  KGraph g = build_checked(sk, rules, opts, issues);
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return g;
}

}  // namespace kgkms
