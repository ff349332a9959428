#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "corpus.hpp"
#include "kgkms/graph_io.hpp"

using namespace kgkms;
using namespace kgkms::testing;

namespace {

bool has_issue(const std::vector<ValidationIssue>& issues, Errc code) {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const ValidationIssue& i) { return i.code == code; });
}

}  // namespace

TEST_SUITE("kgraph") {

TEST_CASE("validate accepts the corpus graphs") {
  CHECK(g11().edge_count() == 2);
  CHECK(g23().edge_count() == 5);
  CHECK(prod3().edge_count() == 6);
  CHECK(flip3().edge_count() == 6);
  CHECK(two_vertex_complete().vertex_count() == 2);
}

TEST_CASE("chosen square bijections validate directly") {
  // Oracle for the bijectivity/endpoint axioms on the 2/3 graph: every
  // composable blue-red pair appears exactly once on each side.
  GraphSpec spec = make_single_vertex({2, 3});
  CHECK(spec.rules.squares.size() == 6);
  std::set<std::pair<std::string, std::string>> ef, fe;
  for (const Square& s : spec.rules.squares) {
    CHECK(s.i == 1);
    CHECK(s.j == 2);
    CHECK(ef.insert(s.ef).second);
    CHECK(fe.insert(s.fe).second);
  }
  CHECK(check(spec.skeleton, spec.rules).empty());
}

TEST_CASE("missing color at a vertex is NoSources") {
  GraphSpec spec;
  spec.skeleton.rank = 2;
  spec.skeleton.vertices = {"u", "w"};
  spec.skeleton.edges = {
      {"b0", 1, "u", "w"}, {"b1", 1, "w", "u"}, {"r0", 2, "u", "u"},
  };
  auto issues = check(spec.skeleton, spec.rules);
  CHECK(has_issue(issues, Errc::no_sources));
  CHECK_THROWS_AS(KGraph::validate(spec.skeleton, spec.rules), ValidationError);
}

TEST_CASE("square list problems are reported per pair") {
  GraphSpec spec = make_single_vertex({2, 3});
  SUBCASE("missing square") {
    spec.rules.squares.pop_back();
    CHECK(has_issue(check(spec.skeleton, spec.rules), Errc::not_bijective));
  }
  SUBCASE("duplicated square") {
    spec.rules.squares.push_back(spec.rules.squares.front());
    CHECK(has_issue(check(spec.skeleton, spec.rules), Errc::not_bijective));
  }
  SUBCASE("non-bijective image") {
    // point two domain pairs at the same anti pair
    spec.rules.squares[1].fe = spec.rules.squares[0].fe;
    CHECK(has_issue(check(spec.skeleton, spec.rules), Errc::not_bijective));
  }
}

TEST_CASE("endpoint coherence is enforced") {
  GraphSpec spec = two_vertex_complete_spec();
  // b00 r00 = r00 b00 has r(fhat) = u = r(e) but breaks s(ehat) = s(f)
  // once we swap in an edge with the wrong source.
  for (Square& s : spec.rules.squares)
    if (s.ef == std::make_pair(std::string("b00"), std::string("r00"))) s.fe.second = "b01";
  CHECK(has_issue(check(spec.skeleton, spec.rules), Errc::endpoint_mismatch));
}

TEST_CASE("cube inconsistency is caught for k = 3") {
  GraphSpec bad = cube_inconsistent_spec();
  auto issues = check(bad.skeleton, bad.rules);
  CHECK(has_issue(issues, Errc::cube_inconsistent));
  // The same skeleton with product squares everywhere is fine.
  CHECK(check(make_single_vertex({2, 2, 2}).skeleton, make_single_vertex({2, 2, 2}).rules)
            .empty());
}

TEST_CASE("compose: vertex paths are identities") {
  const KGraph& g = g23();
  Path a = g.edge_path(g.edge_index("c1e1"));
  CHECK(g.compose(g.vertex_path(a.range()), a) == a);
  CHECK(g.compose(a, g.vertex_path(a.source())) == a);
  CHECK_THROWS_AS(g.compose(a, two_vertex_complete().vertex_path(1)), Error);
}

TEST_CASE("compose: blue then red is already canonical") {
  const KGraph& g = g23();
  Path a = g.edge_path(g.edge_index("c1e1"));
  Path f = g.edge_path(g.edge_index("c2e1"));
  Path af = g.compose(a, f);
  CHECK(af.degree() == Degree{1, 1});
  CHECK(af.word()[0] == g.edge_index("c1e1"));
  CHECK(af.word()[1] == g.edge_index("c2e1"));
}

TEST_CASE("compose: red then blue applies the stored square once") {
  const KGraph& g = g23();
  Path a = g.edge_path(g.edge_index("c1e2"));
  Path f = g.edge_path(g.edge_index("c2e3"));
  Path fa = g.compose(f, a);
  // product squares: f.a rewrites to a.f with the same indices
  CHECK(fa.word()[0] == g.edge_index("c1e2"));
  CHECK(fa.word()[1] == g.edge_index("c2e3"));
  CHECK(fa.degree() == Degree{1, 1});
}

TEST_CASE("segment endpoints and degenerate slices") {
  const KGraph& g = g23();
  for (const Path& p : g.paths(Degree{2, 1})) {
    CHECK(g.segment(p, Degree{0, 0}, p.degree()) == p);
    Path mid = g.segment(p, Degree{1, 0}, Degree{1, 0});
    CHECK(mid.is_vertex());
  }
  Path p = g.paths(Degree{1, 1}).front();
  CHECK_THROWS_AS(g.segment(p, Degree{1, 1}, Degree{0, 0}), Error);
  CHECK_THROWS_AS(g.segment(p, Degree{0, 0}, Degree{2, 2}), Error);
}

TEST_CASE("segment matches the inverse square on a rectangle") {
  const KGraph& g = g23();
  Path a = g.edge_path(g.edge_index("c1e1"));
  Path f = g.edge_path(g.edge_index("c2e2"));
  Path af = g.compose(a, f);
  // Brute force over both factorizations of the rectangle: the unique red
  // prefix of a.f must be the one the square pairs with (a, f).
  Path red_prefix = g.segment(af, Degree{0, 0}, Degree{0, 1});
  Path blue_suffix = g.segment(af, Degree{0, 1}, Degree{1, 1});
  CHECK(g.compose(red_prefix, blue_suffix) == af);
  int hits = 0;
  for (EdgeIx re : g.out_edges(af.range(), 2))
    for (EdgeIx be : g.out_edges(g.edge(re).source, 1))
      if (g.compose(g.edge_path(re), g.edge_path(be)) == af) {
        ++hits;
        CHECK(g.edge_path(re) == red_prefix);
        CHECK(g.edge_path(be) == blue_suffix);
      }
  CHECK(hits == 1);
}

TEST_CASE("factorization reassembly over the test corpus") {
  for (const KGraph* gp : {&g23(), &flip3(), &two_vertex_complete()}) {
    const KGraph& g = *gp;
    Degree cap(g.rank());
    for (int c = 1; c <= g.rank(); ++c) cap.set_color(c, g.rank() == 2 ? 2 : 1);
    for (const Path& lambda : paths_up_to(g, cap)) {
      if (lambda.degree().total() > 4) continue;
      for_each_degree_leq(lambda.degree(), [&](const Degree& p) {
        for_each_degree_leq(lambda.degree() - p, [&](const Degree& rest) {
          Degree q = p + rest;
          Path s1 = g.segment(lambda, Degree(g.rank()), p);
          Path s2 = g.segment(lambda, p, q);
          Path s3 = g.segment(lambda, q, lambda.degree());
          CHECK(g.compose(s1, g.compose(s2, s3)) == lambda);
        });
      });
    }
  }
}

TEST_CASE("paths enumeration counts and order") {
  const KGraph& g = g23();
  CHECK(g.paths(Degree{0, 0}).size() == 1);
  CHECK(g.paths(Degree{1, 1}).size() == 6);
  CHECK(g.paths(Degree{0, 1}).size() == 3);
  const auto& p11 = g.paths(Degree{1, 1});
  CHECK(std::is_sorted(p11.begin(), p11.end()));
  // canonical words are distinct
  for (size_t i = 1; i < p11.size(); ++i) CHECK(!(p11[i - 1] == p11[i]));
}

TEST_CASE("count identity |Lambda^n| = 1^T A^n 1") {
  for (const KGraph* gp : {&g23(), &two_vertex_complete(), &prod3()}) {
    const KGraph& g = *gp;
    VertexMatrices m = vertex_matrices(g);
    Degree cap(g.rank());
    for (int c = 1; c <= g.rank(); ++c) cap.set_color(c, 2);
    for_each_degree_leq(cap, [&](const Degree& n) {
      if (n.total() > 4) return;
      IntMat an = m.power(n);
      long long total = 0;
      for (int v = 0; v < an.n; ++v)
        for (int w = 0; w < an.n; ++w) total += an.at(v, w);
      CHECK(static_cast<long long>(g.paths(n).size()) == total);
    });
  }
}

TEST_CASE("no-sources makes every v Lambda^n nonempty") {
  const KGraph& g = two_vertex_complete();
  for (VertexIx v = 0; v < g.vertex_count(); ++v) {
    CHECK(!g.paths_at(v, Degree{2, 1}).empty());
    CHECK(g.paths_at(v, Degree{0, 0}).size() == 1);
  }
}

TEST_CASE("lambda_min: same path, equal degrees, mixed colors") {
  const KGraph& g = g23();
  Path a = g.edge_path(g.edge_index("c1e1"));
  Path b = g.edge_path(g.edge_index("c1e2"));
  Path f = g.edge_path(g.edge_index("c2e1"));

  auto self = g.lambda_min(a, a);
  REQUIRE(self.size() == 1);
  CHECK(self[0].first.is_vertex());
  CHECK(self[0].second.is_vertex());

  CHECK(g.lambda_min(a, b).empty());

  auto mixed = g.lambda_min(a, f);
  REQUIRE(mixed.size() == 1);
  CHECK(mixed[0].first.degree() == Degree{0, 1});
  CHECK(mixed[0].second.degree() == Degree{1, 0});
  CHECK(g.compose(a, mixed[0].first) == g.compose(f, mixed[0].second));
}

TEST_CASE("lambda_min agrees with the definition-level search") {
  for (const KGraph* gp : {&g23(), &two_vertex_complete()}) {
    const KGraph& g = *gp;
    std::vector<Path> pool = paths_up_to(g, Degree{1, 1});
    for (const Path& mu : pool)
      for (const Path& nu : pool) {
        auto fast = g.lambda_min(mu, nu);
        auto slow = lambda_min_bruteforce(g, mu, nu);
        std::sort(fast.begin(), fast.end());
        std::sort(slow.begin(), slow.end());
        CHECK(fast == slow);
      }
  }
}

TEST_CASE("lambda_min symmetry") {
  const KGraph& g = g23();
  std::vector<Path> pool = paths_up_to(g, Degree{1, 1});
  for (const Path& mu : pool)
    for (const Path& nu : pool) {
      auto ab = g.lambda_min(mu, nu);
      auto ba = g.lambda_min(nu, mu);
      REQUIRE(ab.size() == ba.size());
      for (const auto& [eta, zeta] : ab) {
        CHECK(std::any_of(ba.begin(), ba.end(), [&](const auto& pr) {
          return pr.first == zeta && pr.second == eta;
        }));
      }
    }
}

TEST_CASE("mce examples") {
  const KGraph& g = g23();
  Path a = g.edge_path(g.edge_index("c1e1"));
  Path b = g.edge_path(g.edge_index("c1e2"));
  Path f = g.edge_path(g.edge_index("c2e1"));
  CHECK(g.mce(a, a) == std::vector<Path>{a});
  CHECK(g.mce(a, b).empty());
  auto m = g.mce(a, f);
  REQUIRE(m.size() == 1);
  CHECK(m[0].degree() == Degree{1, 1});
  CHECK(g.mce(f, a) == m);
}

TEST_CASE("composition is associative on composable triples") {
  for (const KGraph* gp : {&g23(), &flip3()}) {
    const KGraph& g = *gp;
    Degree one(g.rank());
    for (int c = 1; c <= g.rank(); ++c) one.set_color(c, 1);
    std::vector<Path> pool = paths_up_to(g, one);
    for (const Path& x : pool)
      for (const Path& y : pool) {
        if (x.source() != y.range()) continue;
        for (const Path& z : pool) {
          if (y.source() != z.range()) continue;
          CHECK(g.compose(g.compose(x, y), z) == g.compose(x, g.compose(y, z)));
        }
      }
  }
}

TEST_CASE("degree functor bookkeeping") {
  const KGraph& g = two_vertex_complete();
  for (const Path& x : g.paths(Degree{1, 1}))
    for (const Path& y : g.paths(Degree{1, 0})) {
      if (x.source() != y.range()) continue;
      Path xy = g.compose(x, y);
      CHECK(xy.degree() == x.degree() + y.degree());
      CHECK(xy.range() == x.range());
      CHECK(xy.source() == y.source());
    }
}

TEST_CASE("canonical form does not depend on the normalization route") {
  // Random composable words, normalized three ways: directly, by left folds
  // and by right folds of single edges. Cube consistency makes them agree.
  for (const KGraph* gp : {&g23(), &flip3(), &prod3()}) {
    const KGraph& g = *gp;
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> len(2, 6);
    std::uniform_int_distribution<int> color(1, g.rank());
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<EdgeIx> word;
      VertexIx cur = 0;
      int n = len(rng);
      for (int t = 0; t < n; ++t) {
        auto out = g.out_edges(cur, color(rng));
        EdgeIx e = out[static_cast<size_t>(rng()) % out.size()];
        word.push_back(e);
        cur = g.edge(e).source;
      }
      Path direct = g.path_from_word(word);
      Path left = g.edge_path(word[0]);
      for (size_t t = 1; t < word.size(); ++t) left = g.compose(left, g.edge_path(word[t]));
      Path right = g.edge_path(word.back());
      for (size_t t = word.size() - 1; t-- > 0;) right = g.compose(g.edge_path(word[t]), right);
      CHECK(direct == left);
      CHECK(direct == right);
    }
  }
}

TEST_CASE("memoized tables are safe under concurrent reads") {
  KGraph g = validated(make_single_vertex({2, 3}), 4);
  std::vector<std::thread> workers;
  std::atomic<long long> total{0};
  for (int t = 0; t < 4; ++t)
    workers.emplace_back([&] {
      long long mine = 0;
      for_each_degree_leq(Degree{3, 3}, [&](const Degree& n) {
        mine += static_cast<long long>(g.paths(n).size());
      });
      total += mine;
    });
  for (std::thread& w : workers) w.join();
  // sum over the box of 2^{n1} 3^{n2} = 15 * 40, read by four threads
  CHECK(total == 4 * 15 * 40);
}

TEST_CASE("degree cap is enforced") {
  KGraph g = validated(make_single_vertex({2, 3}), 2);
  CHECK(g.paths(Degree{2, 2}).size() == 36);
  CHECK_THROWS_AS(g.paths(Degree{3, 0}), Error);
  try {
    g.paths(Degree{3, 0});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::cap_exceeded);
  }
}

}  // TEST_SUITE
