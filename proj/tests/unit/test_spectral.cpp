#include <doctest.h>

#include <cmath>

#include "corpus.hpp"

using namespace kgkms;
using namespace kgkms::testing;

TEST_SUITE("spectral") {

TEST_CASE("vertex matrices count the skeleton") {
  VertexMatrices m = vertex_matrices(g23());
  CHECK(m.color(1).at(0, 0) == 2);
  CHECK(m.color(2).at(0, 0) == 3);

  VertexMatrices m11 = vertex_matrices(g11());
  CHECK(m11.color(1).at(0, 0) == 1);
  CHECK(m11.color(2).at(0, 0) == 1);

  VertexMatrices m2 = vertex_matrices(two_vertex_complete());
  for (int v = 0; v < 2; ++v)
    for (int w = 0; w < 2; ++w) {
      CHECK(m2.color(1).at(v, w) == 1);
      CHECK(m2.color(2).at(v, w) == 1);
    }
}

TEST_CASE("matrix entries match the path enumeration") {
  for (const KGraph* gp : {&g23(), &two_vertex_complete(), &flip3()}) {
    const KGraph& g = *gp;
    VertexMatrices m = vertex_matrices(g);
    for (int c = 1; c <= g.rank(); ++c)
      for (VertexIx v = 0; v < g.vertex_count(); ++v) {
        std::vector<long long> counts(static_cast<size_t>(g.vertex_count()), 0);
        for (const Path& e : g.paths_at(v, Degree::unit(g.rank(), c)))
          counts[static_cast<size_t>(e.source())] += 1;
        for (VertexIx w = 0; w < g.vertex_count(); ++w)
          CHECK(m.color(c).at(v, w) == counts[static_cast<size_t>(w)]);
      }
  }
}

TEST_CASE("commutation holds on the corpus and fails on a planted pair") {
  CHECK_NOTHROW(verify_commutation(vertex_matrices(prod3())));
  VertexMatrices bad;
  IntMat a(2), b(2);
  a.at(0, 0) = 1; a.at(0, 1) = 1; a.at(1, 1) = 1;
  b.at(0, 0) = 1; b.at(1, 0) = 1; b.at(1, 1) = 1;
  bad.by_color = {a, b};
  CHECK_THROWS_AS(verify_commutation(bad), Error);
}

TEST_CASE("irreducibility matches strong connectivity") {
  IntMat pos(1);
  pos.at(0, 0) = 3;
  CHECK(is_irreducible(pos));

  IntMat nilp(2);
  nilp.at(0, 1) = 1;
  CHECK(!is_irreducible(nilp));

  IntMat swap2(2);
  swap2.at(0, 1) = 1;
  swap2.at(1, 0) = 1;
  CHECK(is_irreducible(swap2));
}

TEST_CASE("perron on closed-form matrices") {
  IntMat three(1);
  three.at(0, 0) = 3;
  PerronResult p = perron(three);
  CHECK(p.rho == 3.0);
  CHECK(p.kappa[0] == 1.0);
  REQUIRE(p.rho_int.has_value());
  CHECK(*p.rho_int == 3);

  IntMat swap2(2);
  swap2.at(0, 1) = 1;
  swap2.at(1, 0) = 1;
  PerronResult q = perron(swap2);
  CHECK(q.rho == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q.kappa[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(q.kappa[1] == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(q.kappa_exact.has_value());
  CHECK((*q.kappa_exact)[0] == Rational(1, 2));

  IntMat ones(2);
  for (int v = 0; v < 2; ++v)
    for (int w = 0; w < 2; ++w) ones.at(v, w) = 1;
  PerronResult r = perron(ones);
  // exact 2x2 eigen-solve: rho = 2, kappa = (1/2, 1/2)
  CHECK(r.rho == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.kappa[0] == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(r.rho_int.has_value());
  CHECK(*r.rho_int == 2);

  CHECK_THROWS_AS(perron(IntMat(2)), Error);  // zero matrix: not irreducible
}

TEST_CASE("perron residual invariant") {
  // A commuting-but-lopsided integer matrix with irrational spectral radius.
  IntMat a(2);
  a.at(0, 0) = 2; a.at(0, 1) = 1; a.at(1, 0) = 1; a.at(1, 1) = 1;
  PerronResult p = perron(a);
  std::vector<double> ak = a.apply(p.kappa);
  double resid = 0.0;
  for (size_t i = 0; i < p.kappa.size(); ++i)
    resid = std::max(resid, std::abs(ak[i] - p.rho * p.kappa[i]));
  CHECK(resid <= 1e-9 * std::max(1.0, p.rho));
  CHECK(!p.rho_int.has_value());
  double sum = p.kappa[0] + p.kappa[1];
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("common Perron data on the corpus") {
  Setup st = setup_j1(g23());
  CHECK(st.s.rho[0] == 2.0);
  CHECK(st.s.rho[1] == 3.0);
  CHECK(st.s.kappa[0] == 1.0);
  CHECK(st.s.coordinatewise_irreducible);
  REQUIRE(st.s.kappa_exact.has_value());

  SpectralData s2 = common_pf(two_vertex_complete(), vertex_matrices(two_vertex_complete()));
  CHECK(s2.rho[0] == doctest::Approx(2.0));
  CHECK(s2.kappa[0] == doctest::Approx(0.5));
  CHECK(s2.kappa[1] == doctest::Approx(0.5));
}

TEST_CASE("reducible color is reported with its color list") {
  GraphSpec spec = identity_reducible_spec();
  KGraph g = validated(spec);
  VertexMatrices m = vertex_matrices(g);
  CHECK_THROWS_WITH_AS(common_pf(g, m), doctest::Contains("reducible colors: 1"), Error);
}

TEST_CASE("critical beta arithmetic") {
  Setup st = setup_j1(g23());
  std::vector<double> preferred = {std::log(2.0), std::log(3.0)};
  CHECK(critical_beta(st.s, preferred) == doctest::Approx(1.0).epsilon(1e-15));
  std::vector<double> mixed = {1.0, std::log(3.0)};
  CHECK(critical_beta(st.s, mixed) == doctest::Approx(1.0).epsilon(1e-15));
  SpectralData ones;
  ones.rho = {1.0, 1.0};
  CHECK(critical_beta(ones, mixed) == 0.0);
}

TEST_CASE("normalize_dynamics rescales and detects K") {
  Setup st = setup_j1(g23());
  SUBCASE("scaled input") {
    Dynamics d = normalize_dynamics(st.s, {2.0, 2.0 * std::log(3.0)});
    CHECK(d.r[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.r[1] == doctest::Approx(std::log(3.0)).epsilon(1e-15));
    CHECK(d.K == std::vector<int>{2});
    CHECK(d.J == std::vector<int>{1});
  }
  SUBCASE("preferred dynamics keeps every color critical") {
    Dynamics d = normalize_dynamics(st.s, {std::log(2.0), std::log(3.0)});
    CHECK(d.K == std::vector<int>{1, 2});
    CHECK(d.J.empty());
  }
  SUBCASE("declared K is validated") {
    CHECK_NOTHROW(normalize_dynamics(st.s, {1.0, std::log(3.0)}, std::vector<int>{2}));
    CHECK_THROWS_AS(normalize_dynamics(st.s, {1.0, std::log(3.0)}, std::vector<int>{1}), Error);
    CHECK_THROWS_AS(normalize_dynamics(st.s, {1.0, std::log(3.0)}, std::vector<int>{1, 2}),
                    Error);
  }
  SUBCASE("idempotence") {
    Dynamics d = normalize_dynamics(st.s, {0.37, 5.11});
    Dynamics dd = normalize_dynamics(st.s, d.r);
    for (int c = 0; c < 2; ++c) CHECK(std::abs(d.r[c] - dd.r[c]) <= 1e-12);
    CHECK(d.K == dd.K);
  }
  SUBCASE("degenerate critical temperature") {
    SpectralData s = common_pf(g11(), vertex_matrices(g11()));
    CHECK_THROWS_AS(normalize_dynamics(s, {1.0, 1.0}), Error);
  }
}

TEST_CASE("existence gate on the worked example") {
  Setup st = setup_j1(g23());
  std::vector<double> r = {1.0, std::log(3.0)};
  CHECK(existence_gate(st.m, st.s, r, 0.9).verdict == GateVerdict::no_kms);
  CHECK(existence_gate(st.m, st.s, r, 2.0).verdict == GateVerdict::supercritical);
  GateResult crit = existence_gate(st.m, st.s, r, 1.0);
  CHECK(crit.verdict == GateVerdict::critical);
  CHECK(crit.K == std::vector<int>{2});
}

TEST_CASE("existence gate is monotone through the critical point") {
  Setup st = setup_j1(g23());
  std::vector<double> r = {1.0, std::log(3.0)};
  for (double beta : {0.0, 0.25, 0.5, 0.75, 0.9, 0.999}) {
    CHECK(existence_gate(st.m, st.s, r, beta).verdict == GateVerdict::no_kms);
  }
  for (double beta : {1.0, 1.001, 1.5, 2.0, 10.0}) {
    CHECK(existence_gate(st.m, st.s, r, beta).verdict != GateVerdict::no_kms);
  }
}

TEST_CASE("existence gate checks the cycle hypothesis") {
  VertexMatrices m;
  IntMat acyclic(2);
  acyclic.at(0, 1) = 1;  // no cycle in this coordinate graph
  m.by_color = {acyclic};
  SpectralData s;
  s.rho = {1.0};
  std::vector<double> r = {1.0};
  CHECK_THROWS_AS(existence_gate(m, s, r, 1.0), Error);
  try {
    existence_gate(m, s, r, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::hypothesis_unchecked);
  }
}

TEST_CASE("rational relation search on the dynamics vector") {
  std::vector<double> independent = {1.0, std::log(3.0)};
  CHECK(!find_rational_relation(independent).has_value());

  std::vector<double> dependent = {2.0 * std::log(2.0), 3.0 * std::log(2.0)};
  auto rel = find_rational_relation(dependent);
  REQUIRE(rel.has_value());
  CHECK(std::abs(static_cast<double>((*rel)[0]) * dependent[0] +
                 static_cast<double>((*rel)[1]) * dependent[1]) <= 1e-9);

  // deep rational ratio, still within the height bound
  std::vector<double> deep = {355.0, 113.0};
  auto rel2 = find_rational_relation(deep);
  REQUIRE(rel2.has_value());
  CHECK((*rel2)[0] * 355 + (*rel2)[1] * 113 == 0);

  std::vector<double> three = {std::log(2.0), std::log(3.0), 2.0 * std::log(3.0)};
  auto rel3 = find_rational_relation(three);
  REQUIRE(rel3.has_value());  // colors 2 and 3 are commensurable
  CHECK((*rel3)[0] == 0);
}

TEST_CASE("subinvariance check mirrors the subinvariance theorem") {
  IntMat two(1);
  two.at(0, 0) = 2;
  std::vector<double> eps = {1.0};
  SubinvarianceResult eq = subinvariance_check(two, eps, 2.0);
  CHECK(eq.subinvariant);
  CHECK(eq.equality);
  CHECK(eq.eps_positive);
  CHECK(eq.t_dominates_rho);

  SubinvarianceResult strict = subinvariance_check(two, eps, 3.0);
  CHECK(strict.subinvariant);
  CHECK(!strict.equality);
  CHECK(strict.t_dominates_rho);

  IntMat ones(2);
  for (int v = 0; v < 2; ++v)
    for (int w = 0; w < 2; ++w) ones.at(v, w) = 1;
  std::vector<double> eps2 = {1.0, 1.0};
  CHECK(!subinvariance_check(ones, eps2, 1.0).subinvariant);
}

}  // TEST_SUITE
