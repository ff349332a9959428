#include <doctest.h>

#include "kgkms/degree.hpp"

using namespace kgkms;

TEST_SUITE("degree") {

TEST_CASE("partial order and join") {
  Degree a{1, 2};
  Degree b{2, 1};
  CHECK(!a.leq(b));
  CHECK(!b.leq(a));
  CHECK(a.leq(a));
  CHECK(a.join(b) == Degree{2, 2});
  CHECK(a.meet(b) == Degree{1, 1});
  CHECK((a + b) == Degree{3, 3});
  CHECK((a.join(b) - a) == Degree{1, 0});
  CHECK_THROWS_AS(a - b, Error);
}

TEST_CASE("block split is lossless and order preserving") {
  Degree n{3, 1, 2};
  std::vector<int> J = {1};
  std::vector<int> K = {2, 3};
  CHECK(n.restricted_to(J) + n.restricted_to(K) == n);
  Degree m{2, 1, 2};
  CHECK(m.leq(n));
  CHECK(leq_on(m, n, J));
  CHECK(leq_on(m, n, K));
  CHECK(m.restricted_to(J).supported_on(J));
}

TEST_CASE("box iteration is exhaustive and lexicographic") {
  std::vector<Degree> seen;
  for_each_degree_leq(Degree{1, 2}, [&](const Degree& d) { seen.push_back(d); });
  CHECK(seen.size() == 6);
  CHECK(seen.front() == Degree{0, 0});
  CHECK(seen.back() == Degree{1, 2});
  for (size_t i = 1; i < seen.size(); ++i) CHECK(seen[i - 1] < seen[i]);
}

TEST_CASE("rank mismatch is rejected") {
  Degree a{1, 2};
  Degree b{1, 2, 3};
  CHECK_THROWS_AS((void)a.leq(b), Error);
  CHECK_THROWS_AS((void)a.join(b), Error);
}

}  // TEST_SUITE
