#pragma once

#include <string>
#include <utility>
#include <vector>

namespace kgkms {

/// External (file-level) presentation of a k-graph: a colored 1-skeleton plus
/// an explicit list of factorization squares. Vertices and edges carry string
/// ids; everything is compiled to dense indices by validate().

struct SkeletonEdge {
  std::string id;
  int color = 0;  // 1..k
  std::string range;
  std::string source;
};

struct Skeleton {
  int rank = 0;
  std::vector<std::string> vertices;
  std::vector<SkeletonEdge> edges;
};

/// One commuting square e.f = f_hat.e_hat, where color(e) = i < j = color(f)
/// and composition is read with s(lambda) = r(mu) for lambda.mu.
struct Square {
  int i = 0;
  int j = 0;
  std::pair<std::string, std::string> ef;  // (e, f)
  std::pair<std::string, std::string> fe;  // (f_hat, e_hat)
};

struct FactorizationRules {
  std::vector<Square> squares;
};

}  // namespace kgkms
