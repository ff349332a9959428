#pragma once

#include <vector>

#include "kgkms/kgraph.hpp"
#include "kgkms/spectral.hpp"

namespace kgkms {

/// Z(lambda \ G) = Z(lambda) minus the union of the Z(lambda.alpha), alpha in
/// G. Every alpha must satisfy r(alpha) = s(lambda).
struct CylinderSpec {
  Path base;
  std::vector<Path> excluded;
};

CylinderSpec make_cylinder_spec(const KGraph& g, Path base, std::vector<Path> excluded);

/// Finite stand-in for Lambda^{m,infty_K}: J-degree pinned at m, K-directions
/// materialized to `depth`.
struct TruncationWindow {
  Degree m;      // supported on J
  Degree depth;  // supported on K
};

/// Lambda^{m,n}: the finite paths with J-part m and K-part n, canonical order.
std::vector<Path> level_paths(const KGraph& g, const Dynamics& dyn, const Degree& m,
                              const Degree& n);

/// r_{n,p}(lambda) = lambda(0, (m, n)) for lambda in Lambda^{m,p}.
Path restrict_path(const KGraph& g, const Dynamics& dyn, const Path& lambda, const Degree& n);

/// { lambda.alpha : alpha in s(lambda) Lambda^{(0, p - n)} }, the r_{n,p}
/// preimage of lambda inside Lambda^{m,p}.
std::vector<Path> fiber(const KGraph& g, const Dynamics& dyn, const Path& lambda, const Degree& p);

enum class Membership { in, out, undetermined };

/// Decides x in Z(lambda \ G) for a truncated path x under the window
/// contract: the J-part of x is final, the K-part stands for a semi-infinite
/// continuation. Exclusions deeper than the truncation yield `undetermined`.
Membership cylinder_member(const KGraph& g, const Dynamics& dyn, const Path& x,
                           const CylinderSpec& spec);

struct MeetResult {
  bool empty = true;
  std::vector<Path> cylinders;  // Z(sigma) n Z(tau) = disjoint union of Z(pi)
};

MeetResult cylinder_meet(const KGraph& g, const Path& sigma, const Path& tau);
/// Window-filtered variant: keeps the pieces meeting Lambda^{m,infty_K}.
MeetResult cylinder_meet(const KGraph& g, const Dynamics& dyn, const Path& sigma, const Path& tau,
                         const TruncationWindow& window);

/// The basis refinement behind the window decompositions: paths sigma with
/// d(sigma) = (m, n), n = (join of the relevant d(lambda.alpha)_K) v
/// d(lambda)_K, whose cylinders partition Z(lambda \ G) n Lambda^{m,infty_K}.
std::vector<Path> window_basis(const KGraph& g, const Dynamics& dyn, const CylinderSpec& spec,
                               const Degree& m);
/// The K-depth used by window_basis.
Degree window_basis_depth(const KGraph& g, const Dynamics& dyn, const CylinderSpec& spec,
                          const Degree& m);

}  // namespace kgkms
