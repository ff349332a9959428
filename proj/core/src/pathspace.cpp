#include "kgkms/pathspace.hpp"

#include <algorithm>

namespace kgkms {

namespace {

Degree j_part(const Dynamics& dyn, const Degree& d) { return d.restricted_to(dyn.J); }
Degree k_part(const Dynamics& dyn, const Degree& d) { return d.restricted_to(dyn.K); }

}  // namespace

CylinderSpec make_cylinder_spec(const KGraph& g, Path base, std::vector<Path> excluded) {
  for (const Path& alpha : excluded)
    if (alpha.range() != base.source())
      fail(Errc::bad_params, "excluded path must start at s(base), got r(alpha) = '" +
                                 g.vertex_id(alpha.range()) + "'");
  return CylinderSpec{std::move(base), std::move(excluded)};
}

std::vector<Path> level_paths(const KGraph& g, const Dynamics& dyn, const Degree& m,
                              const Degree& n) {
  if (!m.supported_on(dyn.J)) fail(Errc::bad_params, "level degree m must be supported on J");
  if (!n.supported_on(dyn.K)) fail(Errc::bad_params, "depth degree n must be supported on K");
  return g.paths(m + n);  // throws CapExceeded past the cap
}

Path restrict_path(const KGraph& g, const Dynamics& dyn, const Path& lambda, const Degree& n) {
  if (!n.supported_on(dyn.K)) fail(Errc::bad_params, "restriction depth must be supported on K");
  if (!n.leq(k_part(dyn, lambda.degree())))
    fail(Errc::out_of_range, "restriction depth exceeds the K-part of d(lambda)");
  return g.segment(lambda, Degree(lambda.degree().rank()), j_part(dyn, lambda.degree()) + n);
}

std::vector<Path> fiber(const KGraph& g, const Dynamics& dyn, const Path& lambda,
                        const Degree& p) {
  if (!p.supported_on(dyn.K)) fail(Errc::bad_params, "fiber depth must be supported on K");
  Degree n = k_part(dyn, lambda.degree());
  if (!n.leq(p)) fail(Errc::out_of_range, "fiber needs p >= d(lambda)_K");
  std::vector<Path> out;
  for (const Path& alpha : g.paths_at(lambda.source(), p - n)) out.push_back(g.compose(lambda, alpha));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

/// x in Z(lambda) under the window reading of x: J-part of x is exact, K-part
/// of x extends arbitrarily far.
Membership base_member(const KGraph& g, const Dynamics& dyn, const Path& x, const Path& lambda) {
  if (!leq_on(lambda.degree(), x.degree(), dyn.J)) return Membership::out;
  Degree common = lambda.degree().meet(x.degree());
  if (!(g.segment(x, Degree(x.degree().rank()), common) ==
        g.segment(lambda, Degree(x.degree().rank()), common)))
    return Membership::out;
  if (lambda.degree().leq(x.degree())) return Membership::in;
  return Membership::undetermined;
}

}  // namespace

Membership cylinder_member(const KGraph& g, const Dynamics& dyn, const Path& x,
                           const CylinderSpec& spec) {
  Membership base = base_member(g, dyn, x, spec.base);
  if (base == Membership::out) return Membership::out;
  bool undetermined = base == Membership::undetermined;
  for (const Path& alpha : spec.excluded) {
    switch (base_member(g, dyn, x, g.compose(spec.base, alpha))) {
      case Membership::in:
        return Membership::out;  // x lands in an excluded cylinder
      case Membership::undetermined:
        undetermined = true;
        break;
      case Membership::out:
        break;
    }
  }
  return undetermined ? Membership::undetermined : Membership::in;
}

MeetResult cylinder_meet(const KGraph& g, const Path& sigma, const Path& tau) {
  MeetResult out;
  out.cylinders = g.mce(sigma, tau);
  out.empty = out.cylinders.empty();
  return out;
}

MeetResult cylinder_meet(const KGraph& g, const Dynamics& dyn, const Path& sigma, const Path& tau,
                         const TruncationWindow& window) {
  MeetResult all = cylinder_meet(g, sigma, tau);
  MeetResult out;
  for (Path& pi : all.cylinders)
    if (leq_on(pi.degree(), window.m, dyn.J)) out.cylinders.push_back(std::move(pi));
  out.empty = out.cylinders.empty();
  return out;
}

Degree window_basis_depth(const KGraph& g, const Dynamics& dyn, const CylinderSpec& spec,
                          const Degree& m) {
  Degree n = spec.base.degree().restricted_to(dyn.K);
  for (const Path& alpha : spec.excluded) {
    Degree d = g.compose(spec.base, alpha).degree();
    if (leq_on(d, m, dyn.J)) n = n.join(d.restricted_to(dyn.K));
  }
  return n;
}

std::vector<Path> window_basis(const KGraph& g, const Dynamics& dyn, const CylinderSpec& spec,
                               const Degree& m) {
  if (!m.supported_on(dyn.J)) fail(Errc::bad_params, "window level must be supported on J");
  Degree n = window_basis_depth(g, dyn, spec, m);
  std::vector<Path> out;
  for (const Path& sigma : level_paths(g, dyn, m, n))
    if (cylinder_member(g, dyn, sigma, spec) == Membership::in) out.push_back(sigma);
  return out;
}

}  // namespace kgkms
