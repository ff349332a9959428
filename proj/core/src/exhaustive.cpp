#include "kgkms/exhaustive.hpp"

namespace kgkms {

ExhaustiveCandidate make_candidate(const KGraph& g, VertexIx v, std::vector<Path> set) {
  for (const Path& p : set)
    if (p.range() != v)
      fail(Errc::bad_params, "candidate member with range '" + g.vertex_id(p.range()) +
                                 "' does not sit in v Lambda");
  return ExhaustiveCandidate{v, std::move(set)};
}

bool is_finite_exhaustive(const KGraph& g, const ExhaustiveCandidate& c) {
  if (c.set.empty()) return false;
  Degree big(g.rank());
  for (const Path& p : c.set) big = big.join(p.degree());
  Degree zero(g.rank());
  for (const Path& mu : g.paths_at(c.v, big)) {
    bool hit = false;
    for (const Path& lambda : c.set) {
      if (g.segment(mu, zero, lambda.degree()) == lambda) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

bool is_finite_exhaustive_bruteforce(const KGraph& g, const ExhaustiveCandidate& c,
                                     const Degree& probe) {
  if (c.set.empty()) return false;
  bool ok = true;
  for_each_degree_leq(probe, [&](const Degree& n) {
    if (!ok) return;
    for (const Path& mu : g.paths_at(c.v, n)) {
      bool hit = false;
      for (const Path& lambda : c.set)
        if (!g.mce(mu, lambda).empty()) {
          hit = true;
          break;
        }
      if (!hit) {
        ok = false;
        return;
      }
    }
  });
  return ok;
}

bool satiation_membership(const KGraph& g, const Dynamics& dyn, const ExhaustiveCandidate& c) {
  ExhaustiveCandidate k_part;
  k_part.v = c.v;
  for (const Path& p : c.set)
    if (p.degree().supported_on(dyn.K)) k_part.set.push_back(p);
  if (k_part.set.empty()) return false;
  return is_finite_exhaustive(g, k_part);
}

ToeplitzElement relative_ck_identity(const KGraph& g, VertexIx v, int color) {
  ToeplitzElement product = ToeplitzElement::vertex(g, v);
  ToeplitzElement sum_form = ToeplitzElement::vertex(g, v);
  bool first = true;
  for (EdgeIx e : g.out_edges(v, color)) {
    Path p = g.edge_path(e);
    ToeplitzElement factor = ToeplitzElement::vertex(g, v) - ToeplitzElement::term(p, p);
    product = first ? factor : multiply(g, product, factor);
    first = false;
    sum_form = sum_form - ToeplitzElement::term(p, p);
  }
  return product - sum_form;
}

}  // namespace kgkms
