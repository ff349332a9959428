#pragma once

#include <vector>

#include "kgkms/spectral.hpp"
#include "kgkms/toeplitz.hpp"

namespace kgkms {

/// A finite candidate set E inside v Lambda.
struct ExhaustiveCandidate {
  VertexIx v = -1;
  std::vector<Path> set;
};

ExhaustiveCandidate make_candidate(const KGraph& g, VertexIx v, std::vector<Path> set);

/// Decides exhaustiveness at the single degree D = join of the member
/// degrees: E is exhaustive iff every mu in v Lambda^D has a member as a
/// prefix. (For |d(mu)| >= |D| the MCE test reduces to prefix equality, and
/// no-sources lifts any shorter mu to degree D, so this one level decides the
/// full quantifier.)
bool is_finite_exhaustive(const KGraph& g, const ExhaustiveCandidate& c);

/// Definition-level check over every mu with d(mu) <= probe: MCE(mu, lambda)
/// nonempty for some lambda in E. Test oracle for the prefix criterion.
bool is_finite_exhaustive_bruteforce(const KGraph& g, const ExhaustiveCandidate& c,
                                     const Degree& probe);

/// Membership in the satiation generated by { v Lambda^{e_i} : i in K }:
/// true iff the K-supported part of G is itself finite exhaustive.
bool satiation_membership(const KGraph& g, const Dynamics& dyn, const ExhaustiveCandidate& c);

/// prod_{e in v Lambda^{e_i}} (t_v - t_e t_e^*) - (t_v - sum_e t_e t_e^*),
/// expanded in the spanning algebra. Zero for every vertex and color.
ToeplitzElement relative_ck_identity(const KGraph& g, VertexIx v, int color);

}  // namespace kgkms
