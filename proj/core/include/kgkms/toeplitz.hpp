#pragma once

#include <complex>
#include <map>
#include <span>

#include "kgkms/kgraph.hpp"

namespace kgkms {

/// One spanning element t_mu t_nu^* with s(mu) = s(nu).
struct SpanningTerm {
  Path mu;
  Path nu;

  friend bool operator==(const SpanningTerm&, const SpanningTerm&) = default;
  friend auto operator<=>(const SpanningTerm& a, const SpanningTerm& b) {
    if (auto c = a.mu <=> b.mu; c != 0) return c;
    return a.nu <=> b.nu;
  }
};

SpanningTerm make_term(const Path& mu, const Path& nu);

/// Finite formal linear combination of spanning terms. Purely symbolic: the
/// span is closed under *, product and the gauge/dynamics actions via
/// (T1)-(T5), and states are evaluated term by term.
class ToeplitzElement {
public:
  using Coeff = std::complex<double>;

  ToeplitzElement() = default;
  static ToeplitzElement zero() { return {}; }
  static ToeplitzElement term(const Path& mu, const Path& nu, Coeff c = 1.0);
  static ToeplitzElement vertex(const KGraph& g, VertexIx v);  // t_v
  static ToeplitzElement isometry(const Path& mu);             // t_mu = t_mu t_{s(mu)}^*
  static ToeplitzElement one(const KGraph& g);                 // sum of the t_v

  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }
  const std::map<SpanningTerm, Coeff>& terms() const { return terms_; }
  Coeff coeff(const SpanningTerm& t) const;

  ToeplitzElement& add(const SpanningTerm& t, Coeff c);
  ToeplitzElement operator+(const ToeplitzElement& rhs) const;
  ToeplitzElement operator-(const ToeplitzElement& rhs) const;
  ToeplitzElement operator*(Coeff scalar) const;

  /// Max coefficient magnitude of the difference; the test-side norm.
  friend double distance(const ToeplitzElement& a, const ToeplitzElement& b);

private:
  std::map<SpanningTerm, Coeff> terms_;  // no exact-zero coefficients stored
};

/// (T5)-driven product: (t_mu t_nu^*)(t_sigma t_tau^*) =
///   sum over (eta, zeta) in Lambda^min(nu, sigma) of t_{mu.eta} t_{tau.zeta}^*.
ToeplitzElement multiply(const KGraph& g, const ToeplitzElement& a, const ToeplitzElement& b);

/// Involution: swaps mu and nu and conjugates coefficients.
ToeplitzElement adjoint(const ToeplitzElement& a);

/// Averages over the gauge action: keeps exactly the terms with d(mu) = d(nu).
ToeplitzElement gauge_expectation(const ToeplitzElement& a);

/// alpha^r_z: scales t_mu t_nu^* by e^{i z r.(d(mu) - d(nu))}; z = i beta is
/// the analytic continuation used by the KMS condition.
ToeplitzElement apply_dynamics(const ToeplitzElement& a, std::complex<double> z,
                               std::span<const double> r);

}  // namespace kgkms
