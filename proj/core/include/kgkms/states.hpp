#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "kgkms/measures.hpp"
#include "kgkms/toeplitz.hpp"

namespace kgkms {

/// Critical state data: normalized dynamics (beta = 1, K nonempty) plus the
/// common PF eigenvector. J may be empty here (the preferred dynamics); only
/// the measure-backed evaluations require a nontrivial partition.
struct CriticalState {
  const KGraph* graph = nullptr;
  SpectralData spectral;
  Dynamics dyn;

  double kappa(VertexIx v) const { return spectral.kappa[static_cast<size_t>(v)]; }
};

CriticalState make_critical_state(const KGraph& g, SpectralData spectral, Dynamics dyn);

/// phi(t_mu t_nu^*) = delta_{mu,nu} e^{-r.d(mu)} kappa_{s(mu)}, extended
/// linearly.
std::complex<double> phi_critical(const CriticalState& st, const ToeplitzElement& a);

/// Exact-mode value of phi on a single spanning term (rational-exact graphs).
XReal phi_critical_exact(const MeasureContext& ctx, const SpanningTerm& t);

struct SpatialValue {
  std::complex<double> value{0.0, 0.0};
  double tail_bound = 0.0;
};

/// Spatial route: apply the gauge expectation, decompose each surviving term
/// into cylinder meets and evaluate sum_m nu^m via truncated level sums.
SpatialValue phi_spatial(const MeasureContext& ctx, const ToeplitzElement& a, int l_max);

/// |phi(ab) - phi(b alpha_{i beta}(a))| for spanning terms a, b.
double kms_residual(const KGraph& g, const CriticalState& st, const SpanningTerm& a,
                    const SpanningTerm& b, double beta);

/// Same residual in exact arithmetic; zero iff the identity holds on the nose.
XReal kms_residual_exact(const MeasureContext& ctx, const SpanningTerm& a, const SpanningTerm& b);

struct CkDefect {
  double value = 0.0;        // phi(t_v - sum_e t_e t_e^*) via the algebra
  double closed_form = 0.0;  // kappa_v (1 - e^{-r_i} rho_i)
  bool in_k = false;
};

/// Cuntz-Krieger defect of the critical state at (v, i). Vanishes on K and is
/// bounded below by C_J kappa_v on J; needs a nontrivial partition.
CkDefect ck_defect(const MeasureContext& ctx, VertexIx v, int color);

struct YSeries {
  std::vector<double> y;
  std::vector<double> tail_bound;
};

/// y_v = sum_n e^{-beta r.n} |Lambda^n v| (paths with source v), truncated at
/// the box n <= cap with a geometric tail bound. Diverges for beta <= beta_c.
YSeries y_vector(const VertexMatrices& m, const SpectralData& s, std::span<const double> r,
                 double beta, int cap);

struct SupercriticalState {
  const KGraph* graph = nullptr;
  Dynamics dyn;  // normalized; the state lives at inverse temperature beta > 1
  double beta = 0.0;
  std::vector<double> eps;
  std::vector<double> y;
  Degree cap;        // truncation box for the path-space sums
  double tail_mass = 0.0;  // nu_beta mass outside the box (bound)
};

/// Builds the supercritical state for given eps (eps.y = 1 within tol); the
/// default eps is the uniform vector c * 1 with c = 1 / sum_v y_v.
SupercriticalState make_supercritical_state(const KGraph& g, const VertexMatrices& m,
                                            const SpectralData& s, const Dynamics& dyn,
                                            double beta, const Degree& cap,
                                            std::optional<std::vector<double>> eps = std::nullopt,
                                            double tol = 1e-9);

struct TailValue {
  std::complex<double> value{0.0, 0.0};
  double tail_bound = 0.0;
};

/// Finite-path-space vector-state sum: phi_eps(a) = sum over lambda up to the
/// cap of (pi(a) h_lambda | h_lambda) e^{-beta r.d(lambda)} eps_{s(lambda)}.
TailValue phi_supercritical(const SupercriticalState& st, const ToeplitzElement& a);

/// KMS residual for the supercritical state (truncation-limited).
TailValue kms_residual_supercritical(const SupercriticalState& st, const SpanningTerm& a,
                                     const SpanningTerm& b);

/// |K| = 1 off-diagonal decay: when sigma strictly K-extends tau the vector
/// states pin x into Z(tau lambda^N), giving the strictly decreasing bounds
/// u_N = e^{-r.(d(tau)_J, n + N(p-n))} kappa_{s(lambda)}. Errors with
/// KGraphIsCycle when the K-coordinate graph is a cycle (rho = 1).
std::vector<double> psi_offdiagonal_bound(const KGraph& g, const SpectralData& s,
                                          const Dynamics& dyn, const Path& sigma, const Path& tau,
                                          int n_max);

struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> upper_sequence;  // decreasing depth sweep
  bool exactly_determined = false;     // the tail-equality set was certified
};

/// Brackets nu^0({x : x = mu y and lambda y = mu y}) for |K| >= 2: the upper
/// bounds come from depth-truncated consistency, the lower bound from a
/// finite closure certificate that lambda y = mu y holds for every y.
Bracket notunique_lower_bound(const MeasureContext& ctx, const Path& lambda, const Path& mu,
                              int depth);

}  // namespace kgkms
