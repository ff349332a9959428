#pragma once

#include <map>
#include <span>
#include <vector>

#include "kgkms/pathspace.hpp"
#include "kgkms/rational.hpp"
#include "kgkms/spectral.hpp"

namespace kgkms {

/// Shared inputs for every measure evaluation: normalized dynamics with a
/// nontrivial partition, the common PF data, and C_J = prod_J (1 - e^{-r_j}
/// rho_j). The context keeps a pointer to the graph; the caller owns it.
class MeasureContext {
public:
  MeasureContext(const KGraph& g, VertexMatrices mats, SpectralData spectral, Dynamics dyn);

  const KGraph& graph() const { return *graph_; }
  const VertexMatrices& matrices() const { return mats_; }
  const SpectralData& spectral() const { return spectral_; }
  const Dynamics& dynamics() const { return dyn_; }
  double c_j() const { return c_j_; }
  bool exact() const { return exact_; }

  double kappa(VertexIx v) const { return spectral_.kappa[static_cast<size_t>(v)]; }
  /// e^{-r.n} for the normalized dynamics.
  double weight(const Degree& n) const;

  // Exact-mode companions; only meaningful when exact() is true.
  XReal kappa_exact(VertexIx v) const;
  XReal weight_exact(const Degree& n) const;
  XReal c_j_exact() const { return c_j_exact_; }

private:
  const KGraph* graph_;
  VertexMatrices mats_;
  SpectralData spectral_;
  Dynamics dyn_;
  double c_j_ = 1.0;
  bool exact_ = false;
  XReal c_j_exact_;
};

/// nu^m(Z(lambda) n Lambda^{m,infty_K}) = e^{-r.d(lambda)} C_J kappa_{s(lambda)}
/// (equivalently nu^{m,n}({lambda}) for lambda in Lambda^{m,n}).
double nu_cylinder(const MeasureContext& ctx, const Degree& m, const Path& lambda);
XReal nu_cylinder_exact(const MeasureContext& ctx, const Degree& m, const Path& lambda);

struct ConsistencyReport {
  double max_abs_discrepancy = 0.0;
  int levels_checked = 0;
  bool exact_zero = false;  // exact-mode telescopes cancelled identically
};

/// Pushes nu^{m,p} through r_{n,p} and compares with nu^{m,n} on every
/// lambda in Lambda^{m,n}.
ConsistencyReport consistency_check(const MeasureContext& ctx, const Degree& m, const Degree& n,
                                    const Degree& p);

struct LevelSumResult {
  double partial = 0.0;     // sum over m <= l <= L of nu^l(Z(lambda) n ...)
  double closed = 0.0;      // e^{-r.d(lambda)} kappa_{s(lambda)}
  double tail_bound = 0.0;  // exact geometric remainder of the J-product
};

/// Sum of nu^l(Z(lambda) n Lambda^{l,infty_K}) over the levels
/// l >= d(lambda)_J, truncated at l <= l_max componentwise on J.
LevelSumResult level_sum(const MeasureContext& ctx, const Path& lambda, int l_max);

/// mu(Z(lambda) n boundary) = e^{-r.d(lambda)} kappa_{s(lambda)}.
double mu_cylinder(const MeasureContext& ctx, const Path& lambda);
XReal mu_cylinder_exact(const MeasureContext& ctx, const Path& lambda);

/// Total nu^m mass of Lambda^{m,infty_K}: e^{-r.(m,0)} rho^{(m,0)} C_J.
double level_total_mass(const MeasureContext& ctx, const Degree& m);

struct DiscrepancyReport {
  double max_abs_discrepancy = 0.0;
  int checked = 0;
};

/// mu(Z(lambda)) = e^{-r.d(lambda)} mu(Z(s(lambda))) for all lambda up to the
/// cap; the Radon-Nikodym transform under the cocycle r.n.
DiscrepancyReport quasi_invariance_check(const MeasureContext& ctx, const Degree& cap);

struct SupportEigenReport {
  bool pass = false;
  double max_k_residual = 0.0;  // ||A_l kappa - e^{r_l} kappa||_inf over l in K
  bool j_strict = false;        // A_j kappa < e^{r_j} kappa entrywise for j in J
};

SupportEigenReport support_eigen_check(const MeasureContext& ctx, double tol = 1e-9);

struct AtomicMeasure {
  std::vector<std::pair<Path, double>> table;  // nu_beta({lambda}) up to the cap
  double total_mass = 0.0;
  double tail_bound = 0.0;
};

/// Supercritical atomic measure nu_beta({lambda}) = e^{-beta r.d(lambda)}
/// eps_{s(lambda)}; `y` is the subinvariance series vector used to check the
/// normalization eps.y = 1.
AtomicMeasure supercritical_measure(const MeasureContext& ctx, double beta,
                                    std::span<const double> eps, std::span<const double> y,
                                    const Degree& cap, double tol = 1e-9);

}  // namespace kgkms
