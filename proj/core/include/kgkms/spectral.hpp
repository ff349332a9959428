#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kgkms/kgraph.hpp"
#include "kgkms/rational.hpp"

namespace kgkms {

/// Small dense non-negative integer matrix, row-major, indexed by Lambda^0.
struct IntMat {
  int n = 0;
  std::vector<long long> a;

  IntMat() = default;
  explicit IntMat(int dim) : n(dim), a(static_cast<size_t>(dim) * dim, 0) {}

  long long& at(int r, int c) { return a[static_cast<size_t>(r) * n + c]; }
  long long at(int r, int c) const { return a[static_cast<size_t>(r) * n + c]; }

  IntMat operator*(const IntMat& rhs) const;
  static IntMat identity(int dim);
  std::vector<double> apply(std::span<const double> x) const;
  friend bool operator==(const IntMat&, const IntMat&) = default;
};

struct VertexMatrices {
  std::vector<IntMat> by_color;  // index 0 = color 1

  const IntMat& color(int c) const { return by_color[static_cast<size_t>(c - 1)]; }
  int rank() const { return static_cast<int>(by_color.size()); }
  int dim() const { return by_color.empty() ? 0 : by_color.front().n; }
  /// A^n = prod_i A_i^{n_i}; the factors commute so the order is immaterial.
  IntMat power(const Degree& n) const;
};

/// Counts A_i(v,w) = |v Lambda^{e_i} w| straight off the skeleton and verifies
/// pairwise commutation in integer arithmetic.
VertexMatrices vertex_matrices(const KGraph& g);

/// Standalone commutation check (CommutationFailure on violation).
void verify_commutation(const VertexMatrices& m);

/// True iff the digraph of nonzero entries is strongly connected.
bool is_irreducible(const IntMat& a);

struct PerronResult {
  double rho = 0.0;
  std::vector<double> kappa;        // positive, 1-norm one
  double residual = 0.0;            // max-norm of A kappa - rho kappa
  int iterations = 0;
  std::optional<long long> rho_int;                    // integral spectral radius, when exact
  std::optional<std::vector<Rational>> kappa_exact;    // exact eigenvector, when available
};

/// Power iteration on A + I (the shift keeps the eigenvector and removes
/// period effects), with an exact shortcut for 1x1 and for integer rho.
PerronResult perron(const IntMat& a, double tol = 1e-12, int max_iter = 100000);

struct SpectralData {
  std::vector<double> rho;    // rho(Lambda)
  std::vector<double> kappa;  // common Perron-Frobenius eigenvector, 1-norm one
  std::vector<bool> irreducible;
  bool coordinatewise_irreducible = false;
  std::vector<std::optional<long long>> rho_int;
  std::optional<std::vector<Rational>> kappa_exact;

  int rank() const { return static_cast<int>(rho.size()); }
};

SpectralData common_pf(const KGraph& g, const VertexMatrices& m);

double critical_beta(const SpectralData& s, std::span<const double> r);

struct Dynamics {
  std::vector<double> r;  // normalized so that critical_beta == 1
  double beta = 1.0;
  std::vector<int> K;  // colors with r_i = ln rho(A_i)
  std::vector<int> J;  // complement

  int rank() const { return static_cast<int>(r.size()); }
  double dot(const Degree& n) const {
    double s = 0.0;
    for (int c = 1; c <= rank(); ++c) s += r[static_cast<size_t>(c - 1)] * n.at_color(c);
    return s;
  }
};

/// Rescales r so the critical inverse temperature is 1 and splits the colors
/// into (J, K). A declared K wins over float detection but is validated.
Dynamics normalize_dynamics(const SpectralData& s, std::vector<double> r,
                            std::optional<std::vector<int>> declared_K = std::nullopt,
                            double tol_k = 1e-9);

enum class GateVerdict { no_kms, supercritical, critical };

struct GateResult {
  GateVerdict verdict = GateVerdict::no_kms;
  std::vector<int> K;  // meaningful for the critical verdict
};

/// Existence gate at inverse temperature beta for the (unnormalized) dynamics
/// r. Requires every coordinate graph to have a cycle.
GateResult existence_gate(const VertexMatrices& m, const SpectralData& s,
                          std::span<const double> r, double beta, double tol = 1e-9);

struct SubinvarianceResult {
  bool subinvariant = false;
  bool equality = false;      // A eps = t eps within tol
  bool eps_positive = false;  // entrywise, as the subinvariance theorem asserts
  bool t_dominates_rho = false;
};

SubinvarianceResult subinvariance_check(const IntMat& a, std::span<const double> eps, double t,
                                        double tol = 1e-9);

/// Searches for a nonzero integer vector c with c.r = 0 and |c_i| <= height,
/// via continued-fraction convergents of the pairwise ratios. Returns the
/// relation when one is found; uniqueness of the critical state is only
/// asserted when none exists up to the height bound.
std::optional<std::vector<long long>> find_rational_relation(std::span<const double> r,
                                                             long long height = 1000000);

}  // namespace kgkms
