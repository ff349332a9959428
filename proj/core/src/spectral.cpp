#include "kgkms/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace kgkms {

IntMat IntMat::operator*(const IntMat& rhs) const {
  IntMat out(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      long long v = at(i, k);
      if (v == 0) continue;
      for (int j = 0; j < n; ++j) out.at(i, j) += v * rhs.at(k, j);
    }
  return out;
}

IntMat IntMat::identity(int dim) {
  IntMat out(dim);
  for (int i = 0; i < dim; ++i) out.at(i, i) = 1;
  return out;
}

std::vector<double> IntMat::apply(std::span<const double> x) const {
  std::vector<double> y(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) y[static_cast<size_t>(i)] += static_cast<double>(at(i, j)) * x[static_cast<size_t>(j)];
  return y;
}

IntMat VertexMatrices::power(const Degree& n) const {
  IntMat out = IntMat::identity(dim());
  for (int c = 1; c <= rank(); ++c)
    for (int t = 0; t < n.at_color(c); ++t) out = out * color(c);
  return out;
}

VertexMatrices vertex_matrices(const KGraph& g) {
  VertexMatrices m;
  m.by_color.assign(static_cast<size_t>(g.rank()), IntMat(g.vertex_count()));
  for (EdgeIx e = 0; e < g.edge_count(); ++e) {
    const DenseEdge& de = g.edge(e);
    m.by_color[static_cast<size_t>(de.color - 1)].at(de.range, de.source) += 1;
  }
  verify_commutation(m);
  return m;
}

void verify_commutation(const VertexMatrices& m) {
  for (int i = 1; i <= m.rank(); ++i)
    for (int j = i + 1; j <= m.rank(); ++j)
      if (!(m.color(i) * m.color(j) == m.color(j) * m.color(i)))
        fail(Errc::commutation_failure, "A_" + std::to_string(i) + " and A_" + std::to_string(j) +
                                            " do not commute; the factorization rules are "
                                            "inconsistent with the skeleton");
}

namespace {

std::vector<bool> reachable(const IntMat& a, int start, bool transpose) {
  std::vector<bool> seen(static_cast<size_t>(a.n), false);
  std::queue<int> q;
  q.push(start);
  seen[static_cast<size_t>(start)] = true;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w = 0; w < a.n; ++w) {
      long long entry = transpose ? a.at(w, v) : a.at(v, w);
      if (entry != 0 && !seen[static_cast<size_t>(w)]) {
        seen[static_cast<size_t>(w)] = true;
        q.push(w);
      }
    }
  }
  return seen;
}

}  // namespace

bool is_irreducible(const IntMat& a) {
  if (a.n == 0) return false;
  std::vector<bool> fwd = reachable(a, 0, false);
  std::vector<bool> bwd = reachable(a, 0, true);
  for (int v = 0; v < a.n; ++v)
    if (!fwd[static_cast<size_t>(v)] || !bwd[static_cast<size_t>(v)]) return false;
  return true;
}

PerronResult perron(const IntMat& a, double tol, int max_iter) {
  if (!is_irreducible(a)) fail(Errc::not_irreducible, "matrix is not irreducible");
  PerronResult out;

  if (a.n == 1) {
    out.rho = static_cast<double>(a.at(0, 0));
    out.kappa = {1.0};
    out.rho_int = a.at(0, 0);
    out.kappa_exact = std::vector<Rational>{Rational(1)};
    out.residual = 0.0;
    return out;
  }

  std::vector<double> x(static_cast<size_t>(a.n), 1.0 / a.n);
  double rho_shifted = 0.0;
  int it = 0;
  for (; it < max_iter; ++it) {
    std::vector<double> y = a.apply(x);
    for (int i = 0; i < a.n; ++i) y[static_cast<size_t>(i)] += x[static_cast<size_t>(i)];  // A + I
    double norm = 0.0;
    for (double v : y) norm += v;
    for (double& v : y) v /= norm;
    double dx = 0.0;
    for (int i = 0; i < a.n; ++i)
      dx = std::max(dx, std::abs(y[static_cast<size_t>(i)] - x[static_cast<size_t>(i)]));
    bool rho_settled = std::abs(norm - rho_shifted) <= tol * std::max(1.0, norm);
    x = std::move(y);
    rho_shifted = norm;
    if (rho_settled && dx <= tol) break;
  }
  if (it == max_iter) fail(Errc::no_convergence, "power iteration hit the iteration cap");

  out.rho = rho_shifted - 1.0;
  out.kappa = x;
  out.iterations = it + 1;

  // Integer spectral radius admits an exact eigenvector over the rationals.
  long long p = std::llround(out.rho);
  if (std::abs(out.rho - static_cast<double>(p)) < 1e-6) {
    if (auto exact = rational_perron_vector(a.a, a.n, p)) {
      out.rho_int = p;
      out.rho = static_cast<double>(p);
      out.kappa_exact = exact;
      for (int i = 0; i < a.n; ++i) out.kappa[static_cast<size_t>(i)] = (*exact)[static_cast<size_t>(i)].to_double();
    }
  }

  std::vector<double> ak = a.apply(out.kappa);
  for (int i = 0; i < a.n; ++i)
    out.residual = std::max(out.residual,
                            std::abs(ak[static_cast<size_t>(i)] - out.rho * out.kappa[static_cast<size_t>(i)]));
  if (out.residual > 1e-9 * std::max(1.0, out.rho))
    fail(Errc::no_convergence, "Perron residual did not reach tolerance");
  return out;
}

SpectralData common_pf(const KGraph& g, const VertexMatrices& m) {
  SpectralData s;
  s.rho.resize(static_cast<size_t>(m.rank()));
  s.rho_int.resize(static_cast<size_t>(m.rank()));
  s.irreducible.resize(static_cast<size_t>(m.rank()));

  std::vector<int> reducible_colors;
  for (int c = 1; c <= m.rank(); ++c) {
    bool irr = is_irreducible(m.color(c));
    s.irreducible[static_cast<size_t>(c - 1)] = irr;
    if (!irr) reducible_colors.push_back(c);
  }
  s.coordinatewise_irreducible = reducible_colors.empty();
  if (!s.coordinatewise_irreducible) {
    std::string detail = "reducible colors:";
    for (int c : reducible_colors) detail += " " + std::to_string(c);
    fail(Errc::not_coordinatewise_irreducible, detail);
  }

  for (int c = 1; c <= m.rank(); ++c) {
    PerronResult pr = perron(m.color(c));
    s.rho[static_cast<size_t>(c - 1)] = pr.rho;
    s.rho_int[static_cast<size_t>(c - 1)] = pr.rho_int;
    if (c == 1) {
      s.kappa = pr.kappa;
      s.kappa_exact = pr.kappa_exact;
    } else {
      // The unimodular PF eigenvectors of commuting irreducible matrices
      // coincide; verify instead of trusting.
      double dev = 0.0;
      for (size_t i = 0; i < s.kappa.size(); ++i)
        dev = std::max(dev, std::abs(s.kappa[i] - pr.kappa[i]));
      if (dev > 1e-9)
        fail(Errc::internal_check_failed,
             "per-color Perron-Frobenius eigenvectors disagree beyond tolerance");
    }
  }

  // When the exact eigenvector exists it must be an exact eigenvector of every
  // integer-radius color, otherwise exact mode would silently drift.
  if (s.kappa_exact) {
    for (int c = 1; c <= m.rank(); ++c) {
      if (!s.rho_int[static_cast<size_t>(c - 1)]) continue;
      const IntMat& a = m.color(c);
      Rational p(*s.rho_int[static_cast<size_t>(c - 1)]);
      for (int v = 0; v < a.n; ++v) {
        Rational acc(0);
        for (int w = 0; w < a.n; ++w)
          acc += Rational(a.at(v, w)) * (*s.kappa_exact)[static_cast<size_t>(w)];
        if (!(acc == p * (*s.kappa_exact)[static_cast<size_t>(v)]))
          fail(Errc::internal_check_failed, "exact eigenvector fails for color " + std::to_string(c));
      }
    }
  }
  (void)g;
  return s;
}

double critical_beta(const SpectralData& s, std::span<const double> r) {
  for (double ri : r)
    if (!(ri > 0.0)) fail(Errc::bad_params, "dynamics vector must be entrywise positive");
  double beta_c = 0.0;
  for (int i = 0; i < s.rank(); ++i)
    beta_c = std::max(beta_c, std::log(s.rho[static_cast<size_t>(i)]) / r[static_cast<size_t>(i)]);
  return beta_c;
}

Dynamics normalize_dynamics(const SpectralData& s, std::vector<double> r,
                            std::optional<std::vector<int>> declared_K, double tol_k) {
  double beta_c = critical_beta(s, r);
  if (beta_c <= 0.0)
    fail(Errc::degenerate_critical_beta,
         "all spectral radii are 1, the critical inverse temperature vanishes");

  Dynamics d;
  d.beta = 1.0;
  d.r.resize(r.size());
  for (size_t i = 0; i < r.size(); ++i) d.r[i] = beta_c * r[i];

  auto ln_rho = [&](int c) { return std::log(s.rho[static_cast<size_t>(c - 1)]); };
  auto matches = [&](int c) {
    return std::abs(d.r[static_cast<size_t>(c - 1)] - ln_rho(c)) <=
           tol_k * std::max(1.0, std::abs(ln_rho(c)));
  };

  if (declared_K) {
    std::vector<bool> in_k(r.size() + 1, false);
    for (int c : *declared_K) {
      if (c < 1 || c > static_cast<int>(r.size()))
        fail(Errc::bad_params, "declared K contains color " + std::to_string(c));
      in_k[static_cast<size_t>(c)] = true;
      if (!matches(c))
        fail(Errc::bad_params, "declared K contains color " + std::to_string(c) +
                                   " but r_i != ln rho(A_i) after normalization");
    }
    for (int c = 1; c <= static_cast<int>(r.size()); ++c) {
      if (in_k[static_cast<size_t>(c)]) continue;
      if (d.r[static_cast<size_t>(c - 1)] < ln_rho(c) - tol_k)
        fail(Errc::bad_params, "color " + std::to_string(c) +
                                   " declared outside K has r_i < ln rho(A_i)");
      if (matches(c))
        fail(Errc::bad_params, "color " + std::to_string(c) +
                                   " satisfies r_i = ln rho(A_i) but was declared outside K");
    }
    for (int c = 1; c <= static_cast<int>(r.size()); ++c)
      (in_k[static_cast<size_t>(c)] ? d.K : d.J).push_back(c);
  } else {
    for (int c = 1; c <= static_cast<int>(r.size()); ++c) (matches(c) ? d.K : d.J).push_back(c);
  }

  if (d.K.empty())
    fail(Errc::internal_check_failed, "normalization produced an empty K");
  // Pin the K coordinates to the exact condition r_i = ln rho(A_i); this keeps
  // the float route and the rational-exact route on the same weights.
  for (int c : d.K) d.r[static_cast<size_t>(c - 1)] = ln_rho(c);
  return d;
}

GateResult existence_gate(const VertexMatrices& m, const SpectralData& s,
                          std::span<const double> r, double beta, double tol) {
  // Standing hypothesis: every coordinate graph has a cycle, i.e. some power
  // of A_i up to the vertex count has a nonzero diagonal entry.
  for (int c = 1; c <= m.rank(); ++c) {
    IntMat p = IntMat::identity(m.dim());
    bool cycle = false;
    for (int n = 1; n <= m.dim() && !cycle; ++n) {
      p = p * m.color(c);
      for (int v = 0; v < m.dim(); ++v)
        if (p.at(v, v) != 0) {
          cycle = true;
          break;
        }
    }
    if (!cycle)
      fail(Errc::hypothesis_unchecked,
           "coordinate graph of color " + std::to_string(c) + " is acyclic");
  }

  GateResult out;
  bool below = false;
  bool all_strictly_above = true;
  for (int c = 1; c <= s.rank(); ++c) {
    double lhs = beta * r[static_cast<size_t>(c - 1)];
    double rhs = std::log(s.rho[static_cast<size_t>(c - 1)]);
    if (lhs < rhs - tol) below = true;
    if (std::abs(lhs - rhs) <= tol) {
      out.K.push_back(c);
      all_strictly_above = false;
    }
  }
  if (below) {
    out.verdict = GateVerdict::no_kms;
    out.K.clear();
  } else if (all_strictly_above) {
    out.verdict = GateVerdict::supercritical;
  } else {
    out.verdict = GateVerdict::critical;
  }
  return out;
}

std::optional<std::vector<long long>> find_rational_relation(std::span<const double> r,
                                                             long long height) {
  size_t k = r.size();
  for (size_t i = 0; i < k; ++i)
    for (size_t j = i + 1; j < k; ++j) {
      // Convergents p/q of r_i / r_j are its best rational approximations;
      // a true ratio shows up as a residual at rounding scale long before
      // the height bound, while irrational ratios stay ~ r_j / q away.
      double x = r[i] / r[j];
      long long h1 = 1, h2 = 0;  // numerators h_{-1}, h_{-2}
      long long k1 = 0, k2 = 1;  // denominators k_{-1}, k_{-2}
      double frac = x;
      for (int step = 0; step < 64; ++step) {
        double a_f = std::floor(frac);
        if (a_f > static_cast<double>(height)) break;
        long long a = static_cast<long long>(a_f);
        long long h = a * h1 + h2;
        long long q = a * k1 + k2;
        if (h > height || q > height) break;
        h2 = h1; k2 = k1; h1 = h; k1 = q;
        if (q > 0) {
          double resid = std::abs(static_cast<double>(q) * r[i] - static_cast<double>(h) * r[j]);
          if (resid <= 1e-10 * std::max(std::abs(r[i]), std::abs(r[j]))) {
            std::vector<long long> c(k, 0);
            c[i] = q;
            c[j] = -h;
            return c;
          }
        }
        double rem = frac - a_f;
        if (rem < 1e-18) break;
        frac = 1.0 / rem;
      }
    }
  return std::nullopt;
}

SubinvarianceResult subinvariance_check(const IntMat& a, std::span<const double> eps, double t,
                                        double tol) {
  if (!is_irreducible(a)) fail(Errc::not_irreducible, "matrix is not irreducible");
  bool nonzero = false;
  for (double v : eps) {
    if (v < 0.0) fail(Errc::bad_params, "eps must be non-negative");
    if (v > 0.0) nonzero = true;
  }
  if (!nonzero) fail(Errc::bad_params, "eps must be nonzero");

  SubinvarianceResult out;
  std::vector<double> ae = a.apply(eps);
  out.subinvariant = true;
  double max_gap = 0.0;
  for (size_t i = 0; i < eps.size(); ++i) {
    if (ae[i] > t * eps[i] + tol) out.subinvariant = false;
    max_gap = std::max(max_gap, std::abs(ae[i] - t * eps[i]));
  }
  if (!out.subinvariant) return out;

  out.equality = max_gap <= tol;
  out.eps_positive = std::all_of(eps.begin(), eps.end(), [](double v) { return v > 0.0; });
  double rho = perron(a).rho;
  out.t_dominates_rho = t >= rho - tol;
  return out;
}

}  // namespace kgkms
