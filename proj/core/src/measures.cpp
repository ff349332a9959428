#include "kgkms/measures.hpp"

#include <algorithm>
#include <cmath>

namespace kgkms {

MeasureContext::MeasureContext(const KGraph& g, VertexMatrices mats, SpectralData spectral,
                               Dynamics dyn)
    : graph_(&g), mats_(std::move(mats)), spectral_(std::move(spectral)), dyn_(std::move(dyn)) {
  if (dyn_.beta != 1.0)
    fail(Errc::precondition_violated, "measure context needs the normalized dynamics (beta = 1)");
  if (dyn_.K.empty()) fail(Errc::precondition_violated, "K must be nonempty");
  if (dyn_.J.empty())
    fail(Errc::precondition_violated,
         "J is empty (preferred dynamics); the semi-infinite measures need a nontrivial "
         "partition, use the infinite-path-space treatment instead");

  for (int i : dyn_.K) {
    double q = std::exp(-dyn_.r[static_cast<size_t>(i - 1)]) * spectral_.rho[static_cast<size_t>(i - 1)];
    if (std::abs(q - 1.0) > 1e-9)
      fail(Errc::precondition_violated,
           "color " + std::to_string(i) + " in K does not satisfy e^{-r_i} rho_i = 1");
  }
  c_j_ = 1.0;
  for (int j : dyn_.J) {
    double t = std::exp(-dyn_.r[static_cast<size_t>(j - 1)]) * spectral_.rho[static_cast<size_t>(j - 1)];
    if (t >= 1.0 - 1e-12)
      fail(Errc::precondition_violated,
           "color " + std::to_string(j) + " in J does not satisfy e^{-r_j} rho_j < 1");
    c_j_ *= 1.0 - t;
  }

  exact_ = spectral_.kappa_exact.has_value() &&
           std::all_of(spectral_.rho_int.begin(), spectral_.rho_int.end(),
                       [](const std::optional<long long>& p) { return p.has_value(); });
  if (exact_) {
    c_j_exact_ = XReal(Rational(1));
    for (int j : dyn_.J) {
      XReal t = XReal::monomial(Rational(*spectral_.rho_int[static_cast<size_t>(j - 1)]),
                                -dyn_.r[static_cast<size_t>(j - 1)]);
      c_j_exact_ *= XReal(Rational(1)) - t;
    }
  }
}

double MeasureContext::weight(const Degree& n) const { return std::exp(-dyn_.dot(n)); }

XReal MeasureContext::kappa_exact(VertexIx v) const {
  if (!exact_) fail(Errc::precondition_violated, "exact mode is unavailable for this graph");
  return XReal((*spectral_.kappa_exact)[static_cast<size_t>(v)]);
}

XReal MeasureContext::weight_exact(const Degree& n) const {
  if (!exact_) fail(Errc::precondition_violated, "exact mode is unavailable for this graph");
  Rational q(1);
  for (int i : dyn_.K)
    q *= Rational::pow(Rational(1, *spectral_.rho_int[static_cast<size_t>(i - 1)]), n.at_color(i));
  double x = 0.0;
  for (int j : dyn_.J) x -= dyn_.r[static_cast<size_t>(j - 1)] * n.at_color(j);
  return XReal::monomial(q, x);
}

double nu_cylinder(const MeasureContext& ctx, const Degree& m, const Path& lambda) {
  if (!(lambda.degree().restricted_to(ctx.dynamics().J) == m))
    fail(Errc::degree_mismatch, "nu^m needs d(lambda)_J = m");
  return ctx.weight(lambda.degree()) * ctx.c_j() * ctx.kappa(lambda.source());
}

XReal nu_cylinder_exact(const MeasureContext& ctx, const Degree& m, const Path& lambda) {
  if (!(lambda.degree().restricted_to(ctx.dynamics().J) == m))
    fail(Errc::degree_mismatch, "nu^m needs d(lambda)_J = m");
  return ctx.weight_exact(lambda.degree()) * ctx.c_j_exact() * ctx.kappa_exact(lambda.source());
}

ConsistencyReport consistency_check(const MeasureContext& ctx, const Degree& m, const Degree& n,
                                    const Degree& p) {
  const KGraph& g = ctx.graph();
  const Dynamics& dyn = ctx.dynamics();
  if (!n.leq(p)) fail(Errc::bad_params, "consistency_check needs n <= p");
  ConsistencyReport rep;
  rep.exact_zero = ctx.exact();
  for (const Path& lambda : level_paths(g, dyn, m, n)) {
    double pushed = 0.0;
    for (const Path& ext : fiber(g, dyn, lambda, p)) pushed += nu_cylinder(ctx, m, ext);
    rep.max_abs_discrepancy =
        std::max(rep.max_abs_discrepancy, std::abs(pushed - nu_cylinder(ctx, m, lambda)));
    if (ctx.exact()) {
      XReal pushed_x;
      for (const Path& ext : fiber(g, dyn, lambda, p)) pushed_x += nu_cylinder_exact(ctx, m, ext);
      if (!(pushed_x - nu_cylinder_exact(ctx, m, lambda)).is_zero()) rep.exact_zero = false;
    }
    ++rep.levels_checked;
  }
  return rep;
}

LevelSumResult level_sum(const MeasureContext& ctx, const Path& lambda, int l_max) {
  const Dynamics& dyn = ctx.dynamics();
  LevelSumResult out;
  out.closed = ctx.weight(lambda.degree()) * ctx.kappa(lambda.source());

  // partial = sum over the box  d(lambda)_J <= l <= l_max  of
  //   e^{-r.(l, n)} C_J rho^{(l - m, 0)} kappa_{s(lambda)}
  // which factors into per-color geometric partial sums.
  double geom = 1.0;
  double missing = 0.0;  // 1 - prod_j (1 - t_j^{c_j + 1})
  double complete = 1.0;
  for (int j : dyn.J) {
    double t = std::exp(-dyn.r[static_cast<size_t>(j - 1)]) * ctx.spectral().rho[static_cast<size_t>(j - 1)];
    int c = l_max - lambda.degree().at_color(j);
    double head = c < 0 ? 0.0 : (1.0 - std::pow(t, c + 1)) / (1.0 - t);
    geom *= head;
    complete *= 1.0 - (c < 0 ? 1.0 : std::pow(t, c + 1));
  }
  missing = 1.0 - complete;
  out.partial = ctx.weight(lambda.degree()) * ctx.c_j() * ctx.kappa(lambda.source()) * geom;
  out.tail_bound = out.closed * missing;

  double gap = out.closed - out.partial;
  if (gap < -1e-9 || gap > out.tail_bound + 1e-9)
    fail(Errc::internal_check_failed, "level_sum remainder left its geometric bracket");
  return out;
}

double mu_cylinder(const MeasureContext& ctx, const Path& lambda) {
  return ctx.weight(lambda.degree()) * ctx.kappa(lambda.source());
}

XReal mu_cylinder_exact(const MeasureContext& ctx, const Path& lambda) {
  return ctx.weight_exact(lambda.degree()) * ctx.kappa_exact(lambda.source());
}

double level_total_mass(const MeasureContext& ctx, const Degree& m) {
  if (!m.supported_on(ctx.dynamics().J)) fail(Errc::bad_params, "level must be supported on J");
  double mass = ctx.c_j();
  for (int j : ctx.dynamics().J) {
    double t = std::exp(-ctx.dynamics().r[static_cast<size_t>(j - 1)]) *
               ctx.spectral().rho[static_cast<size_t>(j - 1)];
    mass *= std::pow(t, m.at_color(j));
  }
  return mass;
}

DiscrepancyReport quasi_invariance_check(const MeasureContext& ctx, const Degree& cap) {
  const KGraph& g = ctx.graph();
  DiscrepancyReport rep;
  for_each_degree_leq(cap, [&](const Degree& n) {
    for (const Path& lambda : g.paths(n)) {
      double lhs = mu_cylinder(ctx, lambda);
      // Accumulate the cocycle one bisection at a time, the way the measure
      // transforms along a path of edges.
      double factor = 1.0;
      for (EdgeIx e : lambda.word())
        factor *= std::exp(-ctx.dynamics().r[static_cast<size_t>(g.edge(e).color - 1)]);
      double rhs = factor * mu_cylinder(ctx, g.vertex_path(lambda.source()));
      rep.max_abs_discrepancy = std::max(rep.max_abs_discrepancy, std::abs(lhs - rhs));
      ++rep.checked;
    }
  });
  return rep;
}

SupportEigenReport support_eigen_check(const MeasureContext& ctx, double tol) {
  const Dynamics& dyn = ctx.dynamics();
  SupportEigenReport rep;
  rep.j_strict = true;
  const std::vector<double>& kappa = ctx.spectral().kappa;
  for (int l : dyn.K) {
    std::vector<double> ak = ctx.matrices().color(l).apply(kappa);
    double scale = std::exp(dyn.r[static_cast<size_t>(l - 1)]);
    for (size_t v = 0; v < kappa.size(); ++v)
      rep.max_k_residual = std::max(rep.max_k_residual, std::abs(ak[v] - scale * kappa[v]));
  }
  for (int j : dyn.J) {
    std::vector<double> ak = ctx.matrices().color(j).apply(kappa);
    double scale = std::exp(dyn.r[static_cast<size_t>(j - 1)]);
    for (size_t v = 0; v < kappa.size(); ++v)
      if (!(ak[v] < scale * kappa[v])) rep.j_strict = false;
  }
  rep.pass = rep.max_k_residual <= tol && rep.j_strict;
  return rep;
}

AtomicMeasure supercritical_measure(const MeasureContext& ctx, double beta,
                                    std::span<const double> eps, std::span<const double> y,
                                    const Degree& cap, double tol) {
  const KGraph& g = ctx.graph();
  const Dynamics& dyn = ctx.dynamics();
  if (!(beta > 1.0)) fail(Errc::precondition_violated, "supercritical measure needs beta > 1");
  if (eps.size() != static_cast<size_t>(g.vertex_count()) || y.size() != eps.size())
    fail(Errc::bad_params, "eps and y must be indexed by the vertex set");
  double constraint = 0.0;
  double max_eps = 0.0;
  for (size_t v = 0; v < eps.size(); ++v) {
    if (eps[v] < 0.0) fail(Errc::constraint_violated, "eps must be entrywise non-negative");
    constraint += eps[v] * y[v];
    max_eps = std::max(max_eps, eps[v]);
  }
  if (std::abs(constraint - 1.0) > tol)
    fail(Errc::constraint_violated,
         "eps.y = " + std::to_string(constraint) + " is not 1 within tolerance");

  AtomicMeasure out;
  for_each_degree_leq(cap, [&](const Degree& n) {
    double w = std::exp(-beta * dyn.dot(n));
    for (const Path& lambda : g.paths(n)) {
      double v = w * eps[static_cast<size_t>(lambda.source())];
      out.table.emplace_back(lambda, v);
      out.total_mass += v;
    }
  });

  // Pathwise the tail is dominated by (max eps / min kappa) rho^n, which sums
  // to a product of geometric tails.
  double min_kappa = *std::min_element(ctx.spectral().kappa.begin(), ctx.spectral().kappa.end());
  double c = max_eps / min_kappa;
  double full = 1.0;
  double boxed = 1.0;
  for (int i = 1; i <= dyn.rank(); ++i) {
    double t = std::exp(-beta * dyn.r[static_cast<size_t>(i - 1)]) * ctx.spectral().rho[static_cast<size_t>(i - 1)];
    if (t >= 1.0 - 1e-12)
      fail(Errc::precondition_violated,
           "beta is not strictly supercritical for color " + std::to_string(i));
    full /= 1.0 - t;
    boxed *= (1.0 - std::pow(t, cap.at_color(i) + 1)) / (1.0 - t);
  }
  out.tail_bound = c * (full - boxed);
  return out;
}

}  // namespace kgkms
