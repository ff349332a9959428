#include "kgkms/states.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace kgkms {

CriticalState make_critical_state(const KGraph& g, SpectralData spectral, Dynamics dyn) {
  if (dyn.beta != 1.0)
    fail(Errc::precondition_violated, "critical state needs normalized dynamics (beta = 1)");
  if (dyn.K.empty()) fail(Errc::precondition_violated, "critical state needs a nonempty K");
  CriticalState st;
  st.graph = &g;
  st.spectral = std::move(spectral);
  st.dyn = std::move(dyn);
  return st;
}

std::complex<double> phi_critical(const CriticalState& st, const ToeplitzElement& a) {
  std::complex<double> out = 0.0;
  for (const auto& [t, c] : a.terms()) {
    if (!(t.mu == t.nu)) continue;
    out += c * std::exp(-st.dyn.dot(t.mu.degree())) * st.kappa(t.mu.source());
  }
  return out;
}

XReal phi_critical_exact(const MeasureContext& ctx, const SpanningTerm& t) {
  if (!(t.mu == t.nu)) return XReal();
  return ctx.weight_exact(t.mu.degree()) * ctx.kappa_exact(t.mu.source());
}

SpatialValue phi_spatial(const MeasureContext& ctx, const ToeplitzElement& a, int l_max) {
  const KGraph& g = ctx.graph();
  SpatialValue out;
  ToeplitzElement averaged = gauge_expectation(a);
  for (const auto& [t, c] : averaged.terms()) {
    // d(mu) = d(nu), so the meet is {mu} when the paths agree and empty
    // otherwise; each piece contributes sum_{m >= d(pi)_J} nu^m(Z(pi)).
    MeetResult meet = cylinder_meet(g, t.mu, t.nu);
    for (const Path& pi : meet.cylinders) {
      LevelSumResult ls = level_sum(ctx, pi, l_max);
      out.value += c * ls.partial;
      out.tail_bound += std::abs(c) * ls.tail_bound;
    }
  }
  return out;
}

double kms_residual(const KGraph& g, const CriticalState& st, const SpanningTerm& a,
                    const SpanningTerm& b, double beta) {
  ToeplitzElement ea = ToeplitzElement::term(a.mu, a.nu);
  ToeplitzElement eb = ToeplitzElement::term(b.mu, b.nu);
  std::complex<double> lhs = phi_critical(st, multiply(g, ea, eb));
  ToeplitzElement twisted = apply_dynamics(ea, std::complex<double>(0.0, beta), st.dyn.r);
  std::complex<double> rhs = phi_critical(st, multiply(g, eb, twisted));
  return std::abs(lhs - rhs);
}

namespace {

/// Exact monomial e^{-r.(d1 - d2)} for the normalized dynamics.
XReal exact_weight_ratio(const MeasureContext& ctx, const Degree& d1, const Degree& d2) {
  const Dynamics& dyn = ctx.dynamics();
  Rational q(1);
  for (int i : dyn.K) {
    long long rho = *ctx.spectral().rho_int[static_cast<size_t>(i - 1)];
    q *= Rational::pow(Rational(1, rho), d1.at_color(i) - d2.at_color(i));
  }
  double x = 0.0;
  for (int j : dyn.J)
    x -= dyn.r[static_cast<size_t>(j - 1)] * (d1.at_color(j) - d2.at_color(j));
  return XReal::monomial(q, x);
}

XReal phi_exact_of_product(const MeasureContext& ctx, const SpanningTerm& a,
                           const SpanningTerm& b) {
  const KGraph& g = ctx.graph();
  XReal out;
  for (const auto& [eta, zeta] : g.lambda_min(a.nu, b.mu)) {
    Path mu = g.compose(a.mu, eta);
    Path nu = g.compose(b.nu, zeta);
    if (mu == nu) out += ctx.weight_exact(mu.degree()) * ctx.kappa_exact(mu.source());
  }
  return out;
}

}  // namespace

XReal kms_residual_exact(const MeasureContext& ctx, const SpanningTerm& a, const SpanningTerm& b) {
  XReal lhs = phi_exact_of_product(ctx, a, b);
  XReal rhs = phi_exact_of_product(ctx, b, a) *
              exact_weight_ratio(ctx, a.mu.degree(), a.nu.degree());
  return lhs - rhs;
}

CkDefect ck_defect(const MeasureContext& ctx, VertexIx v, int color) {
  const KGraph& g = ctx.graph();
  const Dynamics& dyn = ctx.dynamics();

  ToeplitzElement e = ToeplitzElement::vertex(g, v);
  for (EdgeIx edge : g.out_edges(v, color)) {
    Path p = g.edge_path(edge);
    e = e - ToeplitzElement::term(p, p);
  }
  CriticalState st;
  st.graph = &g;
  st.spectral = ctx.spectral();
  st.dyn = dyn;

  CkDefect out;
  out.value = phi_critical(st, e).real();
  double rho = ctx.spectral().rho[static_cast<size_t>(color - 1)];
  out.closed_form =
      ctx.kappa(v) * (1.0 - std::exp(-dyn.r[static_cast<size_t>(color - 1)]) * rho);
  out.in_k = std::find(dyn.K.begin(), dyn.K.end(), color) != dyn.K.end();
  return out;
}

YSeries y_vector(const VertexMatrices& m, const SpectralData& s, std::span<const double> r,
                 double beta, int cap) {
  int k = m.rank();
  int dim = m.dim();
  for (int i = 1; i <= k; ++i) {
    double lhs = beta * r[static_cast<size_t>(i - 1)];
    double rhs = std::log(s.rho[static_cast<size_t>(i - 1)]);
    if (lhs <= rhs + 1e-12)
      fail(Errc::diverges, "the series for y diverges: beta r_i <= ln rho(A_i) for color " +
                               std::to_string(i));
  }

  YSeries out;
  out.y.assign(static_cast<size_t>(dim), 0.0);

  // Walk the box n <= cap * 1 keeping the running product A^n; the weight
  // counts paths with source v, i.e. the column sums of A^n.
  auto rec = [&](auto&& self, int color, const IntMat& acc, double w) -> void {
    if (color > k) {
      for (int v = 0; v < dim; ++v) {
        double col = 0.0;
        for (int u = 0; u < dim; ++u) col += static_cast<double>(acc.at(u, v));
        out.y[static_cast<size_t>(v)] += w * col;
      }
      return;
    }
    IntMat cur = acc;
    double wc = w;
    double step = std::exp(-beta * r[static_cast<size_t>(color - 1)]);
    for (int t = 0; t <= cap; ++t) {
      if (t > 0) {
        cur = cur * m.color(color);
        wc *= step;
      }
      self(self, color + 1, cur, wc);
    }
  };
  rec(rec, 1, IntMat::identity(dim), 1.0);

  // Columns are bounded by rho^n / min kappa, so the tail is a product of
  // geometric remainders.
  double min_kappa = *std::min_element(s.kappa.begin(), s.kappa.end());
  double full = 1.0;
  double boxed = 1.0;
  for (int i = 1; i <= k; ++i) {
    double t = std::exp(-beta * r[static_cast<size_t>(i - 1)]) * s.rho[static_cast<size_t>(i - 1)];
    full /= 1.0 - t;
    boxed *= (1.0 - std::pow(t, cap + 1)) / (1.0 - t);
  }
  out.tail_bound.assign(static_cast<size_t>(dim), (full - boxed) / min_kappa);
  return out;
}

SupercriticalState make_supercritical_state(const KGraph& g, const VertexMatrices& m,
                                            const SpectralData& s, const Dynamics& dyn,
                                            double beta, const Degree& cap,
                                            std::optional<std::vector<double>> eps, double tol) {
  if (!(beta > 1.0))
    fail(Errc::precondition_violated, "supercritical state needs beta > beta_c = 1");

  // A cap large enough that the y tail is negligible against tol.
  int ycap = 32;
  YSeries ys = y_vector(m, s, dyn.r, beta, ycap);
  while (ys.tail_bound.front() > 1e-13 && ycap < 4096) {
    ycap *= 2;
    ys = y_vector(m, s, dyn.r, beta, ycap);
  }

  SupercriticalState st;
  st.graph = &g;
  st.dyn = dyn;
  st.beta = beta;
  st.y = ys.y;
  st.cap = cap;
  if (eps) {
    st.eps = std::move(*eps);
  } else {
    double total = 0.0;
    for (double yv : ys.y) total += yv;
    st.eps.assign(static_cast<size_t>(g.vertex_count()), 1.0 / total);
  }
  double constraint = 0.0;
  for (size_t v = 0; v < st.eps.size(); ++v) {
    if (st.eps[v] < 0.0) fail(Errc::constraint_violated, "eps must be entrywise non-negative");
    constraint += st.eps[v] * st.y[v];
  }
  if (std::abs(constraint - 1.0) > tol)
    fail(Errc::constraint_violated,
         "eps.y = " + std::to_string(constraint) + " is not 1 within tolerance");

  // Mass of nu_beta inside the box, by the same running-product walk; the
  // total is eps.y = 1, so the complement bounds every truncated integral.
  double boxed_mass = 0.0;
  int k = m.rank();
  int dim = m.dim();
  auto rec = [&](auto&& self, int color, const IntMat& acc, double w) -> void {
    if (color > k) {
      for (int v = 0; v < dim; ++v) {
        double col = 0.0;
        for (int u = 0; u < dim; ++u) col += static_cast<double>(acc.at(u, v));
        boxed_mass += w * col * st.eps[static_cast<size_t>(v)];
      }
      return;
    }
    IntMat cur = acc;
    double wc = w;
    double step = std::exp(-beta * st.dyn.r[static_cast<size_t>(color - 1)]);
    for (int t = 0; t <= cap.at_color(color); ++t) {
      if (t > 0) {
        cur = cur * m.color(color);
        wc *= step;
      }
      self(self, color + 1, cur, wc);
    }
  };
  rec(rec, 1, IntMat::identity(dim), 1.0);
  st.tail_mass = std::max(0.0, 1.0 - boxed_mass);
  return st;
}

TailValue phi_supercritical(const SupercriticalState& st, const ToeplitzElement& a) {
  const KGraph& g = *st.graph;
  TailValue out;
  for (const auto& [t, c] : a.terms()) {
    // lambda = nu.eta and mu.eta = lambda force d(mu) = d(nu); the matrix
    // coefficient vanishes for every lambda otherwise, truncated or not.
    if (!(t.mu.degree() == t.nu.degree())) continue;
    out.tail_bound += std::abs(c) * st.tail_mass;
    if (!t.nu.degree().leq(st.cap)) continue;
    // lambda ranges over Z(nu) up to the cap; everything else has matrix
    // coefficient zero.
    double acc = 0.0;
    for_each_degree_leq(st.cap - t.nu.degree(), [&](const Degree& q) {
      for (const Path& eta : g.paths_at(t.nu.source(), q)) {
        Path lambda = g.compose(t.nu, eta);
        Path back = g.segment(lambda, t.nu.degree(), lambda.degree());
        if (t.mu.source() != back.range()) continue;
        if (!(g.compose(t.mu, back) == lambda)) continue;
        acc += std::exp(-st.beta * st.dyn.dot(lambda.degree())) *
               st.eps[static_cast<size_t>(lambda.source())];
      }
    });
    out.value += c * acc;
  }
  return out;
}

TailValue kms_residual_supercritical(const SupercriticalState& st, const SpanningTerm& a,
                                     const SpanningTerm& b) {
  const KGraph& g = *st.graph;
  ToeplitzElement ea = ToeplitzElement::term(a.mu, a.nu);
  ToeplitzElement eb = ToeplitzElement::term(b.mu, b.nu);
  TailValue lhs = phi_supercritical(st, multiply(g, ea, eb));
  ToeplitzElement twisted = apply_dynamics(ea, std::complex<double>(0.0, st.beta), st.dyn.r);
  TailValue rhs = phi_supercritical(st, multiply(g, eb, twisted));
  TailValue out;
  out.value = std::abs(lhs.value - rhs.value);
  out.tail_bound = lhs.tail_bound + rhs.tail_bound;
  return out;
}

std::vector<double> psi_offdiagonal_bound(const KGraph& g, const SpectralData& s,
                                          const Dynamics& dyn, const Path& sigma, const Path& tau,
                                          int n_max) {
  if (dyn.K.size() != 1)
    fail(Errc::precondition_violated, "the off-diagonal decay argument needs |K| = 1");
  int i = dyn.K.front();
  if (s.rho[static_cast<size_t>(i - 1)] <= 1.0 + 1e-12)
    fail(Errc::kgraph_is_cycle,
         "the K-coordinate graph is a cycle (rho = 1); the decay ratio degenerates");
  if (!(sigma.degree().restricted_to(dyn.J) == tau.degree().restricted_to(dyn.J)))
    fail(Errc::precondition_violated, "need d(sigma)_J = d(tau)_J");
  if (sigma == tau) fail(Errc::precondition_violated, "need sigma != tau");

  const Path* s_long = &sigma;
  const Path* s_short = &tau;
  int p = sigma.degree().at_color(i);
  int n = tau.degree().at_color(i);
  if (p == n) return {0.0};  // equal degrees, distinct paths: disjoint cylinders
  if (p < n) {
    std::swap(s_long, s_short);
    std::swap(p, n);
  }
  if (!(g.segment(*s_long, Degree(g.rank()), s_short->degree()) == *s_short))
    return {0.0};  // not a K-prefix extension: the cylinders are disjoint

  Path lambda = g.segment(*s_long, s_short->degree(), s_long->degree());
  std::vector<double> u;
  for (int step = 1; step <= n_max; ++step) {
    Degree d = s_short->degree().restricted_to(dyn.J);
    d.set_color(i, n + step * (p - n));
    u.push_back(std::exp(-dyn.dot(d)) * s.kappa[static_cast<size_t>(lambda.source())]);
  }
  return u;
}

namespace {

struct Obligation {
  Path p, q;
  friend auto operator<=>(const Obligation&, const Obligation&) = default;
};

enum class ReduceOutcome { discharged, contradiction, open };

/// Strip the common prefix of (p, q); the result has d(p) ^ d(q) = 0.
ReduceOutcome reduce_obligation(const KGraph& g, Path& p, Path& q) {
  Degree common = p.degree().meet(q.degree());
  if (!common.is_zero()) {
    Degree zero(g.rank());
    if (!(g.segment(p, zero, common) == g.segment(q, zero, common)))
      return ReduceOutcome::contradiction;
    p = g.segment(p, common, p.degree());
    q = g.segment(q, common, q.degree());
  }
  if (p == q) return ReduceOutcome::discharged;
  if (p.degree() == q.degree()) return ReduceOutcome::contradiction;
  return ReduceOutcome::open;
}

}  // namespace

Bracket notunique_lower_bound(const MeasureContext& ctx, const Path& lambda, const Path& mu,
                              int depth) {
  const KGraph& g = ctx.graph();
  const Dynamics& dyn = ctx.dynamics();
  if (dyn.K.size() < 2)
    fail(Errc::precondition_violated, "the non-uniqueness bracket needs |K| >= 2");
  Degree zero(g.rank());
  if (!(lambda.degree().restricted_to(dyn.J).is_zero()) ||
      !(mu.degree().restricted_to(dyn.J).is_zero()))
    fail(Errc::precondition_violated, "need d(lambda)_J = d(mu)_J = 0");

  Bracket out;
  if (lambda == mu) {
    double v = nu_cylinder(ctx, zero, lambda);
    out.lower = out.upper = v;
    out.upper_sequence.assign(static_cast<size_t>(std::max(depth, 1)), v);
    out.exactly_determined = true;
    return out;
  }
  if (lambda.source() != mu.source() || lambda.range() != mu.range() ||
      lambda.degree() == mu.degree()) {
    out.upper_sequence.assign(static_cast<size_t>(std::max(depth, 1)), 0.0);
    out.exactly_determined = true;
    return out;
  }

  // Upper bounds: depth-q consistency of lambda.w = mu.w on the decided part.
  for (int step = 1; step <= depth; ++step) {
    Degree q(g.rank());
    for (int c : dyn.K) q.set_color(c, step);
    Degree common = (lambda.degree().meet(mu.degree())) + q;
    double mass = 0.0;
    for (const Path& w : g.paths_at(mu.source(), q)) {
      Path lw = g.compose(lambda, w);
      Path mw = g.compose(mu, w);
      if (g.segment(lw, zero, common) == g.segment(mw, zero, common))
        mass += nu_cylinder(ctx, zero, mw);
    }
    out.upper_sequence.push_back(mass);
  }
  out.upper = out.upper_sequence.empty() ? nu_cylinder(ctx, zero, mu) : out.upper_sequence.back();

  // Lower bound: a finite coinductive certificate that lambda.y = mu.y for
  // every y. Obligations are prefix-stripped pairs; each transition consumes
  // one edge of a K-color where the two sides have different depth.
  bool certified = true;
  std::set<Obligation> seen;
  std::deque<Obligation> queue;
  {
    Path p = lambda;
    Path q = mu;
    switch (reduce_obligation(g, p, q)) {
      case ReduceOutcome::contradiction: certified = false; break;
      case ReduceOutcome::discharged: break;
      case ReduceOutcome::open: queue.push_back({p, q}); break;
    }
  }
  constexpr size_t state_cap = 20000;
  while (certified && !queue.empty()) {
    Obligation ob = queue.front();
    queue.pop_front();
    Obligation key = ob.q < ob.p ? Obligation{ob.q, ob.p} : ob;
    if (!seen.insert(key).second) continue;
    if (seen.size() > state_cap) {
      certified = false;
      break;
    }
    int color = 0;
    for (int c : dyn.K)
      if (ob.p.degree().at_color(c) != ob.q.degree().at_color(c)) {
        color = c;
        break;
      }
    if (color == 0) {
      certified = false;  // cannot make progress; do not certify
      break;
    }
    for (EdgeIx e : g.out_edges(ob.p.source(), color)) {
      Path pe = g.compose(ob.p, g.edge_path(e));
      Path qe = g.compose(ob.q, g.edge_path(e));
      switch (reduce_obligation(g, pe, qe)) {
        case ReduceOutcome::contradiction: certified = false; break;
        case ReduceOutcome::discharged: break;
        case ReduceOutcome::open: queue.push_back({pe, qe}); break;
      }
      if (!certified) break;
    }
  }
  if (certified) {
    out.lower = nu_cylinder(ctx, zero, mu);
    out.exactly_determined = true;
  }
  return out;
}

}  // namespace kgkms
