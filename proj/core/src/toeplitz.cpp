#include "kgkms/toeplitz.hpp"

#include <algorithm>
#include <cmath>

namespace kgkms {

SpanningTerm make_term(const Path& mu, const Path& nu) {
  if (mu.source() != nu.source())
    fail(Errc::bad_params, "spanning term needs s(mu) = s(nu)");
  return SpanningTerm{mu, nu};
}

ToeplitzElement ToeplitzElement::term(const Path& mu, const Path& nu, Coeff c) {
  ToeplitzElement out;
  out.add(make_term(mu, nu), c);
  return out;
}

ToeplitzElement ToeplitzElement::vertex(const KGraph& g, VertexIx v) {
  Path p = g.vertex_path(v);
  return term(p, p);
}

ToeplitzElement ToeplitzElement::isometry(const Path& mu) {
  ToeplitzElement out;
  out.add(SpanningTerm{mu, Path(Degree(mu.degree().rank()), mu.source(), mu.source(), {})}, 1.0);
  return out;
}

ToeplitzElement ToeplitzElement::one(const KGraph& g) {
  ToeplitzElement out;
  for (VertexIx v = 0; v < g.vertex_count(); ++v) out = out + vertex(g, v);
  return out;
}

ToeplitzElement::Coeff ToeplitzElement::coeff(const SpanningTerm& t) const {
  auto it = terms_.find(t);
  return it == terms_.end() ? Coeff(0.0) : it->second;
}

ToeplitzElement& ToeplitzElement::add(const SpanningTerm& t, Coeff c) {
  if (c == Coeff(0.0)) return *this;
  auto [it, inserted] = terms_.emplace(t, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Coeff(0.0)) terms_.erase(it);
  }
  return *this;
}

ToeplitzElement ToeplitzElement::operator+(const ToeplitzElement& rhs) const {
  ToeplitzElement out = *this;
  for (const auto& [t, c] : rhs.terms_) out.add(t, c);
  return out;
}

ToeplitzElement ToeplitzElement::operator-(const ToeplitzElement& rhs) const {
  ToeplitzElement out = *this;
  for (const auto& [t, c] : rhs.terms_) out.add(t, -c);
  return out;
}

ToeplitzElement ToeplitzElement::operator*(Coeff scalar) const {
  ToeplitzElement out;
  if (scalar == Coeff(0.0)) return out;
  for (const auto& [t, c] : terms_) out.add(t, c * scalar);
  return out;
}

double distance(const ToeplitzElement& a, const ToeplitzElement& b) {
  ToeplitzElement d = a - b;
  double m = 0.0;
  for (const auto& [t, c] : d.terms_) m = std::max(m, std::abs(c));
  return m;
}

ToeplitzElement multiply(const KGraph& g, const ToeplitzElement& a, const ToeplitzElement& b) {
  ToeplitzElement out;
  for (const auto& [ta, ca] : a.terms()) {
    for (const auto& [tb, cb] : b.terms()) {
      for (const auto& [eta, zeta] : g.lambda_min(ta.nu, tb.mu)) {
        Path mu = g.compose(ta.mu, eta);
        Path nu = g.compose(tb.nu, zeta);
        out.add(make_term(mu, nu), ca * cb);
      }
    }
  }
  return out;
}

ToeplitzElement adjoint(const ToeplitzElement& a) {
  ToeplitzElement out;
  for (const auto& [t, c] : a.terms()) out.add(SpanningTerm{t.nu, t.mu}, std::conj(c));
  return out;
}

ToeplitzElement gauge_expectation(const ToeplitzElement& a) {
  ToeplitzElement out;
  for (const auto& [t, c] : a.terms())
    if (t.mu.degree() == t.nu.degree()) out.add(t, c);
  return out;
}

ToeplitzElement apply_dynamics(const ToeplitzElement& a, std::complex<double> z,
                               std::span<const double> r) {
  ToeplitzElement out;
  for (const auto& [t, c] : a.terms()) {
    double phase = 0.0;
    for (int i = 0; i < t.mu.degree().rank(); ++i)
      phase += r[static_cast<size_t>(i)] * (t.mu.degree()[i] - t.nu.degree()[i]);
    std::complex<double> factor = std::exp(std::complex<double>(0.0, 1.0) * z * phase);
    out.add(t, c * factor);
  }
  return out;
}

}  // namespace kgkms
