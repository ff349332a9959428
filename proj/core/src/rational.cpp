#include "kgkms/rational.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kgkms {

namespace {

long long narrow(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) fail(Errc::overflow, "rational arithmetic overflow");
  return static_cast<long long>(v);
}

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational Rational::reduced128(__int128 n, __int128 d) {
  if (d == 0) fail(Errc::overflow, "rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  Rational r;
  r.num_ = narrow(n);
  r.den_ = narrow(d);
  return r;
}

Rational::Rational(long long n, long long d) { *this = reduced128(n, d); }

Rational Rational::operator+(const Rational& r) const {
  return reduced128((__int128)num_ * r.den_ + (__int128)r.num_ * den_, (__int128)den_ * r.den_);
}

Rational Rational::operator-(const Rational& r) const { return *this + (-r); }

Rational Rational::operator*(const Rational& r) const {
  return reduced128((__int128)num_ * r.num_, (__int128)den_ * r.den_);
}

Rational Rational::operator/(const Rational& r) const {
  if (r.is_zero()) fail(Errc::overflow, "rational division by zero");
  return reduced128((__int128)num_ * r.den_, (__int128)den_ * r.num_);
}

Rational Rational::pow(const Rational& base, int exponent) {
  if (exponent < 0) return Rational(1) / pow(base, -exponent);
  Rational out(1);
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

XReal XReal::monomial(Rational q, double exponent) {
  XReal out;
  if (!q.is_zero()) out.terms_.push_back({exponent, q});
  return out;
}

XReal XReal::approximate(double value) {
  XReal out;
  out.exact_ = false;
  out.approx_ = value;
  return out;
}

double XReal::to_double() const {
  if (!exact_) return approx_;
  double s = 0.0;
  for (const Term& t : terms_) s += t.q.to_double() * std::exp(t.x);
  return s;
}

void XReal::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.x < b.x; });
  std::vector<Term> merged;
  for (const Term& t : terms_) {
    if (!merged.empty() && merged.back().x == t.x) {
      merged.back().q += t.q;
      if (merged.back().q.is_zero()) merged.pop_back();
    } else if (!t.q.is_zero()) {
      merged.push_back(t);
    }
  }
  terms_ = std::move(merged);
}

XReal XReal::operator+(const XReal& r) const {
  if (!exact_ || !r.exact_) return approximate(to_double() + r.to_double());
  try {
    XReal out = *this;
    out.terms_.insert(out.terms_.end(), r.terms_.begin(), r.terms_.end());
    out.normalize();
    return out;
  } catch (const Error&) {
    return approximate(to_double() + r.to_double());
  }
}

XReal XReal::operator-() const {
  if (!exact_) return approximate(-approx_);
  XReal out = *this;
  for (Term& t : out.terms_) t.q = -t.q;
  return out;
}

XReal XReal::operator-(const XReal& r) const { return *this + (-r); }

XReal XReal::operator*(const XReal& r) const {
  if (!exact_ || !r.exact_) return approximate(to_double() * r.to_double());
  try {
    XReal out;
    for (const Term& a : terms_)
      for (const Term& b : r.terms_) out.terms_.push_back({a.x + b.x, a.q * b.q});
    out.normalize();
    return out;
  } catch (const Error&) {
    return approximate(to_double() * r.to_double());
  }
}

std::string XReal::to_string() const {
  if (!exact_) return "~" + std::to_string(approx_);
  if (terms_.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < terms_.size(); ++i) {
    if (i) s += " + ";
    s += terms_[i].q.to_string();
    if (terms_[i].x != 0.0) s += "*e^(" + std::to_string(terms_[i].x) + ")";
  }
  return s;
}

std::optional<std::vector<Rational>> rational_perron_vector(
    const std::vector<long long>& a, int n, long long p) {
  try {
    // Gaussian elimination on (A - pI) x = 0 over the rationals.
    std::vector<std::vector<Rational>> m(static_cast<size_t>(n),
                                         std::vector<Rational>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        m[i][j] = Rational(a[static_cast<size_t>(i) * n + j]);
        if (i == j) m[i][j] -= Rational(p);
      }

    std::vector<int> pivot_col(static_cast<size_t>(n), -1);
    int row = 0;
    for (int col = 0; col < n && row < n; ++col) {
      int sel = -1;
      for (int i = row; i < n; ++i)
        if (!m[i][col].is_zero()) {
          sel = i;
          break;
        }
      if (sel < 0) continue;
      std::swap(m[row], m[sel]);
      Rational inv = Rational(1) / m[row][col];
      for (int j = 0; j < n; ++j) m[row][j] *= inv;
      for (int i = 0; i < n; ++i) {
        if (i == row || m[i][col].is_zero()) continue;
        Rational f = m[i][col];
        for (int j = 0; j < n; ++j) m[i][j] -= f * m[row][j];
      }
      pivot_col[static_cast<size_t>(row)] = col;
      ++row;
    }
    int rank = row;
    if (rank != n - 1) return std::nullopt;  // kernel not one-dimensional

    // Single free column: the one that is no pivot.
    std::vector<bool> is_pivot(static_cast<size_t>(n), false);
    for (int i = 0; i < rank; ++i) is_pivot[static_cast<size_t>(pivot_col[static_cast<size_t>(i)])] = true;
    int free_col = -1;
    for (int j = 0; j < n; ++j)
      if (!is_pivot[static_cast<size_t>(j)]) free_col = j;

    std::vector<Rational> x(static_cast<size_t>(n));
    x[static_cast<size_t>(free_col)] = Rational(1);
    for (int i = 0; i < rank; ++i)
      x[static_cast<size_t>(pivot_col[static_cast<size_t>(i)])] = -m[i][free_col];

    // The Perron vector is strictly positive up to a global sign.
    bool all_neg = std::all_of(x.begin(), x.end(),
                               [](const Rational& v) { return v.is_negative(); });
    if (all_neg)
      for (Rational& xi : x) xi = -xi;
    Rational sum(0);
    for (const Rational& xi : x) {
      if (xi.is_zero() || xi.is_negative()) return std::nullopt;
      sum += xi;
    }
    for (Rational& xi : x) xi = xi / sum;
    return x;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::no_sources: return "NoSources";
    case Errc::not_bijective: return "NotBijective";
    case Errc::endpoint_mismatch: return "EndpointMismatch";
    case Errc::cube_inconsistent: return "CubeInconsistent";
    case Errc::not_composable: return "NotComposable";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::cap_exceeded: return "CapExceeded";
    case Errc::commutation_failure: return "CommutationFailure";
    case Errc::not_irreducible: return "NotIrreducible";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::not_coordinatewise_irreducible: return "NotCoordinatewiseIrreducible";
    case Errc::degenerate_critical_beta: return "DegenerateCriticalBeta";
    case Errc::hypothesis_unchecked: return "HypothesisUnchecked";
    case Errc::degree_mismatch: return "DegreeMismatch";
    case Errc::constraint_violated: return "ConstraintViolated";
    case Errc::diverges: return "Diverges";
    case Errc::kgraph_is_cycle: return "KGraphIsCycle";
    case Errc::precondition_violated: return "PreconditionViolated";
    case Errc::bad_params: return "BadParams";
    case Errc::parse_error: return "ParseError";
    case Errc::overflow: return "Overflow";
    case Errc::internal_check_failed: return "InternalCheckFailed";
  }
  return "UnknownError";
}

std::string ValidationError::summarize(const std::vector<ValidationIssue>& issues) {
  std::string s = std::to_string(issues.size()) + " validation issue(s)";
  for (const ValidationIssue& i : issues) {
    s += "\n  ";
    s += errc_name(i.code);
    s += ": ";
    s += i.detail;
  }
  return s;
}

}  // namespace kgkms
