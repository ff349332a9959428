#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "kgkms/errors.hpp"

namespace kgkms {

/// Multidegree in N^k. The product partial order and join live here;
/// lexicographic operator<=> is only a container ordering.
class Degree {
public:
  Degree() = default;
  explicit Degree(int rank) : e_(static_cast<size_t>(rank), 0) {}
  Degree(std::initializer_list<int> init) : e_(init) {}
  explicit Degree(std::vector<int> entries) : e_(std::move(entries)) {}

  static Degree unit(int rank, int color) {  // e_{color}, colors are 1-based
    Degree d(rank);
    d.e_[static_cast<size_t>(color - 1)] = 1;
    return d;
  }

  int rank() const { return static_cast<int>(e_.size()); }
  int operator[](int i) const { return e_[static_cast<size_t>(i)]; }
  int& operator[](int i) { return e_[static_cast<size_t>(i)]; }
  int at_color(int color) const { return e_[static_cast<size_t>(color - 1)]; }
  void set_color(int color, int value) { e_[static_cast<size_t>(color - 1)] = value; }

  int total() const { return std::accumulate(e_.begin(), e_.end(), 0); }
  bool is_zero() const { return std::all_of(e_.begin(), e_.end(), [](int x) { return x == 0; }); }

  bool leq(const Degree& rhs) const {
    check_rank(rhs);
    for (int i = 0; i < rank(); ++i)
      if (e_[static_cast<size_t>(i)] > rhs.e_[static_cast<size_t>(i)]) return false;
    return true;
  }

  Degree join(const Degree& rhs) const {
    check_rank(rhs);
    Degree out(rank());
    for (int i = 0; i < rank(); ++i) out[i] = std::max((*this)[i], rhs[i]);
    return out;
  }

  Degree meet(const Degree& rhs) const {
    check_rank(rhs);
    Degree out(rank());
    for (int i = 0; i < rank(); ++i) out[i] = std::min((*this)[i], rhs[i]);
    return out;
  }

  Degree operator+(const Degree& rhs) const {
    check_rank(rhs);
    Degree out(rank());
    for (int i = 0; i < rank(); ++i) out[i] = (*this)[i] + rhs[i];
    return out;
  }

  /// Componentwise difference; requires rhs <= *this.
  Degree operator-(const Degree& rhs) const {
    if (!rhs.leq(*this)) fail(Errc::out_of_range, "degree subtraction would go negative");
    Degree out(rank());
    for (int i = 0; i < rank(); ++i) out[i] = (*this)[i] - rhs[i];
    return out;
  }

  /// Keep the listed colors, zero the rest (block of a (J,K) split).
  Degree restricted_to(std::span<const int> colors) const {
    Degree out(rank());
    for (int c : colors) out.set_color(c, at_color(c));
    return out;
  }

  bool supported_on(std::span<const int> colors) const {
    Degree r = restricted_to(colors);
    return r == *this;
  }

  friend bool operator==(const Degree&, const Degree&) = default;
  friend auto operator<=>(const Degree& a, const Degree& b) {
    return std::lexicographical_compare_three_way(a.e_.begin(), a.e_.end(), b.e_.begin(),
                                                  b.e_.end());
  }

  std::string to_string() const;

private:
  void check_rank(const Degree& rhs) const {
    if (rank() != rhs.rank()) fail(Errc::bad_params, "degree rank mismatch");
  }
  std::vector<int> e_;
};

/// Componentwise <= restricted to the listed colors.
inline bool leq_on(const Degree& a, const Degree& b, std::span<const int> colors) {
  for (int c : colors)
    if (a.at_color(c) > b.at_color(c)) return false;
  return true;
}

/// Visit every degree n with 0 <= n <= cap in lexicographic order.
template <typename Fn>
void for_each_degree_leq(const Degree& cap, Fn&& fn) {
  Degree n(cap.rank());
  for (;;) {
    fn(static_cast<const Degree&>(n));
    int i = cap.rank() - 1;
    while (i >= 0 && n[i] == cap[i]) {
      n[i] = 0;
      --i;
    }
    if (i < 0) return;
    ++n[i];
  }
}

inline std::string Degree::to_string() const {
  std::string s = "(";
  for (int i = 0; i < rank(); ++i) {
    if (i) s += ",";
    s += std::to_string((*this)[i]);
  }
  return s + ")";
}

}  // namespace kgkms
