#pragma once

#include "lpiso/linalg.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace lpiso {

/// Second-order forward jet: value, gradient and Hessian of a scalar with
/// respect to n independent variables. The Hessian is stored as its packed
/// upper triangle, so it is symmetric by construction.
class Jet2 {
 public:
  Jet2() = default;
  explicit Jet2(std::size_t n, double value = 0.0);

  static Jet2 constant(std::size_t n, double value) { return Jet2(n, value); }
  static Jet2 variable(std::size_t n, std::size_t index, double value);

  std::size_t dim() const noexcept { return grad_.size(); }
  double value() const noexcept { return value_; }
  double& value() noexcept { return value_; }
  double grad(std::size_t i) const { return grad_[i]; }
  double& grad(std::size_t i) { return grad_[i]; }
  double hess(std::size_t i, std::size_t j) const { return hess_[packed(i, j)]; }
  double& hess(std::size_t i, std::size_t j) { return hess_[packed(i, j)]; }

  Vector gradient() const;
  Matrix hessian() const;

  Jet2& operator+=(const Jet2& o);
  Jet2& operator-=(const Jet2& o);
  Jet2& operator*=(const Jet2& o);
  Jet2& operator/=(const Jet2& o);
  Jet2& operator+=(double c) { value_ += c; return *this; }
  Jet2& operator-=(double c) { value_ -= c; return *this; }
  Jet2& operator*=(double c);
  Jet2& operator/=(double c) { return *this *= 1.0 / c; }

  /// g(this) given g, g', g'' at the current value.
  Jet2 chain(double g0, double g1, double g2) const;

 private:
  std::size_t packed(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    const std::size_t n = grad_.size();
    return i * n - i * (i + 1) / 2 + j;
  }

  double value_ = 0.0;
  std::vector<double> grad_;
  std::vector<double> hess_;
};

inline Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
inline Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
inline Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }
inline Jet2 operator/(Jet2 a, const Jet2& b) { return a /= b; }
inline Jet2 operator+(Jet2 a, double c) { return a += c; }
inline Jet2 operator+(double c, Jet2 a) { return a += c; }
inline Jet2 operator-(Jet2 a, double c) { return a -= c; }
inline Jet2 operator-(double c, const Jet2& a) { return a.chain(c - a.value(), -1.0, 0.0); }
inline Jet2 operator*(Jet2 a, double c) { return a *= c; }
inline Jet2 operator*(double c, Jet2 a) { return a *= c; }
inline Jet2 operator/(Jet2 a, double c) { return a /= c; }
inline Jet2 operator-(const Jet2& a) { return a * -1.0; }

Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 sqrt(const Jet2& a);
/// |a|^q; requires a ≠ 0 unless q is a non-negative integer.
Jet2 abs_pow(const Jet2& a, double q);
/// ln|a|.
Jet2 log_abs(const Jet2& a);
/// a^k for a non-negative integer k.
Jet2 ipow(const Jet2& a, int k);

/// Scalar helpers with the same names so generic code can use either type.
inline double value_of(double x) noexcept { return x; }
inline double value_of(const Jet2& x) noexcept { return x.value(); }
double abs_pow(double a, double q);
double log_abs(double a);
double ipow(double a, int k);

/// Builds T-typed constants for generic evaluation code.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static double constant(std::size_t, double c) { return c; }
  static std::size_t dim(std::span<const double>) { return 0; }
};

template <>
struct ScalarTraits<Jet2> {
  static Jet2 constant(std::size_t n, double c) { return Jet2(n, c); }
  static std::size_t dim(std::span<const Jet2> x) { return x.empty() ? 0 : x[0].dim(); }
};

/// Independent-variable jets seeded at x.
std::vector<Jet2> seed_variables(std::span<const double> x);

}  // namespace lpiso
