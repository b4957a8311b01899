#include "lpiso/jets.hpp"

#include <cassert>
#include <cmath>

namespace lpiso {

Jet2::Jet2(std::size_t n, double value)
    : value_(value), grad_(n, 0.0), hess_(n * (n + 1) / 2, 0.0) {}

Jet2 Jet2::variable(std::size_t n, std::size_t index, double value) {
  Jet2 j(n, value);
  j.grad_[index] = 1.0;
  return j;
}

Vector Jet2::gradient() const {
  Vector g(grad_.size());
  for (std::size_t i = 0; i < grad_.size(); ++i) g(i) = grad_[i];
  return g;
}

Matrix Jet2::hessian() const {
  const std::size_t n = grad_.size();
  Matrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = hess(i, j);
  return h;
}

Jet2& Jet2::operator+=(const Jet2& o) {
  assert(o.dim() == dim());
  value_ += o.value_;
  for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] += o.grad_[i];
  for (std::size_t i = 0; i < hess_.size(); ++i) hess_[i] += o.hess_[i];
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
  assert(o.dim() == dim());
  value_ -= o.value_;
  for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] -= o.grad_[i];
  for (std::size_t i = 0; i < hess_.size(); ++i) hess_[i] -= o.hess_[i];
  return *this;
}

Jet2& Jet2::operator*=(double c) {
  value_ *= c;
  for (double& g : grad_) g *= c;
  for (double& h : hess_) h *= c;
  return *this;
}

Jet2& Jet2::operator*=(const Jet2& o) {
  assert(o.dim() == dim());
  const std::size_t n = grad_.size();
  // (ab)'' = a b'' + b a'' + a' b'ᵀ + b' a'ᵀ
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j, ++k) {
      hess_[k] = value_ * o.hess_[k] + o.value_ * hess_[k] + grad_[i] * o.grad_[j] +
                 grad_[j] * o.grad_[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) grad_[i] = value_ * o.grad_[i] + o.value_ * grad_[i];
  value_ *= o.value_;
  return *this;
}

Jet2& Jet2::operator/=(const Jet2& o) {
  const double v = o.value();
  *this *= o.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
  return *this;
}

Jet2 Jet2::chain(double g0, double g1, double g2) const {
  const std::size_t n = grad_.size();
  Jet2 r(n, g0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    r.grad_[i] = g1 * grad_[i];
    for (std::size_t j = i; j < n; ++j, ++k) {
      r.hess_[k] = g1 * hess_[k] + g2 * grad_[i] * grad_[j];
    }
  }
  return r;
}

Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value());
  return a.chain(e, e, e);
}

Jet2 log(const Jet2& a) {
  const double v = a.value();
  return a.chain(std::log(v), 1.0 / v, -1.0 / (v * v));
}

Jet2 log_abs(const Jet2& a) {
  const double v = a.value();
  return a.chain(std::log(std::abs(v)), 1.0 / v, -1.0 / (v * v));
}

Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value());
  return a.chain(s, std::cos(a.value()), -s);
}

Jet2 cos(const Jet2& a) {
  const double c = std::cos(a.value());
  return a.chain(c, -std::sin(a.value()), -c);
}

Jet2 sqrt(const Jet2& a) {
  const double r = std::sqrt(a.value());
  return a.chain(r, 0.5 / r, -0.25 / (r * a.value()));
}

Jet2 abs_pow(const Jet2& a, double q) {
  const double v = a.value();
  const double av = std::abs(v);
  const double sgn = v < 0 ? -1.0 : 1.0;
  if (v == 0.0) {
    // Only reachable for integer q >= 0; handle the polynomial cases exactly.
    const double g1 = q == 1.0 ? 1.0 : 0.0;
    const double g2 = q == 2.0 ? 2.0 : 0.0;
    return a.chain(q == 0.0 ? 1.0 : 0.0, g1, g2);
  }
  const double f = std::pow(av, q);
  return a.chain(f, q * f / av * sgn, q * (q - 1.0) * f / (av * av));
}

Jet2 ipow(const Jet2& a, int k) {
  if (k == 0) return Jet2(a.dim(), 1.0);
  const double v = a.value();
  const double f1 = k * std::pow(v, k - 1);
  const double f2 = k >= 2 ? k * (k - 1) * std::pow(v, k - 2) : 0.0;
  return a.chain(std::pow(v, k), f1, f2);
}

double abs_pow(double a, double q) { return std::pow(std::abs(a), q); }
double log_abs(double a) { return std::log(std::abs(a)); }
double ipow(double a, int k) { return std::pow(a, k); }

std::vector<Jet2> seed_variables(std::span<const double> x) {
  std::vector<Jet2> v;
  v.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v.push_back(Jet2::variable(x.size(), i, x[i]));
  return v;
}

}  // namespace lpiso
