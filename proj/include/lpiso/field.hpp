#pragma once

#include "lpiso/geometry.hpp"
#include "lpiso/jets.hpp"

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace lpiso {

/// One term c·x^e of a polynomial.
struct Monomial {
  double coeff = 0.0;
  std::vector<int> exponents;
};

enum class ComplexPart { Re, Im };

class FieldNode;

/// Immutable scalar field on Rⁿ built from a small node graph. Copies share
/// the graph. Evaluation is available as plain values or as second-order jets.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(std::shared_ptr<const FieldNode> node) : node_(std::move(node)) {}

  static ScalarField constant(double c);
  static ScalarField polynomial(std::vector<Monomial> terms);
  /// x_i.
  static ScalarField coordinate(int n, int i);
  /// Re or Im of exp(Σ s_k x_k).
  static ScalarField exp_linear(std::vector<std::complex<double>> s, ComplexPart part);
  /// |‖x − z₀‖_ℓ²|^q.
  static ScalarField pseudo_norm_power(Vector center, int ell, double q);
  /// scale · ln|w·x + b|.
  static ScalarField log_abs_affine(Vector w, double b, double scale);

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(double c, const ScalarField& a);
  /// f ∘ τ.
  ScalarField compose(MappingSpec tau) const;

  double value(std::span<const double> x) const;
  double value(const Vector& x) const {
    return value(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  }
  Jet2 jet(std::span<const Jet2> x) const;
  std::string describe() const;

  bool valid() const noexcept { return static_cast<bool>(node_); }
  const FieldNode& node() const { return *node_; }

 private:
  std::shared_ptr<const FieldNode> node_;
};

class FieldNode {
 public:
  virtual ~FieldNode() = default;
  virtual double value(std::span<const double> x) const = 0;
  virtual Jet2 jet(std::span<const Jet2> x) const = 0;
  virtual std::string describe() const = 0;
};

/// Value, gradient and Hessian of f at x.
Jet2 eval_jet(const ScalarField& f, const Vector& x);

/// Constant-coefficient second-order operator Σ a_ij ∂_i∂_j + Σ a_i ∂_i.
struct OperatorSpec {
  Matrix A;
  Vector a;

  int dim() const noexcept { return static_cast<int>(A.rows()); }
};

/// Σ a_ij ∂²f/∂x_i∂x_j + Σ a_i ∂f/∂x_i at x.
double apply_operator(const OperatorSpec& spec, const ScalarField& f, const Vector& x);
double apply_operator(const OperatorSpec& spec, const Jet2& j);

/// Σ|a_ij·∂²f| + Σ|a_i·∂f|: the size of the terms that cancel in a solution.
double operator_term_scale(const OperatorSpec& spec, const Jet2& j);

}  // namespace lpiso
