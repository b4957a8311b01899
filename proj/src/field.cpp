#include "lpiso/field.hpp"

#include "lpiso/error.hpp"

#include <cmath>
#include <sstream>

namespace lpiso {

namespace {

using std::cos;
using std::exp;
using std::sin;

// Implements both virtual evaluation paths from one generic eval<T>.
template <class Derived>
class NodeBase : public FieldNode {
 public:
  double value(std::span<const double> x) const final { return self().template eval<double>(x); }
  Jet2 jet(std::span<const Jet2> x) const final { return self().template eval<Jet2>(x); }

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

template <class T>
T constant_like(std::span<const T> x, double c) {
  return ScalarTraits<T>::constant(ScalarTraits<T>::dim(x), c);
}

void check_dim(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw Error(ErrorCode::InvalidParams,
                "field of dimension " + std::to_string(expected) + " evaluated at a point of dimension " + std::to_string(got));
  }
}

class ConstantNode final : public NodeBase<ConstantNode> {
 public:
  explicit ConstantNode(double c) : c_(c) {}
  template <class T>
  T eval(std::span<const T> x) const { return constant_like(x, c_); }
  std::string describe() const override {
    std::ostringstream os;
    os << c_;
    return os.str();
  }

 private:
  double c_;
};

class PolynomialNode final : public NodeBase<PolynomialNode> {
 public:
  explicit PolynomialNode(std::vector<Monomial> terms) : terms_(std::move(terms)) {
    if (!terms_.empty()) dim_ = terms_.front().exponents.size();
    for (const auto& m : terms_) {
      if (m.exponents.size() != dim_) throw Error(ErrorCode::InvalidParams, "monomials of mixed dimension");
      for (int e : m.exponents)
        if (e < 0) throw Error(ErrorCode::InvalidParams, "negative exponent");
    }
  }

  template <class T>
  T eval(std::span<const T> x) const {
    T sum = constant_like(x, 0.0);
    if (terms_.empty()) return sum;
    check_dim(dim_, x.size());
    for (const auto& m : terms_) {
      T term = constant_like(x, m.coeff);
      for (std::size_t i = 0; i < dim_; ++i) {
        if (m.exponents[i] > 0) term = term * ipow(x[i], m.exponents[i]);
      }
      sum += term;
    }
    return sum;
  }

  std::string describe() const override {
    std::ostringstream os;
    bool first = true;
    for (const auto& m : terms_) {
      if (m.coeff == 0.0) continue;
      os << (first ? "" : " + ") << m.coeff;
      for (std::size_t i = 0; i < m.exponents.size(); ++i) {
        if (m.exponents[i] == 1) os << "*x" << i + 1;
        else if (m.exponents[i] > 1) os << "*x" << i + 1 << "^" << m.exponents[i];
      }
      first = false;
    }
    return first ? "0" : os.str();
  }

 private:
  std::vector<Monomial> terms_;
  std::size_t dim_ = 0;
};

class ExpLinearNode final : public NodeBase<ExpLinearNode> {
 public:
  ExpLinearNode(std::vector<std::complex<double>> s, ComplexPart part) : s_(std::move(s)), part_(part) {}

  // exp(Re·x)·cos(Im·x) or exp(Re·x)·sin(Im·x)
  template <class T>
  T eval(std::span<const T> x) const {
    check_dim(s_.size(), x.size());
    T re = constant_like(x, 0.0);
    T im = constant_like(x, 0.0);
    bool has_im = false;
    for (std::size_t i = 0; i < s_.size(); ++i) {
      if (s_[i].real() != 0.0) re += x[i] * s_[i].real();
      if (s_[i].imag() != 0.0) {
        im += x[i] * s_[i].imag();
        has_im = true;
      }
    }
    if (part_ == ComplexPart::Re) return has_im ? exp(re) * cos(im) : exp(re);
    return has_im ? exp(re) * sin(im) : constant_like(x, 0.0);
  }

  std::string describe() const override {
    std::ostringstream os;
    os << (part_ == ComplexPart::Re ? "Re" : "Im") << " exp(x.s), s=(";
    for (std::size_t i = 0; i < s_.size(); ++i) os << (i ? ", " : "") << s_[i].real() << (s_[i].imag() < 0 ? "" : "+") << s_[i].imag() << "i";
    os << ")";
    return os.str();
  }

 private:
  std::vector<std::complex<double>> s_;
  ComplexPart part_;
};

class PseudoNormPowerNode final : public NodeBase<PseudoNormPowerNode> {
 public:
  PseudoNormPowerNode(Vector center, int ell, double q) : center_(std::move(center)), ell_(ell), q_(q) {}

  template <class T>
  T eval(std::span<const T> x) const {
    check_dim(static_cast<std::size_t>(center_.size()), x.size());
    T s = constant_like(x, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const T z = x[i] - center_(static_cast<Eigen::Index>(i));
      if (static_cast<int>(i) < ell_) s += z * z;
      else s -= z * z;
    }
    if (!(std::abs(value_of(s)) >= kGuardEpsilon)) {
      throw Error(ErrorCode::GuardViolation, "pseudo-norm power evaluated on the null cone");
    }
    return abs_pow(s, q_);
  }

  std::string describe() const override {
    std::ostringstream os;
    os << "|‖x - z0‖_" << ell_ << "²|^" << q_;
    return os.str();
  }

 private:
  Vector center_;
  int ell_;
  double q_;
};

class LogAbsAffineNode final : public NodeBase<LogAbsAffineNode> {
 public:
  LogAbsAffineNode(Vector w, double b, double scale) : w_(std::move(w)), b_(b), scale_(scale) {}

  template <class T>
  T eval(std::span<const T> x) const {
    check_dim(static_cast<std::size_t>(w_.size()), x.size());
    T arg = constant_like(x, b_);
    for (std::size_t i = 0; i < x.size(); ++i) arg += x[i] * w_(static_cast<Eigen::Index>(i));
    if (!(std::abs(value_of(arg)) >= kGuardEpsilon)) {
      throw Error(ErrorCode::GuardViolation, "ln|w.x + b| evaluated where its argument vanishes");
    }
    return log_abs(arg) * scale_;
  }

  std::string describe() const override {
    std::ostringstream os;
    os << scale_ << "*ln|w.x + " << b_ << "|";
    return os.str();
  }

 private:
  Vector w_;
  double b_;
  double scale_;
};

enum class BinaryOp { Sum, Difference, Product };

class BinaryNode final : public NodeBase<BinaryNode> {
 public:
  BinaryNode(BinaryOp op, ScalarField a, ScalarField b) : op_(op), a_(std::move(a)), b_(std::move(b)) {}

  template <class T>
  T eval(std::span<const T> x) const {
    T va = evaluate<T>(a_, x);
    T vb = evaluate<T>(b_, x);
    switch (op_) {
      case BinaryOp::Sum: return va + vb;
      case BinaryOp::Difference: return va - vb;
      case BinaryOp::Product: return va * vb;
    }
    return va;
  }

  std::string describe() const override {
    const char* sym = op_ == BinaryOp::Sum ? " + " : op_ == BinaryOp::Difference ? " - " : " * ";
    return "(" + a_.describe() + sym + b_.describe() + ")";
  }

  template <class T>
  static T evaluate(const ScalarField& f, std::span<const T> x) {
    if constexpr (std::is_same_v<T, double>) return f.value(x);
    else return f.jet(x);
  }

 private:
  BinaryOp op_;
  ScalarField a_, b_;
};

class ScaleNode final : public NodeBase<ScaleNode> {
 public:
  ScaleNode(double c, ScalarField f) : c_(c), f_(std::move(f)) {}

  template <class T>
  T eval(std::span<const T> x) const { return BinaryNode::evaluate<T>(f_, x) * c_; }

  std::string describe() const override {
    std::ostringstream os;
    os << c_ << "*" << f_.describe();
    return os.str();
  }

 private:
  double c_;
  ScalarField f_;
};

class ComposeNode final : public NodeBase<ComposeNode> {
 public:
  ComposeNode(ScalarField f, MappingSpec tau) : f_(std::move(f)), tau_(std::move(tau)) {}

  template <class T>
  T eval(std::span<const T> x) const {
    const std::vector<T> y = apply_mapping<T>(tau_, x);
    return BinaryNode::evaluate<T>(f_, std::span<const T>(y));
  }

  std::string describe() const override { return f_.describe() + " o " + tau_.describe(); }

 private:
  ScalarField f_;
  MappingSpec tau_;
};

}  // namespace

ScalarField ScalarField::constant(double c) { return ScalarField(std::make_shared<ConstantNode>(c)); }

ScalarField ScalarField::polynomial(std::vector<Monomial> terms) {
  return ScalarField(std::make_shared<PolynomialNode>(std::move(terms)));
}

ScalarField ScalarField::coordinate(int n, int i) {
  Monomial m{1.0, std::vector<int>(static_cast<std::size_t>(n), 0)};
  m.exponents[static_cast<std::size_t>(i)] = 1;
  return polynomial({m});
}

ScalarField ScalarField::exp_linear(std::vector<std::complex<double>> s, ComplexPart part) {
  return ScalarField(std::make_shared<ExpLinearNode>(std::move(s), part));
}

ScalarField ScalarField::pseudo_norm_power(Vector center, int ell, double q) {
  return ScalarField(std::make_shared<PseudoNormPowerNode>(std::move(center), ell, q));
}

ScalarField ScalarField::log_abs_affine(Vector w, double b, double scale) {
  return ScalarField(std::make_shared<LogAbsAffineNode>(std::move(w), b, scale));
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return ScalarField(std::make_shared<BinaryNode>(BinaryOp::Sum, a, b));
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return ScalarField(std::make_shared<BinaryNode>(BinaryOp::Difference, a, b));
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return ScalarField(std::make_shared<BinaryNode>(BinaryOp::Product, a, b));
}

ScalarField operator*(double c, const ScalarField& a) { return ScalarField(std::make_shared<ScaleNode>(c, a)); }

ScalarField ScalarField::compose(MappingSpec tau) const {
  return ScalarField(std::make_shared<ComposeNode>(*this, std::move(tau)));
}

double ScalarField::value(std::span<const double> x) const { return node_->value(x); }
Jet2 ScalarField::jet(std::span<const Jet2> x) const { return node_->jet(x); }
std::string ScalarField::describe() const { return node_ ? node_->describe() : "<empty>"; }

Jet2 eval_jet(const ScalarField& f, const Vector& x) {
  const auto vars = seed_variables(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  return f.jet(std::span<const Jet2>(vars));
}

double apply_operator(const OperatorSpec& spec, const Jet2& j) {
  const auto n = static_cast<std::size_t>(spec.A.rows());
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) r += spec.A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * j.hess(i, k);
    r += spec.a(static_cast<Eigen::Index>(i)) * j.grad(i);
  }
  return r;
}

double apply_operator(const OperatorSpec& spec, const ScalarField& f, const Vector& x) {
  return apply_operator(spec, eval_jet(f, x));
}

double operator_term_scale(const OperatorSpec& spec, const Jet2& j) {
  const auto n = static_cast<std::size_t>(spec.A.rows());
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k)
      r += std::abs(spec.A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * j.hess(i, k));
    r += std::abs(spec.a(static_cast<Eigen::Index>(i)) * j.grad(i));
  }
  return r;
}

}  // namespace lpiso
