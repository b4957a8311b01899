#include "lpiso/geometry.hpp"

#include "lpiso/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace lpiso {

double pseudo_norm_sq(std::span<const double> z, int ell) {
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    s += static_cast<int>(i) < ell ? z[i] * z[i] : -z[i] * z[i];
  }
  return s;
}

Similarity Similarity::make(double t, Matrix Q, Vector v, int ell) {
  const auto n = Q.rows();
  if (!(std::isfinite(t) && t != 0.0)) throw Error(ErrorCode::InvalidParams, "homothety coefficient must be non-zero");
  if (Q.cols() != n || v.size() != n) throw Error(ErrorCode::InvalidParams, "similarity dimensions disagree");
  if (ell < 0 || ell > n) throw Error(ErrorCode::InvalidParams, "index out of range");
  const Matrix I = signature_matrix(static_cast<int>(n), ell);
  const double err = (Q.transpose() * I * Q - I).cwiseAbs().maxCoeff();
  if (!(err <= 1e-10)) {
    throw Error(ErrorCode::InvalidParams, "Q does not preserve the l-pseudo-norm (residual " + std::to_string(err) + ")");
  }
  return Similarity{t, std::move(Q), std::move(v), ell};
}

Similarity Similarity::identity(int n, int ell) {
  return Similarity{1.0, Matrix::Identity(n, n), Vector::Zero(n), ell};
}

Similarity Similarity::translation(Vector v, int ell) {
  const auto n = v.size();
  return Similarity{1.0, Matrix::Identity(n, n), std::move(v), ell};
}

Similarity Similarity::homothety(int n, int ell, double t) {
  return make(t, Matrix::Identity(n, n), Vector::Zero(n), ell);
}

Matrix ell_rotation(int n, int ell, int i, int j, double angle) {
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
    throw Error(ErrorCode::InvalidParams, "rotation plane indices invalid");
  }
  Matrix Q = Matrix::Identity(n, n);
  if ((i < ell) == (j < ell)) {
    Q(i, i) = std::cos(angle);
    Q(i, j) = -std::sin(angle);
    Q(j, i) = std::sin(angle);
    Q(j, j) = std::cos(angle);
  } else {
    Q(i, i) = std::cosh(angle);
    Q(i, j) = std::sinh(angle);
    Q(j, i) = std::sinh(angle);
    Q(j, j) = std::cosh(angle);
  }
  return Q;
}

// ---------------------------------------------------------------------------
// 2D families

bool TwoDFamily::has_gamma() const { return family != FamilyCase::F4; }

bool TwoDFamily::has_k() const {
  switch (family) {
    case FamilyCase::F1: return variant == FamilyVariant::A;
    case FamilyCase::F2: return variant == FamilyVariant::B;
    case FamilyCase::F3:
    case FamilyCase::F4: return true;
  }
  return false;
}

bool TwoDFamily::has_delta() const {
  switch (family) {
    case FamilyCase::F1: return variant == FamilyVariant::B;
    case FamilyCase::F2: return variant == FamilyVariant::A;
    case FamilyCase::F3: return false;
    case FamilyCase::F4: return true;
  }
  return false;
}

bool TwoDFamily::has_log() const { return family != FamilyCase::F3; }

Vector TwoDFamily::source_drift() const {
  if (family == FamilyCase::F3) return Vector::Zero(2);
  return Vector{{c, sign * c}};
}

Vector TwoDFamily::target_drift() const {
  switch (family) {
    case FamilyCase::F1:
    case FamilyCase::F3: return Vector{{d, sign * d}};
    case FamilyCase::F2: return Vector{{d, -sign * d}};
    case FamilyCase::F4: return Vector::Zero(2);
  }
  return Vector::Zero(2);
}

std::string_view to_string(FamilyCase c) {
  switch (c) {
    case FamilyCase::F1: return "F1";
    case FamilyCase::F2: return "F2";
    case FamilyCase::F3: return "F3";
    case FamilyCase::F4: return "F4";
  }
  return "?";
}

std::string TwoDFamily::id() const {
  return std::string(to_string(family)) + (variant == FamilyVariant::A ? "a" : "b");
}

std::optional<FamilyCase> parse_family_case(std::string_view id) {
  if (id == "F1") return FamilyCase::F1;
  if (id == "F2") return FamilyCase::F2;
  if (id == "F3") return FamilyCase::F3;
  if (id == "F4") return FamilyCase::F4;
  return std::nullopt;
}

void check_family_params(const TwoDFamily& f) {
  const auto bad = [&](const std::string& why) { throw Error(ErrorCode::InvalidParams, f.id() + ": " + why); };
  if (f.sign != 1 && f.sign != -1) bad("sign branch must be +1 or -1");
  if (!(std::isfinite(f.p) && f.p > 0)) bad("p must be positive");
  for (double v : {f.c, f.d, f.gamma, f.delta, f.k, f.alpha, f.beta}) {
    if (!std::isfinite(v)) bad("parameters must be finite");
  }
  if (f.uses_c() && f.c == 0.0) bad("c must be non-zero for this case");
  if (f.uses_d() && f.d == 0.0) bad("d must be non-zero for this case");
  if (f.has_gamma() && f.has_k() && f.gamma == 0.0 && f.k == 0.0) {
    bad("gamma and k are both present, one of them must be non-zero");
  }
  if (f.log_branch != 1 && f.log_branch != -1) bad("log branch must be +1 or -1");
}

namespace {

using std::exp;

template <class T>
T guarded_log_abs(const T& arg) {
  if (!(std::abs(value_of(arg)) >= kGuardEpsilon)) {
    throw Error(ErrorCode::SingularPoint, "ln|.| argument vanishes");
  }
  return log_abs(arg);
}

// Closed forms u₁, u₂ in the rotated null coordinates ζ = x₁ − s·x₂, ω = x₁ + s·x₂.
template <class T>
std::vector<T> apply_family(const TwoDFamily& f, std::span<const T> x) {
  if (x.size() != 2) throw Error(ErrorCode::InvalidParams, "2D family applied to a point of dimension != 2");
  const double s = f.sign;
  const double pc = f.p * f.c;
  const double pd = f.p * f.d;
  const T zeta = x[0] - x[1] * s;
  const T omega = x[0] + x[1] * s;

  T u1 = ScalarTraits<T>::constant(ScalarTraits<T>::dim(x), 0.0);
  T u2 = u1;
  switch (f.family) {
    case FamilyCase::F1:
      if (f.variant == FamilyVariant::A) {
        const T L = guarded_log_abs(exp(zeta * (-pd / 2)) * f.gamma - 1.0);
        u1 = L * (-1.0 / pc) + omega * f.k + f.alpha;
        u2 = (L * (1.0 / pc) + omega * f.k) * s + f.beta;
      } else {
        const T E = exp(zeta * (-pd / 2)) * f.gamma;
        const T L = guarded_log_abs(omega * pc + f.delta);
        u1 = E * (-1.0 / pd) - L * (1.0 / pc) + f.alpha;
        u2 = (E * (-1.0 / pd) + L * (1.0 / pc)) * s + f.beta;
      }
      break;
    case FamilyCase::F2:
      if (f.variant == FamilyVariant::A) {
        const T E = exp(omega * (-pd / 2)) * f.gamma;
        const T L = guarded_log_abs(f.delta - zeta * (s * pc));
        u1 = E * (-1.0 / pd) - L * (1.0 / pc) + f.alpha;
        u2 = (E * (-1.0 / pd) + L * (1.0 / pc)) * s + f.beta;
      } else {
        const T L = guarded_log_abs(exp(omega * (-pd / 2)) * f.gamma - 1.0);
        u1 = L * (-1.0 / pc) + zeta * f.k + f.alpha;
        u2 = (L * (1.0 / pc) + zeta * f.k) * s + f.beta;
      }
      break;
    case FamilyCase::F3: {
      const T E = exp(zeta * (-pd / 2)) * f.gamma;
      if (f.variant == FamilyVariant::A) {
        u1 = E * (-1.0 / pd) + omega * f.k + f.alpha;
        u2 = (E * (1.0 / pd) + omega * f.k) * s + f.beta;
      } else {
        u1 = E * (-1.0 / pd) + omega * f.k + f.alpha;
        u2 = (E * (-1.0 / pd) - omega * f.k) * s + f.beta;
      }
      break;
    }
    case FamilyCase::F4:
      if (f.variant == FamilyVariant::A) {
        const T L = guarded_log_abs(f.delta - zeta * (s * pc));
        u1 = L * (-1.0 / pc) + omega * f.k + f.alpha;
        u2 = (L * (1.0 / pc) + omega * f.k) * s + f.beta;
      } else {
        const T L = guarded_log_abs(omega * pc + f.delta);
        u1 = L * (-1.0 / pc) + zeta * f.k + f.alpha;
        u2 = (L * (1.0 / pc) + zeta * f.k) * s + f.beta;
      }
      break;
  }
  return {std::move(u1), std::move(u2)};
}

// The ln argument of a family member, evaluated at x (values only).
std::optional<double> family_log_argument(const TwoDFamily& f, const Vector& x) {
  const double s = f.sign;
  const double pc = f.p * f.c;
  const double pd = f.p * f.d;
  const double zeta = x(0) - s * x(1);
  const double omega = x(0) + s * x(1);
  switch (f.family) {
    case FamilyCase::F1:
      return f.variant == FamilyVariant::A ? f.gamma * std::exp(-pd / 2 * zeta) - 1.0 : pc * omega + f.delta;
    case FamilyCase::F2:
      return f.variant == FamilyVariant::A ? f.delta - s * pc * zeta : f.gamma * std::exp(-pd / 2 * omega) - 1.0;
    case FamilyCase::F3:
      return std::nullopt;
    case FamilyCase::F4:
      return f.variant == FamilyVariant::A ? f.delta - s * pc * zeta : pc * omega + f.delta;
  }
  return std::nullopt;
}

// Inverse via the null-coordinate decomposition U = u₁ + s·u₂, V = u₁ − s·u₂:
// every member has U and V depending on only one of ζ, ω each.
Vector inverse_family(const TwoDFamily& f, const Vector& y) {
  const double s = f.sign;
  const double pc = f.p * f.c;
  const double pd = f.p * f.d;
  const double U = y(0) + s * y(1) - (f.alpha + s * f.beta);
  const double V = y(0) - s * y(1) - (f.alpha - s * f.beta);
  const auto no_preimage = [&]() -> double {
    throw Error(ErrorCode::SingularPoint, "no preimage under " + f.id());
  };

  // y = 2k·t
  const auto inv_linear = [&](double w) { return f.k != 0.0 ? w / (2.0 * f.k) : no_preimage(); };
  // y = −(2γ/pd)·exp(−pd·t/2)
  const auto inv_exp = [&](double w) {
    const double e = w * (-pd / (2.0 * f.gamma));
    return (f.gamma != 0.0 && e > 0.0) ? -(2.0 / pd) * std::log(e) : no_preimage();
  };
  // y = −(2/pc)·ln|σ·pc·t + δ|
  const auto inv_log_affine = [&](double w, double sigma) {
    const double r = std::exp(-(pc / 2.0) * w);
    return (f.log_branch * r - f.delta) / (sigma * pc);
  };
  // y = −(2/pc)·ln|γ·exp(−pd·t/2) − 1|
  const auto inv_log_exp = [&](double w) {
    const double r = std::exp(-(pc / 2.0) * w);
    const double e = (1.0 + f.log_branch * r) / f.gamma;
    return (f.gamma != 0.0 && e > 0.0) ? -(2.0 / pd) * std::log(e) : no_preimage();
  };

  double zeta = 0.0;
  double omega = 0.0;
  switch (f.family) {
    case FamilyCase::F1:
      if (f.variant == FamilyVariant::A) {
        omega = inv_linear(U);
        zeta = inv_log_exp(V);
      } else {
        zeta = inv_exp(U);
        omega = inv_log_affine(V, 1.0);
      }
      break;
    case FamilyCase::F2:
      if (f.variant == FamilyVariant::A) {
        omega = inv_exp(U);
        zeta = inv_log_affine(V, -s);
      } else {
        zeta = inv_linear(U);
        omega = inv_log_exp(V);
      }
      break;
    case FamilyCase::F3:
      if (f.variant == FamilyVariant::A) {
        omega = inv_linear(U);
        zeta = inv_exp(V);
      } else {
        zeta = inv_exp(U);
        omega = inv_linear(V);
      }
      break;
    case FamilyCase::F4:
      if (f.variant == FamilyVariant::A) {
        omega = inv_linear(U);
        zeta = inv_log_affine(V, -s);
      } else {
        zeta = inv_linear(U);
        omega = inv_log_affine(V, 1.0);
      }
      break;
  }
  return Vector{{(zeta + omega) / 2.0, s * (omega - zeta) / 2.0}};
}

template <class T>
std::vector<T> apply_linear(const Matrix& A, const Vector& shift, double scale, std::span<const T> x) {
  const auto n = static_cast<std::size_t>(A.rows());
  if (static_cast<std::size_t>(A.cols()) != x.size()) {
    throw Error(ErrorCode::InvalidParams, "mapping dimension does not match the point");
  }
  const std::size_t nv = ScalarTraits<T>::dim(x);
  std::vector<T> y;
  y.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    T yi = ScalarTraits<T>::constant(nv, shift(static_cast<Eigen::Index>(i)));
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double a = scale * A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (a != 0.0) yi += x[j] * a;
    }
    y.push_back(std::move(yi));
  }
  return y;
}

template <class T>
std::vector<T> apply_inversion(const Inversion& inv, std::span<const T> x) {
  const std::size_t n = x.size();
  if (static_cast<std::size_t>(inv.center.size()) != n) {
    throw Error(ErrorCode::InvalidParams, "inversion center dimension does not match the point");
  }
  const std::size_t nv = ScalarTraits<T>::dim(x);
  std::vector<T> z;
  z.reserve(n);
  T q = ScalarTraits<T>::constant(nv, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    z.push_back(x[i] - inv.center(static_cast<Eigen::Index>(i)));
    if (static_cast<int>(i) < inv.ell) q += z.back() * z.back();
    else q -= z.back() * z.back();
  }
  if (!(std::abs(value_of(q)) >= kGuardEpsilon)) {
    throw Error(ErrorCode::SingularPoint, "point on the null cone of the inversion center");
  }
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = z[i] / q + inv.center(static_cast<Eigen::Index>(i));
  }
  return z;
}

}  // namespace

template <class T>
std::vector<T> apply_mapping(const MappingSpec& tau, std::span<const T> x) {
  return std::visit(
      [&](const auto& m) -> std::vector<T> {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Similarity>) {
          return apply_linear<T>(m.Q, m.v, m.t, x);
        } else if constexpr (std::is_same_v<M, Affine>) {
          return apply_linear<T>(m.A, m.shift, 1.0, x);
        } else if constexpr (std::is_same_v<M, Inversion>) {
          return apply_inversion<T>(m, x);
        } else if constexpr (std::is_same_v<M, TwoDFamily>) {
          return apply_family<T>(m, x);
        } else {
          std::vector<T> cur(x.begin(), x.end());
          for (const auto& stage : m.stages) cur = apply_mapping<T>(stage, std::span<const T>(cur));
          return cur;
        }
      },
      tau.v);
}

template std::vector<double> apply_mapping<double>(const MappingSpec&, std::span<const double>);
template std::vector<Jet2> apply_mapping<Jet2>(const MappingSpec&, std::span<const Jet2>);

Vector apply_mapping(const MappingSpec& tau, const Vector& x) {
  const auto y = apply_mapping<double>(tau, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  return Eigen::Map<const Vector>(y.data(), static_cast<Eigen::Index>(y.size()));
}

Vector inverse_mapping(const MappingSpec& tau, const Vector& y) {
  return std::visit(
      [&](const auto& m) -> Vector {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Similarity>) {
          return m.Q.partialPivLu().solve(y - m.v) / m.t;
        } else if constexpr (std::is_same_v<M, Affine>) {
          return m.A.partialPivLu().solve(y - m.shift);
        } else if constexpr (std::is_same_v<M, Inversion>) {
          return apply_mapping(tau, y);
        } else if constexpr (std::is_same_v<M, TwoDFamily>) {
          return inverse_family(m, y);
        } else {
          Vector cur = y;
          for (auto it = m.stages.rbegin(); it != m.stages.rend(); ++it) cur = inverse_mapping(*it, cur);
          return cur;
        }
      },
      tau.v);
}

double guard_quantity(const MappingSpec& tau, const Vector& x) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      [&](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Inversion>) {
          return std::abs(pseudo_norm_sq(x - m.center, m.ell));
        } else if constexpr (std::is_same_v<M, TwoDFamily>) {
          const auto arg = family_log_argument(m, x);
          return arg ? std::abs(*arg) : inf;
        } else if constexpr (std::is_same_v<M, Composition>) {
          double g = inf;
          Vector cur = x;
          for (const auto& stage : m.stages) {
            g = std::min(g, guard_quantity(stage, cur));
            if (g < kGuardEpsilon) return g;
            cur = apply_mapping(stage, cur);
          }
          return g;
        } else {
          return inf;
        }
      },
      tau.v);
}

MappingSpec calibrate_branches(const MappingSpec& tau, const Vector& x) {
  if (tau.is<TwoDFamily>()) {
    TwoDFamily f = tau.as<TwoDFamily>();
    if (const auto arg = family_log_argument(f, x)) f.log_branch = *arg < 0 ? -1 : 1;
    return f;
  }
  if (tau.is<Composition>()) {
    Composition out;
    Vector cur = x;
    for (const auto& stage : tau.as<Composition>().stages) {
      out.stages.push_back(calibrate_branches(stage, cur));
      cur = apply_mapping(stage, cur);
    }
    return out;
  }
  return tau;
}

std::optional<double> abs_jacobian_closed_form(const MappingSpec& tau, const Vector& x) {
  return std::visit(
      [&](const auto& m) -> std::optional<double> {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Similarity>) {
          return std::pow(std::abs(m.t), static_cast<double>(m.Q.rows())) * std::abs(m.Q.determinant());
        } else if constexpr (std::is_same_v<M, Affine>) {
          return std::abs(m.A.determinant());
        } else if constexpr (std::is_same_v<M, Inversion>) {
          const double q = pseudo_norm_sq(x - m.center, m.ell);
          return std::pow(std::abs(q), -static_cast<double>(x.size()));
        } else if constexpr (std::is_same_v<M, TwoDFamily>) {
          return std::nullopt;
        } else {
          double prod = 1.0;
          Vector cur = x;
          for (const auto& stage : m.stages) {
            const auto j = abs_jacobian_closed_form(stage, cur);
            if (!j) return std::nullopt;
            prod *= *j;
            cur = apply_mapping(stage, cur);
          }
          return prod;
        }
      },
      tau.v);
}

bool is_affine(const MappingSpec& tau) {
  if (tau.is<Similarity>() || tau.is<Affine>()) return true;
  if (tau.is<Composition>()) {
    for (const auto& s : tau.as<Composition>().stages)
      if (!is_affine(s)) return false;
    return true;
  }
  return false;
}

JacobianReport jacobian(const MappingSpec& tau, const Vector& x) {
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  const auto vars = seed_variables(xs);
  const auto y = apply_mapping<Jet2>(tau, std::span<const Jet2>(vars));
  JacobianReport r;
  r.J = Matrix(static_cast<Eigen::Index>(y.size()), x.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    for (Eigen::Index j = 0; j < x.size(); ++j) r.J(static_cast<Eigen::Index>(i), j) = y[i].grad(static_cast<std::size_t>(j));
  r.det = r.J.determinant();
  return r;
}

std::optional<double> conformality_test(const MappingSpec& tau, const Vector& x, int ell) {
  JacobianReport jr = jacobian(tau, x);
  const int n = static_cast<int>(x.size());
  const Matrix I = signature_matrix(n, ell);
  const Matrix G = jr.J.transpose() * I * jr.J;
  const double C = G(0, 0) * I(0, 0);
  if ((G - C * I).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + std::abs(C))) return C;
  return std::nullopt;
}

std::string MappingSpec::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Similarity>) {
          os << "similarity(t=" << m.t << ", l=" << m.ell << ")";
        } else if constexpr (std::is_same_v<M, Affine>) {
          os << "affine(" << m.A.rows() << "x" << m.A.cols() << ")";
        } else if constexpr (std::is_same_v<M, Inversion>) {
          os << "inversion(l=" << m.ell << ", center=[" << m.center.transpose() << "])";
        } else if constexpr (std::is_same_v<M, TwoDFamily>) {
          os << "family " << m.id() << (m.sign > 0 ? " upper" : " lower");
        } else {
          os << "composition[";
          for (std::size_t i = 0; i < m.stages.size(); ++i) os << (i ? " ; " : "") << m.stages[i].describe();
          os << "]";
        }
      },
      v);
  return os.str();
}

}  // namespace lpiso
