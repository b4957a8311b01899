#include "lpiso/operators.hpp"

#include "lpiso/error.hpp"

#include <cmath>
#include <limits>

namespace lpiso {

namespace {

bool contains_family(const MappingSpec& tau) {
  if (tau.is<TwoDFamily>()) return true;
  if (tau.is<Composition>()) {
    for (const auto& s : tau.as<Composition>().stages)
      if (contains_family(s)) return true;
  }
  return false;
}

// |τ′|^{1/p} as a field, stage by stage through the chain rule.
std::optional<ScalarField> closed_form_weight(const MappingSpec& tau, int n, double p) {
  if (tau.is<Similarity>()) {
    const auto& s = tau.as<Similarity>();
    return ScalarField::constant(std::pow(std::pow(std::abs(s.t), n) * std::abs(s.Q.determinant()), 1.0 / p));
  }
  if (tau.is<Affine>()) return ScalarField::constant(std::pow(std::abs(tau.as<Affine>().A.determinant()), 1.0 / p));
  if (tau.is<Inversion>()) {
    const auto& inv = tau.as<Inversion>();
    return ScalarField::pseudo_norm_power(inv.center, inv.ell, -static_cast<double>(n) / p);
  }
  if (tau.is<Composition>()) {
    ScalarField w = ScalarField::constant(1.0);
    Composition prefix;
    for (const auto& stage : tau.as<Composition>().stages) {
      auto ws = closed_form_weight(stage, n, p);
      if (!ws) return std::nullopt;
      w = w * (prefix.stages.empty() ? *ws : ws->compose(prefix));
      prefix.stages.push_back(stage);
    }
    return w;
  }
  return std::nullopt;
}

ScalarField family_weight(const TwoDFamily& f, const MappingSpec& tau, const Vector& y0) {
  const Vector c = f.source_drift();
  const Vector d = f.target_drift();
  const ScalarField eu = ScalarField::exp_linear({c(0) / 2.0, -c(1) / 2.0}, ComplexPart::Re).compose(tau);
  const ScalarField ex = ScalarField::exp_linear({-d(0) / 2.0, d(1) / 2.0}, ComplexPart::Re);
  const ScalarField shape = eu * ex;
  const double jac = std::abs(jacobian(tau, y0).det);
  const double K = std::pow(jac, 1.0 / f.p) / shape.value(y0);
  return K * shape;
}

MappingSpec linear_map(const Matrix& A) { return Affine{A, Vector::Zero(A.rows())}; }

}  // namespace

double conformal_exponent(int n) { return n >= 3 ? 2.0 * n / (n - 2.0) : 0.0; }

void check_exponent(double p, int n) {
  if (!std::isfinite(p) || !(p > 0.0)) throw Error(ErrorCode::InvalidExponent, "p must be positive and finite");
  if (std::fmod(p, 2.0) == 0.0 && p != conformal_exponent(n)) {
    throw Error(ErrorCode::InvalidExponent, "p must not be an even integer");
  }
}

MappingSpec WeightedCompositionOperator::overall_map() const {
  return Composition{{linear_map(Q), tau, linear_map(P.inverse())}};
}

ScalarField WeightedCompositionOperator::overall_weight() const {
  return (sign * scale) * weight.compose(linear_map(Q));
}

WeightedCompositionOperator assemble(const Diagonalization& source, const Diagonalization& target, MappingSpec tau,
                                     double p, int sign, const DomainSpec& E2, std::optional<ScalarField> weight) {
  check_exponent(p, source.dim());
  if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidParams, "sign must be +1 or -1");
  const int n = source.dim();
  if (target.dim() != n || E2.dim() != n) throw Error(ErrorCode::InvalidParams, "source, target and domain dimensions disagree");

  if (contains_family(tau)) {
    if (!tau.is<TwoDFamily>()) throw Error(ErrorCode::InvalidParams, "2D families cannot be composed with other maps");
    if (n != 2 || source.ell != 1 || target.ell != 1) {
      throw Error(ErrorCode::InvalidParams, "2D families need n = 2 and l = m = 1");
    }
    check_family_params(tau.as<TwoDFamily>());
    if (tau.as<TwoDFamily>().p != p) throw Error(ErrorCode::InvalidParams, "family exponent differs from p");
  }

  WeightedCompositionOperator T;
  T.source = source;
  T.target = target;
  T.P = source.reduction();
  T.Q = target.reduction();
  T.sign = sign;
  T.p = p;
  T.scale = std::pow(std::abs(T.Q.determinant() / T.P.determinant()), 1.0 / p);

  const DomainSpec reduced = DomainSpec::affine_image(E2, T.Q, Vector::Zero(n));
  const Vector y0 = reduced.center();
  const double margin = std::max(kGuardEpsilon, E2.effective_margin());
  if (guard_quantity(tau, y0) < margin) throw Error(ErrorCode::SingularOnDomain, "mapping is singular at the domain centre");
  T.tau = calibrate_branches(tau, y0);

  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const Vector y = reduced.sample(rng);
    const double g = guard_quantity(T.tau, y);
    if (g < margin) {
      throw Error(ErrorCode::SingularOnDomain, "mapping comes within " + std::to_string(g) + " of its singular set (margin " +
                                                   std::to_string(margin) + ")");
    }
    try {
      const Vector u = apply_mapping(T.tau, y);
      const Vector back = inverse_mapping(T.tau, u);
      if ((back - y).norm() > 1e-6 * (1.0 + y.norm())) {
        throw Error(ErrorCode::SingularOnDomain, "mapping is not invertible on one branch over the domain");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SingularOnDomain) throw;
      throw Error(ErrorCode::SingularOnDomain, e.what());
    }
  }

  const JacobianReport jr = jacobian(T.tau, y0);
  if (std::abs(jr.det) <= 1e-12 * (1.0 + jr.J.squaredNorm())) {
    throw Error(ErrorCode::SingularOnDomain, "Jacobian of the mapping vanishes on the domain");
  }

  if (weight) {
    T.weight = *weight;
    T.custom_weight = true;
  } else if (T.tau.is<TwoDFamily>()) {
    T.weight = family_weight(T.tau.as<TwoDFamily>(), T.tau, y0);
  } else {
    auto w = closed_form_weight(T.tau, n, p);
    if (!w) throw Error(ErrorCode::InvalidParams, "no closed-form weight for " + T.tau.describe());
    T.weight = *w;
  }
  T.weight_description = T.weight.describe();
  return T;
}

ScalarField apply(const WeightedCompositionOperator& T, const ScalarField& f) {
  return T.overall_weight() * f.compose(T.overall_map());
}

DomainSpec image_of(const WeightedCompositionOperator& T, const DomainSpec& E2) {
  const MappingSpec phi = T.overall_map();
  if (is_affine(phi)) {
    const Vector origin = Vector::Zero(T.dim());
    return DomainSpec::affine_image(E2, jacobian(phi, origin).J, apply_mapping(phi, origin));
  }
  return DomainSpec::mapped_image(E2, phi);
}

PdeMappingReport certify_pde_mapping(const WeightedCompositionOperator& T, const OperatorSpec& specB,
                                     const SolutionSet& S, const DomainSpec& E2, double tol, std::size_t points,
                                     std::uint64_t seed) {
  PdeMappingReport r;
  r.tolerance = tol;
  r.points = points;
  r.solutions = S.size();
  Rng rng(seed);
  std::vector<Vector> xs;
  xs.reserve(points);
  for (std::size_t i = 0; i < points; ++i) xs.push_back(E2.sample(rng));

  bool ok = true;
  for (const auto& member : S.members) {
    const ScalarField Tf = apply(T, member.field);
    double worst = 0.0;
    for (const auto& x : xs) {
      try {
        const Jet2 j = eval_jet(Tf, x);
        const double res = std::abs(apply_operator(specB, j));
        const double rel = res / (1.0 + operator_term_scale(specB, j));
        if (!std::isfinite(res)) {
          worst = std::numeric_limits<double>::max();
          continue;
        }
        r.max_residual = std::max(r.max_residual, res);
        worst = std::max(worst, rel);
      } catch (const Error&) {
        worst = std::numeric_limits<double>::max();
      }
    }
    r.per_solution.push_back(worst);
    r.max_relative_residual = std::max(r.max_relative_residual, worst);
    if (!(worst <= tol)) ok = false;
  }
  r.passed = ok;
  return r;
}

IsometryReport certify_isometry(const WeightedCompositionOperator& T, const SolutionSet& S, const DomainSpec& E1,
                                const DomainSpec& E2, const QuadratureSpec& quad) {
  const auto fs = S.fields();
  std::vector<ScalarField> tfs;
  tfs.reserve(fs.size());
  for (const auto& f : fs) tfs.push_back(apply(T, f));
  const auto src = lp_norms(fs, E1, T.p, quad);
  const auto img = lp_norms(tfs, E2, T.p, quad);

  IsometryReport r;
  r.exact = is_affine(T.tau) && !src.empty() && src.front().method == QuadratureMethod::Gauss &&
            img.front().method == QuadratureMethod::Gauss;
  r.mode = r.exact ? "exact" : "statistical";
  r.passed = true;
  for (std::size_t k = 0; k < fs.size(); ++k) {
    NormPair np;
    np.label = S.members[k].label;
    np.source = src[k];
    np.image = img[k];
    np.difference = std::abs(img[k].value - src[k].value);
    const double floor = 1e-12 * (1.0 + std::max(src[k].value, img[k].value));
    const double err = r.exact ? src[k].std_error + img[k].std_error
                               : std::hypot(src[k].std_error, img[k].std_error);
    np.tolerance = 3.0 * err + floor;
    np.passed = np.difference <= np.tolerance;
    r.passed = r.passed && np.passed;
    r.pairs.push_back(std::move(np));
  }
  return r;
}

CoincidenceReport validate_coincidence(const WeightedCompositionOperator& T, const DomainSpec& E1,
                                       const DomainSpec& E2, std::size_t samples, std::uint64_t seed) {
  const MappingSpec phi = T.overall_map();
  CoincidenceReport r;
  r.samples = samples;
  Rng rng(seed);
  std::size_t fwd = 0, bwd = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    try {
      if (E1.contains(apply_mapping(phi, E2.sample(rng)))) ++fwd;
    } catch (const Error&) {
    }
    try {
      if (E2.contains(inverse_mapping(phi, E1.sample(rng)))) ++bwd;
    } catch (const Error&) {
    }
  }
  r.forward = static_cast<double>(fwd) / static_cast<double>(samples);
  r.backward = static_cast<double>(bwd) / static_cast<double>(samples);
  r.passed = r.forward >= 0.999 && r.backward >= 0.999;
  return r;
}

WeightCheck check_weight(const WeightedCompositionOperator& T, const DomainSpec& E2, std::size_t points,
                         std::uint64_t seed) {
  const int n = T.dim();
  const DomainSpec reduced = DomainSpec::affine_image(E2, T.Q, Vector::Zero(n));
  WeightCheck r;
  r.points = points;
  r.max_conformal_error = 0.0;
  Rng rng(seed);
  for (std::size_t i = 0; i < points; ++i) {
    const Vector y = reduced.sample(rng);
    const double jac = std::abs(jacobian(T.tau, y).det);
    const double Fp = std::pow(std::abs(T.weight.value(y)), T.p);
    r.max_weight_error = std::max(r.max_weight_error, std::abs(Fp / jac - 1.0));
    const auto C = conformality_test(T.tau, y, T.target.ell);
    if (!C) {
      r.max_conformal_error.reset();
    } else if (r.max_conformal_error) {
      const double expect = std::pow(jac, 2.0 / n);
      r.max_conformal_error = std::max(*r.max_conformal_error, std::abs(std::abs(*C) / expect - 1.0));
    }
  }
  return r;
}

}  // namespace lpiso
