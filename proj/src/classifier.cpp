#include "lpiso/classifier.hpp"

#include "lpiso/error.hpp"

#include <cmath>

namespace lpiso {

namespace {

bool only_stages_of(const MappingSpec& tau, bool allow_inversion) {
  if (tau.is<Similarity>()) return true;
  if (tau.is<Inversion>()) return allow_inversion;
  if (tau.is<Composition>()) {
    for (const auto& s : tau.as<Composition>().stages)
      if (!only_stages_of(s, allow_inversion)) return false;
    return !tau.as<Composition>().stages.empty();
  }
  return false;
}

bool ells_match(const MappingSpec& tau, int ell) {
  if (tau.is<Similarity>()) return tau.as<Similarity>().ell == ell;
  if (tau.is<Inversion>()) return tau.as<Inversion>().ell == ell;
  if (tau.is<Composition>()) {
    for (const auto& s : tau.as<Composition>().stages)
      if (!ells_match(s, ell)) return false;
  }
  return true;
}

int sign_of(double x) { return x < 0 ? -1 : 1; }

}  // namespace

std::string_view to_string(Obstruction o) {
  switch (o) {
    case Obstruction::SignatureMismatch: return "SignatureMismatch";
    case Obstruction::DriftMismatch: return "DriftMismatch";
    case Obstruction::NullDriftMismatch: return "NullDriftMismatch";
    case Obstruction::VectorConditionUnsatisfiable: return "VectorConditionUnsatisfiable";
  }
  return "?";
}

std::string_view to_string(WitnessFamily w) {
  switch (w) {
    case WitnessFamily::SimilarityFamily: return "SimilarityFamily";
    case WitnessFamily::SimilarityPlusInversion: return "SimilarityPlusInversion";
    case WitnessFamily::TwoDFamilyCatalog: return "TwoDFamilyCatalog";
  }
  return "?";
}

std::string Verdict::tag() const {
  if (!embeddable) return "NonIsometric(" + std::string(to_string(*obstruction)) + ")";
  std::string t = "Embeddable(" + std::string(to_string(*family));
  if (family_case) t += ":" + std::string(to_string(*family_case));
  return t + ")";
}

Verdict classify(const SymMatrix& A, const Vector& a, const SymMatrix& B, const Vector& b, double p) {
  const int n = static_cast<int>(A.dim());
  check_exponent(p, n);
  if (n < 2) throw Error(ErrorCode::InvalidParams, "dimension must be at least 2");
  if (static_cast<int>(B.dim()) != n || a.size() != n || b.size() != n) {
    throw Error(ErrorCode::InvalidParams, "A, a, B, b dimensions disagree");
  }
  if (!a.allFinite() || !b.allFinite()) throw Error(ErrorCode::InvalidParams, "drift vectors must be finite");

  Verdict v;
  v.n = n;
  v.source = diagonalize(A);
  v.target = diagonalize(B);
  v.ell = v.source.ell;
  v.m = v.target.ell;
  v.c = v.source.reduction() * a;
  v.d = v.target.reduction() * b;
  v.zero_threshold = 1e-10 * (1.0 + A.max_abs() + B.max_abs());

  const auto reject = [&](Obstruction o, std::string rule) {
    v.embeddable = false;
    v.obstruction = o;
    v.rule = std::move(rule);
    return v;
  };
  const auto accept = [&](WitnessFamily w, std::string rule) {
    v.embeddable = true;
    v.family = w;
    v.rule = std::move(rule);
    return v;
  };

  if (v.ell != v.m) return reject(Obstruction::SignatureMismatch, "l != m: the operators have different signatures");

  const bool a_zero = a.cwiseAbs().maxCoeff() <= v.zero_threshold;
  const bool b_zero = b.cwiseAbs().maxCoeff() <= v.zero_threshold;
  const auto similarity_with_drift = [&](std::string rule) {
    const double nc = pseudo_norm_sq(v.c, v.ell);
    const double nd = pseudo_norm_sq(v.d, v.ell);
    if (sign_of(nc) != sign_of(nd)) {
      return reject(Obstruction::VectorConditionUnsatisfiable,
                    "l = m, both drifts nonzero, but ||c||_l^2 and ||d||_l^2 differ in sign, so Q.d = t.c has no solution");
    }
    v.vector_condition = true;
    return accept(WitnessFamily::SimilarityFamily, std::move(rule));
  };

  if (n == 2 && v.ell == 1) {
    const double nc = v.c(0) * v.c(0) - v.c(1) * v.c(1);
    const double nd = v.d(0) * v.d(0) - v.d(1) * v.d(1);
    const bool c_null = std::abs(nc) <= v.zero_threshold * (1.0 + v.c.squaredNorm());
    const bool d_null = std::abs(nd) <= v.zero_threshold * (1.0 + v.d.squaredNorm());
    if (c_null != d_null) {
      return reject(Obstruction::NullDriftMismatch, "n = 2, l = m = 1: exactly one of ||c||_1^2, ||d||_1^2 vanishes");
    }
    if (!c_null) return similarity_with_drift("n = 2, l = m = 1, both null norms nonzero: l-similarity with J.d = |tau'|.c");
    if (a_zero && b_zero) return accept(WitnessFamily::SimilarityFamily, "n = 2, l = m = 1, a = b = 0: l-similarities");
    v.family = WitnessFamily::TwoDFamilyCatalog;
    if (!a_zero && !b_zero) {
      const int sc = sign_of(v.c(0) * v.c(1));
      const int sd = sign_of(v.d(0) * v.d(1));
      v.family_case = sc == sd ? FamilyCase::F1 : FamilyCase::F2;
      v.family_sign = sc;
      return accept(WitnessFamily::TwoDFamilyCatalog,
                    sc == sd ? "n = 2, l = m = 1, null drifts c, d nonzero and aligned: families F1a/F1b"
                             : "n = 2, l = m = 1, null drifts c, d nonzero and anti-aligned: families F2a/F2b");
    }
    if (a_zero) {
      v.family_case = FamilyCase::F3;
      v.family_sign = sign_of(v.d(0) * v.d(1));
      return accept(WitnessFamily::TwoDFamilyCatalog, "n = 2, l = m = 1, c = 0, d null and nonzero: families F3a/F3b");
    }
    v.family_case = FamilyCase::F4;
    v.family_sign = sign_of(v.c(0) * v.c(1));
    return accept(WitnessFamily::TwoDFamilyCatalog, "n = 2, l = m = 1, c null and nonzero, d = 0: families F4a/F4b");
  }

  if (a_zero != b_zero) return reject(Obstruction::DriftMismatch, "l = m, exactly one of the drifts a, b vanishes");
  if (!a_zero) return similarity_with_drift("l = m, both drifts nonzero: l-similarity with J.d = |tau'|^(2/n).c");
  if (n >= 3) {
    const double special = conformal_exponent(n);
    if (std::abs(p - special) <= 1e-12 * special) {
      v.exceptional_exponent = true;
      return accept(WitnessFamily::SimilarityPlusInversion,
                    "l = m, a = b = 0, p = 2n/(n-2): l-similarity composed with an l-inversion");
    }
  }
  return accept(WitnessFamily::SimilarityFamily, "l = m, a = b = 0: l-similarities");
}

bool vector_condition_check(const Matrix& J, const Vector& c, const Vector& d, double tau_prime, int n) {
  const Vector lhs = J * d;
  const Vector rhs = std::pow(std::abs(tau_prime), 2.0 / n) * c;
  return (lhs - rhs).norm() <= 1e-8 * (1.0 + c.norm());
}

Witness instantiate_witness(const Verdict& v, const DomainSpec& E1, const DomainSpec& E2, const WitnessParams& params,
                            double p) {
  if (!v.embeddable) throw Error(ErrorCode::InvalidParams, "no witness exists for verdict " + v.tag());
  const MappingSpec& tau = params.tau;
  switch (*v.family) {
    case WitnessFamily::SimilarityFamily:
      if (!only_stages_of(tau, false)) throw Error(ErrorCode::InvalidParams, "witness must be an l-similarity, got " + tau.describe());
      break;
    case WitnessFamily::SimilarityPlusInversion:
      if (!only_stages_of(tau, true)) {
        throw Error(ErrorCode::InvalidParams, "witness must compose l-similarities and l-inversions, got " + tau.describe());
      }
      break;
    case WitnessFamily::TwoDFamilyCatalog: {
      if (!tau.is<TwoDFamily>() || tau.as<TwoDFamily>().family != *v.family_case) {
        throw Error(ErrorCode::InvalidParams, "witness must be a member of family " + std::string(to_string(*v.family_case)));
      }
      const auto& f = tau.as<TwoDFamily>();
      const double tol = 1e-8 * (1.0 + v.c.norm() + v.d.norm());
      if ((f.source_drift() - v.c).norm() > tol || (f.target_drift() - v.d).norm() > tol) {
        throw Error(ErrorCode::InvalidParams, "family parameters c, d, sign do not match the reduced drifts");
      }
      break;
    }
  }
  if (!ells_match(tau, v.m)) throw Error(ErrorCode::InvalidParams, "witness index l differs from the operators' index");

  Witness w{assemble(v.source, v.target, tau, p, params.sign, E2, params.weight), {}, std::nullopt, std::nullopt};
  if (v.vector_condition) {
    const Vector y0 = DomainSpec::affine_image(E2, w.op.Q, Vector::Zero(v.n)).center();
    const JacobianReport jr = jacobian(w.op.tau, y0);
    w.vector_condition = vector_condition_check(jr.J, v.c, v.d, jr.det, v.n);
    w.vector_condition_residual = (jr.J * v.d - std::pow(std::abs(jr.det), 2.0 / v.n) * v.c).norm();
  }
  w.coincidence = validate_coincidence(w.op, E1, E2);
  if (!w.coincidence.passed) {
    throw Error(ErrorCode::DomainMismatch, "E1 is not the image of E2 under the witness (forward " +
                                               std::to_string(w.coincidence.forward) + ", backward " +
                                               std::to_string(w.coincidence.backward) + ")");
  }
  return w;
}

}  // namespace lpiso
