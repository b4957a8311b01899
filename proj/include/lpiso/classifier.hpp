#pragma once

#include "lpiso/domain.hpp"
#include "lpiso/geometry.hpp"
#include "lpiso/linalg.hpp"
#include "lpiso/operators.hpp"

#include <optional>
#include <string>

namespace lpiso {

enum class Obstruction { SignatureMismatch, DriftMismatch, NullDriftMismatch, VectorConditionUnsatisfiable };
enum class WitnessFamily { SimilarityFamily, SimilarityPlusInversion, TwoDFamilyCatalog };

std::string_view to_string(Obstruction o);
std::string_view to_string(WitnessFamily w);

struct Verdict {
  bool embeddable = false;
  std::optional<Obstruction> obstruction;
  std::optional<WitnessFamily> family;
  std::optional<FamilyCase> family_case;  // TwoDFamilyCatalog only
  int family_sign = 1;                    // s with c = (c, s·c)
  bool vector_condition = false;          // J·d = |τ′|^{2/n}·c must hold
  bool exceptional_exponent = false;      // p = 2n/(n−2)
  std::string rule;                       // which branch of the case table fired

  int n = 0, ell = 0, m = 0;
  Diagonalization source, target;
  Vector c, d;  // reduced drifts P·a and Q·b
  double zero_threshold = 0.0;

  std::string tag() const;  // e.g. "NonIsometric(SignatureMismatch)"
};

Verdict classify(const SymMatrix& A, const Vector& a, const SymMatrix& B, const Vector& b, double p);

/// ‖J·d − |τ′|^{2/n}·c‖ ≤ 1e−8·(1 + ‖c‖).
bool vector_condition_check(const Matrix& J, const Vector& c, const Vector& d, double tau_prime, int n);

struct WitnessParams {
  MappingSpec tau;
  int sign = 1;
  std::optional<ScalarField> weight;  // replaces the constructed weight
};

struct Witness {
  WeightedCompositionOperator op;
  CoincidenceReport coincidence;
  std::optional<bool> vector_condition;  // evaluated when the verdict requires it
  std::optional<double> vector_condition_residual;
};

/// Builds the operator for an embeddable verdict and checks that E₁ is the
/// image of E₂. Throws InvalidParams (non-embeddable verdict, mapping outside
/// the verdict's family) and DomainMismatch.
Witness instantiate_witness(const Verdict& v, const DomainSpec& E1, const DomainSpec& E2, const WitnessParams& params,
                            double p);

}  // namespace lpiso
