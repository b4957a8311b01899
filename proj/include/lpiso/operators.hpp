#pragma once

#include "lpiso/domain.hpp"
#include "lpiso/field.hpp"
#include "lpiso/geometry.hpp"
#include "lpiso/linalg.hpp"
#include "lpiso/quadrature.hpp"
#include "lpiso/solutions.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lpiso {

/// Throws InvalidExponent unless p is positive, finite and not an even integer.
/// The conformal exponent p = 2n/(n−2) (n ≥ 3) is let through even when it is
/// an even integer: its Kelvin-type witness is constructed, not inferred.
void check_exponent(double p, int n = 0);

/// 2n/(n−2) for n ≥ 3, else 0.
double conformal_exponent(int n);

/// Tf(w) = sign·|det Q / det P|^{1/p} · F(Q·w) · f(P⁻¹·τ(Q·w)).
///
/// P = Mᵀ and Q = Nᵀ are the reductions of the source and target operators;
/// τ maps the reduced target domain Q·E₂ onto the reduced source domain P·E₁
/// and F lives on Q·E₂.
struct WeightedCompositionOperator {
  Diagonalization source;  // M
  Diagonalization target;  // N
  Matrix P, Q;
  MappingSpec tau;
  ScalarField weight;
  int sign = 1;
  double p = 1.0;
  double scale = 1.0;  // |det Q / det P|^{1/p}
  bool custom_weight = false;
  std::string weight_description;

  int dim() const noexcept { return static_cast<int>(P.rows()); }
  /// x ↦ P⁻¹·τ(Q·x), from E₂ onto E₁.
  MappingSpec overall_map() const;
  /// sign·scale·F(Q·x) on E₂.
  ScalarField overall_weight() const;
};

/// Builds the operator. The weight is |τ′|^{1/p} in closed form for
/// similarities, inversions and their compositions, and the exponential form
/// K·exp(½(c₁u₁ − c₂u₂ − d₁x₁ + d₂x₂)) for 2D families, with K fixed at the
/// centre of Q·E₂. `weight` replaces the constructed F (negative controls).
/// Throws InvalidExponent, InvalidParams, SingularOnDomain.
WeightedCompositionOperator assemble(const Diagonalization& source, const Diagonalization& target, MappingSpec tau,
                                     double p, int sign, const DomainSpec& E2,
                                     std::optional<ScalarField> weight = std::nullopt);

ScalarField apply(const WeightedCompositionOperator& T, const ScalarField& f);

/// E₁ as the image of E₂ under the overall map: an affine image when the map
/// is affine, a mapped image otherwise.
DomainSpec image_of(const WeightedCompositionOperator& T, const DomainSpec& E2);

struct PdeMappingReport {
  double max_residual = 0.0;           // max |D_B(Tf)(x)|
  double max_relative_residual = 0.0;  // max |D_B(Tf)(x)| / (1 + term scale)
  double tolerance = 0.0;
  std::size_t points = 0;
  std::size_t solutions = 0;
  std::vector<double> per_solution;    // max relative residual per solution
  bool passed = false;
};

PdeMappingReport certify_pde_mapping(const WeightedCompositionOperator& T, const OperatorSpec& specB,
                                     const SolutionSet& S, const DomainSpec& E2, double tol,
                                     std::size_t points = 200, std::uint64_t seed = 1);

struct NormPair {
  std::string label;
  NormEstimate source;  // ‖f‖ on E₁
  NormEstimate image;   // ‖Tf‖ on E₂
  double difference = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct IsometryReport {
  std::vector<NormPair> pairs;
  bool exact = false;  // affine map with deterministic quadrature on both sides
  std::string mode;    // "exact" or "statistical"
  bool passed = false;
};

/// |‖Tf‖_{L^p(E₂)} − ‖f‖_{L^p(E₁)}| within 3 combined standard errors
/// (plus a 1e-12 relative floor for roundoff).
IsometryReport certify_isometry(const WeightedCompositionOperator& T, const SolutionSet& S, const DomainSpec& E1,
                                const DomainSpec& E2, const QuadratureSpec& quad);

struct CoincidenceReport {
  double forward = 0.0;   // share of E₂ samples mapped into E₁
  double backward = 0.0;  // share of E₁ samples whose preimage lies in E₂
  std::size_t samples = 0;
  bool passed = false;
};

/// Sampling check that E₁ is the image of E₂ under the overall map (99.9% both ways).
CoincidenceReport validate_coincidence(const WeightedCompositionOperator& T, const DomainSpec& E1,
                                       const DomainSpec& E2, std::size_t samples = 10000, std::uint64_t seed = 11);

struct WeightCheck {
  double max_weight_error = 0.0;       // max | |F|^p / |τ′| − 1 |
  std::optional<double> max_conformal_error;  // max | C / |τ′|^{2/n} − 1 |, absent if τ fails the test somewhere
  std::size_t points = 0;
};

/// |F|^p against |τ′| and JᵀI_ℓJ against |τ′|^{2/n}·I_ℓ on Q·E₂.
WeightCheck check_weight(const WeightedCompositionOperator& T, const DomainSpec& E2, std::size_t points = 100,
                         std::uint64_t seed = 5);

}  // namespace lpiso
