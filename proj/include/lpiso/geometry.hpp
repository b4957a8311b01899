#pragma once

#include "lpiso/jets.hpp"
#include "lpiso/linalg.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lpiso {

/// Points within this distance of a singular set (null cone, log zero) are refused.
inline constexpr double kGuardEpsilon = 1e-9;

double pseudo_norm_sq(std::span<const double> z, int ell);
inline double pseudo_norm_sq(const Vector& z, int ell) {
  return pseudo_norm_sq(std::span<const double>(z.data(), static_cast<std::size_t>(z.size())), ell);
}

/// x ↦ t·Q·x + v with QᵀI_ℓQ = I_ℓ.
struct Similarity {
  double t = 1.0;
  Matrix Q;
  Vector v;
  int ell = 0;

  static Similarity make(double t, Matrix Q, Vector v, int ell);
  static Similarity identity(int n, int ell);
  static Similarity translation(Vector v, int ell);
  static Similarity homothety(int n, int ell, double t);
};

/// z ↦ (z − z₀)/‖z − z₀‖_ℓ² + z₀.
struct Inversion {
  Vector center;
  int ell = 0;
};

/// The mapping families of the n = 2, ℓ = 1 null-drift case.
///
/// Case F1: c₁ = ±c₂ = c ≠ 0, d₁ = ±d₂ = d ≠ 0 (aligned).
/// Case F2: c₁ = ±c₂ = c ≠ 0, d₁ = ∓d₂ = d ≠ 0 (anti-aligned).
/// Case F3: c = 0, d₁ = ±d₂ = d ≠ 0.
/// Case F4: c₁ = ±c₂ = c ≠ 0, d = 0.
/// Variant A is the solution with ∂u₁/∂x₁ = +∂u₂/∂x₂, variant B the one with
/// the minus sign. `sign` selects the upper (+1) or lower (−1) reading of ±.
enum class FamilyCase { F1, F2, F3, F4 };
enum class FamilyVariant { A, B };

struct TwoDFamily {
  FamilyCase family = FamilyCase::F1;
  FamilyVariant variant = FamilyVariant::A;
  int sign = 1;
  double p = 1.0;
  double c = 0.0;
  double d = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double k = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  /// Sign of the ln|·| argument on the working domain; selects the inverse branch.
  int log_branch = 1;

  bool uses_c() const { return family != FamilyCase::F3; }
  bool uses_d() const { return family != FamilyCase::F4; }
  bool has_gamma() const;
  bool has_k() const;
  bool has_delta() const;
  bool has_log() const;

  /// Drift vectors (c₁, c₂) and (d₁, d₂) this member is built for.
  Vector source_drift() const;
  Vector target_drift() const;

  std::string id() const;  // e.g. "F1a"
};

/// Throws InvalidParams when the family's parameter constraints are violated.
void check_family_params(const TwoDFamily& f);

std::optional<FamilyCase> parse_family_case(std::string_view id);
std::string_view to_string(FamilyCase c);

/// General invertible affine map x ↦ A·x + shift; used for coordinate changes.
struct Affine {
  Matrix A;
  Vector shift;
};

struct MappingSpec;

/// Stages applied first to last.
struct Composition {
  std::vector<MappingSpec> stages;
};

struct MappingSpec {
  std::variant<Similarity, Inversion, TwoDFamily, Affine, Composition> v;

  MappingSpec() = default;
  MappingSpec(Similarity s) : v(std::move(s)) {}
  MappingSpec(Inversion s) : v(std::move(s)) {}
  MappingSpec(TwoDFamily s) : v(std::move(s)) {}
  MappingSpec(Affine s) : v(std::move(s)) {}
  MappingSpec(Composition s) : v(std::move(s)) {}

  template <class V>
  bool is() const { return std::holds_alternative<V>(v); }
  template <class V>
  const V& as() const { return std::get<V>(v); }

  std::string describe() const;
};

/// Circular rotation in the (i, j) plane when both indices lie on the same
/// side of ℓ, hyperbolic boost otherwise. The result satisfies QᵀI_ℓQ = I_ℓ.
Matrix ell_rotation(int n, int ell, int i, int j, double angle);

template <class T>
std::vector<T> apply_mapping(const MappingSpec& tau, std::span<const T> x);
extern template std::vector<double> apply_mapping<double>(const MappingSpec&, std::span<const double>);
extern template std::vector<Jet2> apply_mapping<Jet2>(const MappingSpec&, std::span<const Jet2>);

Vector apply_mapping(const MappingSpec& tau, const Vector& x);

/// Closed-form inverse. Throws SingularPoint when y has no preimage on the
/// recorded branch.
Vector inverse_mapping(const MappingSpec& tau, const Vector& y);

/// Smallest absolute guard quantity met while evaluating τ at x (null-cone
/// value for inversions, ln argument for families); +inf when none.
double guard_quantity(const MappingSpec& tau, const Vector& x);

/// Returns a copy whose 2D-family members record the ln-argument sign at x.
MappingSpec calibrate_branches(const MappingSpec& tau, const Vector& x);

/// Closed-form |τ′(x)| where one exists (similarity, inversion, affine and
/// compositions of those); empty for 2D families.
std::optional<double> abs_jacobian_closed_form(const MappingSpec& tau, const Vector& x);

bool is_affine(const MappingSpec& tau);

struct JacobianReport {
  Matrix J;
  double det = 0.0;
  std::optional<double> conformal_factor;
};

JacobianReport jacobian(const MappingSpec& tau, const Vector& x);

/// C(x) when JᵀI_ℓJ = C·I_ℓ within 1e-8·(1+|C|), empty otherwise.
std::optional<double> conformality_test(const MappingSpec& tau, const Vector& x, int ell);

}  // namespace lpiso
