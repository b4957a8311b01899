#pragma once

#include "lpiso/domain.hpp"
#include "lpiso/field.hpp"
#include "lpiso/linalg.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lpiso {

/// H = D_ℓ + Σ α_i ∂_i.
struct ReducedOperator {
  int n = 0;
  int ell = 0;
  Vector alpha;

  OperatorSpec spec() const { return {signature_matrix(n, ell), alpha}; }
  /// ε_i = +1 for i < ℓ, −1 otherwise.
  double epsilon(int i) const { return i < ell ? 1.0 : -1.0; }
};

/// Result of moving D_A to diagonal form through y = P·x with P = Mᵀ.
struct Reduction {
  Diagonalization diag;
  Matrix P;
  ReducedOperator op;
  DomainSpec domain;  // P·E
};

Reduction reduce(const SymMatrix& A, const Vector& a, const DomainSpec& E, double p);

/// |Σ ε_i s_i² + α_i s_i|.
double characteristic_check(std::span<const std::complex<double>> s, const ReducedOperator& H);

enum class SolutionKind { Constant, Linear, Exponential, Polynomial };

struct Solution {
  ScalarField field;
  SolutionKind kind = SolutionKind::Constant;
  int degree = 0;                          // polynomial degree (0 for exponentials)
  std::vector<std::complex<double>> s;     // frequency, exponentials only
  std::string label;
};

struct SolutionSet {
  std::vector<Solution> members;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return members.size(); }
  std::vector<ScalarField> fields() const;
};

/// Up to `budget` solutions of Hf = 0, in a fixed order: the constant, linear
/// forms a·x with (α, a) = 0, exponentials exp(−α_k x_k/ε_k), for α = 0 the
/// homogeneous harmonic-type polynomials of degree 2 and 3 plus canonical
/// exponentials, then exponentials at seeded points of the characteristic
/// variety. Polynomials and exponentials are centred on E.
SolutionSet sample_solutions(const ReducedOperator& H, const DomainSpec& E, std::size_t budget,
                             std::uint64_t seed = 1);

/// f ↦ f(P·x): solutions of H on P·E become solutions of D_A on E.
SolutionSet pull_back(const SolutionSet& set, const Matrix& P);

}  // namespace lpiso
