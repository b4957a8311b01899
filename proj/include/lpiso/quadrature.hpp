#pragma once

#include "lpiso/domain.hpp"
#include "lpiso/field.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lpiso {

enum class QuadratureMethod { Gauss, MonteCarlo };

std::string_view to_string(QuadratureMethod m);

struct QuadratureSpec {
  QuadratureMethod method = QuadratureMethod::MonteCarlo;
  int order = 32;                  // Gauss–Legendre nodes per axis
  std::size_t points = 100000;     // Monte Carlo samples
  std::uint64_t seed = 1;
};

struct NormEstimate {
  double value = 0.0;      // ‖f‖_p
  double std_error = 0.0;  // MC standard error, or |I_N − I_{N/2}| mapped to the norm
  double integral = 0.0;   // ∫|f|^p
  QuadratureMethod method = QuadratureMethod::MonteCarlo;
  std::size_t samples = 0;
};

/// Nodes and weights on [−1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int order);

/// Sum in a fixed binary tree so the result does not depend on how the terms
/// were produced.
double pairwise_sum(std::span<const double> v);

/// True when E can be integrated with tensor Gauss–Legendre (a box or an affine
/// image of one).
bool gauss_eligible(const DomainSpec& E, int order);

NormEstimate lp_norm(const ScalarField& f, const DomainSpec& E, double p, const QuadratureSpec& quad);

/// Norms of several fields on one shared point schedule.
std::vector<NormEstimate> lp_norms(std::span<const ScalarField> fs, const DomainSpec& E, double p,
                                   const QuadratureSpec& quad);

}  // namespace lpiso
