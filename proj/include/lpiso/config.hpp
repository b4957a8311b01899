#pragma once

#include "lpiso/domain.hpp"
#include "lpiso/geometry.hpp"
#include "lpiso/linalg.hpp"
#include "lpiso/quadrature.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lpiso {

struct DomainConfig {
  enum class Kind { Box, Ball, Affine, WitnessImage };
  Kind kind = Kind::Box;
  Vector lo, hi;        // box
  Vector center;        // ball
  double radius = 0.0;  // ball
  Matrix matrix;        // affine
  Vector shift;         // affine
  std::shared_ptr<DomainConfig> base;  // affine
  std::optional<double> margin;

  /// Not valid for WitnessImage, which needs the operator.
  DomainSpec build() const;
};

struct MappingConfig {
  enum class Kind { Similarity, Inversion, Composition, Family };
  Kind kind = Kind::Similarity;

  // similarity
  double t = 1.0;
  std::optional<Matrix> Q;
  struct Rotation {
    int i = 0, j = 1;
    double angle = 0.0;
  };
  std::vector<Rotation> rotations;
  std::optional<Vector> v;

  // inversion
  Vector center;

  // composition
  std::vector<MappingConfig> stages;

  // family
  FamilyCase family = FamilyCase::F1;
  FamilyVariant variant = FamilyVariant::A;
  std::optional<int> branch;  // +1 upper, −1 lower
  std::optional<double> c, d;
  double gamma = 0.0, delta = 0.0, k = 0.0, alpha = 0.0, beta = 0.0;
};

/// Family defaults taken from the classification when absent from the config.
struct FamilyDefaults {
  double c = 0.0;
  double d = 0.0;
  int sign = 1;
};

MappingSpec build_mapping(const MappingConfig& cfg, int n, int ell, double p,
                          const std::optional<FamilyDefaults>& defaults = std::nullopt);

struct WitnessConfig {
  MappingConfig mapping;
  int sign = 1;
  bool unit_weight = false;
};

struct GridConfig {
  Vector lo, hi;
  std::vector<int> points;
};

struct ProblemConfig {
  int n = 0;
  Matrix A;
  Vector a;
  std::optional<Matrix> B;
  std::optional<Vector> b;
  std::optional<DomainConfig> E1, E2;
  std::optional<double> p;
  QuadratureSpec quadrature;
  std::uint64_t seed = 1;
  std::size_t solution_budget = 8;
  double pde_tolerance = 1e-7;
  std::size_t pde_points = 200;
  std::optional<WitnessConfig> witness;
  std::optional<GridConfig> grid;

  nlohmann::json source;  // the parsed document, for hashing

  void set_seed(std::uint64_t s) {
    seed = s;
    quadrature.seed = s;
  }
};

/// Throws Error(ConfigError) with the offending key path on malformed input.
ProblemConfig parse_config(const nlohmann::json& doc);
ProblemConfig parse_config_text(const std::string& text);
ProblemConfig load_config(const std::string& path);

/// FNV-1a over the canonical serialization.
std::string config_hash(const nlohmann::json& doc);

}  // namespace lpiso
