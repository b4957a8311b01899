#pragma once

#include "lpiso/geometry.hpp"
#include "lpiso/linalg.hpp"

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>

namespace lpiso {

using Rng = std::mt19937_64;

class DomainSpec;

struct BoxDomain {
  Vector lo, hi;
};

struct BallDomain {
  Vector center;
  double radius = 1.0;
};

/// {A·x + shift : x ∈ base}.
struct AffineImageDomain {
  std::shared_ptr<const DomainSpec> base;
  Matrix A;
  Vector shift;
  Matrix A_inv;
};

/// {τ(x) : x ∈ base}; membership through τ's closed-form inverse, sampling by
/// rejection from a padded bounding box.
struct MappedImageDomain {
  std::shared_ptr<const DomainSpec> base;
  MappingSpec tau;
  Vector box_lo, box_hi;
};

/// Bounded domain with membership, uniform sampling and an optional margin
/// kept clear of singular sets.
class DomainSpec {
 public:
  static DomainSpec box(Vector lo, Vector hi);
  static DomainSpec ball(Vector center, double radius);
  static DomainSpec affine_image(const DomainSpec& base, Matrix A, Vector shift);
  static DomainSpec mapped_image(const DomainSpec& base, MappingSpec tau, std::uint64_t seed = 7);

  int dim() const;
  bool contains(const Vector& x) const;

  /// Draws one point from the proposal region. Returns false when the point
  /// falls outside the domain (only for rejection-sampled shapes).
  bool draw(Rng& rng, Vector& out) const;
  /// Volume of the proposal region; equals the domain volume when
  /// `exact_sampling()` is true.
  double proposal_volume() const;
  bool exact_sampling() const;

  /// Draws until a point inside the domain is found.
  Vector sample(Rng& rng) const;

  Vector center() const;
  double diameter() const;

  std::optional<double> margin() const noexcept { return margin_; }
  void set_margin(double eps) { margin_ = eps; }
  /// Explicit margin, or 1e-3·diameter.
  double effective_margin() const;

  template <class V>
  bool is() const { return std::holds_alternative<V>(shape_); }
  template <class V>
  const V& as() const { return std::get<V>(shape_); }

  std::string describe() const;

 private:
  using Shape = std::variant<BoxDomain, BallDomain, AffineImageDomain, MappedImageDomain>;
  explicit DomainSpec(Shape s) : shape_(std::move(s)) {}

  Shape shape_;
  std::optional<double> margin_;
};

}  // namespace lpiso
