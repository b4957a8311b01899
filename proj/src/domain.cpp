#include "lpiso/domain.hpp"

#include "lpiso/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace lpiso {

DomainSpec DomainSpec::box(Vector lo, Vector hi) {
  if (lo.size() != hi.size() || lo.size() < 1) throw Error(ErrorCode::InvalidParams, "box corners disagree in dimension");
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (!(std::isfinite(lo(i)) && std::isfinite(hi(i)) && lo(i) < hi(i))) {
      throw Error(ErrorCode::InvalidParams, "box must have lo < hi in every coordinate");
    }
  }
  return DomainSpec(BoxDomain{std::move(lo), std::move(hi)});
}

DomainSpec DomainSpec::ball(Vector center, double radius) {
  if (!(std::isfinite(radius) && radius > 0) || center.size() < 1 || !center.allFinite()) {
    throw Error(ErrorCode::InvalidParams, "ball needs a finite center and a positive radius");
  }
  return DomainSpec(BallDomain{std::move(center), radius});
}

DomainSpec DomainSpec::affine_image(const DomainSpec& base, Matrix A, Vector shift) {
  const int n = base.dim();
  if (A.rows() != n || A.cols() != n || shift.size() != n) {
    throw Error(ErrorCode::InvalidParams, "affine image dimensions disagree");
  }
  Eigen::FullPivLU<Matrix> lu(A);
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularMatrix, "affine image matrix is not invertible");
  Matrix inv = lu.inverse();
  DomainSpec d(AffineImageDomain{std::make_shared<const DomainSpec>(base), std::move(A), std::move(shift), std::move(inv)});
  d.margin_ = base.margin_;
  return d;
}

DomainSpec DomainSpec::mapped_image(const DomainSpec& base, MappingSpec tau, std::uint64_t seed) {
  const int n = base.dim();
  Vector lo = Vector::Constant(n, std::numeric_limits<double>::infinity());
  Vector hi = Vector::Constant(n, -std::numeric_limits<double>::infinity());
  Rng rng(seed);
  int mapped = 0;
  for (int i = 0; i < 20000; ++i) {
    const Vector x = base.sample(rng);
    try {
      const Vector y = apply_mapping(tau, x);
      lo = lo.cwiseMin(y);
      hi = hi.cwiseMax(y);
      ++mapped;
    } catch (const Error&) {
    }
  }
  if (mapped == 0 || !lo.allFinite() || !hi.allFinite()) {
    throw Error(ErrorCode::SingularOnDomain, "mapping is undefined on the whole base domain");
  }
  const Vector pad = 0.1 * (hi - lo) + Vector::Constant(n, 1e-9);
  return DomainSpec(MappedImageDomain{std::make_shared<const DomainSpec>(base), std::move(tau), lo - pad, hi + pad});
}

int DomainSpec::dim() const {
  return std::visit(
      [](const auto& s) -> int {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BoxDomain>) return static_cast<int>(s.lo.size());
        else if constexpr (std::is_same_v<S, BallDomain>) return static_cast<int>(s.center.size());
        else return s.base->dim();
      },
      shape_);
}

bool DomainSpec::contains(const Vector& x) const {
  if (x.size() != dim()) return false;
  return std::visit(
      [&](const auto& s) -> bool {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BoxDomain>) {
          return (x.array() > s.lo.array()).all() && (x.array() < s.hi.array()).all();
        } else if constexpr (std::is_same_v<S, BallDomain>) {
          return (x - s.center).squaredNorm() < s.radius * s.radius;
        } else if constexpr (std::is_same_v<S, AffineImageDomain>) {
          return s.base->contains(s.A_inv * (x - s.shift));
        } else {
          if ((x.array() < s.box_lo.array()).any() || (x.array() > s.box_hi.array()).any()) return false;
          try {
            const Vector pre = inverse_mapping(s.tau, x);
            if (!s.base->contains(pre)) return false;
            const Vector back = apply_mapping(s.tau, pre);
            return (back - x).norm() <= 1e-8 * (1.0 + x.norm());
          } catch (const Error&) {
            return false;
          }
        }
      },
      shape_);
}

bool DomainSpec::draw(Rng& rng, Vector& out) const {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  return std::visit(
      [&](const auto& s) -> bool {
        using S = std::decay_t<decltype(s)>;
        const auto n = dim();
        if constexpr (std::is_same_v<S, BoxDomain>) {
          out.resize(n);
          for (int i = 0; i < n; ++i) out(i) = s.lo(i) + (s.hi(i) - s.lo(i)) * uni(rng);
          return true;
        } else if constexpr (std::is_same_v<S, BallDomain>) {
          std::normal_distribution<double> gauss(0.0, 1.0);
          Vector dir(n);
          double norm = 0.0;
          do {
            for (int i = 0; i < n; ++i) dir(i) = gauss(rng);
            norm = dir.norm();
          } while (norm == 0.0);
          const double r = s.radius * std::pow(uni(rng), 1.0 / n);
          out = s.center + (r / norm) * dir;
          return true;
        } else if constexpr (std::is_same_v<S, AffineImageDomain>) {
          Vector b;
          const bool in = s.base->draw(rng, b);
          out = s.A * b + s.shift;
          return in;
        } else {
          out.resize(n);
          for (int i = 0; i < n; ++i) out(i) = s.box_lo(i) + (s.box_hi(i) - s.box_lo(i)) * uni(rng);
          return contains(out);
        }
      },
      shape_);
}

double DomainSpec::proposal_volume() const {
  return std::visit(
      [&](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BoxDomain>) {
          return (s.hi - s.lo).prod();
        } else if constexpr (std::is_same_v<S, BallDomain>) {
          const double n = dim();
          return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0) * std::pow(s.radius, n);
        } else if constexpr (std::is_same_v<S, AffineImageDomain>) {
          return std::abs(s.A.determinant()) * s.base->proposal_volume();
        } else {
          return (s.box_hi - s.box_lo).prod();
        }
      },
      shape_);
}

bool DomainSpec::exact_sampling() const {
  if (is<BoxDomain>() || is<BallDomain>()) return true;
  if (is<AffineImageDomain>()) return as<AffineImageDomain>().base->exact_sampling();
  return false;
}

Vector DomainSpec::sample(Rng& rng) const {
  Vector x;
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    if (draw(rng, x)) return x;
  }
  throw Error(ErrorCode::DomainMismatch, "could not draw a point inside " + describe());
}

Vector DomainSpec::center() const {
  return std::visit(
      [&](const auto& s) -> Vector {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BoxDomain>) return (s.lo + s.hi) / 2.0;
        else if constexpr (std::is_same_v<S, BallDomain>) return s.center;
        else if constexpr (std::is_same_v<S, AffineImageDomain>) return s.A * s.base->center() + s.shift;
        else return apply_mapping(s.tau, s.base->center());
      },
      shape_);
}

double DomainSpec::diameter() const {
  return std::visit(
      [&](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BoxDomain>) return (s.hi - s.lo).norm();
        else if constexpr (std::is_same_v<S, BallDomain>) return 2.0 * s.radius;
        else if constexpr (std::is_same_v<S, AffineImageDomain>) {
          return s.A.jacobiSvd().singularValues()(0) * s.base->diameter();
        } else {
          return (s.box_hi - s.box_lo).norm() / 1.2;
        }
      },
      shape_);
}

double DomainSpec::effective_margin() const { return margin_ ? *margin_ : 1e-3 * diameter(); }

std::string DomainSpec::describe() const {
  std::ostringstream os;
  const Eigen::IOFormat fmt(Eigen::StreamPrecision, Eigen::DontAlignCols, ", ", ", ", "", "", "[", "]");
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BoxDomain>) {
          os << "box(lo=" << s.lo.transpose().format(fmt) << ", hi=" << s.hi.transpose().format(fmt) << ")";
        } else if constexpr (std::is_same_v<S, BallDomain>) {
          os << "ball(center=" << s.center.transpose().format(fmt) << ", r=" << s.radius << ")";
        } else if constexpr (std::is_same_v<S, AffineImageDomain>) {
          os << "affine_image(" << s.base->describe() << ")";
        } else {
          os << "image(" << s.base->describe() << " under " << s.tau.describe() << ")";
        }
      },
      shape_);
  return os.str();
}

}  // namespace lpiso
