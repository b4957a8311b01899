#include <doctest.h>

#include "lpiso/error.hpp"
#include "lpiso/geometry.hpp"

#include <random>

using namespace lpiso;

namespace {

// Aligned-drift family written out by hand, logarithm of γe^{…} − 1,
// kept in the original x₁, x₂ coordinates; s selects the reading of ±.
Vector handwritten_f1a(double s, double p, double c, double d, double g, double k, double a, double b, const Vector& x) {
  const double L = std::log(std::abs(g * std::exp(-p * d * x(0) / 2 + s * p * d * x(1) / 2) - 1));
  return Vector{{-L / (p * c) + k * x(0) + s * k * x(1) + a, s * L / (p * c) + s * k * x(0) + k * x(1) + b}};
}

TwoDFamily member(FamilyCase fc, FamilyVariant v, int s) {
  TwoDFamily f;
  f.family = fc;
  f.variant = v;
  f.sign = s;
  f.p = 3;
  f.c = 0.8;
  f.d = 1.1;
  f.gamma = 0.6;
  f.delta = 2.5;
  f.k = 0.7;
  f.alpha = 0.2;
  f.beta = -0.3;
  return f;
}

}  // namespace

TEST_CASE("pseudo-norm examples") {
  CHECK(pseudo_norm_sq(Vector{{3, 4}}, 1) == -7);
  CHECK(pseudo_norm_sq(Vector{{1, 1}}, 1) == 0);
  CHECK(pseudo_norm_sq(Vector{{1, 2, 2}}, 3) == 9);
}

TEST_CASE("inversion examples") {
  const MappingSpec e = Inversion{Vector::Zero(2), 2};
  CHECK((apply_mapping(e, Vector{{2, 0}}) - Vector{{0.5, 0}}).norm() < 1e-15);
  const MappingSpec h = Inversion{Vector::Zero(2), 1};
  CHECK((apply_mapping(h, Vector{{3, 4}}) - Vector{{-3.0 / 7, -4.0 / 7}}).norm() < 1e-15);
  try {
    apply_mapping(h, Vector{{2, 2}});
    FAIL("expected SingularPoint");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::SingularPoint);
  }
}

TEST_CASE("jacobian examples") {
  const auto id = jacobian(Similarity::identity(3, 3), Vector{{0.1, 0.2, 0.3}});
  CHECK((id.J - Matrix::Identity(3, 3)).norm() == 0);
  CHECK(id.det == 1);
  CHECK(jacobian(Similarity::homothety(3, 3, 1.7), Vector{{1, 2, 3}}).det == doctest::Approx(1.7 * 1.7 * 1.7));
  CHECK(std::abs(jacobian(Inversion{Vector::Zero(2), 2}, Vector{{2, 0}}).det) == doctest::Approx(1.0 / 16));
}

TEST_CASE("inversion |det| against |q|^-n") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int ell = 0; ell <= 3; ++ell) {
    const Vector z0{{0.1, -0.2, 0.3}};
    const MappingSpec inv = Inversion{z0, ell};
    for (int k = 0; k < 20; ++k) {
      const Vector x{{u(rng), u(rng), u(rng)}};
      const double q = pseudo_norm_sq(x - z0, ell);
      if (std::abs(q) < 0.1) continue;
      CHECK(std::abs(jacobian(inv, x).det) == doctest::Approx(std::pow(std::abs(q), -3)).epsilon(1e-8));
      const auto C = conformality_test(inv, x, ell);
      REQUIRE(C.has_value());
      CHECK(std::abs(*C) == doctest::Approx(std::pow(std::abs(jacobian(inv, x).det), 2.0 / 3)).epsilon(1e-6));
      CHECK((inverse_mapping(inv, apply_mapping(inv, x)) - x).norm() < 1e-12);
    }
  }
}

TEST_CASE("conformality examples") {
  CHECK(conformality_test(Similarity::identity(2, 2), Vector{{0.3, 0.4}}, 2).value() == doctest::Approx(1));
  const MappingSpec aniso = Affine{Matrix{{1, 0}, {0, 2}}, Vector::Zero(2)};
  CHECK_FALSE(conformality_test(aniso, Vector{{0.3, 0.4}}, 2).has_value());
  // Explicit JᵀJ for z ↦ z/|z|²: J = (I − 2zzᵀ/|z|²)/|z|², so JᵀJ = I/|z|⁴.
  const Vector x{{0.7, -1.1}};
  CHECK(conformality_test(Inversion{Vector::Zero(2), 2}, x, 2).value() ==
        doctest::Approx(std::pow(x.squaredNorm(), -2)));
}

TEST_CASE("similarities are conformal with C = t^2") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int ell = 0; ell <= 3; ++ell) {
    Matrix Q = ell_rotation(3, ell, 0, 1, 0.4) * ell_rotation(3, ell, 1, 2, -0.9) * ell_rotation(3, ell, 0, 2, 0.3);
    const auto sim = Similarity::make(-1.3, Q, Vector{{0.5, 0.1, -2}}, ell);
    const Matrix I = signature_matrix(3, ell);
    CHECK((Q.transpose() * I * Q - I).cwiseAbs().maxCoeff() <= 1e-10);
    for (int k = 0; k < 50; ++k) {
      const Vector x{{u(rng), u(rng), u(rng)}};
      const auto C = conformality_test(sim, x, ell);
      REQUIRE(C.has_value());
      CHECK(*C == doctest::Approx(1.69));
    }
  }
  CHECK_THROWS_AS(Similarity::make(1.0, Matrix{{1, 0}, {0, 2}}, Vector::Zero(2), 2), Error);
  CHECK_THROWS_AS(Similarity::make(0.0, Matrix::Identity(2, 2), Vector::Zero(2), 2), Error);
}

TEST_CASE("composition jacobian is the product of stage jacobians") {
  const MappingSpec s1 = Similarity::make(2.0, ell_rotation(3, 3, 0, 2, 0.5), Vector{{1, 0, 0}}, 3);
  const MappingSpec s2 = Inversion{Vector{{0.2, 0.2, 0.2}}, 3};
  const MappingSpec comp = Composition{{s1, s2}};
  const Vector x{{0.3, -0.4, 0.9}};
  const Matrix J = jacobian(comp, x).J;
  const Matrix chain = jacobian(s2, apply_mapping(s1, x)).J * jacobian(s1, x).J;
  CHECK((J - chain).cwiseAbs().maxCoeff() <= 1e-8 * (1 + chain.norm()));
  CHECK(abs_jacobian_closed_form(comp, x).value() == doctest::Approx(std::abs(jacobian(comp, x).det)).epsilon(1e-10));
  CHECK((inverse_mapping(comp, apply_mapping(comp, x)) - x).norm() < 1e-12);
}

TEST_CASE("F1a matches the hand-written formula") {
  for (int s : {1, -1}) {
    TwoDFamily f;
    f.family = FamilyCase::F1;
    f.variant = FamilyVariant::A;
    f.sign = s;
    f.p = 3;
    f.c = 1;
    f.d = 1;
    f.gamma = 1;
    f.k = 1;
    for (const Vector& x : {Vector{{0.5, -0.5}}, Vector{{0.2, -0.6}}, Vector{{-0.4, 0.1}}}) {
      if (std::abs(std::exp(-1.5 * (x(0) - s * x(1))) - 1) < 1e-3) continue;
      const Vector expect = handwritten_f1a(s, 3, 1, 1, 1, 1, 0, 0, x);
      CHECK((apply_mapping(f, x) - expect).norm() <= 1e-12);
    }
  }
}

TEST_CASE("family members satisfy their first-order system and invert") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (auto fc : {FamilyCase::F1, FamilyCase::F2, FamilyCase::F3, FamilyCase::F4}) {
    for (auto var : {FamilyVariant::A, FamilyVariant::B}) {
      for (int s : {1, -1}) {
        const TwoDFamily f = member(fc, var, s);
        CAPTURE(f.id());
        CAPTURE(s);
        const double sigma = var == FamilyVariant::A ? 1.0 : -1.0;
        for (int k = 0; k < 10; ++k) {
          const Vector x{{u(rng), u(rng)}};
          if (guard_quantity(f, x) < 1e-3) continue;
          const MappingSpec cal = calibrate_branches(f, x);
          const Matrix J = jacobian(cal, x).J;
          CHECK(std::abs(J(0, 0) - sigma * J(1, 1)) <= 1e-8);
          CHECK(std::abs(J(0, 1) - sigma * J(1, 0)) <= 1e-8);
          CHECK(conformality_test(cal, x, 1).has_value());
          CHECK((inverse_mapping(cal, apply_mapping(cal, x)) - x).norm() <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("family parameter constraints") {
  TwoDFamily f = member(FamilyCase::F3, FamilyVariant::A, 1);
  f.gamma = 0;
  f.k = 0;
  CHECK_THROWS_AS(check_family_params(f), Error);
  f.gamma = 1;
  CHECK_NOTHROW(check_family_params(f));
  TwoDFamily g = member(FamilyCase::F1, FamilyVariant::B, 1);
  g.c = 0;
  CHECK_THROWS_AS(check_family_params(g), Error);
  CHECK(member(FamilyCase::F2, FamilyVariant::B, -1).id() == "F2b");
}
