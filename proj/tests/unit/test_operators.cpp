#include <doctest.h>

#include "lpiso/error.hpp"
#include "lpiso/operators.hpp"

#include <cmath>

using namespace lpiso;

namespace {

Diagonalization diag_of(Matrix m) { return diagonalize(SymMatrix(std::move(m))); }

QuadratureSpec gauss(int order) {
  QuadratureSpec q;
  q.method = QuadratureMethod::Gauss;
  q.order = order;
  return q;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidParams;
}

TwoDFamily f1(double gamma, double k) {
  TwoDFamily f;
  f.family = FamilyCase::F1;
  f.variant = FamilyVariant::A;
  f.sign = 1;
  f.p = 3;
  f.c = 1;
  f.d = 1;
  f.gamma = gamma;
  f.k = k;
  return f;
}

}  // namespace

TEST_CASE("exponent gate") {
  CHECK_NOTHROW(check_exponent(3));
  CHECK_NOTHROW(check_exponent(2.5));
  CHECK_NOTHROW(check_exponent(6, 3));
  CHECK(code_of([] { check_exponent(4); }) == ErrorCode::InvalidExponent);
  CHECK(code_of([] { check_exponent(2, 2); }) == ErrorCode::InvalidExponent);
  CHECK(code_of([] { check_exponent(6, 4); }) == ErrorCode::InvalidExponent);
  CHECK(code_of([] { check_exponent(0); }) == ErrorCode::InvalidExponent);
  CHECK(code_of([] { check_exponent(-1); }) == ErrorCode::InvalidExponent);
  CHECK(code_of([] { check_exponent(std::nan("")); }) == ErrorCode::InvalidExponent);
  CHECK(conformal_exponent(3) == 6);
  CHECK(conformal_exponent(4) == 4);
  CHECK(conformal_exponent(2) == 0);
}

TEST_CASE("identity witness has unit weight") {
  const auto I = diag_of(Matrix::Identity(2, 2));
  const auto E2 = DomainSpec::box(Vector{{0, 0}}, Vector{{1, 1}});
  for (int sign : {1, -1}) {
    const auto T = assemble(I, I, Similarity::identity(2, 2), 3, sign, E2);
    const auto one = apply(T, ScalarField::constant(1));
    const auto g = ScalarField::polynomial({Monomial{1, {2, 1}}});
    for (const Vector& x : {Vector{{0.2, 0.3}}, Vector{{0.9, 0.5}}}) {
      CHECK(one.value(x) == doctest::Approx(sign));
      CHECK(apply(T, g).value(x) == doctest::Approx(sign * x(0) * x(0) * x(1)));
    }
  }
}

TEST_CASE("homothety weight is |t|") {
  const auto I = diag_of(Matrix::Identity(3, 3));
  const auto E2 = DomainSpec::ball(Vector{{0, 0, 0}}, 1);
  for (double t : {2.0, -0.5}) {
    const auto T = assemble(I, I, Similarity::homothety(3, 3, t), 3, 1, E2);
    const auto one = apply(T, ScalarField::constant(1));
    CHECK(one.value(Vector{{0.1, 0.2, 0.3}}) == doctest::Approx(std::abs(t)));
    const auto wc = check_weight(T, E2);
    CHECK(wc.max_weight_error <= 1e-12);
    REQUIRE(wc.max_conformal_error.has_value());
    CHECK(*wc.max_conformal_error <= 1e-12);
  }
}

TEST_CASE("Kelvin weight and the image of x1") {
  const auto I = diag_of(Matrix::Identity(3, 3));
  const auto E2 = DomainSpec::ball(Vector{{2, 0, 0}}, 1);
  const auto T = assemble(I, I, Inversion{Vector::Zero(3), 3}, 6, 1, E2);
  const auto Tf = apply(T, ScalarField::coordinate(3, 0));
  Rng rng(1);
  const OperatorSpec lap{Matrix::Identity(3, 3), Vector::Zero(3)};
  for (int k = 0; k < 50; ++k) {
    const Vector x = E2.sample(rng);
    const double r = x.norm();
    // |F|^p = |τ′| = r^{-6}
    CHECK(std::pow(std::abs(T.overall_weight().value(x)), 6) == doctest::Approx(std::pow(r, -6)).epsilon(1e-12));
    CHECK(Tf.value(x) == doctest::Approx(x(0) / (r * r * r)).epsilon(1e-12));
    CHECK(std::abs(apply_operator(lap, Tf, x)) <= 1e-8);
  }
  const auto wc = check_weight(T, E2);
  CHECK(wc.max_weight_error <= 1e-10);
  const auto E1 = image_of(T, E2);
  CHECK(E1.contains(Vector{{2.0 / 3, 0, 0}}));
  CHECK(validate_coincidence(T, E1, E2).passed);
  CHECK(code_of([&] { assemble(I, I, Inversion{Vector::Zero(3), 3}, 6, 1, DomainSpec::ball(Vector::Zero(3), 1)); }) ==
        ErrorCode::SingularOnDomain);
}

TEST_CASE("apply is linear") {
  const auto I = diag_of(Matrix::Identity(3, 3));
  const auto E2 = DomainSpec::ball(Vector{{2, 0, 0}}, 1);
  const MappingSpec tau = Composition{{Similarity::make(1.5, ell_rotation(3, 3, 0, 1, 0.3), Vector{{0.2, 0, 0}}, 3),
                                       Inversion{Vector::Zero(3), 3}}};
  const auto T = assemble(I, I, tau, 3, -1, E2);
  const auto f = ScalarField::polynomial({Monomial{1, {1, 1, 0}}});
  const auto g = ScalarField::exp_linear({{1, 0}, {0, 1}, {0, 0}}, ComplexPart::Re);
  const auto lhs = apply(T, f + 2.0 * g);
  const auto rhs = apply(T, f) + 2.0 * apply(T, g);
  Rng rng(3);
  for (int k = 0; k < 30; ++k) {
    const Vector x = E2.sample(rng);
    CHECK(lhs.value(x) == doctest::Approx(rhs.value(x)).epsilon(1e-12));
  }
  CHECK(check_weight(T, E2).max_weight_error <= 1e-10);
}

TEST_CASE("PDE mapping: matched weight passes, unit weight fails") {
  const auto I = diag_of(Matrix::Identity(3, 3));
  const auto E2 = DomainSpec::ball(Vector{{2, 0, 0}}, 1);
  const ReducedOperator H{3, 3, Vector::Zero(3)};
  const OperatorSpec lap{Matrix::Identity(3, 3), Vector::Zero(3)};
  const auto good = assemble(I, I, Inversion{Vector::Zero(3), 3}, 6, 1, E2);
  const auto S = sample_solutions(H, image_of(good, E2), 10, 1);
  const auto ok = certify_pde_mapping(good, lap, S, E2, 1e-8);
  CHECK(ok.passed);
  CHECK(ok.solutions == S.size());
  CHECK(ok.max_relative_residual <= 1e-8);

  const auto bad = assemble(I, I, Inversion{Vector::Zero(3), 3}, 6, 1, E2, ScalarField::constant(1));
  CHECK(bad.custom_weight);
  const auto no = certify_pde_mapping(bad, lap, S, E2, 1e-8);
  CHECK_FALSE(no.passed);
  CHECK(no.max_relative_residual > 1e-3);

  const auto sim = assemble(I, I, Similarity::make(0.7, ell_rotation(3, 3, 0, 2, 1.1), Vector{{1, 2, 3}}, 3), 3, 1, E2);
  CHECK(certify_pde_mapping(sim, lap, sample_solutions(H, image_of(sim, E2), 10, 2), E2, 1e-8).passed);
}

TEST_CASE("translation between boxes is an exact isometry") {
  const auto I = diag_of(Matrix::Identity(2, 2));
  const auto E2 = DomainSpec::box(Vector{{0, 0}}, Vector{{1, 1}});
  const auto T = assemble(I, I, Similarity::translation(Vector{{2, 3}}, 2), 3, 1, E2);
  const auto E1 = DomainSpec::box(Vector{{2, 3}}, Vector{{3, 4}});
  CHECK(validate_coincidence(T, E1, E2).passed);
  const auto S = sample_solutions(ReducedOperator{2, 2, Vector::Zero(2)}, E1, 8, 1);
  const auto rep = certify_isometry(T, S, E1, E2, gauss(24));
  CHECK(rep.exact);
  CHECK(rep.mode == "exact");
  CHECK(rep.passed);
  for (const auto& pr : rep.pairs) CHECK(pr.difference <= 1e-10 * (1 + pr.source.value));

  // wrong E1: coincidence must fail
  CHECK_FALSE(validate_coincidence(T, DomainSpec::box(Vector{{2, 3}}, Vector{{3.5, 4}}), E2).passed);
}

TEST_CASE("2D family F1a operator") {
  const auto D = diag_of(Matrix{{1, 0}, {0, -1}});
  const auto E2 = DomainSpec::box(Vector{{0.3, -0.7}}, Vector{{0.7, -0.3}});
  const auto T = assemble(D, D, f1(1, 1), 3, 1, E2);
  const auto wc = check_weight(T, E2);
  CHECK(wc.max_weight_error <= 1e-6);
  REQUIRE(wc.max_conformal_error.has_value());
  CHECK(*wc.max_conformal_error <= 1e-6);
  const auto E1 = image_of(T, E2);
  const auto S = sample_solutions(ReducedOperator{2, 1, Vector{{1, 1}}}, E1, 6, 1);
  const OperatorSpec B{Matrix{{1, 0}, {0, -1}}, Vector{{1, 1}}};
  CHECK(certify_pde_mapping(T, B, S, E2, 1e-7).passed);

  CHECK(code_of([&] { assemble(D, D, f1(1, 1), 2.5, 1, E2); }) == ErrorCode::InvalidParams);
}

TEST_CASE("F3 parameter edge cases") {
  const auto D = diag_of(Matrix{{1, 0}, {0, -1}});
  const auto E2 = DomainSpec::box(Vector{{0.3, -0.7}}, Vector{{0.7, -0.3}});
  TwoDFamily f;
  f.family = FamilyCase::F3;
  f.variant = FamilyVariant::A;
  f.sign = 1;
  f.p = 3;
  f.d = 1;
  f.gamma = 1;
  f.k = 0;
  CHECK(code_of([&] { assemble(D, D, f, 3, 1, E2); }) == ErrorCode::SingularOnDomain);
  f.gamma = 0;
  CHECK(code_of([&] { assemble(D, D, f, 3, 1, E2); }) == ErrorCode::InvalidParams);
}
