#include <doctest.h>

#include "lpiso/classifier.hpp"
#include "lpiso/error.hpp"

#include <cmath>
#include <random>

using namespace lpiso;

namespace {

SymMatrix sym(Matrix m) { return SymMatrix(std::move(m)); }

Matrix random_invertible(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  for (;;) {
    Matrix R(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) R(i, j) = g(rng);
    if (std::abs(R.determinant()) > 0.2) return R;
  }
}

// F1 and F2 differ by the relative sign of the null components of c and d.
// A reflection swapping the null lines of D_1 is a congruence, so only the
// pair {F1, F2} is basis independent.
std::string invariant_tag(const Verdict& v) {
  std::string t = v.tag();
  for (const char* s : {"F1)", "F2)"}) {
    const auto pos = t.find(s);
    if (pos != std::string::npos) return t.replace(pos, 3, "F1|F2)");
  }
  return t;
}

}  // namespace

TEST_CASE("classifier examples") {
  const Matrix I3 = Matrix::Identity(3, 3);
  const Vector z3 = Vector::Zero(3);
  CHECK(classify(sym(I3), z3, sym(Matrix(Vector{{1, 1, -1}}.asDiagonal())), z3, 3).tag() ==
        "NonIsometric(SignatureMismatch)");
  CHECK(classify(sym(I3), z3, sym(I3), Vector{{1, 0, 0}}, 3).tag() == "NonIsometric(DriftMismatch)");
  const auto kelvin = classify(sym(I3), z3, sym(I3), z3, 6);
  CHECK(kelvin.tag() == "Embeddable(SimilarityPlusInversion)");
  CHECK(kelvin.exceptional_exponent);
  CHECK(classify(sym(I3), z3, sym(I3), z3, 3).tag() == "Embeddable(SimilarityFamily)");
  const auto v = classify(sym(I3), Vector{{1, 0, 0}}, sym(I3), Vector{{0, 2, 0}}, 3);
  CHECK(v.tag() == "Embeddable(SimilarityFamily)");
  CHECK(v.vector_condition);

  const Matrix W{{1, 0}, {0, -1}};
  const auto f1 = classify(sym(W), Vector{{1, 1}}, sym(W), Vector{{1, 1}}, 3);
  CHECK(f1.tag() == "Embeddable(TwoDFamilyCatalog:F1)");
  CHECK(f1.family_case == FamilyCase::F1);
  CHECK(f1.family_sign == 1);
  CHECK_FALSE(f1.rule.empty());
  CHECK(classify(sym(W), Vector{{1, 1}}, sym(W), Vector{{1, -1}}, 3).tag() == "Embeddable(TwoDFamilyCatalog:F2)");
  CHECK(classify(sym(W), Vector{{0, 0}}, sym(W), Vector{{1, -1}}, 3).tag() == "Embeddable(TwoDFamilyCatalog:F3)");
  CHECK(classify(sym(W), Vector{{2, -2}}, sym(W), Vector{{0, 0}}, 3).tag() == "Embeddable(TwoDFamilyCatalog:F4)");
  CHECK(classify(sym(W), Vector{{1, 1}}, sym(W), Vector{{1, 0}}, 3).tag() == "NonIsometric(NullDriftMismatch)");
  CHECK(classify(sym(I3), Vector{{1, 0, 0}}, sym(I3), z3, 3).tag() == "NonIsometric(DriftMismatch)");

  CHECK_THROWS_AS(classify(sym(I3), z3, sym(I3), z3, 4), Error);
  CHECK_THROWS_AS(classify(sym(Matrix{{1, 0}, {0, 0}}), Vector::Zero(2), sym(W), Vector::Zero(2), 3), Error);
}

TEST_CASE("vector condition on similarity witnesses") {
  const double t = 2;
  const Matrix J = t * Matrix::Identity(3, 3);
  const Vector c{{1, 0, 0}};
  // J·d = |τ′|^{2/n}·c with |τ′| = t³ reads t·d = t²·c
  CHECK(vector_condition_check(J, c, Vector{{2, 0, 0}}, t * t * t, 3));
  CHECK_FALSE(vector_condition_check(J, c, Vector{{0.5, 0, 0}}, t * t * t, 3));
  CHECK(vector_condition_check(J, Vector::Zero(3), Vector::Zero(3), t * t * t, 3));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int k = 0; k < 20; ++k) {
    const Vector a{{g(rng), g(rng), g(rng)}};
    const Vector b{{g(rng), g(rng), g(rng)}};
    CHECK_FALSE(vector_condition_check(J, a, b, t * t * t, 3));
  }
}

TEST_CASE("mixed-signature drift signs") {
  // ‖c‖² > 0 but ‖d‖² < 0 under ℓ = 2, n = 3
  const Matrix S = Vector{{1, 1, -1}}.asDiagonal();
  const auto v = classify(sym(S), Vector{{1, 0, 0}}, sym(S), Vector{{0, 0, 1}}, 3);
  CHECK(v.tag() == "NonIsometric(VectorConditionUnsatisfiable)");
}

TEST_CASE("verdicts are invariant under congruence") {
  std::mt19937_64 rng(31);
  const std::vector<std::tuple<Matrix, Vector, Matrix, Vector, double>> cases{
      {Matrix::Identity(3, 3), Vector::Zero(3), Matrix::Identity(3, 3), Vector::Zero(3), 6},
      {Matrix::Identity(3, 3), Vector::Zero(3), Matrix(Vector{{1, -1, -1}}.asDiagonal()), Vector::Zero(3), 3},
      {Matrix::Identity(3, 3), Vector{{0.5, 0, 1}}, Matrix::Identity(3, 3), Vector{{1, 1, 0}}, 3},
      {Matrix{{1, 0}, {0, -1}}, Vector{{1, 1}}, Matrix{{1, 0}, {0, -1}}, Vector{{2, -2}}, 3},
      {Matrix{{1, 0}, {0, -1}}, Vector{{0, 0}}, Matrix{{1, 0}, {0, -1}}, Vector{{1, 1}}, 2.5},
  };
  for (const auto& [A, a, B, b, p] : cases) {
    const std::string base = invariant_tag(classify(sym(A), a, sym(B), b, p));
    for (int k = 0; k < 10; ++k) {
      const int n = static_cast<int>(A.rows());
      // x ↦ Rx turns D_A into D_{R A Rᵀ} with drift R a
      const Matrix R1 = random_invertible(rng, n);
      const Matrix R2 = random_invertible(rng, n);
      const Matrix A2 = (R1 * A * R1.transpose()).eval();
      const Matrix B2 = (R2 * B * R2.transpose()).eval();
      const auto v = classify(sym(((A2 + A2.transpose()) / 2).eval()), R1 * a, sym(((B2 + B2.transpose()) / 2).eval()),
                              R2 * b, p);
      CHECK(invariant_tag(v) == base);
    }
  }
}

TEST_CASE("witness instantiation") {
  const Matrix I2 = Matrix::Identity(2, 2);
  const auto v = classify(sym(I2), Vector::Zero(2), sym(I2), Vector::Zero(2), 3);
  const auto E2 = DomainSpec::box(Vector{{0, 0}}, Vector{{1, 1}});
  const auto E1 = DomainSpec::box(Vector{{2, 3}}, Vector{{3, 4}});
  const auto w = instantiate_witness(v, E1, E2, WitnessParams{Similarity::translation(Vector{{2, 3}}, 2), 1, {}}, 3);
  CHECK(w.coincidence.passed);
  try {
    instantiate_witness(v, E1, E2, WitnessParams{Similarity::translation(Vector{{2, 2}}, 2), 1, {}}, 3);
    FAIL("expected DomainMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainMismatch);
  }
  CHECK_THROWS_AS(instantiate_witness(v, E1, E2, WitnessParams{Inversion{Vector::Zero(2), 2}, 1, {}}, 3), Error);

  const auto no = classify(sym(I2), Vector::Zero(2), sym(I2), Vector{{1, 0}}, 3);
  CHECK_THROWS_AS(instantiate_witness(no, E1, E2, WitnessParams{Similarity::identity(2, 2), 1, {}}, 3), Error);

  // drifts c = (1,0), d = (2,0): J = 2I gives 2·(2,0) = 4·(1,0)
  const Matrix I3 = Matrix::Identity(3, 3);
  const auto vc = classify(sym(I3), Vector{{1, 0, 0}}, sym(I3), Vector{{2, 0, 0}}, 3);
  const auto B2 = DomainSpec::ball(Vector::Zero(3), 1);
  const auto B1 = DomainSpec::ball(Vector::Zero(3), 2);
  const auto ok = instantiate_witness(vc, B1, B2, WitnessParams{Similarity::homothety(3, 3, 2), 1, {}}, 3);
  REQUIRE(ok.vector_condition.has_value());
  CHECK(*ok.vector_condition);
  const auto bad = instantiate_witness(vc, B1, B2, WitnessParams{Similarity::homothety(3, 3, -2), 1, {}}, 3);
  REQUIRE(bad.vector_condition.has_value());
  CHECK_FALSE(*bad.vector_condition);
}
