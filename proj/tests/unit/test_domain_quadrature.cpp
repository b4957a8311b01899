#include <doctest.h>

#include "lpiso/domain.hpp"
#include "lpiso/error.hpp"
#include "lpiso/geometry.hpp"
#include "lpiso/quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace lpiso;

namespace {

QuadratureSpec gauss(int order) {
  QuadratureSpec q;
  q.method = QuadratureMethod::Gauss;
  q.order = order;
  return q;
}

QuadratureSpec mc(std::size_t points, std::uint64_t seed = 1) {
  QuadratureSpec q;
  q.method = QuadratureMethod::MonteCarlo;
  q.points = points;
  q.seed = seed;
  return q;
}

ScalarField monomial2(int i, int j) { return ScalarField::polynomial({Monomial{1.0, {i, j}}}); }

}  // namespace

TEST_CASE("Gauss-Legendre integrates degree 2N-1 exactly") {
  for (int N : {1, 2, 5, 16, 40}) {
    const auto r = gauss_legendre(N);
    REQUIRE(r.nodes.size() == static_cast<std::size_t>(N));
    for (int k = 0; k <= 2 * N - 1; ++k) {
      double s = 0;
      for (int i = 0; i < N; ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(gauss_legendre(0), Error);
}

TEST_CASE("pairwise sum") {
  std::vector<double> v(1000, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(pairwise_sum(std::span<const double>()) == 0.0);
}

TEST_CASE("norm examples on the unit box") {
  const auto E = DomainSpec::box(Vector{{0, 0}}, Vector{{1, 1}});
  for (double p : {1.0, 2.5, 3.0}) {
    const auto n1 = lp_norm(ScalarField::constant(1), E, p, gauss(16));
    CHECK(n1.value == doctest::Approx(1).epsilon(1e-13));
  }
  const auto x1 = ScalarField::coordinate(2, 0);
  CHECK(lp_norm(x1, E, 1, gauss(16)).value == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(lp_norm(x1, E, 3, gauss(16)).value == doctest::Approx(std::cbrt(0.25)).epsilon(1e-13));
  // |x1 - 1/2|, kink inside the box: Gauss converges but not exactly.
  const auto kink = x1 - ScalarField::constant(0.5);
  const auto g = lp_norm(kink, E, 1, gauss(64));
  CHECK(g.value == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(std::abs(g.value - 0.25) <= 3 * g.std_error + 1e-12);
}

TEST_CASE("Gauss on an affine image of a box picks up |det A|") {
  const auto base = DomainSpec::box(Vector{{0, 0}}, Vector{{1, 2}});
  const Matrix A{{2, 1}, {0, 3}};
  const auto E = DomainSpec::affine_image(base, A, Vector{{1, -1}});
  REQUIRE(gauss_eligible(E, 16));
  CHECK(lp_norm(ScalarField::constant(1), E, 1, gauss(8)).value == doctest::Approx(12).epsilon(1e-13));
  // ∫_E y1² dy = |det A| ∫_base (2u + v + 1)² du dv; expand by hand.
  // ∫∫ (4u² + v² + 1 + 4uv + 4u + 2v) over [0,1]×[0,2] = 8/3 + 8/3 + 2 + 4 + 4 + 4 = 58/3.
  const auto y1sq = monomial2(2, 0);
  CHECK(lp_norm(y1sq, E, 1, gauss(8)).integral == doctest::Approx(6.0 * 58.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("Monte Carlo estimates are seeded and deterministic") {
  const auto E = DomainSpec::ball(Vector{{0.5, -0.5}}, 0.75);
  const auto f = monomial2(1, 1);
  const auto a = lp_norm(f, E, 3, mc(20000, 9));
  const auto b = lp_norm(f, E, 3, mc(20000, 9));
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
  const auto c = lp_norm(f, E, 3, mc(20000, 10));
  CHECK(a.value != c.value);
  CHECK_FALSE(gauss_eligible(E, 16));
}

TEST_CASE("Monte Carlo area of a ball within three standard errors") {
  const double r = 0.75;
  const auto E = DomainSpec::ball(Vector{{0.5, -0.5}}, r);
  const auto est = lp_norm(ScalarField::constant(1), E, 1, mc(200000, 3));
  CHECK(std::abs(est.value - std::numbers::pi * r * r) <= 3 * est.std_error);
  // sampling is exact on a ball, so a constant has no variance
  CHECK(est.std_error == 0);
  CHECK(est.value == doctest::Approx(std::numbers::pi * r * r).epsilon(1e-12));
  // ∫_ball |x - c|² = π r⁴ / 2
  const auto rr = (monomial2(2, 0) - ScalarField::coordinate(2, 0) + monomial2(0, 2) + ScalarField::coordinate(2, 1) +
                   ScalarField::constant(0.5));
  const auto e2 = lp_norm(rr, E, 1, mc(200000, 4));
  CHECK(std::abs(e2.integral - std::numbers::pi * std::pow(r, 4) / 2) <= 3 * e2.std_error);
  CHECK(e2.std_error > 0);
}

TEST_CASE("shared point schedule matches single-field estimates") {
  const auto E = DomainSpec::ball(Vector{{0, 0, 3}}, 1);
  std::vector<ScalarField> fs{ScalarField::constant(2), ScalarField::coordinate(3, 2)};
  const auto all = lp_norms(fs, E, 2.5, mc(30000, 5));
  REQUIRE(all.size() == 2);
  CHECK(all[0].value == lp_norm(fs[0], E, 2.5, mc(30000, 5)).value);
  CHECK(all[1].value == lp_norm(fs[1], E, 2.5, mc(30000, 5)).value);
}

TEST_CASE("membership and sampling") {
  Rng rng(21);
  const auto box = DomainSpec::box(Vector{{-1, 0}}, Vector{{1, 2}});
  CHECK(box.contains(Vector{{0, 1}}));
  CHECK_FALSE(box.contains(Vector{{0, 2.5}}));
  CHECK(box.dim() == 2);
  CHECK(box.exact_sampling());
  for (int i = 0; i < 200; ++i) CHECK(box.contains(box.sample(rng)));

  const auto ball = DomainSpec::ball(Vector{{1, 1, 1}}, 0.5);
  CHECK(ball.contains(Vector{{1.2, 1, 1}}));
  CHECK_FALSE(ball.contains(Vector{{1.6, 1, 1}}));
  for (int i = 0; i < 200; ++i) CHECK(ball.contains(ball.sample(rng)));
  CHECK(ball.diameter() == doctest::Approx(1));

  const auto img = DomainSpec::affine_image(box, Matrix{{0, 1}, {2, 0}}, Vector{{0, 0}});
  CHECK(img.contains(Vector{{1, 0}}));
  CHECK_FALSE(img.contains(Vector{{0, 1}}));
  for (int i = 0; i < 200; ++i) CHECK(img.contains(img.sample(rng)));

  CHECK_THROWS_AS(DomainSpec::box(Vector{{0, 0}}, Vector{{1, 0}}), Error);
  CHECK_THROWS_AS(DomainSpec::ball(Vector{{0, 0}}, -1), Error);
}

TEST_CASE("mapped image of a ball under inversion") {
  const auto E2 = DomainSpec::ball(Vector{{2, 0, 0}}, 1);
  const MappingSpec kelvin = Inversion{Vector::Zero(3), 3};
  const auto E1 = DomainSpec::mapped_image(E2, kelvin);
  // The image is the ball with centre (2/3,0,0), radius 1/3.
  CHECK(E1.contains(Vector{{2.0 / 3, 0, 0}}));
  CHECK(E1.contains(Vector{{0.4, 0, 0}}));
  CHECK_FALSE(E1.contains(Vector{{0.3, 0, 0}}));
  CHECK_FALSE(E1.contains(Vector{{2.0 / 3, 0.34, 0}}));
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const Vector x = E1.sample(rng);
    CHECK((x - Vector{{2.0 / 3, 0, 0}}).norm() <= 1.0 / 3 + 1e-12);
  }
  const auto vol = lp_norm(ScalarField::constant(1), E1, 1, mc(200000, 6));
  const double exact = 4.0 / 3 * std::numbers::pi / 27;
  CHECK(std::abs(vol.value - exact) <= 3 * vol.std_error);
}
