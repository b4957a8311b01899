#include "lpiso/quadrature.hpp"

#include "lpiso/error.hpp"

#include <cmath>

namespace lpiso {

namespace {

constexpr std::size_t kChunk = 4096;
constexpr double kMaxGaussPoints = 4.0e6;

struct Accumulator {
  std::vector<double> sum;
  std::vector<double> sum_sq;
};

// Affine chain down to a box: x = A·b + shift for b in the box.
bool unwrap_box(const DomainSpec& E, Matrix& A, Vector& shift, const BoxDomain*& box) {
  const int n = E.dim();
  A = Matrix::Identity(n, n);
  shift = Vector::Zero(n);
  const DomainSpec* cur = &E;
  while (cur->is<AffineImageDomain>()) {
    const auto& ai = cur->as<AffineImageDomain>();
    shift = A * ai.shift + shift;
    A = A * ai.A;
    cur = ai.base.get();
  }
  if (!cur->is<BoxDomain>()) return false;
  box = &cur->as<BoxDomain>();
  return true;
}

std::vector<double> integrate_gauss(std::span<const ScalarField> fs, const DomainSpec& E, double p, int order) {
  Matrix A;
  Vector shift;
  const BoxDomain* box = nullptr;
  unwrap_box(E, A, shift, box);
  const int n = E.dim();
  const GaussRule rule = gauss_legendre(order);
  const Vector half = (box->hi - box->lo) / 2.0;
  const Vector mid = (box->hi + box->lo) / 2.0;
  const double jac = std::abs(A.determinant()) * half.prod();

  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(order);

  std::vector<std::vector<double>> terms(fs.size(), std::vector<double>(total));
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  Vector b(n);
  for (std::size_t t = 0; t < total; ++t) {
    double w = 1.0;
    for (int i = 0; i < n; ++i) {
      b(i) = mid(i) + half(i) * rule.nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
      w *= rule.weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    }
    const Vector x = A * b + shift;
    for (std::size_t k = 0; k < fs.size(); ++k) terms[k][t] = w * std::pow(std::abs(fs[k].value(x)), p);
    for (int i = n - 1; i >= 0; --i) {
      if (++idx[static_cast<std::size_t>(i)] < order) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
  std::vector<double> out;
  out.reserve(fs.size());
  for (const auto& v : terms) out.push_back(jac * pairwise_sum(v));
  return out;
}

double norm_error(double integral, double integral_err, double p) {
  if (integral <= 0.0) return 0.0;
  return integral_err * std::pow(integral, 1.0 / p - 1.0) / p;
}

}  // namespace

std::string_view to_string(QuadratureMethod m) { return m == QuadratureMethod::Gauss ? "gauss" : "mc"; }

GaussRule gauss_legendre(int order) {
  if (order < 1 || order > 256) throw Error(ErrorCode::InvalidParams, "Gauss-Legendre order must lie in [1, 256]");
  GaussRule r;
  r.nodes.resize(static_cast<std::size_t>(order));
  r.weights.resize(static_cast<std::size_t>(order));
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[static_cast<std::size_t>(i)] = -x;
    r.nodes[static_cast<std::size_t>(order - 1 - i)] = x;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(order - 1 - i)] = w;
  }
  if (order % 2 == 1) r.nodes[static_cast<std::size_t>(order / 2)] = 0.0;
  return r;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.subspan(0, h)) + pairwise_sum(v.subspan(h));
}

bool gauss_eligible(const DomainSpec& E, int order) {
  Matrix A;
  Vector shift;
  const BoxDomain* box = nullptr;
  if (!unwrap_box(E, A, shift, box)) return false;
  return std::pow(static_cast<double>(order), E.dim()) <= kMaxGaussPoints;
}

NormEstimate lp_norm(const ScalarField& f, const DomainSpec& E, double p, const QuadratureSpec& quad) {
  return lp_norms(std::span<const ScalarField>(&f, 1), E, p, quad).front();
}

std::vector<NormEstimate> lp_norms(std::span<const ScalarField> fs, const DomainSpec& E, double p,
                                   const QuadratureSpec& quad) {
  if (!(p > 0.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidExponent, "p must be positive and finite");
  std::vector<NormEstimate> out(fs.size());

  if (quad.method == QuadratureMethod::Gauss && gauss_eligible(E, quad.order)) {
    const auto full = integrate_gauss(fs, E, p, quad.order);
    const auto coarse = integrate_gauss(fs, E, p, std::max(1, quad.order / 2));
    for (std::size_t k = 0; k < fs.size(); ++k) {
      auto& r = out[k];
      r.method = QuadratureMethod::Gauss;
      r.integral = full[k];
      r.value = std::pow(full[k], 1.0 / p);
      r.std_error = norm_error(full[k], std::abs(full[k] - coarse[k]), p);
      r.samples = static_cast<std::size_t>(std::pow(quad.order, E.dim()));
    }
    return out;
  }

  if (quad.points < 2) throw Error(ErrorCode::InvalidParams, "Monte Carlo needs at least two points");
  const std::size_t chunks = (quad.points + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> chunk_sum(fs.size(), std::vector<double>(chunks));
  std::vector<std::vector<double>> chunk_sq(fs.size(), std::vector<double>(chunks));
  std::vector<std::vector<double>> h(fs.size(), std::vector<double>(kChunk));
  std::vector<std::vector<double>> h2(fs.size(), std::vector<double>(kChunk));
  Vector x;
  for (std::size_t c = 0; c < chunks; ++c) {
    Rng rng(quad.seed + c);
    const std::size_t count = std::min(kChunk, quad.points - c * kChunk);
    for (std::size_t i = 0; i < count; ++i) {
      const bool inside = E.draw(rng, x);
      for (std::size_t k = 0; k < fs.size(); ++k) {
        const double v = inside ? std::pow(std::abs(fs[k].value(x)), p) : 0.0;
        h[k][i] = v;
        h2[k][i] = v * v;
      }
    }
    for (std::size_t k = 0; k < fs.size(); ++k) {
      chunk_sum[k][c] = pairwise_sum(std::span<const double>(h[k].data(), count));
      chunk_sq[k][c] = pairwise_sum(std::span<const double>(h2[k].data(), count));
    }
  }
  const double N = static_cast<double>(quad.points);
  const double vol = E.proposal_volume();
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const double mean = pairwise_sum(chunk_sum[k]) / N;
    const double mean_sq = pairwise_sum(chunk_sq[k]) / N;
    const double var = std::max(0.0, mean_sq - mean * mean) * N / (N - 1.0);
    auto& r = out[k];
    r.method = QuadratureMethod::MonteCarlo;
    r.integral = vol * mean;
    r.value = std::pow(r.integral, 1.0 / p);
    r.std_error = norm_error(r.integral, vol * std::sqrt(var / N), p);
    r.samples = quad.points;
  }
  return out;
}

}  // namespace lpiso
