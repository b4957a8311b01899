#include "lpiso/solutions.hpp"

#include "lpiso/error.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace lpiso {

namespace {

void enumerate_exponents(int n, int degree, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n - 1) {
    cur.push_back(degree);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int e = degree; e >= 0; --e) {
    cur.push_back(e);
    enumerate_exponents(n, degree - e, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> monomials(int n, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  enumerate_exponents(n, degree, cur, out);
  return out;
}

// Kernel of D_ℓ restricted to homogeneous polynomials of the given degree.
std::vector<std::vector<Monomial>> polynomial_kernel(const ReducedOperator& H, int degree) {
  const auto high = monomials(H.n, degree);
  const auto low = monomials(H.n, degree - 2);
  std::map<std::vector<int>, int> low_index;
  for (std::size_t i = 0; i < low.size(); ++i) low_index[low[i]] = static_cast<int>(i);

  Matrix L = Matrix::Zero(static_cast<Eigen::Index>(low.size()), static_cast<Eigen::Index>(high.size()));
  for (std::size_t j = 0; j < high.size(); ++j) {
    for (int i = 0; i < H.n; ++i) {
      const int e = high[j][static_cast<std::size_t>(i)];
      if (e < 2) continue;
      auto m = high[j];
      m[static_cast<std::size_t>(i)] -= 2;
      L(low_index.at(m), static_cast<Eigen::Index>(j)) += H.epsilon(i) * e * (e - 1);
    }
  }
  Eigen::FullPivLU<Matrix> lu(L);
  const Matrix K = lu.kernel();
  std::vector<std::vector<Monomial>> out;
  if (lu.rank() == static_cast<Eigen::Index>(high.size())) return out;
  for (Eigen::Index c = 0; c < K.cols(); ++c) {
    const double scale = K.col(c).cwiseAbs().maxCoeff();
    std::vector<Monomial> terms;
    for (Eigen::Index j = 0; j < K.rows(); ++j) {
      const double v = K(j, c) / scale;
      if (std::abs(v) > 1e-13) terms.push_back({v, high[static_cast<std::size_t>(j)]});
    }
    out.push_back(std::move(terms));
  }
  return out;
}

std::string poly_label(const std::vector<Monomial>& terms) {
  std::ostringstream os;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const double c = terms[t].coeff;
    os << (t == 0 ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
    if (std::abs(std::abs(c) - 1.0) > 1e-12) os << std::abs(c) << "*";
    bool first = true;
    for (std::size_t i = 0; i < terms[t].exponents.size(); ++i) {
      const int e = terms[t].exponents[i];
      if (e == 0) continue;
      os << (first ? "" : "*") << "y" << i + 1;
      if (e > 1) os << "^" << e;
      first = false;
    }
  }
  return os.str();
}

std::string freq_label(const std::vector<std::complex<double>>& s) {
  std::ostringstream os;
  os.precision(4);
  os << "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << (i ? ", " : "") << s[i].real();
    if (s[i].imag() != 0.0) os << (s[i].imag() < 0 ? "-" : "+") << std::abs(s[i].imag()) << "i";
  }
  os << ")";
  return os.str();
}

}  // namespace

std::vector<ScalarField> SolutionSet::fields() const {
  std::vector<ScalarField> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.field);
  return out;
}

Reduction reduce(const SymMatrix& A, const Vector& a, const DomainSpec& E, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidExponent, "p must be positive and finite");
  const int n = static_cast<int>(A.dim());
  if (a.size() != n || E.dim() != n) throw Error(ErrorCode::InvalidParams, "operator, drift and domain dimensions disagree");
  Diagonalization d = diagonalize(A);
  Matrix P = d.reduction();
  ReducedOperator H{n, d.ell, P * a};
  DomainSpec image = DomainSpec::affine_image(E, P, Vector::Zero(n));
  return Reduction{std::move(d), std::move(P), std::move(H), std::move(image)};
}

double characteristic_check(std::span<const std::complex<double>> s, const ReducedOperator& H) {
  std::complex<double> acc = 0.0;
  for (int i = 0; i < H.n; ++i) {
    const auto si = s[static_cast<std::size_t>(i)];
    acc += H.epsilon(i) * si * si + H.alpha(i) * si;
  }
  return std::abs(acc);
}

SolutionSet sample_solutions(const ReducedOperator& H, const DomainSpec& E, std::size_t budget, std::uint64_t seed) {
  if (budget < 1) throw Error(ErrorCode::InvalidParams, "solution budget must be at least 1");
  const int n = H.n;
  if (H.alpha.size() != n || E.dim() != n) throw Error(ErrorCode::InvalidParams, "operator and domain dimensions disagree");

  SolutionSet set;
  set.seed = seed;
  const Vector center = E.center();
  const double diam = E.diameter();
  const double kappa = 2.0 / std::max(diam, 1e-12);
  const MappingSpec to_center = Affine{Matrix::Identity(n, n), -center};
  const double alpha_norm = H.alpha.cwiseAbs().maxCoeff();
  const bool driftless = alpha_norm == 0.0;

  const auto full = [&] { return set.members.size() >= budget; };
  const auto add = [&](Solution s) {
    if (!full()) set.members.push_back(std::move(s));
  };
  const auto add_exponential = [&](std::vector<std::complex<double>> s, const std::string& tag) {
    const bool complex = std::any_of(s.begin(), s.end(), [](auto z) { return z.imag() != 0.0; });
    add({ScalarField::exp_linear(s, ComplexPart::Re).compose(to_center), SolutionKind::Exponential, 0, s,
         (complex ? "Re exp" : "exp") + freq_label(s) + tag});
    if (complex) {
      add({ScalarField::exp_linear(s, ComplexPart::Im).compose(to_center), SolutionKind::Exponential, 0, s,
           "Im exp" + freq_label(s) + tag});
    }
  };

  add({ScalarField::constant(1.0), SolutionKind::Constant, 0, {}, "1"});

  // Linear forms orthogonal to α.
  if (driftless) {
    for (int i = 0; i < n; ++i) add({ScalarField::coordinate(n, i), SolutionKind::Linear, 1, {}, "y" + std::to_string(i + 1)});
  } else {
    Eigen::FullPivLU<Matrix> lu(H.alpha.transpose());
    const Matrix K = lu.kernel();
    for (Eigen::Index c = 0; c < K.cols(); ++c) {
      std::vector<Monomial> terms;
      for (int i = 0; i < n; ++i) {
        if (K(i, c) == 0.0) continue;
        std::vector<int> e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(i)] = 1;
        terms.push_back({K(i, c), e});
      }
      add({ScalarField::polynomial(terms), SolutionKind::Linear, 1, {}, poly_label(terms)});
    }
    for (int k = 0; k < n; ++k) {
      if (H.alpha(k) == 0.0) continue;
      std::vector<std::complex<double>> s(static_cast<std::size_t>(n), 0.0);
      s[static_cast<std::size_t>(k)] = -H.alpha(k) / H.epsilon(k);
      add_exponential(std::move(s), "");
    }
  }

  if (driftless) {
    for (const auto& terms : polynomial_kernel(H, 2)) {
      add({ScalarField::polynomial(terms).compose(to_center), SolutionKind::Polynomial, 2, {}, poly_label(terms)});
    }
    for (int i = 0; i + 1 < n; ++i) {
      const int j = i + 1;
      std::vector<std::complex<double>> s(static_cast<std::size_t>(n), 0.0);
      s[static_cast<std::size_t>(i)] = kappa;
      if (H.epsilon(i) == H.epsilon(j)) s[static_cast<std::size_t>(j)] = {0.0, kappa};
      else s[static_cast<std::size_t>(j)] = kappa;
      add_exponential(std::move(s), "");
    }
    for (const auto& terms : polynomial_kernel(H, 3)) {
      add({ScalarField::polynomial(terms).compose(to_center), SolutionKind::Polynomial, 3, {}, poly_label(terms)});
    }
  }

  // Seeded points on the characteristic variety: pick all but one coordinate,
  // solve the quadratic in the remaining one.
  Rng rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int attempt = 0; !full() && attempt < 4 * static_cast<int>(budget) + 16; ++attempt) {
    const int k = attempt % n;
    std::vector<std::complex<double>> s(static_cast<std::size_t>(n), 0.0);
    std::complex<double> rest = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      const double v = kappa * uni(rng);
      s[static_cast<std::size_t>(i)] = v;
      rest += H.epsilon(i) * v * v + H.alpha(i) * v;
    }
    const double a2 = H.epsilon(k);
    const double a1 = H.alpha(k);
    const std::complex<double> disc = std::sqrt(std::complex<double>(a1 * a1) - 4.0 * a2 * rest);
    const std::complex<double> root = (-a1 + (uni(rng) < 0 ? -1.0 : 1.0) * disc) / (2.0 * a2);
    s[static_cast<std::size_t>(k)] = std::abs(root.imag()) < 1e-14 ? std::complex<double>(root.real(), 0.0) : root;
    if (std::abs(s[static_cast<std::size_t>(k)]) * diam > 40.0) continue;
    add_exponential(std::move(s), "");
  }
  return set;
}

SolutionSet pull_back(const SolutionSet& set, const Matrix& P) {
  SolutionSet out = set;
  const MappingSpec map = Affine{P, Vector::Zero(P.rows())};
  for (auto& m : out.members) m.field = m.field.compose(map);
  return out;
}

}  // namespace lpiso
