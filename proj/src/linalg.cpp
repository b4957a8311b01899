#include "lpiso/linalg.hpp"

#include "lpiso/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace lpiso {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::GuardViolation: return "GuardViolation";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::SingularOnDomain: return "SingularOnDomain";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

bool is_numeric_precondition(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SingularMatrix:
    case ErrorCode::GuardViolation:
    case ErrorCode::SingularPoint:
    case ErrorCode::SingularOnDomain:
    case ErrorCode::DomainMismatch:
      return true;
    default:
      return false;
  }
}

SymMatrix::SymMatrix(Matrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1) {
    throw Error(ErrorCode::NotSymmetric, "matrix must be square and non-empty");
  }
  if (!m_.allFinite()) {
    throw Error(ErrorCode::NotSymmetric, "matrix has non-finite entries");
  }
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m_.cols(); ++j) {
      if (m_(i, j) != m_(j, i)) {
        throw Error(ErrorCode::NotSymmetric, "entries (" + std::to_string(i) + "," +
                                                 std::to_string(j) + ") differ from their mirror");
      }
    }
  }
}

Matrix signature_matrix(int n, int ell) {
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = i < ell ? 1.0 : -1.0;
  return m;
}

EigenPairs jacobi_eigen(const SymMatrix& sym) {
  const int n = static_cast<int>(sym.dim());
  Matrix a = sym.matrix();
  Matrix v = Matrix::Identity(n, n);

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off == 0.0) break;
    double diag = 0.0;
    for (int p = 0; p < n; ++p) diag += a(p, p) * a(p, p);
    if (off <= 1e-36 * diag) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation annihilating a(p,q); the smaller-angle root of t² + 2θt − 1 = 0.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  return {a.diagonal(), v};
}

bool is_numerically_singular(const SymMatrix& a) {
  const double scale = a.max_abs();
  if (scale == 0.0) return true;
  // Compare on the normalized matrix to avoid overflow in scale^n.
  const double det = (a.matrix() / scale).determinant();
  return !(std::abs(det) > 1e-12);
}

Diagonalization diagonalize(const SymMatrix& a) {
  if (is_numerically_singular(a)) {
    throw Error(ErrorCode::SingularMatrix, "|det A| <= 1e-12 * (max|a_ij|)^n");
  }
  const int n = static_cast<int>(a.dim());
  const EigenPairs eig = jacobi_eigen(a);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    const double li = eig.values(i);
    const double lj = eig.values(j);
    if ((li > 0) != (lj > 0)) return li > 0;
    return std::abs(li) > std::abs(lj);
  });

  Diagonalization d;
  d.M = Matrix(n, n);
  d.ell = 0;
  for (int k = 0; k < n; ++k) {
    const double lambda = eig.values(order[k]);
    if (lambda == 0.0) throw Error(ErrorCode::SingularMatrix, "zero eigenvalue");
    if (lambda > 0) ++d.ell;
    Vector col = eig.vectors.col(order[k]) / std::sqrt(std::abs(lambda));
    for (int i = 0; i < n; ++i) {
      if (col(i) != 0.0) {
        if (col(i) < 0) col = -col;
        break;
      }
    }
    d.M.col(k) = col;
  }
  d.signature = 2 * d.ell - n;
  return d;
}

int signature(const SymMatrix& a) { return diagonalize(a).signature; }

double diagonalization_residual(const SymMatrix& a, const Diagonalization& d) {
  const Matrix r = d.M.transpose() * a.matrix() * d.M - signature_matrix(d.dim(), d.ell);
  return r.cwiseAbs().maxCoeff();
}

}  // namespace lpiso
