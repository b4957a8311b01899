#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace lpiso {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense real symmetric matrix. Symmetry is validated on construction
/// (exact equality of mirrored entries).
class SymMatrix {
 public:
  explicit SymMatrix(Matrix entries);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  double max_abs() const { return m_.cwiseAbs().maxCoeff(); }

 private:
  Matrix m_;
};

/// MᵀAM = I_ℓ with the ℓ positive directions first.
struct Diagonalization {
  Matrix M;
  int ell = 0;
  int signature = 0;

  int dim() const noexcept { return static_cast<int>(M.rows()); }
  /// Matrix of the reduced coordinates y = Mᵀx, so that P A Pᵀ = I_ℓ.
  Matrix reduction() const { return M.transpose(); }
};

/// diag(+1 ×ℓ, −1 ×(n−ℓ)).
Matrix signature_matrix(int n, int ell);

/// Symmetric eigendecomposition by cyclic Jacobi rotations. Eigenvalues are
/// returned unsorted with eigenvectors in the matching columns.
struct EigenPairs {
  Vector values;
  Matrix vectors;
};
EigenPairs jacobi_eigen(const SymMatrix& a);

/// Relative determinant test used by every consumer: |det A| > 1e-12·(max|a_ij|)^n.
bool is_numerically_singular(const SymMatrix& a);

Diagonalization diagonalize(const SymMatrix& a);
int signature(const SymMatrix& a);

/// ‖MᵀAM − I_ℓ‖_max.
double diagonalization_residual(const SymMatrix& a, const Diagonalization& d);

}  // namespace lpiso
