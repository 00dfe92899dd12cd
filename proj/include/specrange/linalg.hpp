// Dense complex matrices, Hermitian containers, eigendecomposition, compressions
// and quadratic forms. All tolerances scale with the Frobenius norm of the input.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "specrange/common.hpp"

namespace specrange {

// Row-major dense complex matrix. Construction zero-fills.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<Complex>& data() const { return data_; }
  std::vector<Complex>& data() { return data_; }

  bool is_square() const { return rows_ == cols_; }
  bool all_finite() const;
  double max_abs_entry() const;
  double frobenius_norm() const;

  ComplexMatrix adjoint() const;
  ComplexMatrix multiply(const ComplexMatrix& rhs) const;
  std::vector<Complex> apply(const std::vector<Complex>& x) const;
  std::vector<Complex> column(std::size_t j) const;
  void set_column(std::size_t j, const std::vector<Complex>& v);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

// ⟨a,b⟩ = Σ a_i conj(b_i); linear in the first argument.
Complex vec_inner(const std::vector<Complex>& a, const std::vector<Complex>& b);
double vec_norm(const std::vector<Complex>& v);

// Exactly-Hermitian storage. from_matrix symmetrizes M <- (M + M*)/2 and records
// the pre-symmetrization defect; a defect above 1e-12 * max|entry| is rejected.
class HermitianMatrix {
 public:
  static HermitianMatrix from_matrix(const ComplexMatrix& m);
  // Caller guarantees entries are exactly Hermitian (builders that fill the
  // upper triangle and mirror it). Checked in debug-style full scan.
  static HermitianMatrix from_exact(ComplexMatrix m);

  std::size_t dim() const { return mat_.rows(); }
  double symmetrization_defect() const { return defect_; }
  const ComplexMatrix& matrix() const { return mat_; }
  double frobenius_norm() const { return mat_.frobenius_norm(); }

 private:
  HermitianMatrix(ComplexMatrix m, double defect) : mat_(std::move(m)), defect_(defect) {}
  ComplexMatrix mat_;
  double defect_ = 0.0;
};

// Eigenvalues ascending; vectors stored as columns, orthonormal to 1e-10 and
// with residual ||Mv - λv|| <= 1e-10 ||M||_F (both verified after the solve).
struct EigenDecomposition {
  std::vector<double> values;
  ComplexMatrix vectors;
};

struct EigTolerances {
  double residual = 1e-10;
  double orthonormality = 1e-10;
};

EigenDecomposition hermitian_eig(const HermitianMatrix& m, const EigTolerances& tol = {});

// ascending spectrum without eigenvectors; much cheaper at large dimension
std::vector<double> hermitian_eigenvalues(const HermitianMatrix& m);

// Spectral-cluster width used by consumers that must treat near-degenerate
// eigenvalues as one group.
inline double cluster_tol(const HermitianMatrix& m) { return 1e-8 * m.frobenius_norm(); }

// C_{ij} = ⟨T b_j, b_i⟩ for orthonormal columns b of `basis` (dim x k).
// Rejects a basis whose Gram matrix deviates from I by more than 1e-10.
ComplexMatrix compress(const ComplexMatrix& t, const ComplexMatrix& basis);

// Same contract, but T is Hermitian so the compression is filled from its upper
// triangle and mirrored, making the result exactly Hermitian.
HermitianMatrix compress_hermitian(const HermitianMatrix& t, const ComplexMatrix& basis);

// ⟨Tx,x⟩ / ⟨x,x⟩. Zero vector is rejected.
Complex quad_form(const ComplexMatrix& t, const std::vector<Complex>& x);

// Hermitian T: the imaginary part is roundoff; it is checked against
// 1e-12 ||T||_F and clamped.
double quad_form_real(const HermitianMatrix& t, const std::vector<Complex>& x);

// Modified Gram-Schmidt with re-orthogonalization; returns orthonormal columns
// spanning the input columns (rank revealed by column count).
ComplexMatrix orthonormalize(const ComplexMatrix& columns, double drop_tol = 1e-12);

}  // namespace specrange
