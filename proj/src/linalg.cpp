#include "specrange/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace specrange {

namespace {

using EMatC = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using EMatD = Eigen::MatrixXd;

EMatC to_eigen(const ComplexMatrix& m) {
  EMatC out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

ComplexMatrix from_eigen(const EMatC& e) {
  ComplexMatrix out(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) out(i, j) = e(i, j);
  return out;
}

bool is_real(const ComplexMatrix& m) {
  for (const Complex& v : m.data())
    if (v.imag() != 0.0) return false;
  return true;
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool ComplexMatrix::all_finite() const {
  for (const Complex& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

double ComplexMatrix::max_abs_entry() const {
  double m = 0.0;
  for (const Complex& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  StableSum s;
  for (const Complex& v : data_) s.add(std::norm(v));
  return std::sqrt(s.value());
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix ComplexMatrix::multiply(const ComplexMatrix& rhs) const {
  if (cols_ != rhs.rows()) throw InputError("matrix product: inner dimensions disagree");
  return from_eigen(to_eigen(*this) * to_eigen(rhs));
}

std::vector<Complex> ComplexMatrix::apply(const std::vector<Complex>& x) const {
  if (x.size() != cols_) throw InputError("matrix apply: vector length disagrees with columns");
  std::vector<Complex> y(rows_, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < rows_; ++i) {
    Complex acc(0.0, 0.0);
    const Complex* row = data_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
  return y;
}

std::vector<Complex> ComplexMatrix::column(std::size_t j) const {
  std::vector<Complex> v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void ComplexMatrix::set_column(std::size_t j, const std::vector<Complex>& v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Complex vec_inner(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) throw InputError("inner product: length mismatch");
  StableSum re, im;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Complex p = a[i] * std::conj(b[i]);
    re.add(p.real());
    im.add(p.imag());
  }
  return Complex(re.value(), im.value());
}

double vec_norm(const std::vector<Complex>& v) {
  StableSum s;
  for (const Complex& x : v) s.add(std::norm(x));
  return std::sqrt(s.value());
}

HermitianMatrix HermitianMatrix::from_matrix(const ComplexMatrix& m) {
  if (!m.is_square()) throw InputError("hermitian construction: matrix not square");
  if (!m.all_finite()) throw InputError("hermitian construction: non-finite entry");
  const std::size_t n = m.rows();
  double defect = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    defect = std::max(defect, std::abs(Complex(0.0, m(i, i).imag())));
    for (std::size_t j = i + 1; j < n; ++j)
      defect = std::max(defect, std::abs(m(i, j) - std::conj(m(j, i))));
  }
  const double scale = m.max_abs_entry();
  if (defect > 1e-12 * scale) {
    std::ostringstream os;
    os << "hermitian construction: symmetrization defect " << defect
       << " exceeds 1e-12 * max|entry| = " << 1e-12 * scale;
    throw InputError(os.str());
  }
  ComplexMatrix sym(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    sym(i, i) = Complex(m(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      Complex avg = (m(i, j) + std::conj(m(j, i))) * 0.5;
      sym(i, j) = avg;
      sym(j, i) = std::conj(avg);
    }
  }
  return HermitianMatrix(std::move(sym), defect);
}

HermitianMatrix HermitianMatrix::from_exact(ComplexMatrix m) {
  if (!m.is_square()) throw InputError("hermitian construction: matrix not square");
  if (!m.all_finite()) throw InputError("hermitian construction: non-finite entry");
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (m(i, i).imag() != 0.0) throw InputError("hermitian construction: diagonal not real");
    for (std::size_t j = i + 1; j < n; ++j)
      if (m(i, j) != std::conj(m(j, i)))
        throw InputError("hermitian construction: entries not exactly mirrored");
  }
  return HermitianMatrix(std::move(m), 0.0);
}

EigenDecomposition hermitian_eig(const HermitianMatrix& m, const EigTolerances& tol) {
  const std::size_t n = m.dim();
  const ComplexMatrix& a = m.matrix();
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);

  if (is_real(a)) {
    EMatD ar(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) ar(i, j) = a(i, j).real();
    Eigen::SelfAdjointEigenSolver<EMatD> solver(ar);
    if (solver.info() != Eigen::Success) {
      std::ostringstream os;
      os << "hermitian eigensolver failed to converge at dimension " << n;
      throw NumericalError(os.str());
    }
    for (std::size_t i = 0; i < n; ++i) out.values[i] = solver.eigenvalues()(i);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out.vectors(i, j) = solver.eigenvectors()(i, j);
  } else {
    Eigen::SelfAdjointEigenSolver<EMatC> solver(to_eigen(a));
    if (solver.info() != Eigen::Success) {
      std::ostringstream os;
      os << "hermitian eigensolver failed to converge at dimension " << n;
      throw NumericalError(os.str());
    }
    for (std::size_t i = 0; i < n; ++i) out.values[i] = solver.eigenvalues()(i);
    out.vectors = from_eigen(solver.eigenvectors());
  }

  // Postconditions: residual and orthonormality, checked unconditionally.
  const double scale = m.frobenius_norm();
  EMatC ae = to_eigen(a);
  EMatC ve = to_eigen(out.vectors);
  EMatC residual = ae * ve;
  for (std::size_t j = 0; j < n; ++j) residual.col(j) -= out.values[j] * ve.col(j);
  double max_resid = 0.0;
  for (std::size_t j = 0; j < n; ++j) max_resid = std::max(max_resid, residual.col(j).norm());
  if (max_resid > tol.residual * std::max(scale, 1e-300)) {
    std::ostringstream os;
    os << "hermitian eigensolver: residual " << max_resid << " exceeds " << tol.residual
       << " * ||M|| at dimension " << n;
    throw NumericalError(os.str());
  }
  EMatC gram = ve.adjoint() * ve;
  for (std::size_t i = 0; i < n; ++i) gram(i, i) -= 1.0;
  double gram_defect = n == 0 ? 0.0 : gram.cwiseAbs().maxCoeff();
  if (gram_defect > tol.orthonormality) {
    std::ostringstream os;
    os << "hermitian eigensolver: eigenvector orthonormality defect " << gram_defect
       << " at dimension " << n;
    throw NumericalError(os.str());
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const HermitianMatrix& m) {
  const std::size_t n = m.dim();
  const ComplexMatrix& a = m.matrix();
  Eigen::VectorXd ev;
  if (is_real(a)) {
    EMatD ar(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) ar(i, j) = a(i, j).real();
    Eigen::SelfAdjointEigenSolver<EMatD> solver(ar, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw NumericalError("hermitian eigensolver failed to converge (values-only path)");
    ev = solver.eigenvalues();
  } else {
    Eigen::SelfAdjointEigenSolver<EMatC> solver(to_eigen(a), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw NumericalError("hermitian eigensolver failed to converge (values-only path)");
    ev = solver.eigenvalues();
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = ev(i);
    if (!std::isfinite(out[i])) throw NumericalError("hermitian eigensolver: non-finite value");
    if (i > 0 && out[i] < out[i - 1])
      throw NumericalError("hermitian eigensolver: spectrum not ascending");
  }
  return out;
}

namespace {

void check_basis(const ComplexMatrix& t, const ComplexMatrix& basis) {
  if (!t.is_square()) throw InputError("compress: operator not square");
  if (basis.rows() != t.rows())
    throw InputError("compress: basis vector length disagrees with operator dimension");
  if (basis.cols() == 0) throw InputError("compress: empty basis");
  EMatC b = to_eigen(basis);
  EMatC gram = b.adjoint() * b;
  for (Eigen::Index i = 0; i < gram.rows(); ++i) gram(i, i) -= 1.0;
  double defect = gram.cwiseAbs().maxCoeff();
  if (defect > 1e-10) {
    std::ostringstream os;
    os << "compress: basis not orthonormal, max Gram defect " << defect;
    throw InputError(os.str());
  }
}

}  // namespace

ComplexMatrix compress(const ComplexMatrix& t, const ComplexMatrix& basis) {
  check_basis(t, basis);
  EMatC b = to_eigen(basis);
  EMatC c = b.adjoint() * (to_eigen(t) * b);
  return from_eigen(c);
}

HermitianMatrix compress_hermitian(const HermitianMatrix& t, const ComplexMatrix& basis) {
  check_basis(t.matrix(), basis);
  EMatC b = to_eigen(basis);
  EMatC c = b.adjoint() * (to_eigen(t.matrix()) * b);
  // T Hermitian makes C Hermitian up to roundoff; mirror the upper triangle so
  // the container sees an exact representative.
  const std::size_t k = c.rows();
  ComplexMatrix out(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    out(i, i) = Complex(c(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < k; ++j) {
      out(i, j) = c(i, j);
      out(j, i) = std::conj(c(i, j));
    }
  }
  return HermitianMatrix::from_exact(std::move(out));
}

Complex quad_form(const ComplexMatrix& t, const std::vector<Complex>& x) {
  if (!t.is_square()) throw InputError("quad_form: operator not square");
  if (x.size() != t.rows()) throw InputError("quad_form: vector length disagrees");
  double nrm2 = 0.0;
  for (const Complex& v : x) nrm2 += std::norm(v);
  if (nrm2 == 0.0) throw InputError("quad_form: zero vector");
  std::vector<Complex> tx = t.apply(x);
  Complex num = vec_inner(tx, x);
  return num / nrm2;
}

double quad_form_real(const HermitianMatrix& t, const std::vector<Complex>& x) {
  Complex q = quad_form(t.matrix(), x);
  double scale = t.frobenius_norm();
  if (std::abs(q.imag()) > 1e-12 * std::max(scale, 1e-300)) {
    std::ostringstream os;
    os << "quad_form_real: imaginary residue " << q.imag() << " exceeds 1e-12 * ||T||";
    throw NumericalError(os.str());
  }
  return q.real();
}

ComplexMatrix orthonormalize(const ComplexMatrix& columns, double drop_tol) {
  const std::size_t n = columns.rows();
  std::vector<std::vector<Complex>> kept;
  for (std::size_t j = 0; j < columns.cols(); ++j) {
    std::vector<Complex> v = columns.column(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : kept) {
        Complex c = vec_inner(v, q);
        for (std::size_t i = 0; i < n; ++i) v[i] -= c * q[i];
      }
    }
    double nrm = vec_norm(v);
    if (nrm <= drop_tol) continue;
    for (std::size_t i = 0; i < n; ++i) v[i] /= nrm;
    kept.push_back(std::move(v));
  }
  ComplexMatrix out(n, kept.size());
  for (std::size_t j = 0; j < kept.size(); ++j) out.set_column(j, kept[j]);
  return out;
}

}  // namespace specrange
