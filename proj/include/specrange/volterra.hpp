#pragma once

#include <cstddef>
#include <vector>

#include "specrange/linalg.hpp"

namespace specrange {

// midpoint collocation of the cumulative-integral operator on [0,1]
struct VolterraDiscretization {
  std::size_t n = 0;
  double h = 0.0;
  ComplexMatrix matrix;  // h below the diagonal, h/2 on it
};

VolterraDiscretization volterra_matrix(std::size_t n);

// cos(theta) (V + V^T)/2 + sin(theta) (V - V^T)/(2i), assembled exactly Hermitian
HermitianMatrix volterra_theta(const VolterraDiscretization& v, double theta);

// the two generators with exact unit coefficients
HermitianMatrix volterra_re(const VolterraDiscretization& v);
HermitianMatrix volterra_im(const VolterraDiscretization& v);

// closed-form limit eigenvalues sin(theta)/(2 theta + 2 n pi)
std::vector<double> volterra_exact_eigs(double theta, const std::vector<int>& n_range);

struct VolterraEigRow {
  int n = 0;
  double exact = 0.0;
  double computed = 0.0;
  double rel_error = 0.0;
};

struct VolterraDerivRow {
  int n = 0;
  double predicted = 0.0;  // 1/(2 pi n)
  double computed = 0.0;   // compression eigenvalue
  double rel_error = 0.0;
};

struct VolterraReport {
  std::size_t n = 0;
  double theta = 0.0;
  std::vector<VolterraEigRow> closed_form;  // ordered by |exact| descending
  double max_rel_error = 0.0;
  std::size_t kernel_dim = 0;
  std::vector<double> compression_mu;  // ascending spectrum of the compressed generator
  std::vector<VolterraDerivRow> derivative_rows;
};

// (i) spectrum of the rotated matrix against the closed form; (ii) compression
// of the antisymmetric part onto the numerical kernel of the symmetric part
VolterraReport volterra_verify(std::size_t n, double theta, std::size_t n_count);

}  // namespace specrange
