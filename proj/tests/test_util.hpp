#pragma once

#include <initializer_list>
#include <vector>

#include "specrange/linalg.hpp"

namespace testutil {

using specrange::Complex;
using specrange::ComplexMatrix;
using specrange::HermitianMatrix;

inline ComplexMatrix mat(std::size_t rows, std::size_t cols, std::initializer_list<Complex> v) {
  ComplexMatrix m(rows, cols);
  std::size_t k = 0;
  for (const Complex& x : v) {
    m(k / cols, k % cols) = x;
    ++k;
  }
  return m;
}

inline HermitianMatrix random_hermitian(std::size_t n, specrange::Rng& rng) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = rng.normal();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex v = rng.normal_complex();
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  }
  return HermitianMatrix::from_exact(std::move(m));
}

inline HermitianMatrix real_diag(const std::vector<double>& d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return HermitianMatrix::from_exact(std::move(m));
}

}  // namespace testutil
