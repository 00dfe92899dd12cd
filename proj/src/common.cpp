#include "specrange/common.hpp"

#include <cmath>
#include <cstdio>

namespace specrange {

std::vector<Complex> Rng::unit_vector(std::size_t dim) {
  if (dim == 0) throw InputError("unit_vector: zero dimension");
  std::vector<Complex> v(dim);
  double nrm2 = 0.0;
  while (true) {
    for (std::size_t i = 0; i < dim; ++i) {
      v[i] = normal_complex();
      nrm2 += std::norm(v[i]);
    }
    if (nrm2 > 0.0) break;
    nrm2 = 0.0;
  }
  double inv = 1.0 / std::sqrt(nrm2);
  for (Complex& x : v) x *= inv;
  return v;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw InputError("linspace: need at least 2 points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw InputError("logspace: need at least 2 points");
  if (lo <= 0.0 || hi <= 0.0) throw InputError("logspace: endpoints must be positive");
  std::vector<double> g(n);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

}  // namespace specrange
