#include "specrange/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "specrange/common.hpp"
#include "specrange/perturbation.hpp"

namespace specrange {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

// c_re (V + V^T)/2 + c_im (V - V^T)/(2i) with an exactly Hermitian layout
HermitianMatrix rotated_parts(const VolterraDiscretization& v, double c_re, double c_im) {
  const std::size_t n = v.n;
  ComplexMatrix t(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    t(i, i) = c_re * v.matrix(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const double lower = v.matrix(j, i).real();  // j > i
      const double upper = v.matrix(i, j).real();
      const Complex entry(c_re * (upper + lower) / 2.0, -c_im * (upper - lower) / 2.0);
      t(i, j) = entry;
      t(j, i) = std::conj(entry);
    }
  }
  return HermitianMatrix::from_exact(std::move(t));
}

}  // namespace

VolterraDiscretization volterra_matrix(std::size_t n) {
  if (n < 8) throw InputError("volterra_matrix: grid size must be at least 8");
  VolterraDiscretization v;
  v.n = n;
  v.h = 1.0 / static_cast<double>(n);
  v.matrix = ComplexMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) v.matrix(i, j) = v.h;
    v.matrix(i, i) = v.h / 2.0;
  }
  return v;
}

HermitianMatrix volterra_theta(const VolterraDiscretization& v, double theta) {
  if (v.n < 8 || v.matrix.rows() != v.n || v.matrix.cols() != v.n)
    throw InputError("volterra_theta: invalid discretization");
  return rotated_parts(v, std::cos(theta), std::sin(theta));
}

HermitianMatrix volterra_re(const VolterraDiscretization& v) { return rotated_parts(v, 1.0, 0.0); }

HermitianMatrix volterra_im(const VolterraDiscretization& v) { return rotated_parts(v, 0.0, 1.0); }

std::vector<double> volterra_exact_eigs(double theta, const std::vector<int>& n_range) {
  if (std::abs(std::sin(theta)) <= 1e-12)
    throw InputError("volterra_exact_eigs: theta is a multiple of pi; the closed form vanishes");
  std::vector<double> out;
  out.reserve(n_range.size());
  for (int n : n_range) {
    const double denom = 2.0 * theta + 2.0 * static_cast<double>(n) * kPi;
    if (std::abs(denom) < 1e-12) {
      std::ostringstream os;
      os << "volterra_exact_eigs: pole at n = " << n;
      throw InputError(os.str());
    }
    out.push_back(std::sin(theta) / denom);
  }
  return out;
}

VolterraReport volterra_verify(std::size_t n, double theta, std::size_t n_count) {
  if (n < 128) throw InputError("volterra_verify: grid size must be at least 128");
  if (n_count < 1 || n_count > n) throw InputError("volterra_verify: branch count out of range");

  VolterraReport rep;
  rep.n = n;
  rep.theta = theta;

  const VolterraDiscretization v = volterra_matrix(n);
  const std::vector<double> spectrum = hermitian_eigenvalues(volterra_theta(v, theta));

  if (std::abs(std::sin(theta)) <= 1e-12) {
    // symmetric-part limit: one eigenvalue at cos(theta)/2, the rest collapse to 0
    double top = spectrum.front();
    for (double x : spectrum)
      if (std::abs(x) > std::abs(top)) top = x;
    VolterraEigRow row;
    row.n = 0;
    row.exact = std::cos(theta) / 2.0;
    row.computed = top;
    row.rel_error = std::abs(row.computed - row.exact) / std::abs(row.exact);
    rep.closed_form.push_back(row);
    rep.max_rel_error = row.rel_error;
  } else {
    std::vector<int> candidates;
    const int reach = static_cast<int>(n_count) + 3;
    for (int k = -reach; k <= reach; ++k)
      if (std::abs(2.0 * theta + 2.0 * k * kPi) >= 1e-12) candidates.push_back(k);
    std::vector<double> lam = volterra_exact_eigs(theta, candidates);
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(lam[a]) > std::abs(lam[b]);
    });

    std::vector<bool> used(spectrum.size(), false);
    for (std::size_t r = 0; r < n_count; ++r) {
      const std::size_t idx = order[r];
      VolterraEigRow row;
      row.n = candidates[idx];
      row.exact = lam[idx];
      std::size_t best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < spectrum.size(); ++i) {
        if (used[i]) continue;
        const double d = std::abs(spectrum[i] - row.exact);
        if (d < best_dist) {
          best_dist = d;
          best = i;
        }
      }
      used[best] = true;
      row.computed = spectrum[best];
      row.rel_error = std::abs(row.computed - row.exact) / std::abs(row.exact);
      rep.closed_form.push_back(row);
      rep.max_rel_error = std::max(rep.max_rel_error, row.rel_error);
    }
  }

  // kernel of the symmetric part carries the angle derivatives 1/(2 pi n)
  const HermitianMatrix re_part = volterra_re(v);
  const HermitianMatrix im_part = volterra_im(v);
  KernelProjection proj = kernel_projection(re_part, 0.0, 3.0 * v.h);
  rep.kernel_dim = proj.basis.cols();
  if (rep.kernel_dim > 0) {
    rep.compression_mu = b0_compression(proj, im_part).mu;
    const std::size_t k = rep.compression_mu.size();
    for (int m : {1, -1, 2, -2}) {
      const std::size_t need = static_cast<std::size_t>(std::abs(m));
      if (k < 2 * need) continue;
      VolterraDerivRow row;
      row.n = m;
      row.predicted = 1.0 / (2.0 * kPi * static_cast<double>(m));
      row.computed = m > 0 ? rep.compression_mu[k - need] : rep.compression_mu[need - 1];
      row.rel_error = std::abs(row.computed - row.predicted) / std::abs(row.predicted);
      rep.derivative_rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace specrange
