#include "specrange/numrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace specrange {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

HermitianMatrix rotated_real_part(const ComplexMatrix& t, double theta) {
  const std::size_t n = t.rows();
  const Complex phase(std::cos(theta), -std::sin(theta));  // e^{-i theta}
  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = Complex((phase * t(i, i) + std::conj(phase * t(i, i))).real() * 0.5, 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      h(i, j) = (phase * t(i, j) + std::conj(phase * t(j, i))) * 0.5;
      h(j, i) = std::conj(h(i, j));
    }
  }
  return HermitianMatrix::from_exact(std::move(h));
}

}  // namespace

NumRangeBoundary numerical_range_boundary(const ComplexMatrix& t, std::size_t n_angles) {
  if (!t.is_square() || t.rows() == 0) throw InputError("numrange: matrix must be square, dim >= 1");
  if (!t.all_finite()) throw InputError("numrange: non-finite matrix entry");
  if (n_angles < 4) throw InputError("numrange: need at least 4 angles");
  const double scale = t.frobenius_norm();

  NumRangeBoundary out;
  out.dim = t.rows();
  out.samples.reserve(n_angles);
  const double step = kTwoPi / static_cast<double>(n_angles);
  for (std::size_t i = 0; i < n_angles; ++i) {
    const double theta = step * static_cast<double>(i);
    HermitianMatrix h = rotated_real_part(t, theta);
    EigenDecomposition eig = hermitian_eig(h);
    SupportSample s;
    s.theta = theta;
    s.support_value = eig.values.back();
    s.boundary_point = quad_form(t, eig.vectors.column(t.rows() - 1));
    const Complex phase(std::cos(theta), -std::sin(theta));
    const double back_projected = (phase * s.boundary_point).real();
    if (std::abs(back_projected - s.support_value) > 1e-10 * scale)
      throw NumericalError("numrange: support identity violated at theta = " +
                           std::to_string(theta));
    out.samples.push_back(s);
  }

  // every sampled point must respect every sampled supporting half-plane
  for (const SupportSample& sp : out.samples) {
    for (const SupportSample& hp : out.samples) {
      const Complex phase(std::cos(hp.theta), -std::sin(hp.theta));
      if ((phase * sp.boundary_point).real() > hp.support_value + 1e-8 * scale)
        throw NumericalError("numrange: convexity violated between theta = " +
                             std::to_string(sp.theta) + " and " + std::to_string(hp.theta));
    }
  }
  return out;
}

ConvexRegion convex_hull(std::vector<std::array<double, 2>> points) {
  if (points.empty()) throw InputError("convex_hull: no points");
  std::sort(points.begin(), points.end());
  std::vector<std::array<double, 2>> uniq;
  for (const auto& p : points) {
    if (!uniq.empty() && std::abs(p[0] - uniq.back()[0]) <= 1e-12 &&
        std::abs(p[1] - uniq.back()[1]) <= 1e-12)
      continue;
    uniq.push_back(p);
  }
  ConvexRegion region;
  if (uniq.size() <= 2) {
    region.vertices = uniq;
    return region;
  }
  auto cross = [](const std::array<double, 2>& o, const std::array<double, 2>& a,
                  const std::array<double, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<std::array<double, 2>> hull(2 * uniq.size());
  std::size_t k = 0;
  for (const auto& p : uniq) {  // lower hull
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = uniq.size() - 1; i-- > 0;) {  // upper hull
    const auto& p = uniq[i];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);  // last point repeats the first
  region.vertices = std::move(hull);
  return region;
}

ConvexRegion essential_region(const EssentialData& data) {
  if (data.points.empty()) throw InputError("essential_region: no limit-point data");
  return convex_hull(data.points);
}

std::optional<double> omega(const ConvexRegion& region) {
  if (region.vertices.empty()) return std::nullopt;
  double coord_scale = 1.0;
  for (const auto& v : region.vertices)
    coord_scale = std::max({coord_scale, std::abs(v[0]), std::abs(v[1])});
  const double tol = 1e-12 * coord_scale;

  std::optional<double> best;
  auto offer = [&](double y) {
    if (!best || y < *best) best = y;
  };
  const std::size_t m = region.vertices.size();
  if (m == 1) {
    if (std::abs(region.vertices[0][0]) <= tol) offer(region.vertices[0][1]);
    return best;
  }
  for (std::size_t i = 0; i < m; ++i) {
    const auto& p1 = region.vertices[i];
    const auto& p2 = region.vertices[(i + 1) % m];
    if (std::abs(p1[0]) <= tol) offer(p1[1]);
    const bool straddles = (p1[0] < -tol && p2[0] > tol) || (p1[0] > tol && p2[0] < -tol);
    if (straddles) {
      const double s = p1[0] / (p1[0] - p2[0]);
      offer(p1[1] + s * (p2[1] - p1[1]));
    }
  }
  return best;
}

SigmaSlopeReport sigma_slope_check(const StructuredFamily& f, const std::vector<double>& t_grid,
                                   double tol_slope, double tail_tol) {
  if (t_grid.empty()) throw InputError("sigma_slope_check: empty t grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0)) throw InputError("sigma_slope_check: t values must be positive");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
      throw InputError("sigma_slope_check: t grid must be strictly increasing");
  }
  EssentialData data = essential_points(f, tail_tol);

  SigmaSlopeReport rep;
  rep.sigma0 = data.points.front()[0];
  for (const auto& p : data.points) rep.sigma0 = std::min(rep.sigma0, p[0]);
  for (double t : t_grid) {
    SigmaSlopeRow row;
    row.t = t;
    row.sigma = std::numeric_limits<double>::infinity();
    for (const auto& p : data.points) row.sigma = std::min(row.sigma, p[0] + t * p[1]);
    row.ratio = row.sigma / t;
    rep.rows.push_back(row);
  }
  rep.omega_value = omega(essential_region(data));

  if (rep.sigma0 != 0.0) {
    rep.status = "sigma0-nonzero";
    return rep;
  }
  if (rep.rows.size() >= 2) {
    const SigmaSlopeRow& r1 = rep.rows[0];
    const SigmaSlopeRow& r2 = rep.rows[1];
    rep.extrapolated = r1.ratio - r1.t * (r2.ratio - r1.ratio) / (r2.t - r1.t);
  } else {
    rep.extrapolated = rep.rows[0].ratio;
  }
  if (!rep.omega_value) {
    rep.status = "no-omega";
    return rep;
  }
  rep.status = std::abs(*rep.extrapolated - *rep.omega_value) <= tol_slope ? "agree" : "disagree";
  return rep;
}

// ---------------------------------------------------------------------------
// Cap construction. States of the 2-D compression are parametrized by unit
// Bloch vectors r; the quadratic form is affine in r, so a target value
// reachable at an interior point q is reachable on the sphere along the line
// through q cut by the two real level-set constraints.

std::array<Complex, 2> span_target_solve(const ComplexMatrix& t2,
                                         const std::array<double, 3>& q) {
  if (t2.rows() != 2 || t2.cols() != 2) throw InputError("span_target_solve: need a 2x2 matrix");
  const Complex bx = (t2(0, 1) + t2(1, 0)) * 0.5;
  const Complex by = Complex(0.0, 1.0) * (t2(0, 1) - t2(1, 0)) * 0.5;
  const Complex bz = (t2(0, 0) - t2(1, 1)) * 0.5;
  const double n1[3] = {bx.real(), by.real(), bz.real()};
  const double n2[3] = {bx.imag(), by.imag(), bz.imag()};
  auto dot = [](const double* a, const double* b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  };
  const double norm1 = std::sqrt(dot(n1, n1));
  const double norm2 = std::sqrt(dot(n2, n2));
  const double form_scale = std::abs(t2(0, 0)) + std::abs(t2(0, 1)) + std::abs(t2(1, 0)) +
                            std::abs(t2(1, 1)) + 1.0;

  double r[3];
  double cross[3] = {n1[1] * n2[2] - n1[2] * n2[1], n1[2] * n2[0] - n1[0] * n2[2],
                     n1[0] * n2[1] - n1[1] * n2[0]};
  const double cross_norm = std::sqrt(dot(cross, cross));

  if (std::max(norm1, norm2) <= 1e-14 * form_scale) {
    // form constant on the sphere; any state works
    r[0] = 0.0;
    r[1] = 0.0;
    r[2] = 1.0;
  } else if (cross_norm > 1e-12 * norm1 * norm2) {
    // two independent planes: line through q, exits cut the sphere
    double d[3] = {cross[0] / cross_norm, cross[1] / cross_norm, cross[2] / cross_norm};
    const double qd = dot(q.data(), d);
    const double qq = dot(q.data(), q.data());
    const double disc = std::max(0.0, qd * qd + 1.0 - qq);
    const double s = d[2] >= 0.0 ? -qd + std::sqrt(disc) : -qd - std::sqrt(disc);
    for (int i = 0; i < 3; ++i) r[i] = q[i] + s * d[i];
  } else {
    // one effective plane: circle section, take its highest point
    const double* n = norm1 >= norm2 ? n1 : n2;
    const double nn = norm1 >= norm2 ? norm1 : norm2;
    double nh[3] = {n[0] / nn, n[1] / nn, n[2] / nn};
    double gamma = dot(q.data(), nh);
    gamma = std::clamp(gamma, -1.0, 1.0);
    double u[3] = {-nh[2] * nh[0], -nh[2] * nh[1], 1.0 - nh[2] * nh[2]};  // z-axis minus projection
    double un = std::sqrt(dot(u, u));
    if (un < 1e-12) {  // plane is horizontal; any in-plane direction
      u[0] = 1.0 - nh[0] * nh[0];
      u[1] = -nh[0] * nh[1];
      u[2] = -nh[0] * nh[2];
      un = std::sqrt(dot(u, u));
      if (un < 1e-12) {
        u[0] = -nh[1] * nh[0];
        u[1] = 1.0 - nh[1] * nh[1];
        u[2] = -nh[1] * nh[2];
        un = std::sqrt(dot(u, u));
      }
    }
    const double radial = std::sqrt(std::max(0.0, 1.0 - gamma * gamma));
    for (int i = 0; i < 3; ++i) r[i] = gamma * nh[i] + radial * u[i] / un;
  }

  const double rn = std::sqrt(dot(r, r));
  if (rn > 0.0)
    for (double& c : r) c /= rn;
  const double a = 1.0 + r[2];
  if (a < 1e-12) return {Complex(0.0, 0.0), Complex(1.0, 0.0)};
  const double y0 = std::sqrt(a / 2.0);
  return {Complex(y0, 0.0), Complex(r[0], r[1]) / std::sqrt(2.0 * a)};
}

CapReport cap_check(const ComplexMatrix& t, const std::vector<Complex>& x, double epsilon,
                    std::size_t n_targets, Rng& rng) {
  if (!t.is_square() || t.rows() == 0) throw InputError("cap_check: matrix must be square");
  const std::size_t n = t.rows();
  if (x.size() != n) throw InputError("cap_check: vector length disagrees with matrix");
  if (std::abs(vec_norm(x) - 1.0) > 1e-10) throw InputError("cap_check: x must be a unit vector");
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) throw InputError("cap_check: epsilon must be in (0,1)");

  CapReport rep;
  rep.epsilon = epsilon;
  rep.targets_checked = n_targets;
  rep.defect_tol = 1e-8 * t.frobenius_norm();
  const Complex z = quad_form(t, x);

  for (std::size_t it = 0; it < n_targets; ++it) {
    std::vector<Complex> v = rng.unit_vector(n);
    const Complex u_val = quad_form(t, v);
    const Complex w = epsilon * u_val + (1.0 - epsilon) * z;

    CapTarget tgt;
    tgt.target = w;
    std::vector<Complex> y;

    Complex alpha = vec_inner(v, x);
    std::vector<Complex> perp(n);
    for (std::size_t i = 0; i < n; ++i) perp[i] = v[i] - alpha * x[i];
    double pnorm = vec_norm(perp);
    if (pnorm < 1e-12) {
      y = x;  // v parallel to x: target collapses onto z
    } else {
      for (Complex& c : perp) c /= pnorm;
      const Complex spill = vec_inner(perp, x);
      for (std::size_t i = 0; i < n; ++i) perp[i] -= spill * x[i];
      pnorm = vec_norm(perp);
      if (pnorm < 1e-12) {
        y = x;
      } else {
        for (Complex& c : perp) c /= pnorm;
        ComplexMatrix basis(n, 2);
        basis.set_column(0, x);
        basis.set_column(1, perp);
        const ComplexMatrix t2 = compress(t, basis);

        Complex a2 = alpha;
        Complex b2 = vec_inner(v, perp);
        const double vn = std::sqrt(std::norm(a2) + std::norm(b2));
        a2 /= vn;
        b2 /= vn;
        const Complex off = b2 * std::conj(a2);
        const double rv[3] = {2.0 * off.real(), 2.0 * off.imag(),
                              std::norm(a2) - std::norm(b2)};
        std::array<double, 3> q = {epsilon * rv[0], epsilon * rv[1],
                                   epsilon * rv[2] + (1.0 - epsilon)};
        const double qn = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
        if (qn > 1.0)
          for (double& c : q) c /= qn;

        const std::array<Complex, 2> y2 = span_target_solve(t2, q);
        y.resize(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = y2[0] * x[i] + y2[1] * perp[i];
        const double yn = vec_norm(y);
        for (Complex& c : y) c /= yn;
      }
    }

    tgt.achieved = quad_form(t, y);
    tgt.defect = std::abs(tgt.achieved - w);
    tgt.overlap = std::norm(vec_inner(y, x));
    tgt.ok = tgt.defect <= rep.defect_tol && tgt.overlap >= 1.0 - epsilon - 1e-10;
    rep.max_defect = std::max(rep.max_defect, tgt.defect);
    rep.targets.push_back(tgt);
    rep.witnesses.push_back(std::move(y));
  }
  rep.all_ok = true;
  for (const CapTarget& tg : rep.targets) rep.all_ok = rep.all_ok && tg.ok;
  return rep;
}

RayReport ray_check(const StructuredFamily& f, const std::array<double, 2>& w,
                    const std::array<double, 2>& direction, const std::vector<double>& t_values,
                    bool unbounded_declared) {
  RayReport rep;
  rep.w = w;
  rep.direction = direction;
  if (!unbounded_declared) {
    rep.status = "no unbounded direction declared";
    return rep;
  }
  rep.status = "ok";
  for (double t : t_values)
    if (!(t > 0.0)) throw InputError("ray_check: t values must be positive");

  const HermitianMatrix a0 = evaluate(f, 0.0);
  HermitianMatrix a1 = HermitianMatrix::from_exact(ComplexMatrix(f.dim, f.dim));
  try {
    a1 = family_a1(Family(f));
  } catch (const InputError&) {
    // constant family: second coordinate of every probe is 0
  }

  std::vector<std::size_t> truncs;
  for (std::size_t nn = f.dim; nn >= 8; nn /= 2) {
    truncs.push_back(nn);
    if (nn == 8) break;
  }
  if (truncs.empty()) truncs.push_back(f.dim);
  std::sort(truncs.begin(), truncs.end());

  for (double t : t_values) {
    const std::array<double, 2> target = {w[0] + t * direction[0], w[1] + t * direction[1]};
    for (std::size_t nn : truncs) {
      // candidate pairs from coordinate directions supported past nn/2
      std::size_t k1 = 0;
      double best = std::numeric_limits<double>::infinity();
      auto pair_at = [&](std::size_t k) {
        return std::array<double, 2>{a0.matrix()(k - 1, k - 1).real(),
                                     a1.matrix()(k - 1, k - 1).real()};
      };
      for (std::size_t k = nn / 2 + 1; k <= nn; ++k) {
        const auto p = pair_at(k);
        const double d2 = std::hypot(p[0] - w[0], p[1] - w[1]);
        if (d2 < best) {
          best = d2;
          k1 = k;
        }
      }
      const auto p1 = pair_at(k1);
      std::size_t k2 = k1;
      double align = -std::numeric_limits<double>::infinity();
      for (std::size_t k = nn / 2 + 1; k <= nn; ++k) {
        if (k == k1) continue;
        const auto p = pair_at(k);
        const double ux = p[0] - p1[0];
        const double uy = p[1] - p1[1];
        const double un = std::hypot(ux, uy);
        if (un < 1e-30) continue;
        const double score = (ux * direction[0] + uy * direction[1]) / un;
        if (score > align) {
          align = score;
          k2 = k;
        }
      }

      RayRow row;
      row.t = t;
      row.trunc = nn;
      row.k1 = k1;
      row.k2 = k2;
      std::vector<Complex> y(f.dim, Complex(0.0, 0.0));
      if (k2 == k1) {
        row.mix = 0.0;
        y[k1 - 1] = 1.0;
      } else {
        const auto p2 = pair_at(k2);
        const double ux = p2[0] - p1[0];
        const double uy = p2[1] - p1[1];
        const double uu = ux * ux + uy * uy;
        double s = ((target[0] - p1[0]) * ux + (target[1] - p1[1]) * uy) / uu;
        s = std::clamp(s, 0.0, 1.0);
        row.mix = s;
        y[k1 - 1] = std::sqrt(1.0 - s);
        y[k2 - 1] = std::sqrt(s);
      }
      row.achieved = {quad_form_real(a0, y), quad_form_real(a1, y)};
      row.error = std::hypot(row.achieved[0] - target[0], row.achieved[1] - target[1]);
      rep.rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace specrange
