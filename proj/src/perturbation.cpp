#include "specrange/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "specrange/numrange.hpp"
#include "specrange/secular.hpp"

namespace specrange {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bottom branch computable through the secular function: diagonal base with an
// exact zero carrying weight, minus exactly one t-linear rank-one term.
const StructuredFamily* secular_candidate(const Family& f) {
  const auto* s = std::get_if<StructuredFamily>(&f);
  if (!s) return nullptr;
  if (s->rank_one_terms.size() != 1) return nullptr;
  const RankOneTerm& r = s->rank_one_terms.front();
  if (r.coupling_degree != 1 || r.sign != -1) return nullptr;
  if (!s->a1_diagonal.is_zero()) return nullptr;
  double dmin = s->base.values.front();
  for (double v : s->base.values) dmin = std::min(dmin, v);
  if (dmin != 0.0) return nullptr;
  double weight_at_min = 0.0;
  for (std::size_t k = 0; k < s->dim; ++k)
    if (s->base.values[k] == 0.0) weight_at_min += std::norm(r.vector[k]);
  if (!(weight_at_min > 0.0)) return nullptr;
  return s;
}

SecularModel model_from(const StructuredFamily& s) {
  std::vector<double> w(s.dim);
  for (std::size_t k = 0; k < s.dim; ++k) w[k] = std::norm(s.rank_one_terms.front().vector[k]);
  return SecularModel::from_dense(s.base.values, std::move(w));
}

void push_warning(std::vector<std::string>& sink, const std::string& msg) {
  if (sink.size() < 20) {
    sink.push_back(msg);
  } else if (sink.size() == 20) {
    sink.push_back("(further warnings suppressed)");
  }
}

}  // namespace

bool has_exact_bottom_route(const Family& f) { return secular_candidate(f) != nullptr; }

TrajectorySet track(const Family& f, const std::vector<double>& t_grid, std::size_t n_branches) {
  if (t_grid.empty()) throw InputError("track: empty t grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || !std::isfinite(t_grid[i]))
      throw InputError("track: grid values must be positive and finite");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
      throw InputError("track: grid must be strictly increasing");
  }
  const std::size_t dim = family_dim(f);
  if (n_branches < 1 || n_branches > dim)
    throw InputError("track: branch count must lie in 1..dim");

  TrajectorySet out;
  out.t_grid = t_grid;

  const StructuredFamily* sec = secular_candidate(f);
  std::optional<SecularModel> model;
  if (sec) {
    model = model_from(*sec);
    out.used_exact_bottom = true;
  }

  const std::size_t m = t_grid.size();
  std::vector<std::vector<double>> vals(m);
  double value_scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> ev = hermitian_eigenvalues(evaluate(f, t_grid[i]));
    vals[i].assign(ev.begin(), ev.begin() + n_branches);
    if (model) vals[i][0] = lambda_min(*model, t_grid[i]);
    for (double v : vals[i]) value_scale = std::max(value_scale, std::abs(v));
  }

  // sorted-to-sorted identity matching is displacement-minimal; flag steps
  // where swapping an adjacent pair would cost the same
  for (std::size_t i = 0; i + 1 < m; ++i) {
    for (std::size_t b = 0; b + 1 < n_branches; ++b) {
      const double keep = std::abs(vals[i + 1][b] - vals[i][b]) +
                          std::abs(vals[i + 1][b + 1] - vals[i][b + 1]);
      const double swap = std::abs(vals[i + 1][b + 1] - vals[i][b]) +
                          std::abs(vals[i + 1][b] - vals[i][b + 1]);
      if (std::abs(keep - swap) <= 1e-12) {
        std::ostringstream os;
        os << "matching ambiguity between branches " << b << " and " << b + 1 << " over t = ["
           << t_grid[i] << ", " << t_grid[i + 1] << "]";
        push_warning(out.warnings, os.str());
      }
    }
  }

  out.branches.resize(n_branches);
  for (std::size_t b = 0; b < n_branches; ++b) {
    out.branches[b].branch_id = b;
    out.branches[b].values.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.branches[b].values[i] = vals[i][b];
  }

  // neighbor-difference jump bound: a step 4x steeper than every other step of
  // the same branch is a likely identity swap
  if (m >= 3) {
    for (const TrajectoryBranch& br : out.branches) {
      std::vector<double> slopes(m - 1);
      for (std::size_t i = 0; i + 1 < m; ++i)
        slopes[i] = std::abs(br.values[i + 1] - br.values[i]) / (t_grid[i + 1] - t_grid[i]);
      for (std::size_t i = 0; i + 1 < m; ++i) {
        double max_other = 0.0;
        for (std::size_t j = 0; j + 1 < m; ++j)
          if (j != i) max_other = std::max(max_other, slopes[j]);
        const double step_move = slopes[i] * (t_grid[i + 1] - t_grid[i]);
        if (slopes[i] > 4.0 * max_other && step_move > 1e-12 * (1.0 + value_scale)) {
          std::ostringstream os;
          os << "branch " << br.branch_id << " jumps at t = " << t_grid[i + 1]
             << " beyond 4x its neighbor slopes";
          push_warning(out.warnings, os.str());
        }
      }
    }
  }

  if (const auto* s = std::get_if<StructuredFamily>(&f)) {
    try {
      EssentialData pts = essential_points(*s);
      out.sigma.resize(m);
      for (std::size_t i = 0; i < m; ++i) {
        double sv = kInf;
        for (const auto& p : pts.points) sv = std::min(sv, p[0] + t_grid[i] * p[1]);
        out.sigma[i] = sv;
      }
      out.has_sigma = true;
    } catch (const InputError&) {
      out.has_sigma = false;  // tail data invalid for limits; sigma marked n/a
    }
  }

  for (TrajectoryBranch& br : out.branches) {
    br.below_sigma.assign(m, false);
    if (out.has_sigma)
      for (std::size_t i = 0; i < m; ++i) br.below_sigma[i] = br.values[i] < out.sigma[i];
  }
  return out;
}

KernelProjection kernel_projection(const HermitianMatrix& a, double level, double tol_kernel) {
  if (!(tol_kernel > 0.0)) throw InputError("kernel_projection: tol_kernel must be positive");
  EigenDecomposition eig = hermitian_eig(a);
  const std::size_t n = a.dim();
  std::vector<std::size_t> keep;
  KernelProjection p;
  p.level = level;
  p.tol_kernel = tol_kernel;
  for (std::size_t i = 0; i < n; ++i) {
    const double dist = std::abs(eig.values[i] - level);
    if (dist <= tol_kernel) {
      keep.push_back(i);
    } else if (dist <= 2.0 * tol_kernel) {
      std::ostringstream os;
      os << "eigenvalue " << format_g17(eig.values[i]) << " lies within 2x of the kernel cut at "
         << format_g17(level);
      push_warning(p.warnings, os.str());
    }
  }
  p.basis = ComplexMatrix(n, keep.size());
  for (std::size_t j = 0; j < keep.size(); ++j)
    p.basis.set_column(j, eig.vectors.column(keep[j]));
  return p;
}

KernelProjection exact_structured_kernel(const StructuredFamily& f, double t0, double level) {
  if (t0 != 0.0 && !f.rank_one_terms.empty())
    throw InputError(
        "exact_structured_kernel: rank-one terms are active at t0 != 0; the evaluated matrix is "
        "not diagonal");
  std::set<std::size_t> flushed(f.base.flushed.begin(), f.base.flushed.end());
  flushed.insert(f.a1_diagonal.flushed.begin(), f.a1_diagonal.flushed.end());

  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < f.dim; ++k) {
    if (flushed.count(k + 1)) continue;
    if (f.base.values[k] + t0 * f.a1_diagonal.values[k] == level) keep.push_back(k);
  }
  KernelProjection p;
  p.level = level;
  p.tol_kernel = 0.0;
  p.basis = ComplexMatrix(f.dim, keep.size());
  for (std::size_t j = 0; j < keep.size(); ++j) p.basis(keep[j], j) = 1.0;
  return p;
}

B0Compression b0_compression(const KernelProjection& p, const HermitianMatrix& a1) {
  if (p.basis.cols() == 0) throw InputError("b0_compression: no kernel at the requested level");
  if (p.basis.rows() != a1.dim())
    throw InputError("b0_compression: projection and coefficient dimensions disagree");
  B0Compression out{compress_hermitian(a1, p.basis), {}};
  out.mu = hermitian_eigenvalues(out.matrix);
  return out;
}

namespace {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rms = 0.0;
  double span = 0.0;  // largest tau in the window
};

LineFit fit_line(const std::vector<double>& tau, const std::vector<double>& y, std::size_t count) {
  LineFit fit;
  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    mt += tau[i];
    my += y[i];
  }
  mt /= static_cast<double>(count);
  my /= static_cast<double>(count);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sxx += (tau[i] - mt) * (tau[i] - mt);
    sxy += (tau[i] - mt) * (y[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mt;
  double ss = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * tau[i];
    ss += r * r;
    fit.span = std::max(fit.span, tau[i]);
  }
  fit.rms = std::sqrt(ss / static_cast<double>(count));
  return fit;
}

}  // namespace

SlopeEstimate slope_estimate(const TrajectorySet& traj, std::size_t branch_id, double t0,
                             double sigma_t0) {
  const TrajectoryBranch* branch = nullptr;
  for (const TrajectoryBranch& b : traj.branches)
    if (b.branch_id == branch_id) branch = &b;
  if (!branch) throw InputError("slope_estimate: unknown branch id");

  std::vector<double> tau, y;
  for (std::size_t i = 0; i < traj.t_grid.size(); ++i) {
    if (traj.t_grid[i] > t0) {
      tau.push_back(traj.t_grid[i] - t0);
      y.push_back((branch->values[i] - sigma_t0) / (traj.t_grid[i] - t0));
    }
  }
  if (tau.size() < 4)
    throw InputError("slope_estimate: fewer than 4 grid points beyond t0");

  const std::size_t n = tau.size();
  const std::size_t n1 = std::min(n, std::max<std::size_t>(4, n / 2));
  const std::size_t n2 = std::min(n1, std::max<std::size_t>(4, n / 4));
  const LineFit f1 = fit_line(tau, y, n1);
  const LineFit f2 = fit_line(tau, y, n2);

  SlopeEstimate est;
  if (f1.span > f2.span * (1.0 + 1e-12)) {
    const double s1 = f1.span * f1.span;
    const double s2 = f2.span * f2.span;
    est.beta = (f2.intercept * s1 - f1.intercept * s2) / (s1 - s2);
  } else {
    est.beta = f2.intercept;
  }
  est.uncertainty =
      std::abs(f1.intercept - f2.intercept) + f2.rms + std::abs(est.beta - f2.intercept);
  return est;
}

AbsorptionReport verify_absorption(const Family& f, double t0, const AbsorbOptions& opt) {
  if (!std::isfinite(t0) || t0 < 0.0)
    throw InputError("verify_absorption: t0 must be finite and nonnegative");
  AbsorptionReport rep;
  rep.t0 = t0;

  const StructuredFamily* s = std::get_if<StructuredFamily>(&f);
  if (s) {
    EssentialData pts = essential_points(*s, opt.tail_tol);
    double sv = kInf;
    EssentialData shifted;
    for (const auto& p : pts.points) {
      sv = std::min(sv, p[0] + t0 * p[1]);
      shifted.points.push_back({p[0] + t0 * p[1], p[1]});
    }
    rep.sigma_t0 = opt.declared_sigma ? *opt.declared_sigma : sv;
    rep.omega_value = opt.declared_omega ? opt.declared_omega : omega(essential_region(shifted));
    if (!rep.omega_value)
      rep.notes.push_back("essential region misses the vertical axis; no omega threshold");
  } else {
    if (!opt.declared_sigma)
      throw InputError("verify_absorption: polynomial family needs a declared sigma at t0");
    rep.sigma_t0 = *opt.declared_sigma;
    rep.omega_value = opt.declared_omega;
    if (!rep.omega_value)
      rep.notes.push_back("omega not declared; every slope treated as admissible");
  }
  const double omega_cut = rep.omega_value ? *rep.omega_value : kInf;

  const HermitianMatrix a_t0 = evaluate(f, t0);
  const HermitianMatrix a1 = family_a1(f);

  KernelProjection proj;
  if (opt.tol_kernel > 0.0) {
    proj = kernel_projection(a_t0, rep.sigma_t0, opt.tol_kernel);
  } else if (s && (t0 == 0.0 || s->rank_one_terms.empty())) {
    proj = exact_structured_kernel(*s, t0, rep.sigma_t0);
  } else {
    proj = kernel_projection(a_t0, rep.sigma_t0, 1e-8 * a_t0.frobenius_norm());
  }
  rep.kernel_dim = proj.basis.cols();
  for (const std::string& w : proj.warnings) rep.notes.push_back(w);

  if (rep.kernel_dim > 0) rep.mu = b0_compression(proj, a1).mu;

  std::size_t mu_below = 0;
  for (double mv : rep.mu) {
    if (mv < omega_cut - 1e-6) {
      ++mu_below;
    } else if (std::isfinite(omega_cut) && std::abs(mv - omega_cut) <= 1e-6) {
      rep.notes.push_back("compression eigenvalue " + format_g17(mv) +
                          " is at-threshold (within 1e-6 of omega), unverifiable");
    }
  }

  std::vector<double> grid = opt.t_grid;
  if (grid.empty()) {
    if (has_exact_bottom_route(f) && t0 == 0.0) {
      grid = logspace(1e-72, 1e-66, 12);
    } else {
      const double s0 = 1.0 + std::abs(t0);
      grid = logspace(1e-7 * s0, 1e-6 * s0, 8);
      for (double& g : grid) g += t0;
    }
  }
  for (double g : grid)
    if (!(g > t0)) throw InputError("verify_absorption: grid values must exceed t0");

  const std::size_t dim = family_dim(f);
  std::size_t nb = opt.n_branches;
  if (nb == 0) nb = std::min<std::size_t>(dim, std::max<std::size_t>(2, mu_below + 1));
  rep.trajectories = track(f, grid, nb);
  for (const std::string& w : rep.trajectories.warnings) rep.notes.push_back(w);

  const double t_min = grid.front();
  const double approach_bound = (4.0 * a1.frobenius_norm() + 1.0) * (t_min - t0);
  for (const TrajectoryBranch& br : rep.trajectories.branches) {
    const double v0 = br.values.front();
    const bool approaches = std::abs(v0 - rep.sigma_t0) <= approach_bound;
    bool below;
    if (rep.trajectories.has_sigma) {
      below = br.below_sigma.front();
    } else if (std::isfinite(omega_cut)) {
      below = v0 < rep.sigma_t0 + (t_min - t0) * omega_cut;
    } else {
      below = true;
    }
    if (approaches && below) rep.absorbed_branches.push_back(br.branch_id);
  }

  struct Slope {
    std::size_t branch;
    double beta;
    double unc;
  };
  std::vector<Slope> matched;
  for (std::size_t b : rep.absorbed_branches) {
    SlopeEstimate est = slope_estimate(rep.trajectories, b, t0, rep.sigma_t0);
    if (std::isfinite(omega_cut) && std::abs(est.beta - omega_cut) <= 1e-6) {
      rep.notes.push_back("branch " + std::to_string(b) + " slope " + format_g17(est.beta) +
                          " is at-threshold (within 1e-6 of omega), unverifiable");
      continue;
    }
    if (est.beta < omega_cut - 1e-6) {
      matched.push_back({b, est.beta, est.uncertainty});
    } else {
      rep.notes.push_back("branch " + std::to_string(b) + " slope " + format_g17(est.beta) +
                          " is not below omega; excluded from matching");
    }
  }
  std::sort(matched.begin(), matched.end(),
            [](const Slope& a, const Slope& b) { return a.beta < b.beta; });

  if (rep.kernel_dim == 0 && !matched.empty()) {
    rep.verdict = "theorem-violation";
    rep.notes.push_back("empty kernel yet a branch is absorbed with slope below omega");
    return rep;
  }
  if (matched.empty() && mu_below == 0) {
    rep.verdict = "no-absorption";
    return rep;
  }
  if (matched.size() != mu_below) {
    rep.verdict = "fail";
    rep.notes.push_back("absorbed branch count " + std::to_string(matched.size()) +
                        " does not match " + std::to_string(mu_below) +
                        " compression eigenvalues below omega");
    for (const Slope& sl : matched)
      rep.pairs.push_back({sl.branch, sl.beta, sl.unc, 0.0, kInf});
    return rep;
  }

  std::vector<double> mu_sel;
  for (double mv : rep.mu)
    if (mv < omega_cut - 1e-6) mu_sel.push_back(mv);
  std::sort(mu_sel.begin(), mu_sel.end());

  bool all_ok = true;
  for (std::size_t k = 0; k < matched.size(); ++k) {
    MatchedPair mp;
    mp.branch_id = matched[k].branch;
    mp.beta = matched[k].beta;
    mp.uncertainty = matched[k].unc;
    mp.mu = mu_sel[k];
    mp.gap = std::abs(mp.beta - mp.mu);
    all_ok = all_ok && mp.gap <= std::max(opt.beta_tol, 10.0 * mp.uncertainty);
    rep.pairs.push_back(mp);
  }
  rep.verdict = all_ok ? "pass" : "fail";
  return rep;
}

DerivativeCheck derivative_check(const Family& f, double t, std::size_t branch_id) {
  const HermitianMatrix a = evaluate(f, t);
  EigenDecomposition eig = hermitian_eig(a);
  if (branch_id >= a.dim()) throw InputError("derivative_check: branch id out of range");

  DerivativeCheck rep;
  rep.lambda = eig.values[branch_id];
  const double scale = std::max(1.0, a.frobenius_norm());
  double gap = kInf;
  for (std::size_t i = 0; i < eig.values.size(); ++i)
    if (i != branch_id) gap = std::min(gap, std::abs(eig.values[i] - rep.lambda));
  if (gap < 1e-6 * scale) {
    rep.status = "crossing";
    rep.pass = true;  // check skipped: the derivative need not exist here
    return rep;
  }
  rep.status = "ok";

  const HermitianMatrix deriv = family_derivative(f, t);
  rep.analytic = quad_form_real(deriv, eig.vectors.column(branch_id));

  double h0 = std::isfinite(gap) ? gap / (8.0 * (deriv.frobenius_norm() + 1.0)) : 0.05;
  h0 = std::min(h0, 0.05 * std::max(1.0, std::abs(t)));
  if (const auto* p = std::get_if<PolynomialFamily>(&f); p && p->radius)
    h0 = std::min(h0, 0.25 * (*p->radius - std::abs(t)));
  if (!(h0 > 0.0)) throw NumericalError("derivative_check: no usable step size");

  auto nearest = [&](double tt) {
    std::vector<double> ev = hermitian_eigenvalues(evaluate(f, tt));
    double best = ev.front();
    for (double v : ev)
      if (std::abs(v - rep.lambda) < std::abs(best - rep.lambda)) best = v;
    return best;
  };
  for (double h : {h0, h0 / 2.0, h0 / 4.0}) {
    const double fd = (nearest(t + h) - nearest(t - h)) / (2.0 * h);
    rep.h_values.push_back(h);
    rep.fd_values.push_back(fd);
    rep.mismatches.push_back(std::abs(fd - rep.analytic));
  }
  const double tol0 = 1e-11 * (scale + std::abs(rep.analytic));
  rep.pass = rep.mismatches[2] <= rep.mismatches[0] / 8.0 + tol0 || rep.mismatches[0] <= tol0;
  return rep;
}

std::vector<double> isolated_branch_slopes(const PolynomialFamily& f, double level, double tol) {
  if (!(tol > 0.0)) throw InputError("isolated_branch_slopes: tol must be positive");
  if (f.coefficients.size() < 2)
    throw InputError("isolated_branch_slopes: family has no first-order term");
  const HermitianMatrix& a0 = f.coefficients[0];
  EigenDecomposition eig = hermitian_eig(a0);

  std::vector<std::size_t> keep;
  double gap = kInf;
  for (std::size_t i = 0; i < eig.values.size(); ++i) {
    const double dist = std::abs(eig.values[i] - level);
    if (dist <= tol)
      keep.push_back(i);
    else
      gap = std::min(gap, dist);
  }
  if (keep.empty()) throw InputError("isolated_branch_slopes: no eigenvalue at the level");
  if (gap < 10.0 * tol) {
    std::ostringstream os;
    os << "isolated_branch_slopes: level is not isolated; nearest outside eigenvalue at distance "
       << format_g17(gap) << " < 10 * tol";
    throw InputError(os.str());
  }
  ComplexMatrix basis(a0.dim(), keep.size());
  for (std::size_t j = 0; j < keep.size(); ++j) basis.set_column(j, eig.vectors.column(keep[j]));
  return hermitian_eigenvalues(compress_hermitian(f.coefficients[1], basis));
}

}  // namespace specrange
