#include "specrange/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "specrange/presets.hpp"
#include "specrange/report.hpp"

namespace specrange {

namespace fs = std::filesystem;

namespace {

std::string short6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void ensure_dir(const std::string& dir) { fs::create_directories(dir); }

struct Ctx {
  double ts = 1.0;  // tolerance scale
  std::uint64_t seed = 0;
  std::map<std::size_t, VolterraReport> vcache;

  const VolterraReport& volterra(std::size_t n) {
    auto it = vcache.find(n);
    if (it == vcache.end()) it = vcache.emplace(n, volterra_verify(n, 0.5, 5)).first;
    return it->second;
  }
};

// ---- criterion 1: sign pattern and explicit bounds of the secular scan ----

CriterionResult c1_secular_signs(Ctx& ctx, const std::string& dir) {
  CriterionResult r;
  r.id = 1;
  r.name = "secular-signs";
  r.target = "signs (-,+,-,+) at m in {5,7,9,11}; both bounds hold at m = 5 and m = 9";
  ensure_dir(dir);

  SecularModel a = example62_weights('a', 6);
  SecularModel b = example62_weights('b', 6);
  const std::vector<ScanRow> rows = crossing_scan(a, b, {5, 7, 9, 11});
  write_file(dir + "/scan.csv", scan_csv(rows));

  const int want[4] = {-1, 1, -1, 1};
  std::string got;
  bool ok = rows.size() == 4;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    got += rows[i].sign > 0 ? '+' : (rows[i].sign < 0 ? '-' : '0');
    ok = ok && rows[i].sign == want[i];
  }
  const bool bounds = rows.size() == 4 && rows[0].bound_a_ok == 1 && rows[0].bound_b_ok == 1 &&
                      rows[2].bound_a_ok == 1 && rows[2].bound_b_ok == 1;
  r.achieved = "signs " + got + ", bounds at m=5,9 " + (bounds ? "hold" : "violated");
  r.pass = ok && bounds && ctx.ts > 0.0;
  return r;
}

// ---- criterion 2: secular minimum against the dense eigensolver ----

CriterionResult c2_secular_dense(Ctx& ctx, const std::string& dir) {
  CriterionResult r;
  r.id = 2;
  r.name = "secular-dense";
  r.target = "lambda_min within 1e-10 relative of dense minimum; exactly 1 negative eigenvalue";
  ensure_dir(dir);

  const Family fam = make_preset("example62a", 200);
  SecularModel model = example62_model('a', 200);

  std::ostringstream csv;
  csv << "t,secular,dense,rel_diff,negative_count\n";
  double worst = 0.0;
  bool counts_ok = true;
  for (double t : {1e-3, 1e-2, 1e-1, 0.5}) {
    const double lam = lambda_min(model, t);
    const HermitianMatrix at = evaluate(fam, t);
    const std::vector<double> ev = hermitian_eigenvalues(at);
    const double dense = ev.front();
    const double rel = std::abs(lam - dense) / std::abs(dense);
    std::size_t neg = 0;
    const double cut = -1e-12 * at.frobenius_norm();
    for (double v : ev)
      if (v < cut) ++neg;
    counts_ok = counts_ok && neg == 1;
    worst = std::max(worst, rel);
    csv << format_g17(t) << "," << format_g17(lam) << "," << format_g17(dense) << ","
        << format_g17(rel) << "," << neg << "\n";
  }
  write_file(dir + "/secular_vs_dense.csv", csv.str());
  r.achieved = "max rel diff " + short6(worst) + ", negative counts " +
               (counts_ok ? "all 1" : "wrong");
  r.pass = worst <= 1e-10 * ctx.ts && counts_ok;
  return r;
}

// ---- criterion 3: absorption verdict and slope at t0 = 0 ----

CriterionResult c3_absorption_slope(Ctx& ctx, const std::string& dir) {
  CriterionResult r;
  r.id = 3;
  r.name = "absorption-slope";
  r.target = "verdict pass, one absorbed branch, slope within 1e-3 of -1";
  ensure_dir(dir);

  const Family fam = make_preset("example62a", 200);
  const AbsorptionReport rep = verify_absorption(fam, 0.0);
  write_file(dir + "/absorption.kv", absorption_kv(rep));
  write_file(dir + "/absorption.csv", absorption_csv(rep));
  write_file(dir + "/trajectories.csv", trajectory_csv(rep.trajectories));

  const bool one = rep.absorbed_branches.size() == 1 && rep.pairs.size() == 1;
  const double beta = one ? rep.pairs.front().beta : 0.0;
  r.achieved = "verdict " + rep.verdict + ", absorbed " +
               std::to_string(rep.absorbed_branches.size()) +
               (one ? ", beta " + short6(beta) : "");
  r.pass = rep.verdict == "pass" && one && std::abs(beta - (-1.0)) <= 1e-3 * ctx.ts;
  return r;
}

// ---- criterion 4: barrier slope extrapolation on two tail models ----

CriterionResult c4_sigma_slope(Ctx& ctx, const std::string& dir) {
  CriterionResult r;
  r.id = 4;
  r.name = "sigma-slope";
  r.target = "(i) omega 0 with ratio identically 0; (ii) omega -2, extrapolation within 1e-6";
  ensure_dir(dir);

  const Family fam = make_preset("example62a", 200);
  const auto& s62 = std::get<StructuredFamily>(fam);
  const std::vector<double> grid = logspace(1e-6, 1e-2, 16);
  const SigmaSlopeReport ra = sigma_slope_check(s62, grid);
  write_file(dir + "/sigma_slope_a.kv", sigma_slope_kv(ra));
  write_file(dir + "/sigma_slope_a.csv", sigma_slope_csv(ra));
  bool ok_a = ra.omega_value && *ra.omega_value == 0.0 && ra.sigma0 == 0.0 &&
              ra.status == "agree";
  for (const SigmaSlopeRow& row : ra.rows) ok_a = ok_a && row.sigma == 0.0 && row.ratio == 0.0;

  std::vector<double> dv(64), av(64);
  for (std::size_t k = 1; k <= 64; ++k) {
    dv[k - 1] = std::exp(-static_cast<double>(k));
    av[k - 1] = (k % 2) ? 1.0 : -2.0;
  }
  const StructuredFamily two = make_structured(DiagonalTail::explicit_list(dv, {0.0}),
                                               DiagonalTail::explicit_list(av, {1.0, -2.0}), {});
  const SigmaSlopeReport rb = sigma_slope_check(two, grid);
  write_file(dir + "/sigma_slope_two_tail.kv", sigma_slope_kv(rb));
  write_file(dir + "/sigma_slope_two_tail.csv", sigma_slope_csv(rb));
  const bool ok_b = rb.omega_value && *rb.omega_value == -2.0 && rb.extrapolated &&
                    std::abs(*rb.extrapolated - (-2.0)) <= 1e-6 * ctx.ts &&
                    rb.status == "agree";

  r.achieved = std::string("(i) ") + (ok_a ? "exact" : "off") + ", (ii) omega " +
               (rb.omega_value ? short6(*rb.omega_value) : "na") + ", extrapolated " +
               (rb.extrapolated ? short6(*rb.extrapolated) : "na");
  r.pass = ok_a && ok_b;
  return r;
}

// ---- criterion 5: closed-form spectrum under grid refinement ----

CriterionResult c5_volterra_closed_form(Ctx& ctx, const std::string& dir) {
  CriterionResult r;
  r.id = 5;
  r.name = "volterra-closed-form";
  r.target = "max rel error <= 1e-2 at n = 1024, decreasing under doubling from 128";
  ensure_dir(dir);

  const std::size_t sizes[4] = {128, 256, 512, 1024};
  std::vector<double> errs;
  std::ostringstream csv;
  csv << "n,max_rel_error\n";
  for (std::size_t n : sizes) {
    const VolterraReport& vr = ctx.volterra(n);
    errs.push_back(vr.max_rel_error);
    csv << n << "," << format_g17(vr.max_rel_error) << "\n";
  }
  write_file(dir + "/refinement.csv", csv.str());
  write_file(dir + "/closed_form_1024.csv", volterra_csv(ctx.volterra(1024)));

  bool decreasing = errs.back() < errs.front();
  for (std::size_t i = 0; i + 1 < errs.size(); ++i)
    decreasing = decreasing && errs[i + 1] <= 1.1 * errs[i];
  r.achieved = "errors " + short6(errs[0]) + " -> " + short6(errs[1]) + " -> " + short6(errs[2]) +
               " -> " + short6(errs[3]);
  r.pass = errs.back() <= 1e-2 * ctx.ts && decreasing;
  return r;
}

// ---- criterion 6: kernel compression slopes of the rotated family ----

CriterionResult c6_volterra_compression(Ctx& ctx, const std::string& dir) {
  CriterionResult r;
  r.id = 6;
  r.name = "volterra-compression";
  r.target = "leading compression eigenvalues within 1e-2 of +-1/(2pi), +-1/(4pi)";
  ensure_dir(dir);

  const VolterraReport& vr = ctx.volterra(1024);
  write_file(dir + "/volterra.kv", volterra_kv(vr));

  double worst = 0.0;
  for (const VolterraDerivRow& row : vr.derivative_rows) worst = std::max(worst, row.rel_error);
  r.achieved = "kernel dim " + std::to_string(vr.kernel_dim) + ", " +
               std::to_string(vr.derivative_rows.size()) + " rows, max rel error " + short6(worst);
  r.pass = vr.derivative_rows.size() == 4 && worst <= 1e-2 * ctx.ts;
  return r;
}

// ---- criterion 7: interior cap containment on random matrices ----

CriterionResult c7_cap_containment(Ctx& ctx, const std::string& dir) {
  CriterionResult r;
  r.id = 7;
  r.name = "cap-containment";
  r.target = "max defect <= 1e-8 * ||T|| over 20 matrices x {0.1,0.3,0.7} x 200 targets";
  ensure_dir(dir);

  Rng rng(ctx.seed);
  std::ostringstream csv;
  csv << "matrix,dim,epsilon,max_defect,defect_tol,all_ok\n";
  double worst_ratio = 0.0;
  bool pass = true;
  bool first_written = false;
  for (int m = 0; m < 20; ++m) {
    const std::size_t dim = 2 + static_cast<std::size_t>(m % 5);
    ComplexMatrix t(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) t(i, j) = rng.normal_complex();
    const std::vector<Complex> x = rng.unit_vector(dim);
    for (double eps : {0.1, 0.3, 0.7}) {
      const CapReport rep = cap_check(t, x, eps, 200, rng);
      csv << m << "," << dim << "," << format_g17(eps) << "," << format_g17(rep.max_defect) << ","
          << format_g17(rep.defect_tol) << "," << (rep.all_ok ? 1 : 0) << "\n";
      if (!first_written) {
        write_file(dir + "/targets_first_run.csv", capcheck_csv(rep));
        first_written = true;
      }
      worst_ratio = std::max(worst_ratio, rep.max_defect / rep.defect_tol);
      pass = pass && rep.all_ok && rep.max_defect <= rep.defect_tol * ctx.ts;
    }
  }
  write_file(dir + "/cap_summary.csv", csv.str());
  r.achieved = "worst defect / tol = " + short6(worst_ratio);
  r.pass = pass;
  return r;
}

// ---- criterion 8: degenerate-kernel slope ordering on random families ----

CriterionResult c8_kernel_slope_ordering(Ctx& ctx, const std::string& dir) {
  CriterionResult r;
  r.id = 8;
  r.name = "kernel-slope-ordering";
  r.target = "bottom-d slopes match sorted compression eigenvalues within 1e-5, 25 trials";
  ensure_dir(dir);

  Rng rng(ctx.seed + 8);
  const std::vector<double> grid = logspace(1e-7, 1e-6, 8);
  std::ostringstream csv;
  csv << "trial,d,branch,slope,mu,abs_diff\n";
  double worst = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t d = 1 + static_cast<std::size_t>(trial % 3);
    const std::size_t dim = d + 5;

    ComplexMatrix a0m(dim, dim);
    for (std::size_t k = d; k < dim; ++k) a0m(k, k) = 0.5 + 2.0 * rng.uniform01();
    const HermitianMatrix a0 = HermitianMatrix::from_exact(std::move(a0m));

    ComplexMatrix a1m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      a1m(i, i) = rng.normal();
      for (std::size_t j = i + 1; j < dim; ++j) {
        const Complex v = rng.normal_complex();
        a1m(i, j) = v;
        a1m(j, i) = std::conj(v);
      }
    }
    const HermitianMatrix a1 = HermitianMatrix::from_exact(std::move(a1m));

    ComplexMatrix basis(dim, d);
    for (std::size_t k = 0; k < d; ++k) basis(k, k) = 1.0;
    const std::vector<double> mu = hermitian_eigenvalues(compress_hermitian(a1, basis));

    const Family fam = make_polynomial({a0, a1});
    const TrajectorySet traj = track(fam, grid, d);
    std::vector<double> slopes(d);
    for (std::size_t b = 0; b < d; ++b) slopes[b] = slope_estimate(traj, b, 0.0, 0.0).beta;
    std::sort(slopes.begin(), slopes.end());

    for (std::size_t k = 0; k < d; ++k) {
      const double diff = std::abs(slopes[k] - mu[k]);
      worst = std::max(worst, diff);
      csv << trial << "," << d << "," << k << "," << format_g17(slopes[k]) << ","
          << format_g17(mu[k]) << "," << format_g17(diff) << "\n";
    }
  }
  write_file(dir + "/slope_ordering.csv", csv.str());
  r.achieved = "worst |slope - mu| = " + short6(worst);
  r.pass = worst <= 1e-5 * ctx.ts;
  return r;
}

// ---- criterion 9: equal-minima localization in two deep brackets ----

CriterionResult c9_crossing_localization(Ctx& ctx, const std::string& dir) {
  CriterionResult r;
  r.id = 9;
  r.name = "crossing-localization";
  r.target = "|lambda_a(t*) - lambda_b(t*)| <= 1e-10 |lambda*| in both brackets";
  ensure_dir(dir);

  SecularModel a = example62_weights('a', 6);
  SecularModel b = example62_weights('b', 6);

  std::ostringstream csv;
  csv << "bracket,lambda_star,t_star,lambda_a,lambda_b,rel_residual\n";
  double worst = 0.0;
  int bracket = 0;
  for (const auto& [lo, hi] : {std::pair<double, double>{-std::exp(-25.0), -std::exp(-49.0)},
                               std::pair<double, double>{-std::exp(-49.0), -std::exp(-81.0)}}) {
    ++bracket;
    const Crossing c = crossing_locate(a, b, std::min(lo, hi), std::max(lo, hi));
    const double la = lambda_min(a, c.t_star);
    const double lb = lambda_min(b, c.t_star);
    const double rel = std::abs(la - lb) / std::abs(c.lambda_star);
    worst = std::max(worst, rel);
    csv << bracket << "," << format_g17(c.lambda_star) << "," << format_g17(c.t_star) << ","
        << format_g17(la) << "," << format_g17(lb) << "," << format_g17(rel) << "\n";
  }
  write_file(dir + "/crossings.csv", csv.str());
  r.achieved = "worst residual / |lambda*| = " + short6(worst);
  r.pass = worst <= 1e-10 * ctx.ts;
  return r;
}

using Fn = CriterionResult (*)(Ctx&, const std::string&);

struct Entry {
  int id;
  const char* name;
  Fn fn;
};

const Entry kWriters[9] = {
    {1, "secular-signs", c1_secular_signs},
    {2, "secular-dense", c2_secular_dense},
    {3, "absorption-slope", c3_absorption_slope},
    {4, "sigma-slope", c4_sigma_slope},
    {5, "volterra-closed-form", c5_volterra_closed_form},
    {6, "volterra-compression", c6_volterra_compression},
    {7, "cap-containment", c7_cap_containment},
    {8, "kernel-slope-ordering", c8_kernel_slope_ordering},
    {9, "crossing-localization", c9_crossing_localization},
};

std::vector<std::string> list_files(const fs::path& root) {
  std::vector<std::string> rel;
  if (fs::exists(root))
    for (const auto& e : fs::recursive_directory_iterator(root))
      if (e.is_regular_file()) rel.push_back(fs::relative(e.path(), root).generic_string());
  std::sort(rel.begin(), rel.end());
  return rel;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- criterion 10: byte-identical artifacts across two fresh passes ----

CriterionResult c10_determinism(Ctx& outer, const std::string& dir) {
  CriterionResult r;
  r.id = 10;
  r.name = "determinism";
  r.target = "two fresh runs of criteria 1-9 write byte-identical files";
  ensure_dir(dir);

  const std::string roots[2] = {dir + "/run_a", dir + "/run_b"};
  for (const std::string& root : roots) {
    Ctx ctx;
    ctx.ts = outer.ts;
    ctx.seed = outer.seed;
    for (const Entry& e : kWriters)
      e.fn(ctx, root + "/criterion" + std::to_string(e.id));
  }

  const std::vector<std::string> fa = list_files(roots[0]);
  const std::vector<std::string> fb = list_files(roots[1]);
  if (fa != fb) {
    r.achieved = "file sets differ (" + std::to_string(fa.size()) + " vs " +
                 std::to_string(fb.size()) + ")";
    r.pass = false;
    return r;
  }
  for (const std::string& f : fa) {
    if (slurp(fs::path(roots[0]) / f) != slurp(fs::path(roots[1]) / f)) {
      r.achieved = "byte mismatch in " + f;
      r.pass = false;
      return r;
    }
  }
  r.achieved = std::to_string(fa.size()) + " files byte-identical";
  r.pass = true;
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  ensure_dir(opt.out_dir);
  std::vector<CriterionResult> out;
  Ctx ctx;
  ctx.ts = opt.tol_scale;
  ctx.seed = opt.seed;

  auto run_one = [&](int id, const char* name, Fn fn) {
    if (!opt.only.empty() && std::string(name).find(opt.only) == std::string::npos) return;
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = fn(ctx, opt.out_dir + "/criterion" + std::to_string(id));
    } catch (const std::exception& e) {
      r.id = id;
      r.name = name;
      r.target = "criterion completes without throwing";
      r.achieved = std::string("exception: ") + e.what();
      r.pass = false;
    }
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(r));
  };

  for (const Entry& e : kWriters) run_one(e.id, e.name, e.fn);
  run_one(10, "determinism", c10_determinism);
  return out;
}

std::string acceptance_table(const std::vector<CriterionResult>& rows) {
  std::ostringstream os;
  os << "id | name | target | achieved | pass\n";
  for (const CriterionResult& r : rows)
    os << r.id << " | " << r.name << " | " << r.target << " | " << r.achieved << " | "
       << (r.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

bool all_passed(const std::vector<CriterionResult>& rows) {
  if (rows.empty()) return false;
  for (const CriterionResult& r : rows)
    if (!r.pass) return false;
  return true;
}

}  // namespace specrange
