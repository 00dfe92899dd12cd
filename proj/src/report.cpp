#include "specrange/report.hpp"

#include <fstream>
#include <sstream>

namespace specrange {

namespace {

std::string g(double x) { return format_g17(x); }

void kv(std::ostringstream& os, const std::string& key, const std::string& value) {
  os << key << " = " << value << "\n";
}

}  // namespace

std::string boundary_csv(const NumRangeBoundary& b) {
  std::ostringstream os;
  os << "theta,support_value,re,im\n";
  for (const SupportSample& s : b.samples)
    os << g(s.theta) << "," << g(s.support_value) << "," << g(s.boundary_point.real()) << ","
       << g(s.boundary_point.imag()) << "\n";
  return os.str();
}

std::string region_csv(const ConvexRegion& r) {
  std::ostringstream os;
  os << "re,im\n";
  for (const auto& v : r.vertices) os << g(v[0]) << "," << g(v[1]) << "\n";
  return os.str();
}

std::string trajectory_csv(const TrajectorySet& t) {
  std::ostringstream os;
  os << "t,branch_id,lambda,sigma,below_sigma\n";
  for (std::size_t i = 0; i < t.t_grid.size(); ++i) {
    for (const TrajectoryBranch& b : t.branches) {
      os << g(t.t_grid[i]) << "," << b.branch_id << "," << g(b.values[i]) << ",";
      if (t.has_sigma)
        os << g(t.sigma[i]) << "," << (b.below_sigma[i] ? 1 : 0);
      else
        os << "na,0";
      os << "\n";
    }
  }
  return os.str();
}

std::string absorption_kv(const AbsorptionReport& r) {
  std::ostringstream os;
  kv(os, "t0", g(r.t0));
  kv(os, "sigma_t0", g(r.sigma_t0));
  kv(os, "omega", r.omega_value ? g(*r.omega_value) : "na");
  kv(os, "kernel_dim", std::to_string(r.kernel_dim));
  {
    std::ostringstream mus;
    for (std::size_t i = 0; i < r.mu.size(); ++i) mus << (i ? " " : "") << g(r.mu[i]);
    kv(os, "mu", r.mu.empty() ? "none" : mus.str());
  }
  {
    std::ostringstream bs;
    for (std::size_t i = 0; i < r.absorbed_branches.size(); ++i)
      bs << (i ? " " : "") << r.absorbed_branches[i];
    kv(os, "absorbed_branches", r.absorbed_branches.empty() ? "none" : bs.str());
  }
  kv(os, "verdict", r.verdict);
  for (const std::string& n : r.notes) os << "note: " << n << "\n";
  return os.str();
}

std::string absorption_csv(const AbsorptionReport& r) {
  std::ostringstream os;
  os << "branch_id,beta,uncertainty,mu,gap\n";
  for (const MatchedPair& p : r.pairs)
    os << p.branch_id << "," << g(p.beta) << "," << g(p.uncertainty) << "," << g(p.mu) << ","
       << g(p.gap) << "\n";
  return os.str();
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream os;
  os << "m,lambda_probe,f_a,f_b,sign,bound_a_ok,bound_b_ok\n";
  for (const ScanRow& r : rows) {
    os << r.m << "," << g(r.lambda_probe) << "," << g(r.f_a) << "," << g(r.f_b) << "," << r.sign
       << ",";
    if (r.bound_a_ok < 0)
      os << "na,";
    else
      os << r.bound_a_ok << ",";
    if (r.bound_b_ok < 0)
      os << "na";
    else
      os << r.bound_b_ok;
    os << "\n";
  }
  return os.str();
}

std::string volterra_kv(const VolterraReport& r) {
  std::ostringstream os;
  kv(os, "n", std::to_string(r.n));
  kv(os, "theta", g(r.theta));
  kv(os, "max_rel_error", g(r.max_rel_error));
  kv(os, "kernel_dim", std::to_string(r.kernel_dim));
  for (const VolterraDerivRow& d : r.derivative_rows) {
    std::ostringstream key;
    key << "derivative_n_" << (d.n < 0 ? "m" : "") << std::abs(d.n);
    kv(os, key.str(), g(d.computed) + " predicted " + g(d.predicted) + " rel_error " +
                          g(d.rel_error));
  }
  return os.str();
}

std::string volterra_csv(const VolterraReport& r) {
  std::ostringstream os;
  os << "n,exact,computed,rel_error\n";
  for (const VolterraEigRow& row : r.closed_form)
    os << row.n << "," << g(row.exact) << "," << g(row.computed) << "," << g(row.rel_error)
       << "\n";
  return os.str();
}

std::string capcheck_kv(const CapReport& r) {
  std::ostringstream os;
  kv(os, "epsilon", g(r.epsilon));
  kv(os, "targets_checked", std::to_string(r.targets_checked));
  kv(os, "max_defect", g(r.max_defect));
  kv(os, "defect_tol", g(r.defect_tol));
  kv(os, "all_ok", r.all_ok ? "1" : "0");
  return os.str();
}

std::string capcheck_csv(const CapReport& r) {
  std::ostringstream os;
  os << "target_re,target_im,achieved_re,achieved_im,defect,overlap\n";
  for (const CapTarget& t : r.targets)
    os << g(t.target.real()) << "," << g(t.target.imag()) << "," << g(t.achieved.real()) << ","
       << g(t.achieved.imag()) << "," << g(t.defect) << "," << g(t.overlap) << "\n";
  return os.str();
}

std::string sigma_slope_kv(const SigmaSlopeReport& r) {
  std::ostringstream os;
  kv(os, "sigma0", g(r.sigma0));
  kv(os, "omega", r.omega_value ? g(*r.omega_value) : "na");
  kv(os, "extrapolated", r.extrapolated ? g(*r.extrapolated) : "na");
  kv(os, "status", r.status);
  return os.str();
}

std::string sigma_slope_csv(const SigmaSlopeReport& r) {
  std::ostringstream os;
  os << "t,sigma,ratio\n";
  for (const SigmaSlopeRow& row : r.rows)
    os << g(row.t) << "," << g(row.sigma) << "," << g(row.ratio) << "\n";
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("write_file: cannot open '" + path + "'");
  out << content;
  if (!out) throw InputError("write_file: write failed for '" + path + "'");
}

}  // namespace specrange
