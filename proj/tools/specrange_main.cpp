#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "specrange/acceptance.hpp"
#include "specrange/presets.hpp"
#include "specrange/report.hpp"

namespace {

using namespace specrange;

Family load_family(const std::string& input, const std::string& preset, std::size_t dim) {
  if (!input.empty() && !preset.empty())
    throw InputError("give --input or --preset, not both");
  if (!input.empty()) {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw InputError("cannot open input file '" + input + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_family(ss.str());
  }
  if (!preset.empty()) return make_preset(preset, dim);
  throw InputError("one of --input or --preset is required");
}

std::string ensure_out(const std::string& dir) {
  std::filesystem::create_directories(dir);
  return dir;
}

// the operator the geometry commands act on: zeroth plus i times first coefficient
ComplexMatrix combined_operator(const Family& f) {
  const HermitianMatrix a0 = evaluate(f, 0.0);
  const HermitianMatrix a1 = family_a1(f);
  const std::size_t n = a0.dim();
  ComplexMatrix t(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      t(i, j) = a0.matrix()(i, j) + Complex(0.0, 1.0) * a1.matrix()(i, j);
  return t;
}

std::vector<double> build_grid(double t_min, double t_max, std::size_t count, bool log_spaced) {
  if (!(t_min < t_max) || count < 2)
    throw InputError("grid requires t-min < t-max and at least 2 points");
  return log_spaced ? logspace(t_min, t_max, count) : linspace(t_min, t_max, count);
}

std::vector<int> parse_scan_list(const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    int v = std::stoi(item, &pos);
    if (pos != item.size()) throw InputError("bad --scan entry '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InputError("--scan list is empty");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical range, eigenvalue trajectory, and secular analysis toolkit"};
  app.require_subcommand(1);

  std::string input, preset, out_dir = "specrange_out", scan_spec = "5,7,9,11", only;
  std::size_t dim = 0, grid_count = 0;
  double t_min = 0.0, t_max = 0.0, theta = 0.5, epsilon = 0.3, tol_kernel = -1.0,
         tol_scale = 1.0;
  bool log_spaced = false;
  std::uint64_t seed = 0;

  auto add_family_opts = [&](CLI::App* cmd) {
    cmd->add_option("--input", input, "family description JSON file");
    cmd->add_option("--preset", preset, "built-in model name");
    cmd->add_option("--dim", dim, "model dimension override");
  };
  auto add_grid_opts = [&](CLI::App* cmd) {
    cmd->add_option("--t-min", t_min, "first grid value");
    cmd->add_option("--t-max", t_max, "last grid value");
    cmd->add_option("--grid", grid_count, "number of grid points");
    cmd->add_flag("--log", log_spaced, "geometric instead of linear spacing");
  };

  CLI::App* numrange = app.add_subcommand("numrange", "boundary sweep of the numerical range");
  add_family_opts(numrange);
  numrange->add_option("--grid", grid_count, "number of sweep angles (default 256)");
  numrange->add_option("--out", out_dir, "output directory");

  CLI::App* track = app.add_subcommand("track", "eigenvalue trajectories over a parameter grid");
  add_family_opts(track);
  add_grid_opts(track);
  track->add_option("--out", out_dir, "output directory");

  CLI::App* absorb = app.add_subcommand("absorb", "absorption verification at t0 = 0");
  add_family_opts(absorb);
  add_grid_opts(absorb);
  absorb->add_option("--tol-kernel", tol_kernel, "kernel selection tolerance");
  absorb->add_option("--out", out_dir, "output directory");

  CLI::App* secular = app.add_subcommand("secular", "sign scan of the two-model secular gap");
  secular->add_option("--preset", preset, "model pair name (example62)");
  secular->add_option("--dim", dim, "model length override");
  secular->add_option("--scan", scan_spec, "comma-separated probe exponents");
  secular->add_option("--out", out_dir, "output directory");

  CLI::App* volterra = app.add_subcommand("volterra", "cumulative-operator casebook report");
  volterra->add_option("--dim", dim, "grid size (default 256)");
  volterra->add_option("--theta", theta, "rotation angle (default 0.5)");
  volterra->add_option("--out", out_dir, "output directory");

  CLI::App* capcheck = app.add_subcommand("capcheck", "interior cap containment sampling");
  add_family_opts(capcheck);
  capcheck->add_option("--epsilon", epsilon, "cap parameter in (0,1)");
  capcheck->add_option("--seed", seed, "random seed");
  capcheck->add_option("--out", out_dir, "output directory");

  CLI::App* verify = app.add_subcommand("verify-all", "run the full acceptance suite");
  verify->add_option("--out", out_dir, "output directory");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--only", only, "run only criteria whose name contains this");
  verify->add_option("--tol-scale", tol_scale, "scale every tolerance (0 forces failures)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "error: usage: " << e.what() << "\n";
    return 2;
  }

  try {
    if (numrange->parsed()) {
      const Family fam = load_family(input, preset, dim);
      const ComplexMatrix t = combined_operator(fam);
      const NumRangeBoundary b = numerical_range_boundary(t, grid_count ? grid_count : 256);
      const std::string dir = ensure_out(out_dir);
      write_file(dir + "/boundary.csv", boundary_csv(b));
      if (const auto* s = std::get_if<StructuredFamily>(&fam)) {
        const ConvexRegion region = essential_region(essential_points(*s));
        write_file(dir + "/essential_region.csv", region_csv(region));
        std::ostringstream kv;
        const std::optional<double> om = omega(region);
        kv << "omega = " << (om ? format_g17(*om) : "na") << "\n";
        write_file(dir + "/numrange.kv", kv.str());
      }
      std::cout << "boundary: " << b.samples.size() << " samples\n";
      return 0;
    }

    if (track->parsed()) {
      const Family fam = load_family(input, preset, dim);
      if (grid_count == 0) {
        t_min = 1e-6;
        t_max = 1e-2;
        grid_count = 16;
      }
      const std::vector<double> grid = build_grid(t_min, t_max, grid_count, log_spaced);
      const std::size_t nb = std::min<std::size_t>(family_dim(fam), 8);
      const TrajectorySet traj = specrange::track(fam, grid, nb);
      const std::string dir = ensure_out(out_dir);
      write_file(dir + "/trajectories.csv", trajectory_csv(traj));
      for (const std::string& w : traj.warnings) std::cout << "warning: " << w << "\n";
      std::cout << "tracked " << traj.branches.size() << " branches over " << grid.size()
                << " grid points\n";
      return 0;
    }

    if (absorb->parsed()) {
      const Family fam = load_family(input, preset, dim);
      AbsorbOptions opt;
      if (grid_count != 0) opt.t_grid = build_grid(t_min, t_max, grid_count, log_spaced);
      if (tol_kernel > 0.0) opt.tol_kernel = tol_kernel;
      if (preset == "volterra") opt.declared_sigma = 0.0;  // limit level of the symmetric part
      const AbsorptionReport rep = verify_absorption(fam, 0.0, opt);
      const std::string dir = ensure_out(out_dir);
      write_file(dir + "/absorption.kv", absorption_kv(rep));
      write_file(dir + "/absorption.csv", absorption_csv(rep));
      write_file(dir + "/trajectories.csv", trajectory_csv(rep.trajectories));
      std::cout << "verdict: " << rep.verdict << "\n";
      if (rep.verdict == "pass" || rep.verdict == "no-absorption") return 0;
      std::cerr << "error: verdict: " << rep.verdict << "\n";
      return 1;
    }

    if (secular->parsed()) {
      if (!input.empty()) throw InputError("secular takes --preset, not --input");
      if (preset.empty()) preset = "example62";
      if (preset != "example62") throw InputError("unknown secular preset '" + preset + "'");
      SecularModel a = dim ? example62_model('a', dim) : example62_weights('a', 6);
      SecularModel b = dim ? example62_model('b', dim) : example62_weights('b', 6);
      const std::vector<ScanRow> rows = crossing_scan(a, b, parse_scan_list(scan_spec));
      const std::string dir = ensure_out(out_dir);
      write_file(dir + "/scan.csv", scan_csv(rows));
      std::cout << "scanned " << rows.size() << " probes\n";
      return 0;
    }

    if (volterra->parsed()) {
      const VolterraReport rep = volterra_verify(dim ? dim : 256, theta, 5);
      const std::string dir = ensure_out(out_dir);
      write_file(dir + "/volterra.kv", volterra_kv(rep));
      write_file(dir + "/volterra.csv", volterra_csv(rep));
      std::cout << "max closed-form rel error: " << format_g17(rep.max_rel_error) << "\n";
      return 0;
    }

    if (capcheck->parsed()) {
      Rng rng(seed);
      ComplexMatrix t(0, 0);
      if (input.empty() && preset.empty()) {
        const std::size_t n = dim ? dim : 4;
        t = ComplexMatrix(n, n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) t(i, j) = rng.normal_complex();
      } else {
        t = combined_operator(load_family(input, preset, dim));
      }
      const std::vector<Complex> x = rng.unit_vector(t.rows());
      const CapReport rep = cap_check(t, x, epsilon, 200, rng);
      const std::string dir = ensure_out(out_dir);
      write_file(dir + "/capcheck.kv", capcheck_kv(rep));
      write_file(dir + "/capcheck.csv", capcheck_csv(rep));
      std::cout << "max defect " << format_g17(rep.max_defect) << " against tol "
                << format_g17(rep.defect_tol) << "\n";
      if (rep.all_ok) return 0;
      std::cerr << "error: verdict: cap containment failed\n";
      return 1;
    }

    if (verify->parsed()) {
      AcceptanceOptions opt;
      opt.out_dir = ensure_out(out_dir);
      opt.seed = seed;
      opt.only = only;
      opt.tol_scale = tol_scale;
      const std::vector<CriterionResult> rows = run_acceptance(opt);
      if (rows.empty()) {
        std::cerr << "error: usage: no criterion matches --only '" << only << "'\n";
        return 2;
      }
      std::cout << acceptance_table(rows);
      for (const CriterionResult& r : rows) {
        std::printf("criterion %d (%s): %.2f s\n", r.id, r.name.c_str(), r.seconds);
      }
      write_file(opt.out_dir + "/summary.txt", acceptance_table(rows));
      if (all_passed(rows)) return 0;
      std::cerr << "error: verdict: acceptance criteria failed\n";
      return 1;
    }
  } catch (const InputError& e) {
    std::cerr << "error: input: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: numerical: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
