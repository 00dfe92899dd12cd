// Eigenvalue trajectories over the coupling parameter, kernel projections at a
// spectral level, the slope predictor compression, and absorption verdicts.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specrange/family.hpp"
#include "specrange/linalg.hpp"

namespace specrange {

struct TrajectoryBranch {
  std::size_t branch_id = 0;
  std::vector<double> values;     // one per grid point
  std::vector<bool> below_sigma;  // false everywhere when sigma is unavailable
};

struct TrajectorySet {
  std::vector<double> t_grid;
  std::vector<TrajectoryBranch> branches;
  bool has_sigma = false;
  std::vector<double> sigma;  // per grid point, only meaningful when has_sigma
  bool used_exact_bottom = false;
  std::vector<std::string> warnings;
};

// Bottom n_branches eigenvalues per grid point, matched across neighbors by
// minimal total displacement. Families that are a diagonal minus one
// t-linear rank-one drop-off get their bottom branch from the secular solver,
// which stays exact where dense eigensolves hit the roundoff floor.
TrajectorySet track(const Family& f, const std::vector<double>& t_grid, std::size_t n_branches);

// True when the family's bottom branch is served by the exact secular route.
bool has_exact_bottom_route(const Family& f);

struct KernelProjection {
  double level = 0.0;
  double tol_kernel = 0.0;
  ComplexMatrix basis;  // dim x k, orthonormal columns; k = 0 permitted
  std::vector<std::string> warnings;
};

// Numerical eigenspace {|lambda - level| <= tol_kernel}. Eigenvalues landing
// within twice the cut produce warnings (the cut straddles a near-degeneracy).
KernelProjection kernel_projection(const HermitianMatrix& a, double level, double tol_kernel);

// Kernel read off the diagonal data of a structured family at t0, where the
// evaluated matrix is exactly diagonal: indices with d_k + t0*e_k equal to
// level exactly, skipping entries that were flushed to zero at construction.
// Requires t0 = 0 or a family without rank-one terms.
KernelProjection exact_structured_kernel(const StructuredFamily& f, double t0, double level);

struct B0Compression {
  HermitianMatrix matrix;
  std::vector<double> mu;  // ascending
};

// Compression of the first-order coefficient onto ran P. The zero eigenvalue
// the full-space operator carries on (ran P)-perp is excluded by construction.
B0Compression b0_compression(const KernelProjection& p, const HermitianMatrix& a1);

struct SlopeEstimate {
  double beta = 0.0;
  double uncertainty = 0.0;
};

// Fits (lambda(t) - sigma_t0)/(t - t0) = beta + c*(t - t0) over the smallest
// available t-window, refined by Richardson extrapolation across two window
// sizes. Needs at least 4 grid points past t0.
SlopeEstimate slope_estimate(const TrajectorySet& traj, std::size_t branch_id, double t0,
                             double sigma_t0);

struct MatchedPair {
  std::size_t branch_id = 0;
  double beta = 0.0;
  double uncertainty = 0.0;
  double mu = 0.0;
  double gap = 0.0;  // |beta - mu|
};

struct AbsorptionReport {
  double t0 = 0.0;
  double sigma_t0 = 0.0;
  std::optional<double> omega_value;  // empty when the region misses the axis
  std::vector<double> mu;             // all compression eigenvalues, ascending
  std::size_t kernel_dim = 0;
  std::vector<std::size_t> absorbed_branches;
  std::vector<MatchedPair> pairs;
  std::string verdict;  // pass | fail | no-absorption | theorem-violation
  std::vector<std::string> notes;
  TrajectorySet trajectories;
};

struct AbsorbOptions {
  std::vector<double> t_grid;            // empty: a default grid is chosen
  std::size_t n_branches = 0;            // 0: one more than the predicted count
  double tol_kernel = -1.0;              // < 0: 1e-8 * ||A(t0)||_F
  std::optional<double> declared_sigma;  // required for polynomial families
  std::optional<double> declared_omega;  // polynomial families; empty = unbounded
  double tail_tol = 1e-6;
  double beta_tol = 1e-4;  // floor of the slope-matching tolerance
};

// Full pipeline: kernel at Sigma(t0), predictor compression, trajectory
// tracking, per-branch slope fits, sorted beta-mu pairing below omega.
AbsorptionReport verify_absorption(const Family& f, double t0, const AbsorbOptions& opt = {});

struct DerivativeCheck {
  std::string status;  // ok | crossing
  bool pass = false;
  double lambda = 0.0;
  double analytic = 0.0;  // <A'(t) x, x>
  std::vector<double> h_values;
  std::vector<double> fd_values;
  std::vector<double> mismatches;
};

// Central finite difference of one branch against the quadratic form of the
// family derivative; passes when the mismatch trends like h^2 under halving.
DerivativeCheck derivative_check(const Family& f, double t, std::size_t branch_id);

// Eigenvalues of the first-order coefficient compressed onto the eigenspace of
// A0 at an isolated level: the predicted branch derivatives through t = 0.
std::vector<double> isolated_branch_slopes(const PolynomialFamily& f, double level, double tol);

}  // namespace specrange
