// Numerical-range geometry: support-function boundary sweeps, convex regions
// built from limit-point data, the omega functional, the epsilon-cap
// construction, and tail-vector ray probes.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specrange/family.hpp"
#include "specrange/linalg.hpp"

namespace specrange {

struct SupportSample {
  double theta = 0.0;
  double support_value = 0.0;  // h(theta) = max Re(e^{-i theta} W)
  Complex boundary_point;      // <T x, x> for the top eigenvector x of Re(e^{-i theta} T)
};

struct NumRangeBoundary {
  std::size_t dim = 0;
  std::vector<SupportSample> samples;
};

// Uniform angle sweep; per sample the support identity
// Re(e^{-i theta} point) = support_value is enforced to 1e-10 * ||T||_F and
// every point is checked against every sampled half-plane to 1e-8 * ||T||_F.
NumRangeBoundary numerical_range_boundary(const ComplexMatrix& t, std::size_t n_angles);

struct ConvexRegion {
  std::vector<std::array<double, 2>> vertices;  // hull, CCW, starts at lex-min
  bool contains_all_above = false;              // half-infinite vertical extent marker
};

// Convex hull of planar points; duplicates within 1e-12 (absolute) collapse and
// collinear interior points are dropped. Input order does not matter.
ConvexRegion convex_hull(std::vector<std::array<double, 2>> points);

// Hull of the limit-point pairs (x_j, y_j) read as planar points.
ConvexRegion essential_region(const EssentialData& data);

// Smallest y with (0, y) in the region; empty optional when the region misses
// the vertical axis (tolerance 1e-12 * max(1, coordinate scale)).
std::optional<double> omega(const ConvexRegion& region);

struct SigmaSlopeRow {
  double t = 0.0;
  double sigma = 0.0;  // min over limit pairs of x + t*y
  double ratio = 0.0;  // sigma / t
};

struct SigmaSlopeReport {
  std::vector<SigmaSlopeRow> rows;
  double sigma0 = 0.0;  // min over limit pairs of x
  std::optional<double> omega_value;
  std::optional<double> extrapolated;  // linear extrapolation of ratio to t = 0
  std::string status;                  // agree | disagree | no-omega | sigma0-nonzero
};

SigmaSlopeReport sigma_slope_check(const StructuredFamily& f, const std::vector<double>& t_grid,
                                   double tol_slope = 1e-6, double tail_tol = 1e-6);

struct CapTarget {
  Complex target;
  Complex achieved;
  double defect = 0.0;   // |achieved - target|
  double overlap = 0.0;  // |<x,y>|^2
  bool ok = false;
};

struct CapReport {
  double epsilon = 0.0;
  std::size_t targets_checked = 0;
  double max_defect = 0.0;
  double defect_tol = 0.0;  // 1e-8 * ||T||_F
  bool all_ok = false;
  std::vector<CapTarget> targets;
  std::vector<std::vector<Complex>> witnesses;  // unit vectors, one per target
};

// For each sampled target w = eps*<Tv,v> + (1-eps)*<Tx,x> finds a unit y in
// span{x, v} with <Ty,y> = w and |<x,y>|^2 >= 1 - eps. Targets whose residual
// exceeds defect_tol are flagged in the report, never thrown.
CapReport cap_check(const ComplexMatrix& t, const std::vector<Complex>& x, double epsilon,
                    std::size_t n_targets, Rng& rng);

// Unit y in span{b0, b1} with <Ty,y> = w, given an interior Bloch point q of
// the 2-D compression satisfying g(q) = w. Shared by cap_check and the
// convexity property check; returns the two coordinates of y in {b0, b1}.
std::array<Complex, 2> span_target_solve(const ComplexMatrix& t2,
                                         const std::array<double, 3>& q);

struct RayRow {
  double t = 0.0;
  std::size_t trunc = 0;   // truncation level N
  std::size_t k1 = 0;      // anchor index (1-based)
  std::size_t k2 = 0;      // direction index (1-based)
  double mix = 0.0;        // mass placed on k2
  std::array<double, 2> achieved{};
  double error = 0.0;      // |achieved - (w + t*direction)|
};

struct RayReport {
  std::string status;  // ok | no unbounded direction declared
  std::array<double, 2> w{};
  std::array<double, 2> direction{};
  std::vector<RayRow> rows;
};

// Probes w + t*direction with unit vectors supported on indices > N/2 of
// increasing truncations N. Report-only: no pass/fail threshold is attached.
// `unbounded_declared` is the caller's assertion that the family's numerical
// range grows without bound along `direction` as the truncation grows.
RayReport ray_check(const StructuredFamily& f, const std::array<double, 2>& w,
                    const std::array<double, 2>& direction, const std::vector<double>& t_values,
                    bool unbounded_declared);

}  // namespace specrange
