// Bottom eigenvalue of diag(d) - t a a* through the scalar secular equation
//   f(lambda) = sum_k w_k / (d_k - lambda) = 1/t,   w_k = |a_k|^2,
// valid for lambda below min(d). Weights are stored sparse; the model keeps
// dense length-N semantics for oracle comparisons.
#pragma once

#include <cstddef>
#include <vector>

#include "specrange/common.hpp"

namespace specrange {

struct WeightEntry {
  std::size_t index;  // 1-based position on the diagonal
  double weight;      // strictly positive
};

class SecularModel {
 public:
  // Dense constructor: d and w the same length, w_k >= 0, sum w > 0.
  static SecularModel from_dense(std::vector<double> d, std::vector<double> w);
  // Rule d_1 = 0, d_k = exp(-k) for k >= 2, with the given sparse weights.
  // Entries of exp(-k) below 1e-300 are flushed to exact zero and recorded.
  static SecularModel exp_diag(std::size_t length, std::vector<WeightEntry> weights);

  std::size_t length() const { return length_; }
  const std::vector<WeightEntry>& weights() const { return weights_; }
  const std::vector<std::size_t>& flushed_indices() const { return flushed_; }

  double diag_at(std::size_t k) const;  // 1-based
  double min_diag() const { return min_diag_; }
  double weight_sum() const;
  std::vector<double> dense_diag() const;
  std::vector<double> dense_weights() const;

 private:
  SecularModel() = default;
  enum class DiagRule { ExpNegK, Explicit };
  DiagRule rule_ = DiagRule::Explicit;
  std::size_t length_ = 0;
  std::vector<double> explicit_diag_;
  std::vector<WeightEntry> weights_;  // ascending index
  std::vector<std::size_t> flushed_;
  double min_diag_ = 0.0;
};

// f(lambda), summed over weighted indices in ascending order with compensated
// summation. Requires lambda < min(d); the result is positive and strictly
// increasing in lambda on that half-line.
double f_eval(const SecularModel& m, double lambda);

// f'(lambda) = sum w_k / (d_k - lambda)^2, same domain.
double f_derivative(const SecularModel& m, double lambda);

// Unique root of f(lambda) = 1/t for t > 0: bracketed bisection to 1e-3
// relative width, then Newton safeguarded by the bracket. The returned root
// satisfies |f(root) - 1/t| <= 1e-12 / t.
double lambda_min(const SecularModel& m, double t);

// The two weight patterns of the worked diagonal model, exact in binary
// arithmetic (weights are 3*2^-2n and 3*2^-2n-1):
//   kind 'a': w=1 at k=1 and w=3/4^n at k=(4n)^2, n = 1..n_max
//   kind 'b': w=1 at k=1, w=1/2 at k=2 and w=3/(2*4^n) at k=(4n+2)^2
// Model length is (4 n_max + 2)^2 for both kinds.
SecularModel example62_weights(char kind, int n_max);

// Same weight patterns truncated to diagonal length n (indices above n drop).
SecularModel example62_model(char kind, std::size_t n);

struct ScanRow {
  int m;
  double lambda_probe;  // -exp(-m^2)
  double f_a;
  double f_b;
  int sign;  // sign of f_a - f_b
  // Closed-form envelope checks, defined only for probes with m = 4n+1:
  // f_a < exp(m^2) (1 + 2^-m + (1 - 2^-m) 4^-n) and
  // f_b > exp(m^2) (1 + (1 - 2^-m) 2 4^-n). -1 marks "not applicable".
  int bound_a_ok;
  int bound_b_ok;
};

// Probes f_a - f_b at lambda = -exp(-m^2). Requires 1 <= m <= 26 so the probe
// stays above the 1e-300 underflow floor.
std::vector<ScanRow> crossing_scan(const SecularModel& a, const SecularModel& b,
                                   const std::vector<int>& m_values);

struct Crossing {
  double lambda_star;  // root of f_a - f_b inside the bracket
  double t_star;       // 1 / f_a(lambda_star)
};

// Locates a sign change of f_a - f_b inside (lambda_lo, lambda_hi), both
// negative, to 1e-12 relative accuracy, then cross-checks that both models'
// bottom eigenvalues at t_star agree within 1e-10 |lambda_star|.
Crossing crossing_locate(const SecularModel& a, const SecularModel& b, double lambda_lo,
                         double lambda_hi);

}  // namespace specrange
