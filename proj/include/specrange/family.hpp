// Operator families in a real parameter t: dense Hermitian polynomials
// A_0 + t A_1 + ... + t^m A_m, and structured diagonal-plus-rank-one models
//   A(t) = diag(d) + t diag(e) + sum_j sign_j t^(p_j) a_j a_j*.
// The structured form carries its own spectral-tail bookkeeping: declared
// limit points of (d_k, e_k) along the tail stand in for the part of the
// spectrum that truncation cannot represent.
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "specrange/linalg.hpp"

namespace specrange {

enum class TailRule { ExplicitList, Geometric, ExpNegK, Constant, RecipK };

struct DiagonalTail {
  TailRule rule = TailRule::Constant;
  std::vector<double> values;        // materialized, length = truncation order
  std::vector<double> limit_points;  // declared accumulation values
  std::vector<std::size_t> flushed;  // 1-based indices flushed to exact zero
  // Rule parameters kept for serialization.
  double geometric_scale = 0.0;
  double geometric_ratio = 0.0;
  double constant_value = 0.0;

  std::size_t size() const { return values.size(); }
  bool is_zero() const;

  // Generators. Entries with magnitude below 1e-300 are flushed to exact zero
  // and recorded in `flushed`.
  static DiagonalTail explicit_list(std::vector<double> values, std::vector<double> limits);
  static DiagonalTail exp_neg_k(std::size_t n);  // d_1 = 0, d_k = exp(-k) for k >= 2
  static DiagonalTail recip_k(std::size_t n);    // d_k = 1/k
  static DiagonalTail geometric(std::size_t n, double scale, double ratio);  // scale * ratio^k
  static DiagonalTail constant(std::size_t n, double value);

  // Every declared limit point must be approached within tail_tol by some
  // entry, and every entry with index > n/2 must lie within tail_tol of some
  // declared limit point. Throws InputError naming the offending index.
  void validate(double tail_tol = 1e-6) const;
};

struct RankOneTerm {
  std::vector<Complex> vector;
  int coupling_degree = 1;  // coupling c(t) = t^degree, degree >= 1
  int sign = -1;            // -1 or +1
};

struct StructuredFamily {
  std::size_t dim = 0;
  DiagonalTail base;         // d, the t^0 diagonal
  DiagonalTail a1_diagonal;  // e, the t^1 diagonal (all-zero allowed)
  std::vector<RankOneTerm> rank_one_terms;
};

struct PolynomialFamily {
  std::size_t dim = 0;
  std::vector<HermitianMatrix> coefficients;  // A_0 ... A_m, m >= 0
  std::optional<double> radius;               // convergence radius; empty = entire
};

using Family = std::variant<PolynomialFamily, StructuredFamily>;

PolynomialFamily make_polynomial(std::vector<HermitianMatrix> coefficients,
                                 std::optional<double> radius = std::nullopt);
StructuredFamily make_structured(DiagonalTail base, DiagonalTail a1_diagonal,
                                 std::vector<RankOneTerm> rank_one_terms);

// Paired limit points of (d_k, e_k), each as a planar point (x, y).
struct EssentialData {
  std::vector<std::array<double, 2>> points;
};

HermitianMatrix evaluate(const PolynomialFamily& f, double t);
HermitianMatrix evaluate(const StructuredFamily& f, double t);
HermitianMatrix evaluate(const Family& f, double t);

std::size_t family_dim(const Family& f);

// Distinct snapped pairs (limit of d, limit of e) realized along the tail
// (indices > n/2). Rank-one terms do not contribute. Validates both tails.
EssentialData essential_points(const StructuredFamily& f, double tail_tol = 1e-6);

// The t-linear part: A_1 for polynomials, diag(e) + sum over degree-1 terms of
// sign * a a* for structured families. Errors when no first-order term exists.
HermitianMatrix family_a1(const Family& f);

// First derivative at parameter t: sum k t^(k-1) A_k, or
// diag(e) + sum sign * p t^(p-1) a a*.
HermitianMatrix family_derivative(const Family& f, double t);

// JSON document forms are documented in README.md. Unknown fields are
// rejected; errors carry the offending field path.
Family parse_family(const std::string& json_text);
std::string serialize_family(const Family& f);

}  // namespace specrange
