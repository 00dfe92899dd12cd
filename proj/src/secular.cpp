#include "specrange/secular.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace specrange {

namespace {
constexpr double kFlushFloor = 1e-300;
}

SecularModel SecularModel::from_dense(std::vector<double> d, std::vector<double> w) {
  if (d.size() != w.size() || d.empty())
    throw InputError("secular model: d and w must be nonempty and the same length");
  SecularModel m;
  m.rule_ = DiagRule::Explicit;
  m.length_ = d.size();
  double wsum = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!std::isfinite(d[i]) || !std::isfinite(w[i]))
      throw InputError("secular model: non-finite entry");
    if (w[i] < 0.0) throw InputError("secular model: negative weight");
    if (w[i] > 0.0) m.weights_.push_back({i + 1, w[i]});
    wsum += w[i];
  }
  if (wsum <= 0.0) throw InputError("secular model: weights sum to zero");
  m.explicit_diag_ = std::move(d);
  m.min_diag_ = *std::min_element(m.explicit_diag_.begin(), m.explicit_diag_.end());
  return m;
}

SecularModel SecularModel::exp_diag(std::size_t length, std::vector<WeightEntry> weights) {
  if (length == 0) throw InputError("secular model: zero length");
  SecularModel m;
  m.rule_ = DiagRule::ExpNegK;
  m.length_ = length;
  std::sort(weights.begin(), weights.end(),
            [](const WeightEntry& x, const WeightEntry& y) { return x.index < y.index; });
  double wsum = 0.0;
  for (const WeightEntry& e : weights) {
    if (e.index < 1 || e.index > length)
      throw InputError("secular model: weight index outside diagonal length");
    if (!(e.weight > 0.0)) throw InputError("secular model: sparse weight must be positive");
    wsum += e.weight;
  }
  if (wsum <= 0.0) throw InputError("secular model: weights sum to zero");
  m.weights_ = std::move(weights);
  for (std::size_t k = 2; k <= length; ++k) {
    if (std::exp(-static_cast<double>(k)) < kFlushFloor) m.flushed_.push_back(k);
  }
  m.min_diag_ = 0.0;  // attained at k = 1 by the rule
  return m;
}

double SecularModel::diag_at(std::size_t k) const {
  if (k < 1 || k > length_) throw InputError("secular model: diagonal index out of range");
  if (rule_ == DiagRule::Explicit) return explicit_diag_[k - 1];
  if (k == 1) return 0.0;
  double v = std::exp(-static_cast<double>(k));
  return v < kFlushFloor ? 0.0 : v;
}

double SecularModel::weight_sum() const {
  StableSum s;
  for (const WeightEntry& e : weights_) s.add(e.weight);
  return s.value();
}

std::vector<double> SecularModel::dense_diag() const {
  std::vector<double> d(length_);
  for (std::size_t k = 1; k <= length_; ++k) d[k - 1] = diag_at(k);
  return d;
}

std::vector<double> SecularModel::dense_weights() const {
  std::vector<double> w(length_, 0.0);
  for (const WeightEntry& e : weights_) w[e.index - 1] = e.weight;
  return w;
}

double f_eval(const SecularModel& m, double lambda) {
  if (!(lambda < m.min_diag())) {
    std::ostringstream os;
    os << "f_eval: lambda = " << lambda << " is not below min(d) = " << m.min_diag();
    throw InputError(os.str());
  }
  StableSum s;
  for (const WeightEntry& e : m.weights()) s.add(e.weight / (m.diag_at(e.index) - lambda));
  return s.value();
}

double f_derivative(const SecularModel& m, double lambda) {
  if (!(lambda < m.min_diag())) {
    std::ostringstream os;
    os << "f_derivative: lambda = " << lambda << " is not below min(d) = " << m.min_diag();
    throw InputError(os.str());
  }
  StableSum s;
  for (const WeightEntry& e : m.weights()) {
    double g = m.diag_at(e.index) - lambda;
    s.add(e.weight / (g * g));
  }
  return s.value();
}

double lambda_min(const SecularModel& m, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InputError("lambda_min: t must be positive");
  const double target = 1.0 / t;
  // Rigorous bracket from w_min_at_zero/( -lambda) <= f <= sum(w)/(-lambda)
  // when min(d) = 0, and the same envelope shifted in general: f(mu + d_min)
  // uses denominators >= -mu, so the sum bound still holds for mu < 0.
  const double wsum = m.weight_sum();
  double lo = m.min_diag() - t * wsum;        // f(lo) <= 1/t
  double hi_gap = 0.0;                        // f(min_diag - gap) >= 1/t for small gap
  // Find hi by shrinking the gap until f >= target (f -> +inf at min(d)^-).
  {
    double gap = t * wsum;
    double f = f_eval(m, m.min_diag() - gap);
    while (f < target && gap > 1e-280 * std::max(1.0, std::abs(m.min_diag()))) {
      gap *= 0.5;
      f = f_eval(m, m.min_diag() - gap);
    }
    if (f < target)
      throw NumericalError(
          "lambda_min: f stays below 1/t approaching min(d); no eigenvalue detaches below the "
          "diagonal at this coupling (no weight at the minimal diagonal entry)");
    hi_gap = gap;
  }
  double hi = m.min_diag() - hi_gap;
  if (!(f_eval(m, lo) <= target)) {
    // Defensive widening; the envelope argument makes this unreachable.
    int guard = 0;
    while (f_eval(m, lo) > target && guard++ < 4096) lo = m.min_diag() - 2.0 * (m.min_diag() - lo);
    if (f_eval(m, lo) > target) throw NumericalError("lambda_min: failed to bracket the root from below");
  }

  // Stage 1: bisection down to 1e-3 relative width.
  for (int it = 0; it < 200 && (hi - lo) > 1e-3 * std::abs(lo); ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f_eval(m, mid) < target)
      lo = mid;
    else
      hi = mid;
  }

  // Stage 2: Newton on f(lambda) - 1/t, clamped to the bracket.
  double x = 0.5 * (lo + hi);
  double fx = f_eval(m, x);
  for (int it = 0; it < 200; ++it) {
    if (std::abs(fx - target) <= 1e-13 * target) break;
    double step = (target - fx) / f_derivative(m, x);
    double next = x + step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisection fallback
    double fn = f_eval(m, next);
    if (fn < target)
      lo = next;
    else
      hi = next;
    x = next;
    fx = fn;
    if (hi - lo <= 1e-17 * std::abs(x)) break;
  }
  if (std::abs(fx - target) > 1e-12 * target) {
    // Polish with pure bisection as a last resort before giving up.
    for (int it = 0; it < 200 && std::abs(fx - target) > 1e-13 * target; ++it) {
      double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      double fm = f_eval(m, mid);
      if (fm < target)
        lo = mid;
      else
        hi = mid;
      x = mid;
      fx = fm;
    }
  }
  if (std::abs(fx - target) > 1e-12 * target) {
    std::ostringstream os;
    os << "lambda_min: residual |f - 1/t| = " << std::abs(fx - target)
       << " exceeds 1e-12/t at t = " << t;
    throw NumericalError(os.str());
  }
  return x;
}

namespace {

void append_square_index_weights(char kind, std::size_t max_index,
                                 std::vector<WeightEntry>& out) {
  if (kind == 'a') {
    out.push_back({1, 1.0});
    for (int n = 1;; ++n) {
      std::size_t k = static_cast<std::size_t>(4 * n) * static_cast<std::size_t>(4 * n);
      if (k > max_index) break;
      out.push_back({k, 3.0 * std::ldexp(1.0, -2 * n)});  // 3/4^n, exact
    }
  } else if (kind == 'b') {
    out.push_back({1, 1.0});
    if (max_index >= 2) out.push_back({2, 0.5});
    for (int n = 1;; ++n) {
      std::size_t s = static_cast<std::size_t>(4 * n + 2);
      std::size_t k = s * s;
      if (k > max_index) break;
      out.push_back({k, 3.0 * std::ldexp(1.0, -2 * n - 1)});  // 3/(2*4^n), exact
    }
  } else {
    throw InputError("example62 weights: kind must be 'a' or 'b'");
  }
}

}  // namespace

SecularModel example62_weights(char kind, int n_max) {
  if (n_max < 1) throw InputError("example62 weights: n_max must be >= 1");
  std::size_t s = static_cast<std::size_t>(4 * n_max + 2);
  return example62_model(kind, s * s);
}

SecularModel example62_model(char kind, std::size_t n) {
  std::vector<WeightEntry> w;
  append_square_index_weights(kind, n, w);
  return SecularModel::exp_diag(n, std::move(w));
}

std::vector<ScanRow> crossing_scan(const SecularModel& a, const SecularModel& b,
                                   const std::vector<int>& m_values) {
  std::vector<ScanRow> rows;
  for (int m : m_values) {
    if (m < 1 || m > 26) {
      std::ostringstream os;
      os << "crossing_scan: probe m = " << m << " outside representable range 1..26";
      throw InputError(os.str());
    }
    ScanRow r;
    r.m = m;
    const double m2 = static_cast<double>(m) * static_cast<double>(m);
    r.lambda_probe = -std::exp(-m2);
    r.f_a = f_eval(a, r.lambda_probe);
    r.f_b = f_eval(b, r.lambda_probe);
    double diff = r.f_a - r.f_b;
    r.sign = diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0);
    r.bound_a_ok = -1;
    r.bound_b_ok = -1;
    if (m % 4 == 1 && m > 1) {
      int n = (m - 1) / 4;
      double em2 = std::exp(m2);
      double two_pow_neg_m = std::ldexp(1.0, -m);
      double four_pow_neg_n = std::ldexp(1.0, -2 * n);
      double bound_a = em2 * (1.0 + two_pow_neg_m + (1.0 - two_pow_neg_m) * four_pow_neg_n);
      double bound_b = em2 * (1.0 + (1.0 - two_pow_neg_m) * 2.0 * four_pow_neg_n);
      r.bound_a_ok = r.f_a < bound_a ? 1 : 0;
      r.bound_b_ok = r.f_b > bound_b ? 1 : 0;
    }
    rows.push_back(r);
  }
  return rows;
}

Crossing crossing_locate(const SecularModel& a, const SecularModel& b, double lambda_lo,
                         double lambda_hi) {
  if (!(lambda_lo < lambda_hi) || !(lambda_hi < 0.0))
    throw InputError("crossing_locate: need lambda_lo < lambda_hi < 0");
  auto g = [&](double lam) { return f_eval(a, lam) - f_eval(b, lam); };
  double glo = g(lambda_lo);
  double ghi = g(lambda_hi);
  // Bisection on s = log(-lambda) so the relative tolerance is uniform across
  // the many decades a bracket can span.
  double slo = std::log(-lambda_lo);
  double shi = std::log(-lambda_hi);
  if (glo == 0.0)
    shi = slo;  // root sits on an endpoint
  else if (ghi == 0.0)
    slo = shi;
  else if (!(glo * ghi < 0.0)) {
    std::ostringstream os;
    os << "crossing_locate: no sign change of f_a - f_b over (" << lambda_lo << ", " << lambda_hi
       << ")";
    throw InputError(os.str());
  }
  for (int it = 0; it < 300 && std::abs(shi - slo) > 1e-13; ++it) {
    double smid = 0.5 * (slo + shi);
    double lam = -std::exp(smid);
    double gm = g(lam);
    if (gm == 0.0) {
      slo = smid;
      shi = smid;
      break;
    }
    if (gm * glo > 0.0) {
      slo = smid;
      glo = gm;
    } else {
      shi = smid;
    }
  }
  Crossing c;
  c.lambda_star = -std::exp(0.5 * (slo + shi));
  c.t_star = 1.0 / f_eval(a, c.lambda_star);

  double la = lambda_min(a, c.t_star);
  double lb = lambda_min(b, c.t_star);
  if (std::abs(la - lb) > 1e-10 * std::abs(c.lambda_star)) {
    std::ostringstream os;
    os << "crossing_locate: cross-check failed, |lambda_a - lambda_b| = " << std::abs(la - lb)
       << " at t_star = " << c.t_star;
    throw NumericalError(os.str());
  }
  return c;
}

}  // namespace specrange
