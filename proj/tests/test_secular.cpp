#include <doctest.h>

#include <cmath>

#include "specrange/secular.hpp"

using namespace specrange;

TEST_CASE("secular function is increasing below the smallest diagonal entry") {
  const SecularModel m = SecularModel::from_dense({0.0, 1.0}, {1.0, 1.0});
  CHECK(f_eval(m, -2.0) < f_eval(m, -1.0));
  CHECK(f_eval(m, -1.0) < f_eval(m, -0.25));
  CHECK(f_derivative(m, -1.0) > 0.0);
}

TEST_CASE("lambda_min satisfies the level equation to the stated residual") {
  const SecularModel m = SecularModel::from_dense({0.0, 1.0, 3.0}, {1.0, 0.5, 0.25});
  for (double t : {1e-3, 1e-1, 1.0, 10.0}) {
    const double lam = lambda_min(m, t);
    CHECK(lam < 0.0);
    CHECK(std::abs(f_eval(m, lam) - 1.0 / t) <= 1e-12 / t);
  }
}

TEST_CASE("weight scaling is a time rescaling") {
  const std::vector<double> d{0.0, 0.5, 2.0};
  const std::vector<double> w{1.0, 0.25, 0.125};
  std::vector<double> w4 = w;
  for (double& x : w4) x *= 4.0;
  const SecularModel m1 = SecularModel::from_dense(d, w);
  const SecularModel m4 = SecularModel::from_dense(d, w4);
  for (double t : {1e-2, 0.3}) {
    const double a = lambda_min(m4, t);
    const double b = lambda_min(m1, 4.0 * t);
    CHECK(std::abs(a - b) <= 1e-11 * std::abs(b));
  }
}

TEST_CASE("partial weight sums of the sparse models are exact dyadics") {
  for (int n_max : {1, 3, 6}) {
    const SecularModel a = example62_weights('a', n_max);
    CHECK(a.weight_sum() == 2.0 - std::ldexp(1.0, -2 * n_max));
  }
  CHECK(example62_weights('a', 2).min_diag() == 0.0);
}

TEST_CASE("deep diagonal entries flush to an exact zero") {
  const SecularModel m = example62_model('a', 800);
  CHECK(!m.flushed_indices().empty());
  const std::vector<double> d = m.dense_diag();
  REQUIRE(d.size() == 800);
  CHECK(d[0] == 0.0);
  CHECK(d[1] == std::exp(-2.0));
  CHECK(d[799] == 0.0);  // e^{-800} is below the representable floor
  CHECK(m.dense_weights().size() == 800);
}

TEST_CASE("scan rejects out-of-range probes and reports na bounds off the 4n+1 ladder") {
  const SecularModel a = example62_weights('a', 6);
  const SecularModel b = example62_weights('b', 6);
  CHECK_THROWS_AS((void)crossing_scan(a, b, {27}), InputError);
  CHECK_THROWS_AS((void)crossing_scan(a, b, {0}), InputError);

  const std::vector<ScanRow> rows = crossing_scan(a, b, {5, 7, 9, 11});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].sign == -1);
  CHECK(rows[1].sign == 1);
  CHECK(rows[2].sign == -1);
  CHECK(rows[3].sign == 1);
  CHECK(rows[0].bound_a_ok == 1);
  CHECK(rows[0].bound_b_ok == 1);
  CHECK(rows[2].bound_a_ok == 1);
  CHECK(rows[2].bound_b_ok == 1);
  CHECK(rows[1].bound_a_ok == -1);
  CHECK(rows[3].bound_b_ok == -1);
}

TEST_CASE("crossing localization inside a deep bracket") {
  const SecularModel a = example62_weights('a', 6);
  const SecularModel b = example62_weights('b', 6);
  CHECK_THROWS_AS((void)crossing_locate(a, b, -1e-5, -1e-3), InputError);  // reversed

  const Crossing c = crossing_locate(a, b, -std::exp(-25.0), -std::exp(-49.0));
  CHECK(c.lambda_star > -std::exp(-25.0));
  CHECK(c.lambda_star < -std::exp(-49.0));
  CHECK(c.t_star > 0.0);
  const double fa = f_eval(a, c.lambda_star);
  const double fb = f_eval(b, c.lambda_star);
  CHECK(std::abs(fa - fb) <= 1e-9 * fa);
}
