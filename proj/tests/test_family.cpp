#include <doctest.h>

#include <cmath>
#include <string>

#include "specrange/presets.hpp"
#include "specrange/secular.hpp"
#include "test_util.hpp"

using namespace specrange;

TEST_CASE("tail rules produce the documented entries and limits") {
  const DiagonalTail e = DiagonalTail::exp_neg_k(10);
  REQUIRE(e.size() == 10);
  CHECK(e.values[0] == 0.0);
  CHECK(e.values[1] == std::exp(-2.0));
  REQUIRE(e.limit_points.size() == 1);
  CHECK(e.limit_points[0] == 0.0);

  const DiagonalTail r = DiagonalTail::recip_k(8);
  CHECK(r.values[3] == 0.25);
  CHECK(r.limit_points == std::vector<double>{0.0});

  const DiagonalTail g = DiagonalTail::geometric(8, 2.0, 0.5);
  CHECK(g.values[1] == 0.5);
  CHECK(g.limit_points == std::vector<double>{0.0});

  const DiagonalTail c = DiagonalTail::constant(5, 1.5);
  CHECK(c.values[4] == 1.5);
  CHECK(c.limit_points == std::vector<double>{1.5});
}

TEST_CASE("tiny magnitudes flush to exact zero with the index recorded") {
  const DiagonalTail t = DiagonalTail::explicit_list({1.0, 1e-310, 0.5}, {0.0, 0.5, 1.0});
  CHECK(t.values[1] == 0.0);
  REQUIRE(t.flushed.size() == 1);
  CHECK(t.flushed[0] == 2);  // 1-based
}

TEST_CASE("limit declarations are checked against the tail half") {
  std::vector<double> vals(32);
  for (std::size_t k = 0; k < 32; ++k) vals[k] = std::exp(-static_cast<double>(k + 1));
  // declared limit 5 is never approached
  const DiagonalTail bad = DiagonalTail::explicit_list(vals, {0.0, 5.0});
  CHECK_THROWS_WITH_AS((void)bad.validate(1e-6), doctest::Contains("limit"), InputError);
  const DiagonalTail good = DiagonalTail::explicit_list(vals, {0.0});
  CHECK_NOTHROW(good.validate(1e-6));
}

TEST_CASE("structured constructor rejects malformed rank-one terms") {
  const DiagonalTail base = DiagonalTail::exp_neg_k(4);
  const DiagonalTail zero = DiagonalTail::constant(4, 0.0);
  RankOneTerm t;
  t.vector = {1.0, 0.0, 0.0};  // wrong length
  CHECK_THROWS_AS((void)make_structured(base, zero, {t}), InputError);
  t.vector = {1.0, 0.0, 0.0, 0.0};
  t.sign = 2;
  CHECK_THROWS_AS((void)make_structured(base, zero, {t}), InputError);
  t.sign = -1;
  t.coupling_degree = 0;
  CHECK_THROWS_AS((void)make_structured(base, zero, {t}), InputError);
  t.coupling_degree = 1;
  CHECK_NOTHROW((void)make_structured(base, zero, {t}));
}

TEST_CASE("polynomial evaluation and the convergence radius gate") {
  Rng rng(3);
  const HermitianMatrix a0 = testutil::random_hermitian(3, rng);
  const HermitianMatrix a1 = testutil::random_hermitian(3, rng);
  const PolynomialFamily f = make_polynomial({a0, a1}, 1.0);
  const HermitianMatrix at = evaluate(f, 0.25);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(std::abs(at.matrix()(i, j) - (a0.matrix()(i, j) + 0.25 * a1.matrix()(i, j))) < 1e-15);
  CHECK_NOTHROW((void)evaluate(f, 0.999));
  CHECK_THROWS_AS((void)evaluate(f, 1.0), InputError);
  CHECK_THROWS_AS((void)evaluate(f, -2.0), InputError);
}

TEST_CASE("structured evaluation matches a hand-assembled matrix") {
  const DiagonalTail base = DiagonalTail::explicit_list({0.0, 0.5, 0.25}, {0.0, 0.25, 0.5});
  const DiagonalTail a1d = DiagonalTail::constant(3, 0.0);
  RankOneTerm t;
  t.vector = {Complex(1, 0), Complex(0, 1), Complex(0.5, 0)};
  t.coupling_degree = 2;
  t.sign = -1;
  const StructuredFamily f = make_structured(base, a1d, {t});
  const double tv = 0.3;
  const HermitianMatrix at = evaluate(f, tv);
  const double c = -tv * tv;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      Complex want = c * t.vector[i] * std::conj(t.vector[j]);
      if (i == j) want += base.values[i];
      CHECK(std::abs(at.matrix()(i, j) - want) < 1e-15);
    }
  }
}

TEST_CASE("limit pairs deduplicate and sort") {
  std::vector<double> dv(64), av(64);
  for (std::size_t k = 1; k <= 64; ++k) {
    dv[k - 1] = std::exp(-static_cast<double>(k));
    av[k - 1] = (k % 2) ? 1.0 : -2.0;
  }
  const StructuredFamily two = make_structured(DiagonalTail::explicit_list(dv, {0.0}),
                                               DiagonalTail::explicit_list(av, {1.0, -2.0}), {});
  const EssentialData pts = essential_points(two);
  REQUIRE(pts.points.size() == 2);
  CHECK(pts.points[0][0] == 0.0);
  CHECK(pts.points[0][1] == -2.0);
  CHECK(pts.points[1][1] == 1.0);
}

TEST_CASE("first-order coefficient extraction") {
  Rng rng(11);
  const HermitianMatrix a0 = testutil::random_hermitian(3, rng);
  const HermitianMatrix a1 = testutil::random_hermitian(3, rng);
  const HermitianMatrix got = family_a1(Family(make_polynomial({a0, a1})));
  CHECK(got.matrix()(1, 2) == a1.matrix()(1, 2));
  CHECK_THROWS_AS((void)family_a1(Family(make_polynomial({a0}))), InputError);

  // a degree-2 term does not contribute to the first-order coefficient
  RankOneTerm t;
  t.vector = {1.0, 0.0, 0.0};
  t.coupling_degree = 2;
  t.sign = -1;
  const StructuredFamily s = make_structured(DiagonalTail::exp_neg_k(3),
                                             DiagonalTail::constant(3, 2.0), {t});
  const HermitianMatrix sa1 = family_a1(Family(s));
  CHECK(sa1.matrix()(0, 0) == Complex(2.0, 0.0));
  CHECK(std::abs(sa1.matrix()(0, 1)) == 0.0);
}

TEST_CASE("derivative of the family matches the coefficient rule") {
  Rng rng(13);
  const HermitianMatrix a0 = testutil::random_hermitian(2, rng);
  const HermitianMatrix a1 = testutil::random_hermitian(2, rng);
  const HermitianMatrix a2 = testutil::random_hermitian(2, rng);
  const double tv = 0.2;
  const HermitianMatrix d = family_derivative(Family(make_polynomial({a0, a1, a2})), tv);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(std::abs(d.matrix()(i, j) -
                     (a1.matrix()(i, j) + 2.0 * tv * a2.matrix()(i, j))) < 1e-14);
}

TEST_CASE("parse round-trip is stable for both document forms") {
  const Family s = make_preset("example62a", 50);
  const std::string doc1 = serialize_family(s);
  const Family s2 = parse_family(doc1);
  CHECK(serialize_family(s2) == doc1);
  CHECK(family_dim(s2) == 50);

  Rng rng(17);
  const Family p = make_polynomial({testutil::random_hermitian(2, rng),
                                    testutil::random_hermitian(2, rng)});
  const std::string doc2 = serialize_family(p);
  CHECK(serialize_family(parse_family(doc2)) == doc2);
}

TEST_CASE("parser rejects malformed documents with a path in the message") {
  CHECK_THROWS_AS((void)parse_family("not json"), InputError);
  CHECK_THROWS_WITH_AS((void)parse_family(R"({"type":"nope"})"), doctest::Contains("type"),
                       InputError);
  const char* unknown_field = R"({"type":"structured","dim":4,
    "diagonal":{"rule":"exp_neg_k"},"bogus":1})";
  CHECK_THROWS_WITH_AS((void)parse_family(unknown_field), doctest::Contains("bogus"), InputError);
  const char* bad_coupling = R"({"type":"structured","dim":2,
    "diagonal":{"rule":"exp_neg_k"},
    "rank_one":[{"vector":[1,0],"coupling":"t^3","sign":-1}]})";
  CHECK_THROWS_AS((void)parse_family(bad_coupling), InputError);
}

TEST_CASE("presets round-trip and reproduce the scan signs") {
  const std::size_t n = 680;
  const Family fa = parse_family(serialize_family(make_preset("example62a", n)));
  const Family fb = parse_family(serialize_family(make_preset("example62b", n)));
  const auto& sa = std::get<StructuredFamily>(fa);
  const auto& sb = std::get<StructuredFamily>(fb);

  auto to_model = [](const StructuredFamily& s) {
    std::vector<double> w(s.dim);
    for (std::size_t k = 0; k < s.dim; ++k) w[k] = std::norm(s.rank_one_terms.front().vector[k]);
    return SecularModel::from_dense(s.base.values, w);
  };
  const std::vector<ScanRow> via_preset = crossing_scan(to_model(sa), to_model(sb), {5, 7, 9, 11});
  const std::vector<ScanRow> direct =
      crossing_scan(example62_model('a', n), example62_model('b', n), {5, 7, 9, 11});
  REQUIRE(via_preset.size() == direct.size());
  for (std::size_t i = 0; i < direct.size(); ++i) CHECK(via_preset[i].sign == direct[i].sign);
}

TEST_CASE("unknown preset is rejected") {
  CHECK_THROWS_AS((void)make_preset("nope"), InputError);
}
