#include "specrange/family.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace specrange {

namespace {
constexpr double kFlushFloor = 1e-300;

void flush_small(std::vector<double>& values, std::vector<std::size_t>& flushed) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0 && std::abs(values[i]) < kFlushFloor) {
      values[i] = 0.0;
      flushed.push_back(i + 1);
    }
  }
}
}  // namespace

bool DiagonalTail::is_zero() const {
  for (double v : values)
    if (v != 0.0) return false;
  return true;
}

DiagonalTail DiagonalTail::explicit_list(std::vector<double> values, std::vector<double> limits) {
  if (values.empty()) throw InputError("diagonal tail: empty value list");
  for (double v : values)
    if (!std::isfinite(v)) throw InputError("diagonal tail: non-finite entry");
  DiagonalTail t;
  t.rule = TailRule::ExplicitList;
  t.values = std::move(values);
  t.limit_points = std::move(limits);
  flush_small(t.values, t.flushed);
  return t;
}

DiagonalTail DiagonalTail::exp_neg_k(std::size_t n) {
  if (n == 0) throw InputError("diagonal tail: zero length");
  DiagonalTail t;
  t.rule = TailRule::ExpNegK;
  t.values.resize(n);
  t.values[0] = 0.0;
  for (std::size_t k = 2; k <= n; ++k) t.values[k - 1] = std::exp(-static_cast<double>(k));
  t.limit_points = {0.0};
  flush_small(t.values, t.flushed);
  return t;
}

DiagonalTail DiagonalTail::recip_k(std::size_t n) {
  if (n == 0) throw InputError("diagonal tail: zero length");
  DiagonalTail t;
  t.rule = TailRule::RecipK;
  t.values.resize(n);
  for (std::size_t k = 1; k <= n; ++k) t.values[k - 1] = 1.0 / static_cast<double>(k);
  t.limit_points = {0.0};
  return t;
}

DiagonalTail DiagonalTail::geometric(std::size_t n, double scale, double ratio) {
  if (n == 0) throw InputError("diagonal tail: zero length");
  if (!std::isfinite(scale) || !std::isfinite(ratio))
    throw InputError("diagonal tail: non-finite rule parameter");
  DiagonalTail t;
  t.rule = TailRule::Geometric;
  t.geometric_scale = scale;
  t.geometric_ratio = ratio;
  t.values.resize(n);
  double p = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    p *= ratio;
    t.values[k - 1] = scale * p;
  }
  t.limit_points = std::abs(ratio) < 1.0 ? std::vector<double>{0.0} : std::vector<double>{};
  flush_small(t.values, t.flushed);
  return t;
}

DiagonalTail DiagonalTail::constant(std::size_t n, double value) {
  if (n == 0) throw InputError("diagonal tail: zero length");
  if (!std::isfinite(value)) throw InputError("diagonal tail: non-finite rule parameter");
  DiagonalTail t;
  t.rule = TailRule::Constant;
  t.constant_value = value;
  t.values.assign(n, value);
  t.limit_points = {value};
  return t;
}

void DiagonalTail::validate(double tail_tol) const {
  if (limit_points.empty())
    throw InputError("diagonal tail: no declared limit points");
  for (double lp : limit_points) {
    bool approached = false;
    for (double v : values) {
      if (std::abs(v - lp) <= tail_tol) {
        approached = true;
        break;
      }
    }
    if (!approached) {
      std::ostringstream os;
      os << "diagonal tail: declared limit point " << lp << " is not approached within "
         << tail_tol;
      throw InputError(os.str());
    }
  }
  const std::size_t n = values.size();
  for (std::size_t k = n / 2 + 1; k <= n; ++k) {
    double v = values[k - 1];
    bool near = false;
    for (double lp : limit_points) {
      if (std::abs(v - lp) <= tail_tol) {
        near = true;
        break;
      }
    }
    if (!near) {
      std::ostringstream os;
      os << "diagonal tail: entry " << k << " = " << v
         << " lies farther than " << tail_tol << " from every declared limit point";
      throw InputError(os.str());
    }
  }
}

PolynomialFamily make_polynomial(std::vector<HermitianMatrix> coefficients,
                                 std::optional<double> radius) {
  if (coefficients.empty()) throw InputError("polynomial family: no coefficients");
  const std::size_t dim = coefficients.front().dim();
  if (dim == 0 || dim > 4000) throw InputError("polynomial family: dimension out of range");
  for (const HermitianMatrix& c : coefficients)
    if (c.dim() != dim) throw InputError("polynomial family: coefficient dimensions disagree");
  if (radius && !(*radius > 0.0)) throw InputError("polynomial family: radius must be positive");
  PolynomialFamily f;
  f.dim = dim;
  f.coefficients = std::move(coefficients);
  f.radius = radius;
  return f;
}

StructuredFamily make_structured(DiagonalTail base, DiagonalTail a1_diagonal,
                                 std::vector<RankOneTerm> rank_one_terms) {
  const std::size_t dim = base.size();
  if (dim == 0 || dim > 4000) throw InputError("structured family: dimension out of range");
  if (a1_diagonal.size() != dim)
    throw InputError("structured family: a1 diagonal length disagrees with base");
  for (const RankOneTerm& r : rank_one_terms) {
    if (r.vector.size() != dim)
      throw InputError("structured family: rank-one vector length disagrees with dimension");
    if (r.coupling_degree < 1)
      throw InputError("structured family: coupling degree must be >= 1");
    if (r.sign != 1 && r.sign != -1)
      throw InputError("structured family: sign must be +1 or -1");
    for (const Complex& v : r.vector)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw InputError("structured family: non-finite rank-one entry");
  }
  StructuredFamily f;
  f.dim = dim;
  f.base = std::move(base);
  f.a1_diagonal = std::move(a1_diagonal);
  f.rank_one_terms = std::move(rank_one_terms);
  return f;
}

HermitianMatrix evaluate(const PolynomialFamily& f, double t) {
  if (f.radius && std::abs(t) >= *f.radius) {
    std::ostringstream os;
    os << "evaluate: |t| = " << std::abs(t) << " outside declared radius " << *f.radius;
    throw InputError(os.str());
  }
  const std::size_t n = f.dim;
  ComplexMatrix acc = f.coefficients.back().matrix();
  for (std::size_t k = f.coefficients.size() - 1; k-- > 0;) {
    const ComplexMatrix& c = f.coefficients[k].matrix();
    for (std::size_t i = 0; i < n * n; ++i) acc.data()[i] = t * acc.data()[i] + c.data()[i];
  }
  return HermitianMatrix::from_exact(std::move(acc));
}

namespace {

double int_pow(double t, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= t;
  return r;
}

// diag(d0) + coeff-weighted rank-one terms, filled on the upper triangle and
// mirrored so the result is exactly Hermitian.
HermitianMatrix assemble_structured(const StructuredFamily& f,
                                    const std::vector<double>& diag,
                                    const std::vector<double>& coeffs) {
  const std::size_t n = f.dim;
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = diag[i];
  for (std::size_t r = 0; r < f.rank_one_terms.size(); ++r) {
    double c = coeffs[r];
    if (c == 0.0) continue;
    const std::vector<Complex>& a = f.rank_one_terms[r].vector;
    for (std::size_t i = 0; i < n; ++i) {
      m(i, i) += Complex(c * std::norm(a[i]), 0.0);
      for (std::size_t j = i + 1; j < n; ++j) m(i, j) += c * (a[i] * std::conj(a[j]));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = Complex(m(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) m(j, i) = std::conj(m(i, j));
  }
  return HermitianMatrix::from_exact(std::move(m));
}

}  // namespace

HermitianMatrix evaluate(const StructuredFamily& f, double t) {
  std::vector<double> diag(f.dim);
  for (std::size_t i = 0; i < f.dim; ++i)
    diag[i] = f.base.values[i] + t * f.a1_diagonal.values[i];
  std::vector<double> coeffs(f.rank_one_terms.size());
  for (std::size_t r = 0; r < f.rank_one_terms.size(); ++r)
    coeffs[r] = f.rank_one_terms[r].sign * int_pow(t, f.rank_one_terms[r].coupling_degree);
  return assemble_structured(f, diag, coeffs);
}

HermitianMatrix evaluate(const Family& f, double t) {
  return std::visit([&](const auto& g) { return evaluate(g, t); }, f);
}

std::size_t family_dim(const Family& f) {
  return std::visit([](const auto& g) { return g.dim; }, f);
}

EssentialData essential_points(const StructuredFamily& f, double tail_tol) {
  f.base.validate(tail_tol);
  f.a1_diagonal.validate(tail_tol);
  auto snap = [&](double v, const std::vector<double>& limits) {
    double best = limits.front();
    double gap = std::abs(v - best);
    for (double lp : limits) {
      if (std::abs(v - lp) < gap) {
        gap = std::abs(v - lp);
        best = lp;
      }
    }
    return best;
  };
  std::set<std::array<double, 2>> pairs;
  const std::size_t n = f.dim;
  for (std::size_t k = n / 2 + 1; k <= n; ++k) {
    pairs.insert({snap(f.base.values[k - 1], f.base.limit_points),
                  snap(f.a1_diagonal.values[k - 1], f.a1_diagonal.limit_points)});
  }
  EssentialData out;
  out.points.assign(pairs.begin(), pairs.end());
  return out;
}

HermitianMatrix family_a1(const Family& f) {
  if (std::holds_alternative<PolynomialFamily>(f)) {
    const auto& p = std::get<PolynomialFamily>(f);
    if (p.coefficients.size() < 2)
      throw InputError("family_a1: family has no first-order term");
    return p.coefficients[1];
  }
  const auto& s = std::get<StructuredFamily>(f);
  bool has_linear = !s.a1_diagonal.is_zero();
  for (const RankOneTerm& r : s.rank_one_terms) has_linear = has_linear || r.coupling_degree == 1;
  if (!has_linear) throw InputError("family_a1: family has no first-order term");
  std::vector<double> coeffs(s.rank_one_terms.size(), 0.0);
  for (std::size_t r = 0; r < s.rank_one_terms.size(); ++r)
    if (s.rank_one_terms[r].coupling_degree == 1)
      coeffs[r] = static_cast<double>(s.rank_one_terms[r].sign);
  return assemble_structured(s, s.a1_diagonal.values, coeffs);
}

HermitianMatrix family_derivative(const Family& f, double t) {
  if (std::holds_alternative<PolynomialFamily>(f)) {
    const auto& p = std::get<PolynomialFamily>(f);
    const std::size_t n = p.dim;
    if (p.coefficients.size() < 2) {
      return HermitianMatrix::from_exact(ComplexMatrix(n, n));
    }
    ComplexMatrix acc(n, n);
    for (std::size_t k = p.coefficients.size() - 1; k >= 1; --k) {
      const ComplexMatrix& c = p.coefficients[k].matrix();
      double kd = static_cast<double>(k);
      for (std::size_t i = 0; i < n * n; ++i)
        acc.data()[i] = t * acc.data()[i] + kd * c.data()[i];
    }
    return HermitianMatrix::from_exact(std::move(acc));
  }
  const auto& s = std::get<StructuredFamily>(f);
  std::vector<double> coeffs(s.rank_one_terms.size());
  for (std::size_t r = 0; r < s.rank_one_terms.size(); ++r) {
    int p = s.rank_one_terms[r].coupling_degree;
    coeffs[r] = s.rank_one_terms[r].sign * p * int_pow(t, p - 1);
  }
  return assemble_structured(s, s.a1_diagonal.values, coeffs);
}

// ---------------------------------------------------------------------------
// JSON interchange

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw InputError("parse error at " + path + ": " + msg);
}

void check_keys(const json& obj, const std::string& path,
                const std::vector<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      fail(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

Complex get_complex(const json& j, const std::string& path) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  fail(path, "expected a number or an [re, im] pair");
}

std::size_t get_dim(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 1 || j.get<long long>() > 4000)
    fail(path, "expected an integer dimension in 1..4000");
  return static_cast<std::size_t>(j.get<long long>());
}

std::vector<double> get_real_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

DiagonalTail parse_tail(const json& j, std::size_t dim, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  check_keys(j, path, {"rule", "values", "limit_points", "scale", "ratio", "value"});
  if (!j.contains("rule") || !j["rule"].is_string()) fail(path + ".rule", "expected a string");
  const std::string rule = j["rule"].get<std::string>();
  std::optional<std::vector<double>> limits;
  if (j.contains("limit_points")) limits = get_real_list(j["limit_points"], path + ".limit_points");

  auto forbid = [&](const char* key) {
    if (j.contains(key)) fail(path + "." + key, "field not valid for rule '" + rule + "'");
  };

  if (rule == "list") {
    if (!j.contains("values")) fail(path + ".values", "required for rule 'list'");
    forbid("scale");
    forbid("ratio");
    forbid("value");
    std::vector<double> values = get_real_list(j["values"], path + ".values");
    if (values.size() != dim) fail(path + ".values", "length disagrees with dim");
    if (!limits) fail(path + ".limit_points", "required for rule 'list'");
    return DiagonalTail::explicit_list(std::move(values), *limits);
  }
  if (rule == "exp_neg_k") {
    forbid("values");
    forbid("scale");
    forbid("ratio");
    forbid("value");
    DiagonalTail t = DiagonalTail::exp_neg_k(dim);
    if (limits) t.limit_points = *limits;
    return t;
  }
  if (rule == "recip_k") {
    forbid("values");
    forbid("scale");
    forbid("ratio");
    forbid("value");
    DiagonalTail t = DiagonalTail::recip_k(dim);
    if (limits) t.limit_points = *limits;
    return t;
  }
  if (rule == "geometric") {
    forbid("values");
    forbid("value");
    if (!j.contains("scale")) fail(path + ".scale", "required for rule 'geometric'");
    if (!j.contains("ratio")) fail(path + ".ratio", "required for rule 'geometric'");
    DiagonalTail t = DiagonalTail::geometric(dim, get_number(j["scale"], path + ".scale"),
                                             get_number(j["ratio"], path + ".ratio"));
    if (limits) t.limit_points = *limits;
    return t;
  }
  if (rule == "constant") {
    forbid("values");
    forbid("scale");
    forbid("ratio");
    if (!j.contains("value")) fail(path + ".value", "required for rule 'constant'");
    DiagonalTail t = DiagonalTail::constant(dim, get_number(j["value"], path + ".value"));
    if (limits) t.limit_points = *limits;
    return t;
  }
  fail(path + ".rule", "unknown rule '" + rule + "'");
}

json tail_to_json(const DiagonalTail& t) {
  json j;
  switch (t.rule) {
    case TailRule::ExplicitList:
      j["rule"] = "list";
      j["values"] = t.values;
      break;
    case TailRule::ExpNegK:
      j["rule"] = "exp_neg_k";
      break;
    case TailRule::RecipK:
      j["rule"] = "recip_k";
      break;
    case TailRule::Geometric:
      j["rule"] = "geometric";
      j["scale"] = t.geometric_scale;
      j["ratio"] = t.geometric_ratio;
      break;
    case TailRule::Constant:
      j["rule"] = "constant";
      j["value"] = t.constant_value;
      break;
  }
  j["limit_points"] = t.limit_points;
  return j;
}

}  // namespace

Family parse_family(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("parse error: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("$", "expected a JSON object");
  if (!doc.contains("type") || !doc["type"].is_string()) fail("type", "expected a string");
  const std::string type = doc["type"].get<std::string>();

  if (type == "polynomial") {
    check_keys(doc, "", {"type", "dim", "coefficients", "radius"});
    if (!doc.contains("dim")) fail("dim", "required");
    std::size_t dim = get_dim(doc["dim"], "dim");
    if (!doc.contains("coefficients") || !doc["coefficients"].is_array() ||
        doc["coefficients"].empty())
      fail("coefficients", "expected a nonempty array");
    std::vector<HermitianMatrix> coeffs;
    for (std::size_t k = 0; k < doc["coefficients"].size(); ++k) {
      const std::string cpath = "coefficients[" + std::to_string(k) + "]";
      const json& cj = doc["coefficients"][k];
      if (!cj.is_array() || cj.size() != dim * dim)
        fail(cpath, "expected a row-major array of dim*dim entries");
      ComplexMatrix m(dim, dim);
      for (std::size_t i = 0; i < dim * dim; ++i)
        m.data()[i] = get_complex(cj[i], cpath + "[" + std::to_string(i) + "]");
      try {
        coeffs.push_back(HermitianMatrix::from_matrix(m));
      } catch (const InputError& e) {
        fail(cpath, e.what());
      }
    }
    std::optional<double> radius;
    if (doc.contains("radius")) {
      const json& rj = doc["radius"];
      if (rj.is_string() && rj.get<std::string>() == "unbounded") {
        radius = std::nullopt;
      } else if (rj.is_number() && rj.get<double>() > 0.0) {
        radius = rj.get<double>();
      } else {
        fail("radius", "expected a positive number or \"unbounded\"");
      }
    }
    return make_polynomial(std::move(coeffs), radius);
  }

  if (type == "structured") {
    check_keys(doc, "", {"type", "dim", "diagonal", "a1_diagonal", "rank_one"});
    if (!doc.contains("dim")) fail("dim", "required");
    std::size_t dim = get_dim(doc["dim"], "dim");
    if (!doc.contains("diagonal")) fail("diagonal", "required");
    DiagonalTail base = parse_tail(doc["diagonal"], dim, "diagonal");
    DiagonalTail a1 = doc.contains("a1_diagonal")
                          ? parse_tail(doc["a1_diagonal"], dim, "a1_diagonal")
                          : DiagonalTail::constant(dim, 0.0);
    std::vector<RankOneTerm> terms;
    if (doc.contains("rank_one")) {
      if (!doc["rank_one"].is_array()) fail("rank_one", "expected an array");
      for (std::size_t r = 0; r < doc["rank_one"].size(); ++r) {
        const std::string rpath = "rank_one[" + std::to_string(r) + "]";
        const json& rj = doc["rank_one"][r];
        if (!rj.is_object()) fail(rpath, "expected an object");
        check_keys(rj, rpath, {"vector", "coupling", "sign"});
        if (!rj.contains("vector") || !rj["vector"].is_array() || rj["vector"].size() != dim)
          fail(rpath + ".vector", "expected an array of dim entries");
        RankOneTerm term;
        term.vector.resize(dim);
        for (std::size_t i = 0; i < dim; ++i)
          term.vector[i] =
              get_complex(rj["vector"][i], rpath + ".vector[" + std::to_string(i) + "]");
        if (!rj.contains("coupling") || !rj["coupling"].is_string())
          fail(rpath + ".coupling", "expected \"t\" or \"t^2\"");
        const std::string coupling = rj["coupling"].get<std::string>();
        if (coupling == "t")
          term.coupling_degree = 1;
        else if (coupling == "t^2")
          term.coupling_degree = 2;
        else
          fail(rpath + ".coupling", "expected \"t\" or \"t^2\"");
        if (!rj.contains("sign") || !rj["sign"].is_number_integer() ||
            (rj["sign"].get<int>() != 1 && rj["sign"].get<int>() != -1))
          fail(rpath + ".sign", "expected -1 or 1");
        term.sign = rj["sign"].get<int>();
        terms.push_back(std::move(term));
      }
    }
    return make_structured(std::move(base), std::move(a1), std::move(terms));
  }

  fail("type", "unknown family type '" + type + "'");
}

std::string serialize_family(const Family& f) {
  json doc;
  if (std::holds_alternative<PolynomialFamily>(f)) {
    const auto& p = std::get<PolynomialFamily>(f);
    doc["type"] = "polynomial";
    doc["dim"] = p.dim;
    json coeffs = json::array();
    for (const HermitianMatrix& c : p.coefficients) {
      json cj = json::array();
      for (const Complex& v : c.matrix().data()) cj.push_back({v.real(), v.imag()});
      coeffs.push_back(std::move(cj));
    }
    doc["coefficients"] = std::move(coeffs);
    if (p.radius)
      doc["radius"] = *p.radius;
    else
      doc["radius"] = "unbounded";
  } else {
    const auto& s = std::get<StructuredFamily>(f);
    doc["type"] = "structured";
    doc["dim"] = s.dim;
    doc["diagonal"] = tail_to_json(s.base);
    doc["a1_diagonal"] = tail_to_json(s.a1_diagonal);
    json terms = json::array();
    for (const RankOneTerm& r : s.rank_one_terms) {
      json rj;
      json vec = json::array();
      for (const Complex& v : r.vector) vec.push_back({v.real(), v.imag()});
      rj["vector"] = std::move(vec);
      rj["coupling"] = r.coupling_degree == 1 ? "t" : "t^2";
      rj["sign"] = r.sign;
      terms.push_back(std::move(rj));
    }
    doc["rank_one"] = std::move(terms);
  }
  return doc.dump(2);
}

}  // namespace specrange
