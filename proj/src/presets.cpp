#include "specrange/presets.hpp"

#include <cmath>

#include "specrange/secular.hpp"
#include "specrange/volterra.hpp"

namespace specrange {

Family make_preset(const std::string& name, std::size_t dim) {
  if (name == "example62a" || name == "example62b") {
    const std::size_t n = dim ? dim : 200;
    SecularModel model = example62_model(name.back(), n);
    const std::vector<double> w = model.dense_weights();
    RankOneTerm term;
    term.vector.resize(n);
    for (std::size_t k = 0; k < n; ++k) term.vector[k] = std::sqrt(w[k]);
    term.coupling_degree = 1;
    term.sign = -1;
    return make_structured(DiagonalTail::exp_neg_k(n), DiagonalTail::constant(n, 0.0), {term});
  }
  if (name == "volterra") {
    const std::size_t n = dim ? dim : 256;
    const VolterraDiscretization v = volterra_matrix(n);
    return make_polynomial({volterra_re(v), volterra_im(v)});
  }
  throw InputError("make_preset: unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() { return {"example62a", "example62b", "volterra"}; }

}  // namespace specrange
