#pragma once

#include <string>
#include <vector>

#include "hessmc/geometry/fields.hpp"
#include "hessmc/geometry/manifold.hpp"

namespace hessmc {

// String-addressable catalogs backing the harness config. Identifiers:
//   models:     euclidean:1|2|3, sphere:r=<r>, hyperbolic:r=<r>
//   h fields:   zero, quadratic (Euclidean), height (sphere)
//   potentials: zero, const:c=<c>, cos:eps=<eps>
//   functions:  one, x1, x1sq, sin_x1, ambient_x3 (sphere)

ManifoldPtr make_model(const std::string& id);
ChartFunctionPtr make_h_field(const std::string& id, const Manifold& M);
PotentialPtr make_potential(const std::string& id);
TestFunction make_test_function(const std::string& id, const Manifold& M);

// Declared analytic sup bound for rho^h = sup_{|v|=1}(-1/2 Ric + Hess h)(v,v)
// over the model, for the catalog (model, h) pairs.
double rho_h_bound(const Manifold& M, const std::string& h_id);

ScalarFieldBundle make_fields(const Manifold& M, const std::string& h_id,
                              const std::string& v_id);

std::vector<std::string> builtin_model_ids();
std::vector<std::string> builtin_h_ids();
std::vector<std::string> builtin_potential_ids();
std::vector<std::string> builtin_function_ids();

}  // namespace hessmc
