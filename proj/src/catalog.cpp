#include "hessmc/geometry/catalog.hpp"

#include <cmath>

#include "hessmc/geometry/models.hpp"

namespace hessmc {

namespace {

// Splits "name:key=value" style ids; returns {name, payload-after-colon}.
std::pair<std::string, std::string> split_id(const std::string& id) {
  const auto pos = id.find(':');
  if (pos == std::string::npos) return {id, ""};
  return {id.substr(0, pos), id.substr(pos + 1)};
}

double parse_keyed_number(const std::string& payload, const std::string& key,
                          const std::string& id) {
  const std::string prefix = key + "=";
  if (payload.rfind(prefix, 0) != 0) {
    throw UsageError("catalog: expected '" + key + "=<number>' in '" + id + "'");
  }
  try {
    return std::stod(payload.substr(prefix.size()));
  } catch (const std::exception&) {
    throw UsageError("catalog: bad number in '" + id + "'");
  }
}

const SphereModel* as_sphere(const Manifold& M) {
  return dynamic_cast<const SphereModel*>(&M);
}

}  // namespace

ManifoldPtr make_model(const std::string& id) {
  const auto [name, payload] = split_id(id);
  if (name == "euclidean") {
    int n = 0;
    try {
      n = std::stoi(payload);
    } catch (const std::exception&) {
      throw UsageError("catalog: bad dimension in '" + id + "'");
    }
    return std::make_shared<EuclideanSpace>(n);
  }
  if (name == "sphere") {
    return std::make_shared<SphereModel>(parse_keyed_number(payload, "r", id));
  }
  if (name == "hyperbolic") {
    return std::make_shared<HyperbolicPlane>(
        parse_keyed_number(payload, "r", id));
  }
  throw UsageError("catalog: unknown model '" + id + "'");
}

ChartFunctionPtr make_h_field(const std::string& id, const Manifold& M) {
  if (id == "zero" || id.empty()) return std::make_shared<ZeroFunction>();
  if (id == "quadratic") {
    if (!dynamic_cast<const EuclideanSpace*>(&M)) {
      throw UsageError("catalog: h=quadratic requires a Euclidean model");
    }
    return std::make_shared<NegHalfSquareNorm>();
  }
  if (id == "height") {
    const auto* sphere = as_sphere(M);
    if (!sphere) throw UsageError("catalog: h=height requires the sphere");
    return std::make_shared<SphereHeight>(sphere->radius());
  }
  throw UsageError("catalog: unknown h field '" + id + "'");
}

PotentialPtr make_potential(const std::string& id) {
  const auto [name, payload] = split_id(id);
  if (name == "zero" || name.empty()) return std::make_shared<ZeroPotential>();
  if (name == "const") {
    return std::make_shared<ConstantPotential>(
        parse_keyed_number(payload, "c", id));
  }
  if (name == "cos") {
    return std::make_shared<CosinePotential>(
        parse_keyed_number(payload, "eps", id));
  }
  throw UsageError("catalog: unknown potential '" + id + "'");
}

TestFunction make_test_function(const std::string& id, const Manifold& M) {
  TestFunction tf;
  tf.smoothness = Smoothness::BC2;
  if (id == "one") {
    tf.f = std::make_shared<ConstantFunction>(1.0);
    tf.sup_f = 1.0;
    tf.sup_df = 0.0;
    tf.sup_hess = 0.0;
    return tf;
  }
  if (id == "x1") {
    tf.f = std::make_shared<FirstCoordinate>();
    return tf;
  }
  if (id == "x1sq") {
    tf.f = std::make_shared<FirstCoordinateSquared>();
    return tf;
  }
  if (id == "sin_x1") {
    tf.f = std::make_shared<SinFirstCoordinate>();
    tf.sup_f = 1.0;
    return tf;
  }
  if (id == "ambient_x3") {
    const auto* sphere = as_sphere(M);
    if (!sphere) throw UsageError("catalog: f=ambient_x3 requires the sphere");
    const double r = sphere->radius();
    tf.f = std::make_shared<SphereHeight>(r);
    tf.sup_f = r;
    tf.sup_df = 1.0;
    tf.sup_hess = 1.0 / r;
    return tf;
  }
  throw UsageError("catalog: unknown test function '" + id + "'");
}

double rho_h_bound(const Manifold& M, const std::string& h_id) {
  if (const auto* sphere = as_sphere(M)) {
    const double r = sphere->radius();
    if (h_id == "zero" || h_id.empty()) return -0.5 / (r * r);
    if (h_id == "height") return -0.5 / (r * r) + 1.0 / r;
  } else if (dynamic_cast<const HyperbolicPlane*>(&M)) {
    if (h_id == "zero" || h_id.empty()) {
      return 0.5 * M.norm_R_inf();
    }
  } else {
    if (h_id == "zero" || h_id.empty()) return 0.0;
    if (h_id == "quadratic") return -1.0;
  }
  throw UsageError("catalog: no declared rho^h bound for h='" + h_id +
                   "' on " + M.name());
}

ScalarFieldBundle make_fields(const Manifold& M, const std::string& h_id,
                              const std::string& v_id) {
  ScalarFieldBundle fields;
  fields.h = make_h_field(h_id, M);
  fields.V = make_potential(v_id);
  fields.rho_h_bound = rho_h_bound(M, h_id);
  return fields;
}

std::vector<std::string> builtin_model_ids() {
  return {"euclidean:1", "euclidean:2", "euclidean:3", "sphere:r=1",
          "hyperbolic:r=1"};
}

std::vector<std::string> builtin_h_ids() {
  return {"zero", "quadratic", "height"};
}

std::vector<std::string> builtin_potential_ids() {
  return {"zero", "const:c=<c>", "cos:eps=<eps>"};
}

std::vector<std::string> builtin_function_ids() {
  return {"one", "x1", "x1sq", "sin_x1", "ambient_x3"};
}

}  // namespace hessmc
