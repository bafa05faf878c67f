#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rtip/equilibria.hpp"
#include "rtip/field.hpp"
#include "rtip/shift.hpp"

namespace rtip {

// Polynomial in the frozen parameter, coefficients in ascending powers.
// Used to map the swept parameter onto model coefficients (e.g. a(lambda)).
struct Polynomial {
  std::vector<double> coeffs;

  double operator()(double x) const;
  std::string describe() const;  // "poly(c0, c1, ...)"
};

// An equilibrium branch known in closed form as a function of the frozen
// parameter. `stable` refers to the documented parameter regime of the model.
struct NamedEquilibrium {
  std::string id;
  std::function<Vec(double)> point;
  bool stable = false;
};

struct ModelSpec {
  std::string name;
  VectorFieldFamily field;
  ParameterShift default_shift;
  std::vector<NamedEquilibrium> equilibria;
  std::string default_path_id;
  bool monotone = false;

  const NamedEquilibrium& equilibrium(const std::string& id) const;
  std::vector<std::string> stable_ids() const;
};

// Built-in models.
ModelSpec lorenz63();
ModelSpec homoclinic2d();
ModelSpec saddle_node_1d();

// Planar cubic-nullcline monotone model with coefficient maps a(lambda),
// b(lambda). Throws ParameterRegimeViolation unless b > -1 and |a| < sqrt(b+1)
// hold across the shift's parameter range.
ModelSpec monotone_cubic(const Polynomial& a, const Polynomial& b,
                         const ParameterShift& shift);
ModelSpec monotone_cubic_default();

// Registry keyed by CLI name: lorenz63, homoclinic2d, monotone-cubic,
// saddle-node-1d.
std::vector<std::string> model_names();
ModelSpec make_model(const std::string& name);

// Continuation helpers seeded from the closed-form branches.
EquilibriumPath continue_named_path(const ModelSpec& model,
                                    const ParameterShift& shift,
                                    const std::string& id,
                                    const ContinuationOptions& opts = {});
std::vector<EquilibriumPath> continue_stable_paths(
    const ModelSpec& model, const ParameterShift& shift,
    const ContinuationOptions& opts = {});

}  // namespace rtip
