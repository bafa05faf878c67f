#pragma once

#include <functional>
#include <string>

#include "rtip/linalg.hpp"

namespace rtip {

/// A parametrized autonomous vector field x' = f(x, lambda). `jac` may be
/// empty, in which case Jacobians fall back to central differences.
struct VectorFieldFamily {
    std::string name;
    int dim = 0;
    std::function<Vec(const Vec&, double)> eval;
    std::function<Mat(const Vec&, double)> jac;  // optional analytic Jacobian
    double escape_radius = 1e4;
};

/// d f / d x at (x, lambda): analytic when available, otherwise central
/// differences with per-column step h_j = 1e-6 * max(1, |x_j|).
/// Throws NonFiniteState if the result has NaN/Inf entries.
Mat jacobian(const VectorFieldFamily& field, const Vec& x, double lambda);

/// Forces the finite-difference path (used to cross-check analytic Jacobians).
Mat jacobian_fd(const VectorFieldFamily& field, const Vec& x, double lambda);

}  // namespace rtip
