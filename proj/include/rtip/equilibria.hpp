#pragma once

#include <string>
#include <vector>

#include "rtip/eigen.hpp"
#include "rtip/field.hpp"
#include "rtip/shift.hpp"

namespace rtip {

struct NewtonOptions {
    double tol = 1e-12;  // accept when ||f(x)|| <= tol
    int max_iter = 100;
};

struct EquilibriumResult {
    Vec x;
    double residual = 0.0;
    int iterations = 0;
    Spectrum spectrum;
    StabilityLabel label = StabilityLabel::Nonhyperbolic;
};

/// Damped Newton (half-step line search on ||f||) for f(x, lambda) = 0.
/// Returns immediately with zero iterations if the seed already satisfies the
/// tolerance. Throws NoConvergence / SingularJacobian.
EquilibriumResult newton_equilibrium(const VectorFieldFamily& field, double lambda,
                                     const Vec& seed, NewtonOptions opts = {});

struct PathSample {
    double s = 0.0;
    double lambda = 0.0;
    Vec x;
    StabilityLabel label = StabilityLabel::Nonhyperbolic;
};

/// A branch of equilibria X(s) solving f(X, Lambda(s)) = 0 along a shift,
/// with its frozen limits at exactly lambda_minus / lambda_plus.
struct EquilibriumPath {
    std::string id;
    std::vector<PathSample> samples;  // ascending in s
    Vec x_minus, x_plus;
    StabilityLabel label_minus = StabilityLabel::Nonhyperbolic;
    StabilityLabel label_plus = StabilityLabel::Nonhyperbolic;

    bool is_stable() const;  // attracting at every sample and both limits
    const PathSample& nearest(double s) const;
    /// Diagonal of the bounding box of all samples and limits.
    double diameter() const;
};

struct ContinuationOptions {
    int grid_points = 1001;
    double eps_lambda = 1e-6;      // grid covers [-S(eps), S(eps)]
    double trust_factor = 10.0;    // corrector may move at most this x prev step
    double refine_fraction = 0.05; // split intervals longer than this x length
    int max_refine_rounds = 8;
    NewtonOptions newton{};
};

/// Predictor-corrector continuation seeded from the previous solution.
/// A corrector displacement beyond the trust radius raises BranchLost; loss
/// of attractivity is not an error (the path comes back labeled).
EquilibriumPath continue_path(const VectorFieldFamily& field, const ParameterShift& shift,
                              const Vec& seed, const std::string& id,
                              ContinuationOptions opts = {});

/// Newton-polished path point at an arbitrary s, seeded from the nearest
/// stored sample.
Vec path_point(const VectorFieldFamily& field, const ParameterShift& shift,
               const EquilibriumPath& path, double s);

}  // namespace rtip
