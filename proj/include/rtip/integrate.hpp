#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rtip/field.hpp"
#include "rtip/linalg.hpp"
#include "rtip/shift.hpp"

namespace rtip {

struct IntegratorTolerances {
    double rel = 1e-9;
    double abs = 1e-11;
};

struct IntegratorOptions {
    IntegratorTolerances tol{};
    /// > 0 forces constant step size (no error control); used by convergence
    /// order tests.
    double fixed_step = 0.0;
    double max_step = std::numeric_limits<double>::infinity();
    long long max_steps = 50'000'000;
};

struct TrajectorySample {
    double t = 0.0;
    double s = 0.0;
    Vec x;
};

/// Solution of the rate-augmented system x' = f(x, Lambda(s)), s' = rate.
/// Samples are the accepted integrator steps; t is strictly increasing and
/// s == s0 + rate * (t - t0) to roundoff because s enters the integration as
/// an exactly-linear component.
struct Trajectory {
    std::vector<TrajectorySample> samples;
    double rate = 0.0;
    bool escaped = false;
    double escape_time = std::numeric_limits<double>::quiet_NaN();

    // provenance
    std::string model;
    std::string shift_desc;
    std::string path_id;

    const TrajectorySample& back() const { return samples.back(); }
    int dim() const { return samples.empty() ? 0 : samples.front().x.size(); }
};

/// Integrate the augmented system over t_span with the embedded 5(4)
/// Dormand-Prince pair and PI step-size control. Terminates early (with the
/// `escaped` marker and the crossing time refined to 1e-10 in t) when
/// ||x|| exceeds field.escape_radius. t_span may be a single point, giving a
/// one-sample trajectory.
Trajectory integrate(const VectorFieldFamily& field, const ParameterShift& shift,
                     double rate, const Vec& x0, double s0,
                     std::pair<double, double> t_span, IntegratorTolerances tol = {});

Trajectory integrate_opts(const VectorFieldFamily& field, const ParameterShift& shift,
                          double rate, const Vec& x0, double s0,
                          std::pair<double, double> t_span, const IntegratorOptions& opts);

///// Ellipsoidal convergence target: inside when
/// (y - center)^T metric (y - center) <= level. The metric comes from a
/// Lyapunov equation at an attracting equilibrium so the boundary is
/// flow-transverse; `radius` is the enclosing Euclidean radius kept for
/// reporting.
struct QuadraticTarget {
    std::string id;
    Vec center;
    Mat metric;
    double level = 0.0;
    double radius = 0.0;

    double value(const Vec& y) const;
    bool inside(const Vec& y) const { return value(y) <= level; }
};

struct SettleResult {
    enum class Kind { EnteredTarget, Escaped, Timeout };
    Kind kind = Kind::Timeout;
    int target_index = -1;
    double t_event = std::numeric_limits<double>::quiet_NaN();
    Vec state;  // at the event, or at the horizon for Timeout
};

/// Run the frozen-parameter flow from x0 for up to `horizon` time units,
/// stopping at the first entry into any target (entry time bisected on the
/// last step) or at escape. Does not record the trajectory.
SettleResult settle_frozen(const VectorFieldFamily& field, double lambda, const Vec& x0,
                           double horizon, const std::vector<QuadraticTarget>& targets,
                           IntegratorTolerances tol = {});

}  // namespace rtip
