#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rtip/equilibria.hpp"
#include "rtip/field.hpp"
#include "rtip/models.hpp"
#include "rtip/shift.hpp"

namespace rtip {

/// Componentwise partial order with a strictness margin: StrictlyLess means
/// every component of a is below the matching component of b by more than
/// `margin`; Less allows components to agree (within margin) as long as none
/// is above; Equal means all components agree within margin.
enum class OrderRelation { Equal, Less, StrictlyLess, Greater, StrictlyGreater, Incomparable };

const char* to_string(OrderRelation r);

OrderRelation order_relation(const Vec& a, const Vec& b, double margin = 1e-9);

bool leq(const Vec& a, const Vec& b, double slack = 0.0);
bool strictly_less(const Vec& a, const Vec& b, double margin = 1e-9);

/// Cooperativity check: every off-diagonal Jacobian entry must be
/// >= -tolerance at every sample of an axis-aligned grid over
/// [lo, hi] x [lambda_lo, lambda_hi].
struct MonotoneCheck {
    bool monotone = true;
    int samples = 0;
    // First violation, if any.
    Vec witness_x;
    double witness_lambda = 0.0;
    int witness_row = -1, witness_col = -1;
    double witness_entry = 0.0;
};

MonotoneCheck check_monotone(const VectorFieldFamily& field, const Vec& lo, const Vec& hi,
                             std::pair<double, double> lambda_range,
                             int grid_per_axis = 5, double tolerance = 1e-12);

/// Axis-aligned order region. LowerSet is the order interval {x <= corner}
/// (corner stored in `hi`), UpperSet is {x >= corner} (corner stored in `lo`),
/// Bounded is [lo, hi].
enum class BoxKind { LowerSet, UpperSet, Bounded };

struct OrderBox {
    BoxKind kind = BoxKind::Bounded;
    Vec lo, hi;

    static OrderBox lower_set(const Vec& corner);
    static OrderBox upper_set(const Vec& corner);
    static OrderBox bounded(const Vec& lo, const Vec& hi);

    bool contains(const Vec& x, double slack = 0.0) const;
    bool contains_interior(const Vec& x, double margin) const;
};

/// Strict-inflow certificate for a box under the frozen field, built on the
/// cooperative comparison argument: on the face x_i = hi_i every point is
/// dominated by the corner, so f_i(corner) < 0 forces f_i < 0 across the
/// face (and symmetrically at lo). Corner margins of 1e-10 are required;
/// failure throws SignConditionFailed. 10 * dim sampled points per face give
/// an independent spot check and also guard against a non-cooperative field
/// being passed in; a sampled violation throws too.
struct InflowCertificate {
    bool holds = false;
    std::vector<double> corner_values;  // per checked corner component
    int boundary_samples = 0;
};

InflowCertificate inflow_box(const VectorFieldFamily& field, double lambda,
                             const OrderBox& box, std::uint64_t seed = 0,
                             double corner_margin = 1e-10);

/// Offset point z = saddle + side * delta * w, where (mu, w) is the positive
/// eigenpair of the Jacobian at the saddle (mu > 0, w componentwise > 0 after
/// sign normalization; otherwise NoPositiveEigenpair). delta starts at delta0
/// and is halved until f(z) has strict componentwise sign `side`; more than
/// 40 halvings raises DeltaUnderflow.
struct EigenOffsetResult {
    Vec z;
    Vec w;
    double mu = 0.0;
    double delta = 0.0;
    int halvings = 0;
};

EigenOffsetResult eigen_offset_point(const VectorFieldFamily& field, double lambda,
                                     const Vec& saddle, int side, double delta0 = 1e-2);

/// Outcome of the order-based tipping guarantee scan for a tracked attracting
/// branch against the saddle branch of a cooperative bistable system:
///   TippingGuaranteed        some pair u < v puts the tracked equilibrium at
///                            time u strictly beyond the saddle at time v, so
///                            a fast enough passage over [u, v] must tip
///                            (witness pair reported);
///   TippingGuaranteedLargeR  only the limits are strictly beyond each other
///                            (tracked at lambda_minus vs saddle at
///                            lambda_plus), so plain fast shifts tip;
///   NotApplicable            neither comparison holds.
enum class TippingGuaranteeFinding { TippingGuaranteed, TippingGuaranteedLargeR, NotApplicable };

const char* to_string(TippingGuaranteeFinding f);

struct TippingGuarantee {
    TippingGuaranteeFinding finding = TippingGuaranteeFinding::NotApplicable;
    double s_from = std::numeric_limits<double>::quiet_NaN();
    double s_to = std::numeric_limits<double>::quiet_NaN();
    std::string detail;
};

/// Hypotheses validated up front (HypothesisFailed otherwise): the field is
/// cooperative over the branches' bounding box, the tracked branch and the
/// saddle branch are strictly ordered the same way at every sample, and the
/// saddle carries a positive eigenpair at both frozen limits.
TippingGuarantee guaranteed_tipping_scan(const VectorFieldFamily& field,
                                         const ParameterShift& shift,
                                         const EquilibriumPath& tracked,
                                         const EquilibriumPath& saddle,
                                         double margin = 1e-9);

/// Rate-independent exclusion: no trajectory anchored to the tracked branch
/// can cross the saddle branch toward `other`, for any rate and any
/// monotone reparametrization. Built from a family of order cones
/// K(s) = {x <= z(s)} (tracked below the saddle) or {x >= z(s)} (above) with
/// z(s) = saddle(s) -+ delta * w(s):
///   * every z(s) satisfies the strict frozen corner sign condition,
///   * the family is nested the protective way (falls back to the constant
///     corner taken from the far end when the per-sample family is not), and
///   * the tracked branch is sandwiched strictly inside every cone.
/// Throws HypothesisFailed when the branches are not uniformly ordered and
/// ConstructionFailed when no delta down to 2^-40 * delta0 works.
struct NoTippingCertificate {
    std::string excluded_destination;
    std::string variant;  // "nested-family" or "constant-corner"
    double delta = 0.0;
    int samples = 0;
    std::string detail;
};

NoTippingCertificate no_tipping_check(const VectorFieldFamily& field,
                                      const ParameterShift& shift,
                                      const EquilibriumPath& tracked,
                                      const EquilibriumPath& saddle,
                                      const EquilibriumPath& other,
                                      double margin = 1e-9, double delta0 = 1e-2);

/// Box family for the forward-inflowing-stability certificate: bounded boxes
/// [lo_k, hi_k] attached to ascending s values.
struct FisBoxGrid {
    std::vector<double> s;
    std::vector<Vec> lo, hi;

    int size() const { return static_cast<int>(s.size()); }
};

struct FisCondition {
    bool holds = false;
    std::string name;
    std::string detail;
};

struct FISCertificate {
    bool holds = false;
    std::vector<FisCondition> conditions;  // the five conditions in order
    bool non_rigorous = true;  // basin inclusion (and, for non-cooperative
                               // fields, boundary inflow) rests on sampling
    int boxes = 0;
    std::string path_id;
};

struct FisOptions {
    double margin = 1e-9;         // interior / sandwich strictness
    double corner_margin = 1e-10; // corner sign strictness
    int face_samples = 10;        // per face, times dim
    int basin_grid = 0;           // per-axis interior samples; 0 = auto
    double t_settle = 500.0;
    double eps = 0.0;             // settle-ball radius at X_plus; 0 = auto
    std::uint64_t seed = 0;
};

/// Checks the five forward-inflowing-stability conditions for a tracked
/// branch and a box family:
///   1. branch interior to its box at every grid point,
///   2. boxes nested (never shrinking) along s,
///   3. strict boundary inflow of each frozen field (corner conditions when
///      `cooperative`, sampled faces always),
///   4. the frozen limits X_minus / X_plus interior to the first / last box,
///   5. the last box inside the frozen basin of X_plus (vertex + interior
///      grid sampling, settled into a verified ball).
/// Malformed grids throw GridMismatch; condition failures are reported, not
/// thrown.
FISCertificate verify_fis(const VectorFieldFamily& field, const ParameterShift& shift,
                          const EquilibriumPath& path, const FisBoxGrid& grid,
                          bool cooperative, const FisOptions& opts = {});

/// Constructs a box family for the cubic-nullcline cooperative model around
/// branch p1 or p3. The outer corner is a constant (C, d) placed by scanning
/// a coefficient inequality over the parameter range (InequalityFails when
/// the feasible window is empty); the saddle-side corner is the eigen-offset
/// family z(s) = saddle(s) -+ delta * w(s) when it nests, otherwise the
/// constant offset corner taken at a frozen limit. ConstructionFailed when no
/// delta works.
FisBoxGrid build_fis_boxes_cubic(const ModelSpec& model, const ParameterShift& shift,
                                 const std::string& path_id = "", int grid_points = 41);

}  // namespace rtip
