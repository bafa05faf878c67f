#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rtip/equilibria.hpp"
#include "rtip/integrate.hpp"
#include "rtip/models.hpp"
#include "rtip/shift.hpp"

namespace rtip {

struct PullbackConfig {
    double eps_lambda = 1e-6;  // shift saturation tolerance defining S
    double eps_track = 0.0;    // tracking resolution; 0 = automatic
    double t_settle = 500.0;   // frozen-flow settling horizon
    double s_offset = 5.0;     // start/stop this far beyond +-S
    std::uint64_t seed = 0;    // ball-certificate sampling stream
    IntegratorOptions integrator{};
};

enum class TippingOutcome { Tracks, TipsToEquilibrium, Escapes, Undetermined };

std::string to_string(TippingOutcome o);

struct TippingVerdict {
    TippingOutcome outcome = TippingOutcome::Undetermined;
    std::string destination;  // settled path id when TipsToEquilibrium
    double rate = 0.0;
    double eps_track = 0.0;   // resolution actually used
    // Diagnostics (NaN when not applicable).
    double final_distance = std::numeric_limits<double>::quiet_NaN();
    double settle_time = std::numeric_limits<double>::quiet_NaN();
    double escape_time = std::numeric_limits<double>::quiet_NaN();
    std::string detail;

    bool tracks() const { return outcome == TippingOutcome::Tracks; }
};

/// Forward-invariant ellipsoid (y - c)^T P (y - c) <= level around an
/// attracting equilibrium, with P from  J^T P + P J = -I. The level is chosen
/// so the ellipsoid is inscribed in the Euclidean ball of the given radius,
/// then invariance (2 (y - c)^T P f(y) < 0 on the boundary) is checked at
/// 100 * dim sampled boundary points; `verified` records the outcome.
struct TrackingBall {
    QuadraticTarget target;
    bool verified = false;
};

TrackingBall make_tracking_ball(const VectorFieldFamily& field, double lambda,
                                const Vec& center, double radius,
                                const std::string& id, Rng& rng);

/// A classification instance: the nonautonomous field, its shift, all stable
/// equilibrium branches continued along the shift, and which branch the
/// pullback attractor is anchored to.
struct TippingProblem {
    VectorFieldFamily field;
    ParameterShift shift;
    std::vector<EquilibriumPath> stable_paths;
    std::string path_id;

    const EquilibriumPath& tracked() const;
};

/// Continues every stable branch of the model along `shift` and anchors the
/// problem to `path_id` (empty = the model's default branch).
TippingProblem make_problem(const ModelSpec& model, const ParameterShift& shift,
                            const std::string& path_id = "",
                            const ContinuationOptions& opts = {});
TippingProblem make_problem(const ModelSpec& model, const std::string& path_id = "");

/// The pullback solve itself: starts on the tracked branch at
/// s = -S(eps_lambda) - s_offset and integrates the rate-augmented system to
/// s = +S + s_offset (or to escape).
Trajectory pullback_attractor(const TippingProblem& problem, double rate,
                              const PullbackConfig& cfg = {});

/// End-point classification of the pullback attractor at the given rate:
///   Tracks              settles (frozen at lambda_plus) into the tracked
///                       branch's own limit ball,
///   TipsToEquilibrium   settles into a different stable branch's limit ball,
///   Escapes             leaves the escape radius during the sweep or while
///                       settling,
///   Undetermined        no ball entered within t_settle, or a limit ball
///                       could not be verified at any usable radius.
TippingVerdict classify_rate(const TippingProblem& problem, double rate,
                             const PullbackConfig& cfg = {});

/// The tracking resolution classify_rate would use: the caller's eps_track if
/// positive, otherwise max(1e-3 * tracked diameter, 1e-4) clamped to a quarter
/// of the minimum separation between distinct stable limits at lambda_plus.
double resolve_eps_track(const TippingProblem& problem, const PullbackConfig& cfg);

struct RateSweepEntry {
    double rate = 0.0;
    TippingVerdict verdict;
};

/// classify_rate at each rate; `jobs` > 1 runs entries on a thread pool with
/// deterministic (index-ordered) results.
std::vector<RateSweepEntry> sweep_rates(const TippingProblem& problem,
                                        const std::vector<double>& rates,
                                        const PullbackConfig& cfg = {}, int jobs = 1);

struct CriticalRateResult {
    double lo = 0.0, hi = 0.0;  // final bracket, verdicts verified at both ends
    TippingVerdict verdict_lo, verdict_hi;
    int evaluations = 0;
};

/// Bisects [r_lo, r_hi] down to relative width `rel_width` for the boundary
/// between tracking and not tracking (Undetermined counts as not tracking and
/// is reported in the endpoint verdict). Throws SameVerdict if both initial
/// endpoints land on the same side.
CriticalRateResult critical_rate(const TippingProblem& problem, double r_lo,
                                 double r_hi, const PullbackConfig& cfg = {},
                                 double rel_width = 1e-3);

struct LabeledPoint {
    std::string id;
    Vec x;
};

struct BasinResult {
    SettleResult::Kind kind = SettleResult::Kind::Timeout;
    int index = -1;    // into the attractor list; -1 when not entered
    std::string id;
    double t_settle = std::numeric_limits<double>::quiet_NaN();
    Vec final_state;
};

/// Frozen-parameter basin membership: runs x0 under f(., lambda) until it
/// enters a verified ball around one of the listed attracting equilibria.
/// Each listed point is validated as an equilibrium (residual <= 1e-8 scale).
/// eps = 0 picks a radius from the separation of the listed points.
BasinResult basin_membership(const VectorFieldFamily& field, double lambda,
                             const Vec& x0, const std::vector<LabeledPoint>& attractors,
                             double horizon = 500.0, double eps = 0.0,
                             std::uint64_t seed = 0);

struct ForcedTippingAttempt {
    SigmaSpec sigma;
    TippingVerdict verdict;
};

struct ForcedTippingResult {
    bool hypothesis_met = false;
    bool found = false;
    SigmaSpec sigma;         // witness when found
    double rate = 0.0;       // the (slow) base rate used
    TippingVerdict verdict;  // witness verdict when found
    std::string hypothesis_note;
    std::vector<ForcedTippingAttempt> attempts;
};

/// Tries to force non-tracking with a fast reparametrized passage over the
/// window [u, v]: first checks the kick hypothesis (the tracked branch's state
/// at the window entrance, frozen at Lambda(v), settles away from the tracked
/// branch), then searches slope/ramp candidates
/// M in {1e1..1e5} x eta in {0.1, 0.01, 0.001} at a slow base rate.
/// Throws HypothesisNotMet when the kick hypothesis fails.
ForcedTippingResult force_tipping(const ModelSpec& model,
                                  const ParameterShift& base_shift,
                                  const std::string& path_id, double u, double v,
                                  const PullbackConfig& cfg = {},
                                  const ContinuationOptions& copts = {});

struct FbsViolation {
    double lambda_from = 0.0;
    double lambda_to = 0.0;
    std::string settled_id;  // empty when escaped / timed out
    std::string kind;        // "wrong-equilibrium" | "escaped" | "timeout"
};

struct FbsReport {
    std::vector<double> grid;
    int pairs = 0;
    std::vector<FbsViolation> violations;

    bool forward_basin_stable() const { return violations.empty(); }
};

/// Forward basin stability scan for one stable branch: for every grid pair
/// lambda_a < lambda_b in [lambda_minus, lambda_plus], the equilibrium at
/// lambda_a must lie in the frozen basin of the same branch's equilibrium at
/// lambda_b.
FbsReport fbs_check(const ModelSpec& model, const ParameterShift& shift,
                    const std::string& path_id = "", int grid_points = 15,
                    const PullbackConfig& cfg = {});

}  // namespace rtip
