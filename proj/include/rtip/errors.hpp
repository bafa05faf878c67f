#pragma once

#include <stdexcept>
#include <string>

namespace rtip {

/// Base class for all library errors so callers can catch rtip failures
/// separately from generic std exceptions.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- integration ---

/// Adaptive step fell below the representable minimum before reaching t_end.
struct StepSizeUnderflow : Error {
    using Error::Error;
};

/// State or right-hand side became NaN/Inf inside the escape radius.
struct NonFiniteState : Error {
    using Error::Error;
};

// --- root finding / continuation ---

struct NoConvergence : Error {
    using Error::Error;
};

struct SingularJacobian : Error {
    using Error::Error;
};

/// Continuation corrector jumped further than the trust radius allows,
/// i.e. the solver landed on a different solution branch.
struct BranchLost : Error {
    using Error::Error;
};

/// Eigen iteration failed to deflate within the iteration budget.
struct ConvergenceFailure : Error {
    using Error::Error;
};

// --- parameter shifts ---

/// lambda_minus >= lambda_plus, or width/rate parameters out of range.
struct InvalidInterval : Error {
    using Error::Error;
};

/// Reparametrization window too narrow for the requested ramp width.
struct DegenerateWindow : Error {
    using Error::Error;
};

// --- tipping experiments ---

/// Both ends of a critical-rate bracket produced the same verdict class.
struct SameVerdict : Error {
    using Error::Error;
};

/// A forcing request whose frozen-basin hypothesis does not hold.
struct HypothesisNotMet : Error {
    using Error::Error;
};

// --- monotone-system certificates ---

/// Corner sign condition for an inflow box fails (some |f_i| below margin or
/// wrong sign).
struct SignConditionFailed : Error {
    using Error::Error;
};

/// Saddle lacks a real positive eigenvalue with a strictly one-signed
/// eigenvector.
struct NoPositiveEigenpair : Error {
    using Error::Error;
};

/// Offset distance shrank below representable size without satisfying the
/// strict sign conditions.
struct DeltaUnderflow : Error {
    using Error::Error;
};

/// An order-hypothesis required by a criterion fails; message carries the
/// witnessing sample pair.
struct HypothesisFailed : Error {
    using Error::Error;
};

/// Pairwise inequality needed for a box construction fails.
struct InequalityFails : Error {
    using Error::Error;
};

/// Box family and path are sampled on different grids.
struct GridMismatch : Error {
    using Error::Error;
};

/// Parameter maps leave the regime where the model's equilibrium structure
/// is the documented one.
struct ParameterRegimeViolation : Error {
    using Error::Error;
};

/// A certificate construction step (offset corner, monotone corner curve)
/// could not be completed even though the hypotheses hold.
struct ConstructionFailed : Error {
    using Error::Error;
};

// --- CLI / config ---

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace rtip
