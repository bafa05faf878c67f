#pragma once

#include <functional>
#include <optional>
#include <string>

namespace rtip {

/// Monotone time reparametrization s -> sigma(s) that traverses a window
/// [window_lo, window_hi] of the image at slope up to `fast_slope`, with
/// smooth ramps, and is the identity slope outside. The slope profile as a
/// function of the *image* value sigma is:
///
///   sigma(s) = s                      while sigma < window_lo
///   slope ramps 1 -> fast_slope       while sigma in [window_lo, window_lo + ramp_width]
///   slope == fast_slope               while sigma in (window_lo + ramp_width,
///                                                     window_hi - ramp_width)
///   slope ramps fast_slope -> 1       while sigma in [window_hi - ramp_width, window_hi]
///   slope == 1                        while sigma > window_hi
///
/// Ramps are quintic smoothsteps, so the map is C^4 at every transition knot.
/// Anchoring the ramps in image space fixes their s-extent to
/// 2 * ramp_width / (fast_slope + 1), which is what the closed forms below use.
class Reparametrization {
public:
    Reparametrization() = default;
    Reparametrization(double window_lo, double window_hi, double fast_slope,
                      double ramp_width);

    double operator()(double s) const;
    double slope(double s) const;

    double window_lo() const { return u_; }
    double window_hi() const { return v_; }
    double fast_slope() const { return big_m_; }
    double ramp_width() const { return eta_; }

    // Knot s-values separating the slope pieces.
    double ramp_in_begin() const { return s1_; }
    double ramp_in_end() const { return s2_; }
    double ramp_out_begin() const { return s3_; }
    double ramp_out_end() const { return s4_; }

    /// sigma(s) - s for s >= ramp_out_end(); how much time the window saves.
    double shift_amount() const { return v_ - s4_; }

private:
    double u_ = 0.0, v_ = 1.0, big_m_ = 1.0, eta_ = 0.1;
    double s1_ = 0.0, s2_ = 0.0, s3_ = 0.0, s4_ = 0.0;
    double ramp_len_ = 0.0;  // s-extent of each ramp
};

/// Validates window_lo < window_hi, fast_slope >= 1,
/// 0 < ramp_width < (window_hi - window_lo) / 2.
Reparametrization build_reparametrization(double window_lo, double window_hi,
                                          double fast_slope, double ramp_width);

/// Plain-data description of a shift, round-trippable through config files.
struct SigmaSpec {
    double u = 0.0, v = 0.0, m = 1.0, eta = 0.1;
};

struct ShiftSpec {
    std::string type = "custom";
    double lambda_minus = 0.0, lambda_plus = 0.0;
    double center = 0.0, width = 1.0;
    std::optional<SigmaSpec> sigma;
};

/// Monotone parameter shift lambda = Lambda(s) with finite limits
/// lambda_minus (s -> -inf) and lambda_plus (s -> +inf). Value type; all
/// evaluators are pure.
class ParameterShift {
public:
    ParameterShift() = default;
    ParameterShift(ShiftSpec spec, std::function<double(double)> eval,
                   std::function<double(double)> slope);

    double operator()(double s) const { return eval_(s); }
    double slope(double s) const { return slope_(s); }

    double lambda_minus() const { return spec_.lambda_minus; }
    double lambda_plus() const { return spec_.lambda_plus; }
    const ShiftSpec& spec() const { return spec_; }
    std::string description() const;

    /// Smallest S (up to 1e-9 relative refinement) with
    /// |Lambda(S) - lambda_plus| < eps and |Lambda(-S) - lambda_minus| < eps.
    /// Requires a monotone shift; expanding search plus bisection.
    double saturation_point(double eps) const;

private:
    ShiftSpec spec_;
    std::function<double(double)> eval_;
    std::function<double(double)> slope_;
};

/// Lambda(s) = lo + (hi - lo) * (1 + tanh((s - center) / width)) / 2.
/// Throws InvalidInterval unless lo < hi and width > 0.
ParameterShift tanh_shift(double lambda_minus, double lambda_plus, double center,
                          double width);

/// The shift s -> Lambda(sigma(s)). Same limits as `shift`; slope by the
/// chain rule.
ParameterShift compose(const ParameterShift& shift, const Reparametrization& sigma);

}  // namespace rtip
