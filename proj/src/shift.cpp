#include "rtip/shift.hpp"

#include <cmath>

#include "rtip/errors.hpp"

namespace rtip {

namespace {

// quintic smoothstep and its antiderivative on [0, 1]
double smooth5(double z) { return z * z * z * (10.0 + z * (-15.0 + 6.0 * z)); }
double smooth5_int(double z) {
    // integral of smooth5 from 0 to z: z^6 - 3 z^5 + 2.5 z^4
    return z * z * z * z * (2.5 + z * (-3.0 + z));
}

}  // namespace

Reparametrization::Reparametrization(double window_lo, double window_hi,
                                     double fast_slope, double ramp_width)
    : u_(window_lo), v_(window_hi), big_m_(fast_slope), eta_(ramp_width) {
    // Each ramp covers exactly `eta_` of image, so its s-extent solves
    // len * (1 + fast_slope) / 2 = eta_.
    ramp_len_ = 2.0 * eta_ / (big_m_ + 1.0);
    s1_ = u_;
    s2_ = s1_ + ramp_len_;
    s3_ = s2_ + (v_ - u_ - 2.0 * eta_) / big_m_;
    s4_ = s3_ + ramp_len_;
}

double Reparametrization::operator()(double s) const {
    if (s <= s1_) return s;
    if (s >= s4_) return v_ + (s - s4_);
    if (s <= s2_) {
        const double z = (s - s1_) / ramp_len_;
        return u_ + ramp_len_ * (z + (big_m_ - 1.0) * smooth5_int(z));
    }
    if (s <= s3_) return u_ + eta_ + big_m_ * (s - s2_);
    const double z = (s - s3_) / ramp_len_;
    return v_ - eta_ + ramp_len_ * (big_m_ * z - (big_m_ - 1.0) * smooth5_int(z));
}

double Reparametrization::slope(double s) const {
    if (s <= s1_ || s >= s4_) return 1.0;
    if (s <= s2_) return 1.0 + (big_m_ - 1.0) * smooth5((s - s1_) / ramp_len_);
    if (s <= s3_) return big_m_;
    return big_m_ - (big_m_ - 1.0) * smooth5((s - s3_) / ramp_len_);
}

Reparametrization build_reparametrization(double window_lo, double window_hi,
                                          double fast_slope, double ramp_width) {
    if (!(window_lo < window_hi))
        throw InvalidInterval("build_reparametrization: window_lo must be < window_hi");
    if (!(fast_slope >= 1.0) || !std::isfinite(fast_slope))
        throw InvalidInterval("build_reparametrization: fast_slope must be >= 1");
    if (!(ramp_width > 0.0))
        throw InvalidInterval("build_reparametrization: ramp_width must be > 0");
    if (!(ramp_width < 0.5 * (window_hi - window_lo)))
        throw DegenerateWindow(
            "build_reparametrization: ramp_width must be < (window_hi - window_lo)/2");
    return Reparametrization(window_lo, window_hi, fast_slope, ramp_width);
}

ParameterShift::ParameterShift(ShiftSpec spec, std::function<double(double)> eval,
                               std::function<double(double)> slope)
    : spec_(std::move(spec)), eval_(std::move(eval)), slope_(std::move(slope)) {}

std::string ParameterShift::description() const {
    std::string d = spec_.type + "(" + std::to_string(spec_.lambda_minus) + " -> " +
                    std::to_string(spec_.lambda_plus) + ")";
    if (spec_.sigma) d += "+window";
    return d;
}

namespace {

/// Find s where the decreasing positive function crosses eps; returns the
/// upper end of the final bracket (value strictly below eps there).
double expand_bisect(const std::function<double(double)>& f, double eps) {
    double lo, hi;
    if (f(1.0) >= eps) {
        lo = 1.0;
        hi = 2.0;
        while (f(hi) >= eps) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e18)
                throw NoConvergence("saturation_point: shift does not approach its limit");
        }
    } else {
        hi = 1.0;
        lo = 0.0;
        while (f(lo) < eps) {
            hi = lo;
            lo = (lo == 0.0) ? -1.0 : 2.0 * lo;
            if (lo < -1e18)
                throw NoConvergence("saturation_point: no crossing found");
        }
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-9 * std::max(1.0, std::fabs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) >= eps)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

}  // namespace

double ParameterShift::saturation_point(double eps) const {
    if (!(eps > 0.0)) throw std::invalid_argument("saturation_point: eps must be > 0");
    const double hi_cross =
        expand_bisect([&](double s) { return spec_.lambda_plus - eval_(s); }, eps);
    const double lo_cross =
        expand_bisect([&](double t) { return eval_(-t) - spec_.lambda_minus; }, eps);
    return std::max({hi_cross, lo_cross, 1e-12});
}

ParameterShift tanh_shift(double lambda_minus, double lambda_plus, double center,
                          double width) {
    if (!(lambda_minus < lambda_plus))
        throw InvalidInterval("tanh_shift: lambda_minus must be < lambda_plus");
    if (!(width > 0.0)) throw InvalidInterval("tanh_shift: width must be > 0");
    ShiftSpec spec;
    spec.type = "tanh";
    spec.lambda_minus = lambda_minus;
    spec.lambda_plus = lambda_plus;
    spec.center = center;
    spec.width = width;
    const double span = lambda_plus - lambda_minus;
    auto eval = [=](double s) {
        return lambda_minus + span * 0.5 * (1.0 + std::tanh((s - center) / width));
    };
    auto slope = [=](double s) {
        const double c = std::cosh((s - center) / width);
        return span * 0.5 / (width * c * c);
    };
    return ParameterShift(std::move(spec), std::move(eval), std::move(slope));
}

ParameterShift compose(const ParameterShift& shift, const Reparametrization& sigma) {
    ShiftSpec spec = shift.spec();
    spec.sigma = SigmaSpec{sigma.window_lo(), sigma.window_hi(), sigma.fast_slope(),
                           sigma.ramp_width()};
    auto eval = [shift, sigma](double s) { return shift(sigma(s)); };
    auto slope = [shift, sigma](double s) { return shift.slope(sigma(s)) * sigma.slope(s); };
    return ParameterShift(std::move(spec), std::move(eval), std::move(slope));
}

}  // namespace rtip
