#include "rtip/integrate.hpp"

#include <algorithm>
#include <cmath>

#include "rtip/errors.hpp"

namespace rtip {

namespace {

// Dormand-Prince 5(4) tableau, FSAL form.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// embedded 4th-order error weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// PI controller constants (classic dopri5 values)
constexpr double kSafe = 0.9, kBeta = 0.04, kExpo = 0.2 - kBeta * 0.75;
constexpr double kFacMin = 0.2, kFacMax = 10.0;

struct DenseSegment {
    double t0 = 0.0, h = 0.0;
    Vec r1, r2, r3, r4, r5;

    Vec eval(double t) const {
        const double th = (t - t0) / h;
        const double th1 = 1.0 - th;
        Vec y(r1.size());
        for (int i = 0; i < y.size(); ++i)
            y[i] = r1[i] +
                   th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
        return y;
    }
};

struct StepDecision {
    bool stop = false;
    double t_stop = 0.0;
    Vec y_stop;
};

using Rhs = std::function<Vec(double, const Vec&)>;
using StepFn = std::function<StepDecision(double, const Vec&, double, const Vec&,
                                          const DenseSegment&)>;

double error_norm(const Vec& err, const Vec& y0, const Vec& y1,
                  const IntegratorTolerances& tol) {
    double s = 0.0;
    for (int i = 0; i < err.size(); ++i) {
        const double sc = tol.abs + tol.rel * std::max(std::fabs(y0[i]), std::fabs(y1[i]));
        const double q = err[i] / sc;
        s += q * q;
    }
    return std::sqrt(s / err.size());
}

double initial_step(const Rhs& rhs, double t0, const Vec& y0, const Vec& f0,
                    double span, const IntegratorTolerances& tol) {
    const int n = y0.size();
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double sc = tol.abs + tol.rel * std::fabs(y0[i]);
        d0 += (y0[i] / sc) * (y0[i] / sc);
        d1 += (f0[i] / sc) * (f0[i] / sc);
    }
    d0 = std::sqrt(d0 / n);
    d1 = std::sqrt(d1 / n);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    Vec y1(n);
    for (int i = 0; i < n; ++i) y1[i] = y0[i] + h0 * f0[i];
    const Vec f1 = rhs(t0 + h0, y1);
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double sc = tol.abs + tol.rel * std::fabs(y0[i]);
        const double q = (f1[i] - f0[i]) / sc;
        d2 += q * q;
    }
    d2 = std::sqrt(d2 / n) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                    : std::pow(0.01 / dm, 0.2);
    return std::min({100.0 * h0, h1, span});
}

/// Core adaptive loop. Calls on_step after every accepted step with the dense
/// interpolant of that step; on_step may stop the run at an interior point.
void run_dopri5(const Rhs& rhs, double t0, const Vec& y0, double t1,
                const IntegratorOptions& opts, const StepFn& on_step, double* t_out,
                Vec* y_out) {
    const int n = y0.size();
    const IntegratorTolerances& tol = opts.tol;
    if (!(tol.rel > 0.0) || !(tol.abs > 0.0))
        throw std::invalid_argument("integrate: tolerances must be positive");

    double t = t0;
    Vec y = y0;
    Vec k1 = rhs(t, y);
    if (!all_finite(k1) || !all_finite(y))
        throw NonFiniteState("integrate: non-finite state or rhs at start");

    const bool fixed = opts.fixed_step > 0.0;
    double h = fixed ? opts.fixed_step
                     : initial_step(rhs, t, y, k1, t1 - t0, tol);
    h = std::min(h, opts.max_step);
    double facold = 1e-4;
    bool last_rejected = false;
    long long steps = 0;

    Vec ytmp(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ynew(n), err(n);
    DenseSegment seg;

    while (t < t1) {
        const double hmin = 16.0 * std::numeric_limits<double>::epsilon() *
                            std::max(1.0, std::fabs(t));
        if (t + h > t1) h = t1 - t;
        if (h < hmin && !fixed)
            throw StepSizeUnderflow("integrate: step size underflow at t = " +
                                    std::to_string(t));
        if (++steps > opts.max_steps)
            throw Error("integrate: exceeded max_steps budget");

        for (int i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        k2 = rhs(t + c2 * h, ytmp);
        for (int i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        k3 = rhs(t + c3 * h, ytmp);
        for (int i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = rhs(t + c4 * h, ytmp);
        for (int i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = rhs(t + c5 * h, ytmp);
        for (int i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        k6 = rhs(t + h, ytmp);
        for (int i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                                  a76 * k6[i]);
        k7 = rhs(t + h, ynew);
        for (int i = 0; i < n; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * k7[i]);

        double errn = error_norm(err, y, ynew, tol);
        if (!std::isfinite(errn)) errn = 1e10;

        if (errn > 1.0 && !fixed) {
            // reject, shrink
            const double fac11 = std::pow(errn, kExpo);
            h /= std::min(1.0 / kFacMin, fac11 / kSafe);
            last_rejected = true;
            continue;
        }

        // accept
        seg.t0 = t;
        seg.h = h;
        seg.r1 = y;
        seg.r2.d.resize(n);
        seg.r3.d.resize(n);
        seg.r4.d.resize(n);
        seg.r5.d.resize(n);
        for (int i = 0; i < n; ++i) {
            const double ydiff = ynew[i] - y[i];
            const double bspl = h * k1[i] - ydiff;
            seg.r2[i] = ydiff;
            seg.r3[i] = bspl;
            seg.r4[i] = ydiff - h * k7[i] - bspl;
            seg.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                             d6 * k6[i] + d7 * k7[i]);
        }

        const double t_new = t + h;
        StepDecision dec = on_step(t, y, t_new, ynew, seg);
        if (dec.stop) {
            *t_out = dec.t_stop;
            *y_out = dec.y_stop;
            return;
        }

        t = t_new;
        y = ynew;
        k1 = k7;  // FSAL
        if (!all_finite(k1))
            throw NonFiniteState("integrate: non-finite rhs at t = " + std::to_string(t));

        if (!fixed) {
            const double fac11 = std::pow(errn, kExpo);
            double fac = fac11 / std::pow(facold, kBeta);
            fac = std::max(1.0 / kFacMax, std::min(1.0 / kFacMin, fac / kSafe));
            double hnew = h / fac;
            if (last_rejected) hnew = std::min(hnew, h);
            h = std::min(hnew, opts.max_step);
            facold = std::max(errn, 1e-4);
            last_rejected = false;
        }
    }
    *t_out = t;
    *y_out = y;
}

/// Earliest time in (t_lo, t_hi] where `outside` becomes true, bisected to
/// 1e-10 absolute (scaled by |t|).
double bisect_event(const DenseSegment& seg, double t_lo, double t_hi,
                    const std::function<bool(const Vec&)>& outside) {
    double a = t_lo, b = t_hi;
    const double tol_t = 1e-10 * std::max(1.0, std::fabs(t_hi));
    while (b - a > tol_t) {
        const double mid = 0.5 * (a + b);
        if (outside(seg.eval(mid)))
            b = mid;
        else
            a = mid;
    }
    return b;
}

}  // namespace

double QuadraticTarget::value(const Vec& y) const {
    const int n = center.size();
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            s += (y[i] - center[i]) * metric(i, j) * (y[j] - center[j]);
    return s;
}

Trajectory integrate_opts(const VectorFieldFamily& field, const ParameterShift& shift,
                          double rate, const Vec& x0, double s0,
                          std::pair<double, double> t_span,
                          const IntegratorOptions& opts) {
    const int n = field.dim;
    if (x0.size() != n)
        throw std::invalid_argument("integrate: x0 dimension mismatch");
    if (!(t_span.second >= t_span.first))
        throw std::invalid_argument("integrate: t_span must satisfy t0 <= t1");

    Trajectory traj;
    traj.rate = rate;
    traj.model = field.name;
    traj.shift_desc = shift.description();

    auto record = [&](double t, const Vec& y) {
        TrajectorySample smp;
        smp.t = t;
        smp.s = y[n];
        smp.x.d.assign(y.d.begin(), y.d.begin() + n);
        traj.samples.push_back(std::move(smp));
    };

    Vec y0(n + 1);
    for (int i = 0; i < n; ++i) y0[i] = x0[i];
    y0[n] = s0;

    auto xnorm = [n](const Vec& y) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += y[i] * y[i];
        return std::sqrt(s);
    };

    record(t_span.first, y0);
    if (xnorm(y0) > field.escape_radius) {
        traj.escaped = true;
        traj.escape_time = t_span.first;
        return traj;
    }
    if (t_span.second == t_span.first) return traj;

    auto rhs = [&](double, const Vec& y) {
        Vec x(n);
        for (int i = 0; i < n; ++i) x[i] = y[i];
        Vec f = field.eval(x, shift(y[n]));
        f.d.push_back(rate);
        return f;
    };

    auto outside = [&](const Vec& y) { return xnorm(y) > field.escape_radius; };

    auto on_step = [&](double t_prev, const Vec&, double t_new, const Vec& y_new,
                       const DenseSegment& seg) {
        StepDecision dec;
        if (outside(y_new)) {
            const double t_esc = bisect_event(seg, t_prev, t_new, outside);
            const Vec y_esc = seg.eval(t_esc);
            record(t_esc, y_esc);
            traj.escaped = true;
            traj.escape_time = t_esc;
            dec.stop = true;
            dec.t_stop = t_esc;
            dec.y_stop = y_esc;
            return dec;
        }
        record(t_new, y_new);
        return dec;
    };

    double t_end;
    Vec y_end;
    run_dopri5(rhs, t_span.first, y0, t_span.second, opts, on_step, &t_end, &y_end);
    return traj;
}

Trajectory integrate(const VectorFieldFamily& field, const ParameterShift& shift,
                     double rate, const Vec& x0, double s0,
                     std::pair<double, double> t_span, IntegratorTolerances tol) {
    IntegratorOptions opts;
    opts.tol = tol;
    return integrate_opts(field, shift, rate, x0, s0, t_span, opts);
}

SettleResult settle_frozen(const VectorFieldFamily& field, double lambda, const Vec& x0,
                           double horizon, const std::vector<QuadraticTarget>& targets,
                           IntegratorTolerances tol) {
    const int n = field.dim;
    if (x0.size() != n)
        throw std::invalid_argument("settle_frozen: x0 dimension mismatch");

    SettleResult res;
    res.state = x0;

    auto inside_index = [&](const Vec& y) {
        for (size_t k = 0; k < targets.size(); ++k)
            if (targets[k].inside(y)) return static_cast<int>(k);
        return -1;
    };

    // already converged / already escaped before any flow
    if (int k = inside_index(x0); k >= 0) {
        res.kind = SettleResult::Kind::EnteredTarget;
        res.target_index = k;
        res.t_event = 0.0;
        return res;
    }
    if (norm(x0) > field.escape_radius) {
        res.kind = SettleResult::Kind::Escaped;
        res.t_event = 0.0;
        return res;
    }
    if (horizon <= 0.0) return res;

    auto rhs = [&](double, const Vec& y) { return field.eval(y, lambda); };
    auto escaped = [&](const Vec& y) { return norm(y) > field.escape_radius; };
    auto entered = [&](const Vec& y) { return inside_index(y) >= 0; };

    IntegratorOptions opts;
    opts.tol = tol;

    auto on_step = [&](double t_prev, const Vec&, double t_new, const Vec& y_new,
                       const DenseSegment& seg) {
        StepDecision dec;
        const bool esc = escaped(y_new);
        const bool ent = entered(y_new);
        if (!esc && !ent) return dec;
        double t_esc = std::numeric_limits<double>::infinity();
        double t_ent = std::numeric_limits<double>::infinity();
        if (esc) t_esc = bisect_event(seg, t_prev, t_new, escaped);
        if (ent) t_ent = bisect_event(seg, t_prev, t_new, entered);
        dec.stop = true;
        if (t_ent <= t_esc) {
            dec.t_stop = t_ent;
            dec.y_stop = seg.eval(t_ent);
            res.kind = SettleResult::Kind::EnteredTarget;
            res.target_index = inside_index(dec.y_stop);
            if (res.target_index < 0) {
                // numerically on the boundary; evaluate a hair later
                const double t2 = std::min(t_new, t_ent + 1e-9 * std::max(1.0, t_ent));
                dec.y_stop = seg.eval(t2);
                dec.t_stop = t2;
                res.target_index = inside_index(dec.y_stop);
            }
            if (res.target_index < 0) {
                // still on the fence: take the target whose level set we touched
                double best = std::numeric_limits<double>::infinity();
                for (size_t k = 0; k < targets.size(); ++k) {
                    const double q = targets[k].value(dec.y_stop) / targets[k].level;
                    if (q < best) {
                        best = q;
                        res.target_index = static_cast<int>(k);
                    }
                }
            }
            res.t_event = dec.t_stop;
        } else {
            dec.t_stop = t_esc;
            dec.y_stop = seg.eval(t_esc);
            res.kind = SettleResult::Kind::Escaped;
            res.t_event = t_esc;
        }
        res.state = dec.y_stop;
        return dec;
    };

    double t_end;
    Vec y_end;
    run_dopri5(rhs, 0.0, x0, horizon, opts, on_step, &t_end, &y_end);
    if (res.kind == SettleResult::Kind::Timeout) res.state = y_end;
    return res;
}

}  // namespace rtip
