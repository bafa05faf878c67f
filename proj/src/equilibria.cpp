#include "rtip/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include "rtip/errors.hpp"

namespace rtip {

EquilibriumResult newton_equilibrium(const VectorFieldFamily& field, double lambda,
                                     const Vec& seed, NewtonOptions opts) {
    Vec x = seed;
    Vec fx = field.eval(x, lambda);
    if (!all_finite(fx)) throw NonFiniteState("newton_equilibrium: rhs non-finite at seed");
    double nf = norm(fx);
    int it = 0;
    while (nf > opts.tol) {
        if (++it > opts.max_iter)
            throw NoConvergence("newton_equilibrium: no convergence in " +
                                std::to_string(opts.max_iter) + " iterations (residual " +
                                std::to_string(nf) + ")");
        const Mat J = jacobian(field, x, lambda);
        Vec d = solve(J, -fx);
        double step = 1.0;
        bool ok = false;
        for (int ls = 0; ls < 30; ++ls) {
            Vec xt = x + step * d;
            Vec ft = field.eval(xt, lambda);
            const double nt = all_finite(ft) ? norm(ft)
                                             : std::numeric_limits<double>::infinity();
            if (nt <= (1.0 - 1e-4 * step) * nf || nt <= opts.tol) {
                x = std::move(xt);
                fx = std::move(ft);
                nf = nt;
                ok = true;
                break;
            }
            step *= 0.5;
        }
        if (!ok)
            throw NoConvergence("newton_equilibrium: line search stalled (residual " +
                                std::to_string(nf) + ")");
    }
    EquilibriumResult res;
    res.x = x;
    res.residual = nf;
    res.iterations = it;
    res.spectrum = eigen_spectrum(jacobian(field, x, lambda));
    res.label = classify_stability(res.spectrum);
    return res;
}

bool EquilibriumPath::is_stable() const {
    if (label_minus != StabilityLabel::Attracting ||
        label_plus != StabilityLabel::Attracting)
        return false;
    for (const auto& p : samples)
        if (p.label != StabilityLabel::Attracting) return false;
    return true;
}

const PathSample& EquilibriumPath::nearest(double s) const {
    auto it = std::lower_bound(samples.begin(), samples.end(), s,
                               [](const PathSample& p, double v) { return p.s < v; });
    if (it == samples.end()) return samples.back();
    if (it == samples.begin()) return samples.front();
    auto prev = std::prev(it);
    return (s - prev->s <= it->s - s) ? *prev : *it;
}

double EquilibriumPath::diameter() const {
    if (samples.empty()) return 0.0;
    const int n = samples.front().x.size();
    Vec lo = samples.front().x, hi = samples.front().x;
    auto absorb = [&](const Vec& x) {
        for (int i = 0; i < n; ++i) {
            lo[i] = std::min(lo[i], x[i]);
            hi[i] = std::max(hi[i], x[i]);
        }
    };
    for (const auto& p : samples) absorb(p.x);
    if (x_minus.size() == n) absorb(x_minus);
    if (x_plus.size() == n) absorb(x_plus);
    return dist(lo, hi);
}

namespace {

PathSample make_sample(const VectorFieldFamily& field, const ParameterShift& shift,
                       double s, const Vec& seed, const NewtonOptions& nopts) {
    const double lam = shift(s);
    const EquilibriumResult eq = newton_equilibrium(field, lam, seed, nopts);
    PathSample p;
    p.s = s;
    p.lambda = lam;
    p.x = eq.x;
    p.label = eq.label;
    return p;
}

}  // namespace

EquilibriumPath continue_path(const VectorFieldFamily& field, const ParameterShift& shift,
                              const Vec& seed, const std::string& id,
                              ContinuationOptions opts) {
    if (opts.grid_points < 2)
        throw std::invalid_argument("continue_path: need at least 2 grid points");
    const double S = shift.saturation_point(opts.eps_lambda);

    EquilibriumPath path;
    path.id = id;

    const int m = opts.grid_points;
    path.samples.reserve(m);
    double prev_step = -1.0;
    for (int i = 0; i < m; ++i) {
        const double s = -S + 2.0 * S * i / (m - 1);
        const Vec& sd = (i == 0) ? seed : path.samples.back().x;
        PathSample p = make_sample(field, shift, s, sd, opts.newton);
        if (i >= 1) {
            const double disp = dist(p.x, path.samples.back().x);
            if (i >= 2) {
                const double trust =
                    opts.trust_factor *
                    std::max(prev_step, 1e-7 * (1.0 + norm(path.samples.back().x)));
                if (disp > trust)
                    throw BranchLost("continue_path[" + id + "]: corrector moved " +
                                     std::to_string(disp) + " at s = " + std::to_string(s) +
                                     ", trust radius " + std::to_string(trust));
            }
            prev_step = disp;
        }
        path.samples.push_back(std::move(p));
    }

    // Adaptive refinement: split intervals that cover too much arc at once.
    for (int round = 0; round < opts.max_refine_rounds; ++round) {
        double length = 0.0;
        for (size_t i = 1; i < path.samples.size(); ++i)
            length += dist(path.samples[i].x, path.samples[i - 1].x);
        if (length == 0.0) break;
        std::vector<PathSample> extra;
        for (size_t i = 1; i < path.samples.size(); ++i) {
            const auto& a = path.samples[i - 1];
            const auto& b = path.samples[i];
            const double gap = dist(a.x, b.x);
            if (gap <= opts.refine_fraction * length) continue;
            const double smid = 0.5 * (a.s + b.s);
            Vec guess = 0.5 * (a.x + b.x);
            PathSample p = make_sample(field, shift, smid, guess, opts.newton);
            if (dist(p.x, guess) > opts.trust_factor * std::max(gap, 1e-12))
                throw BranchLost("continue_path[" + id +
                                 "]: refinement corrector left the branch at s = " +
                                 std::to_string(smid));
            extra.push_back(std::move(p));
        }
        if (extra.empty()) break;
        path.samples.insert(path.samples.end(), extra.begin(), extra.end());
        std::sort(path.samples.begin(), path.samples.end(),
                  [](const PathSample& a, const PathSample& b) { return a.s < b.s; });
    }

    // Frozen limits at the exact asymptotic parameter values.
    {
        const EquilibriumResult lo = newton_equilibrium(
            field, shift.lambda_minus(), path.samples.front().x, opts.newton);
        const EquilibriumResult hi = newton_equilibrium(
            field, shift.lambda_plus(), path.samples.back().x, opts.newton);
        path.x_minus = lo.x;
        path.x_plus = hi.x;
        path.label_minus = lo.label;
        path.label_plus = hi.label;
    }
    return path;
}

Vec path_point(const VectorFieldFamily& field, const ParameterShift& shift,
               const EquilibriumPath& path, double s) {
    const PathSample& near = path.nearest(s);
    return newton_equilibrium(field, shift(s), near.x).x;
}

}  // namespace rtip
