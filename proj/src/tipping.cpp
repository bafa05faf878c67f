#include "rtip/tipping.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "rtip/errors.hpp"

namespace rtip {

namespace {

// Smallest eigenvalue of a symmetric matrix (spectrum is real).
double min_eigenvalue_sym(const Mat& P) {
    return eigen_spectrum(P).min_real_part();
}

// Shrink the radius until the invariance certificate holds. Returns false if
// no radius down to eps / 2^24 verifies.
bool build_verified_ball(const VectorFieldFamily& field, double lambda,
                         const Vec& center, double eps, const std::string& id,
                         Rng& rng, QuadraticTarget& out) {
    double r = eps;
    for (int k = 0; k < 25; ++k, r *= 0.5) {
        TrackingBall ball = make_tracking_ball(field, lambda, center, r, id, rng);
        if (ball.verified) {
            out = ball.target;
            return true;
        }
    }
    return false;
}

double min_pairwise_separation(const std::vector<Vec>& pts) {
    double sep = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            sep = std::min(sep, dist(pts[i], pts[j]));
    return sep;
}

}  // namespace

std::string to_string(TippingOutcome o) {
    switch (o) {
        case TippingOutcome::Tracks: return "Tracks";
        case TippingOutcome::TipsToEquilibrium: return "TipsToEquilibrium";
        case TippingOutcome::Escapes: return "Escapes";
        case TippingOutcome::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

TrackingBall make_tracking_ball(const VectorFieldFamily& field, double lambda,
                                const Vec& center, double radius,
                                const std::string& id, Rng& rng) {
    const int n = field.dim;
    Mat J = jacobian(field, center, lambda);
    Mat P;
    Mat L;
    try {
        P = lyapunov_solve(J, Mat::identity(n));
        // Symmetrize against roundoff before factoring.
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) {
                double m = 0.5 * (P(i, j) + P(j, i));
                P(i, j) = P(j, i) = m;
            }
        L = cholesky(P);
    } catch (const SingularJacobian&) {
        throw ConstructionFailed(
            "tracking ball at '" + id +
            "': Lyapunov metric is not positive definite (equilibrium not attracting?)");
    }

    TrackingBall ball;
    ball.target.id = id;
    ball.target.center = center;
    ball.target.metric = P;
    ball.target.radius = radius;
    ball.target.level = radius * radius * min_eigenvalue_sym(P);

    // Boundary points y = c + sqrt(level) * L^{-T} u, ||u|| = 1, lie exactly on
    // the level set. Invariance needs d/dt (y-c)^T P (y-c) = 2 (y-c)^T P f < 0.
    const double root = std::sqrt(ball.target.level);
    const int samples = 100 * n;
    bool ok = true;
    for (int k = 0; k < samples && ok; ++k) {
        Vec u = rng.unit_vector(n);
        Vec w = solve_upper_from_lower(L, u);
        Vec y = center + root * w;
        Vec fy = field.eval(y, lambda);
        Vec d = y - center;
        double dot_pd = 0.0;
        for (int i = 0; i < n; ++i) {
            double pi = 0.0;
            for (int j = 0; j < n; ++j) pi += P(i, j) * fy[j];
            dot_pd += d[i] * pi;
        }
        if (!(2.0 * dot_pd < 0.0)) ok = false;
    }
    ball.verified = ok;
    return ball;
}

const EquilibriumPath& TippingProblem::tracked() const {
    for (const auto& p : stable_paths)
        if (p.id == path_id) return p;
    throw ConfigError("tracked path '" + path_id + "' is not among the stable branches");
}

TippingProblem make_problem(const ModelSpec& model, const ParameterShift& shift,
                            const std::string& path_id,
                            const ContinuationOptions& opts) {
    std::string id = path_id.empty() ? model.default_path_id : path_id;
    bool stable = false;
    for (const auto& e : model.equilibria)
        if (e.id == id) stable = e.stable;
    if (!stable)
        throw ConfigError("path '" + id + "' of model '" + model.name +
                          "' is not an attracting branch");
    TippingProblem problem;
    problem.field = model.field;
    problem.shift = shift;
    problem.path_id = id;

    // A reparametrized shift can sweep lambda across most of its range between
    // two continuation grid points, which defeats stepwise branch following.
    // Since frozen equilibria depend on s only through lambda, continue the
    // branches under the base shift instead and read the composed path off as
    // X(sigma(s)), polishing each sample at its exact parameter value.
    const ShiftSpec& sp = shift.spec();
    if (sp.sigma && sp.type == "tanh") {
        ParameterShift base =
            tanh_shift(sp.lambda_minus, sp.lambda_plus, sp.center, sp.width);
        Reparametrization sigma = build_reparametrization(sp.sigma->u, sp.sigma->v,
                                                          sp.sigma->m, sp.sigma->eta);
        std::vector<EquilibriumPath> bases = continue_stable_paths(model, base, opts);
        double S = shift.saturation_point(opts.eps_lambda);
        int N = std::max(2, opts.grid_points);
        for (const auto& bp : bases) {
            EquilibriumPath q;
            q.id = bp.id;
            q.x_minus = bp.x_minus;
            q.x_plus = bp.x_plus;
            q.label_minus = bp.label_minus;
            q.label_plus = bp.label_plus;
            q.samples.reserve(N);
            for (int i = 0; i < N; ++i) {
                double s = -S - 5.0 + (2.0 * (S + 5.0)) * i / (N - 1);
                double sb = sigma(s);
                PathSample smp;
                smp.s = s;
                smp.lambda = shift(s);
                smp.x = path_point(model.field, base, bp, sb);
                smp.label = bp.nearest(sb).label;
                q.samples.push_back(std::move(smp));
            }
            problem.stable_paths.push_back(std::move(q));
        }
    } else {
        problem.stable_paths = continue_stable_paths(model, shift, opts);
    }
    return problem;
}

TippingProblem make_problem(const ModelSpec& model, const std::string& path_id) {
    return make_problem(model, model.default_shift, path_id);
}

double resolve_eps_track(const TippingProblem& problem, const PullbackConfig& cfg) {
    if (cfg.eps_track > 0.0) return cfg.eps_track;
    double eps = std::max(1e-3 * problem.tracked().diameter(), 1e-4);
    std::vector<Vec> limits;
    for (const auto& p : problem.stable_paths) limits.push_back(p.x_plus);
    double sep = min_pairwise_separation(limits);
    if (std::isfinite(sep) && sep > 0.0) eps = std::min(eps, 0.25 * sep);
    return eps;
}

Trajectory pullback_attractor(const TippingProblem& problem, double rate,
                              const PullbackConfig& cfg) {
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw ConfigError("rate must be positive and finite");
    const double S = problem.shift.saturation_point(cfg.eps_lambda);
    const double s_start = -S - cfg.s_offset;
    const double s_end = S + cfg.s_offset;
    Vec x0 = newton_equilibrium(problem.field, problem.shift(s_start),
                                problem.tracked().x_minus)
                 .x;
    Trajectory traj = integrate_opts(problem.field, problem.shift, rate, x0, s_start,
                                     {s_start / rate, s_end / rate}, cfg.integrator);
    traj.model = problem.field.name;
    traj.shift_desc = problem.shift.description();
    traj.path_id = problem.path_id;
    return traj;
}

TippingVerdict classify_rate(const TippingProblem& problem, double rate,
                             const PullbackConfig& cfg) {
    TippingVerdict v;
    v.rate = rate;
    v.eps_track = resolve_eps_track(problem, cfg);

    Trajectory traj = pullback_attractor(problem, rate, cfg);
    if (traj.escaped) {
        v.outcome = TippingOutcome::Escapes;
        v.escape_time = traj.escape_time;
        v.detail = "left the escape radius during the parameter sweep";
        return v;
    }

    const EquilibriumPath& own = problem.tracked();
    const Vec& x_end = traj.back().x;
    v.final_distance = dist(x_end, own.x_plus);

    // Verified limit balls at lambda_plus, one per stable branch (radius
    // halved as needed; an unverifiable ball is skipped and noted).
    Rng rng(cfg.seed);
    const double lam = problem.shift.lambda_plus();
    std::vector<QuadraticTarget> targets;
    bool own_ball = false;
    std::string skipped;
    for (const auto& p : problem.stable_paths) {
        QuadraticTarget t;
        if (build_verified_ball(problem.field, lam, p.x_plus, v.eps_track, p.id, rng, t)) {
            targets.push_back(t);
            if (p.id == problem.path_id) own_ball = true;
        } else {
            skipped += (skipped.empty() ? "" : ", ") + p.id;
        }
    }

    SettleResult settle = settle_frozen(problem.field, lam, x_end, cfg.t_settle,
                                        targets, cfg.integrator.tol);
    switch (settle.kind) {
        case SettleResult::Kind::Escaped:
            v.outcome = TippingOutcome::Escapes;
            v.escape_time = settle.t_event;
            v.detail = "left the escape radius while settling at the final parameter";
            return v;
        case SettleResult::Kind::EnteredTarget: {
            const std::string& dest = targets[static_cast<size_t>(settle.target_index)].id;
            v.settle_time = settle.t_event;
            if (dest == problem.path_id) {
                v.outcome = TippingOutcome::Tracks;
            } else {
                v.outcome = TippingOutcome::TipsToEquilibrium;
                v.destination = dest;
            }
            return v;
        }
        case SettleResult::Kind::Timeout:
            break;
    }
    v.outcome = TippingOutcome::Undetermined;
    std::ostringstream os;
    os << "no limit ball entered within t_settle = " << cfg.t_settle;
    if (!own_ball) os << "; unverifiable limit ball(s): " << skipped;
    v.detail = os.str();
    return v;
}

std::vector<RateSweepEntry> sweep_rates(const TippingProblem& problem,
                                        const std::vector<double>& rates,
                                        const PullbackConfig& cfg, int jobs) {
    std::vector<RateSweepEntry> out(rates.size());
    if (jobs <= 1 || rates.size() < 2) {
        for (size_t i = 0; i < rates.size(); ++i)
            out[i] = {rates[i], classify_rate(problem, rates[i], cfg)};
        return out;
    }
    std::atomic<size_t> next{0};
    std::mutex err_mtx;
    std::exception_ptr err;
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= rates.size()) return;
            try {
                out[i] = {rates[i], classify_rate(problem, rates[i], cfg)};
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mtx);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    int nw = std::min<int>(jobs, static_cast<int>(rates.size()));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nw));
    for (int k = 0; k < nw; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
    return out;
}

CriticalRateResult critical_rate(const TippingProblem& problem, double r_lo,
                                 double r_hi, const PullbackConfig& cfg,
                                 double rel_width) {
    if (!(0.0 < r_lo && r_lo < r_hi))
        throw InvalidInterval("critical_rate needs 0 < r_lo < r_hi");
    CriticalRateResult res;
    res.lo = r_lo;
    res.hi = r_hi;
    res.verdict_lo = classify_rate(problem, r_lo, cfg);
    res.verdict_hi = classify_rate(problem, r_hi, cfg);
    res.evaluations = 2;
    if (res.verdict_lo.tracks() == res.verdict_hi.tracks()) {
        std::ostringstream os;
        os << "no tracking boundary in [" << r_lo << ", " << r_hi << "]: verdicts "
           << to_string(res.verdict_lo.outcome) << " / "
           << to_string(res.verdict_hi.outcome);
        throw SameVerdict(os.str());
    }
    if (!res.verdict_lo.tracks()) {
        // Normalize so `lo` is the tracking side. (Only reachable if tracking
        // resumes at large rates, which the bisection contract still covers.)
        std::swap(res.lo, res.hi);
        std::swap(res.verdict_lo, res.verdict_hi);
    }
    for (int it = 0; it < 200 && (res.hi - res.lo) > rel_width * res.lo; ++it) {
        double mid = 0.5 * (res.lo + res.hi);
        TippingVerdict vm = classify_rate(problem, mid, cfg);
        ++res.evaluations;
        if (vm.tracks()) {
            res.lo = mid;
            res.verdict_lo = vm;
        } else {
            res.hi = mid;
            res.verdict_hi = vm;
        }
    }
    return res;
}

BasinResult basin_membership(const VectorFieldFamily& field, double lambda,
                             const Vec& x0, const std::vector<LabeledPoint>& attractors,
                             double horizon, double eps, std::uint64_t seed) {
    if (attractors.empty()) throw ConfigError("basin_membership: no attractors listed");
    std::vector<Vec> pts;
    for (const auto& a : attractors) {
        double resid = norm(field.eval(a.x, lambda));
        double scale = std::max(1.0, norm(a.x));
        if (!(resid <= 1e-8 * scale)) {
            std::ostringstream os;
            os << "listed point '" << a.id << "' is not an equilibrium at lambda = "
               << lambda << " (residual " << resid << ")";
            throw ConfigError(os.str());
        }
        pts.push_back(a.x);
    }
    if (eps <= 0.0) {
        double scale = 1.0;
        for (const auto& p : pts) scale = std::max(scale, norm(p));
        eps = std::max(1e-3 * scale, 1e-4);
        double sep = min_pairwise_separation(pts);
        if (std::isfinite(sep) && sep > 0.0) eps = std::min(eps, 0.25 * sep);
    }

    Rng rng(seed);
    std::vector<QuadraticTarget> targets;
    std::vector<int> origin;  // target -> attractor index
    for (size_t i = 0; i < attractors.size(); ++i) {
        QuadraticTarget t;
        if (build_verified_ball(field, lambda, attractors[i].x, eps, attractors[i].id,
                                rng, t)) {
            targets.push_back(t);
            origin.push_back(static_cast<int>(i));
        }
    }

    SettleResult settle = settle_frozen(field, lambda, x0, horizon, targets);
    BasinResult res;
    res.kind = settle.kind;
    res.final_state = settle.state;
    if (settle.kind == SettleResult::Kind::EnteredTarget) {
        res.index = origin[static_cast<size_t>(settle.target_index)];
        res.id = attractors[static_cast<size_t>(res.index)].id;
        res.t_settle = settle.t_event;
    } else if (settle.kind == SettleResult::Kind::Escaped) {
        res.t_settle = settle.t_event;
    }
    return res;
}

ForcedTippingResult force_tipping(const ModelSpec& model,
                                  const ParameterShift& base_shift,
                                  const std::string& path_id, double u, double v,
                                  const PullbackConfig& cfg,
                                  const ContinuationOptions& copts) {
    if (!(u < v)) throw InvalidInterval("force_tipping needs window u < v");
    const std::string id = path_id.empty() ? model.default_path_id : path_id;

    // Kick hypothesis: freeze the branch state from the window entrance at the
    // post-window parameter; it must settle away from the tracked branch.
    std::vector<EquilibriumPath> paths = continue_stable_paths(model, base_shift, copts);
    const EquilibriumPath* tracked = nullptr;
    for (const auto& p : paths)
        if (p.id == id) tracked = &p;
    if (tracked == nullptr)
        throw ConfigError("path '" + id + "' is not an attracting branch of '" +
                          model.name + "'");
    Vec x_at_u = path_point(model.field, base_shift, *tracked, u);
    const double lambda_v = base_shift(v);
    std::vector<LabeledPoint> attractors;
    for (const auto& p : paths)
        attractors.push_back({p.id, path_point(model.field, base_shift, p, v)});
    BasinResult basin = basin_membership(model.field, lambda_v, x_at_u, attractors,
                                         cfg.t_settle, 0.0, cfg.seed);

    ForcedTippingResult res;
    res.rate = 0.05;
    {
        std::ostringstream os;
        os << "branch state at s = " << u << " frozen at Lambda(" << v << ") ";
        if (basin.kind == SettleResult::Kind::EnteredTarget)
            os << "settles to '" << basin.id << "' after t = " << basin.t_settle;
        else if (basin.kind == SettleResult::Kind::Escaped)
            os << "escapes at t = " << basin.t_settle;
        else
            os << "does not settle within the horizon";
        res.hypothesis_note = os.str();
    }
    bool kicked = (basin.kind == SettleResult::Kind::Escaped) ||
                  (basin.kind == SettleResult::Kind::EnteredTarget && basin.id != id);
    if (!kicked) throw HypothesisNotMet("fast-passage kick hypothesis fails: " +
                                        res.hypothesis_note);
    res.hypothesis_met = true;

    const double half_window = 0.5 * (v - u);
    const double slopes[] = {1e1, 1e2, 1e3, 1e4, 1e5};
    const double ramps[] = {0.1, 0.01, 0.001};
    for (double m : slopes) {
        for (double eta : ramps) {
            if (!(eta < half_window)) continue;
            SigmaSpec spec{u, v, m, eta};
            Reparametrization sigma = build_reparametrization(u, v, m, eta);
            ParameterShift composed = compose(base_shift, sigma);
            TippingProblem problem = make_problem(model, composed, id, copts);
            TippingVerdict verdict = classify_rate(problem, res.rate, cfg);
            res.attempts.push_back({spec, verdict});
            if (verdict.outcome == TippingOutcome::TipsToEquilibrium ||
                verdict.outcome == TippingOutcome::Escapes) {
                res.found = true;
                res.sigma = spec;
                res.verdict = verdict;
                return res;
            }
        }
    }
    return res;  // search exhausted; attempts tell the story
}

FbsReport fbs_check(const ModelSpec& model, const ParameterShift& shift,
                    const std::string& path_id, int grid_points,
                    const PullbackConfig& cfg) {
    if (grid_points < 2) throw ConfigError("fbs_check needs at least 2 grid points");
    const std::string id = path_id.empty() ? model.default_path_id : path_id;
    (void)model.equilibrium(id);  // validate the id early

    FbsReport report;
    const double lo = shift.lambda_minus(), hi = shift.lambda_plus();
    for (int i = 0; i < grid_points; ++i)
        report.grid.push_back(lo + (hi - lo) * i / (grid_points - 1));

    // Newton-polished equilibria for every stable branch at every grid value,
    // plus verified limit balls at the destination values.
    std::vector<std::string> ids = model.stable_ids();
    std::vector<std::vector<Vec>> at(report.grid.size());
    for (size_t g = 0; g < report.grid.size(); ++g)
        for (const auto& sid : ids)
            at[g].push_back(newton_equilibrium(model.field, report.grid[g],
                                               model.equilibrium(sid).point(report.grid[g]))
                                .x);
    size_t own_idx = 0;
    for (size_t k = 0; k < ids.size(); ++k)
        if (ids[k] == id) own_idx = k;

    std::vector<std::vector<QuadraticTarget>> targets(report.grid.size());
    std::vector<std::vector<int>> origin(report.grid.size());
    for (size_t g = 0; g < report.grid.size(); ++g) {
        double sep = min_pairwise_separation(at[g]);
        double scale = 1.0;
        for (const auto& p : at[g]) scale = std::max(scale, norm(p));
        double eps = std::max(1e-3 * scale, 1e-4);
        if (std::isfinite(sep) && sep > 0.0) eps = std::min(eps, 0.25 * sep);
        Rng rng(cfg.seed + g);
        for (size_t k = 0; k < ids.size(); ++k) {
            QuadraticTarget t;
            if (build_verified_ball(model.field, report.grid[g], at[g][k], eps, ids[k],
                                    rng, t)) {
                targets[g].push_back(t);
                origin[g].push_back(static_cast<int>(k));
            }
        }
    }

    for (size_t a = 0; a < report.grid.size(); ++a) {
        for (size_t b = a + 1; b < report.grid.size(); ++b) {
            ++report.pairs;
            SettleResult settle =
                settle_frozen(model.field, report.grid[b], at[a][own_idx], cfg.t_settle,
                              targets[b], cfg.integrator.tol);
            FbsViolation viol;
            viol.lambda_from = report.grid[a];
            viol.lambda_to = report.grid[b];
            switch (settle.kind) {
                case SettleResult::Kind::EnteredTarget: {
                    int k = origin[b][static_cast<size_t>(settle.target_index)];
                    if (static_cast<size_t>(k) == own_idx) continue;
                    viol.settled_id = ids[static_cast<size_t>(k)];
                    viol.kind = "wrong-equilibrium";
                    break;
                }
                case SettleResult::Kind::Escaped:
                    viol.kind = "escaped";
                    break;
                case SettleResult::Kind::Timeout:
                    viol.kind = "timeout";
                    break;
            }
            report.violations.push_back(viol);
        }
    }
    return report;
}

}  // namespace rtip
