#include "rtip/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rtip/eigen.hpp"
#include "rtip/errors.hpp"
#include "rtip/tipping.hpp"

namespace rtip {

namespace {

std::string fmt_vec(const Vec& v) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v[i];
    }
    os << ")";
    return os.str();
}

// Positive eigenpair (mu > 0, componentwise positive unit eigenvector) at a
// saddle. Throws NoPositiveEigenpair.
std::pair<double, Vec> positive_eigenpair(const Mat& J) {
    Spectrum sp = eigen_spectrum(J);
    int best = -1;
    for (size_t i = 0; i < sp.values.size(); ++i) {
        if (sp.values[i].imag() != 0.0) continue;
        if (!(sp.values[i].real() > 0.0)) continue;
        if (sp.vectors[i].size() == 0) continue;
        if (best < 0 || sp.values[i].real() > sp.values[static_cast<size_t>(best)].real())
            best = static_cast<int>(i);
    }
    if (best < 0)
        throw NoPositiveEigenpair("no real positive eigenvalue at the saddle point");
    Vec w = sp.vectors[static_cast<size_t>(best)];
    for (int i = 0; i < w.size(); ++i)
        if (!(w[i] > 0.0))
            throw NoPositiveEigenpair(
                "unstable eigenvector is not componentwise positive: " + fmt_vec(w));
    return {sp.values[static_cast<size_t>(best)].real(), w};
}

// Uniform s grid across the overlap of two continued branches.
std::vector<double> common_s_grid(const EquilibriumPath& a, const EquilibriumPath& b,
                                  int n) {
    double lo = std::max(a.samples.front().s, b.samples.front().s);
    double hi = std::min(a.samples.back().s, b.samples.back().s);
    if (!(lo < hi)) throw GridMismatch("branches do not overlap in s");
    std::vector<double> g(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return g;
}

// Uniform strict ordering of tracked vs saddle across a grid; true = tracked
// strictly below at every sample, false = strictly above. Mixed or
// non-strict ordering raises HypothesisFailed.
bool tracked_below(const EquilibriumPath& tracked, const EquilibriumPath& saddle,
                   const std::vector<double>& grid, double margin) {
    int below = 0, above = 0;
    for (double s : grid) {
        OrderRelation r = order_relation(tracked.nearest(s).x, saddle.nearest(s).x, margin);
        if (r == OrderRelation::StrictlyLess)
            ++below;
        else if (r == OrderRelation::StrictlyGreater)
            ++above;
        else {
            std::ostringstream os;
            os << "branches '" << tracked.id << "' and '" << saddle.id
               << "' are not strictly ordered at s = " << s << " (" << to_string(r) << ")";
            throw HypothesisFailed(os.str());
        }
    }
    if (below && above)
        throw HypothesisFailed("branches '" + tracked.id + "' and '" + saddle.id +
                               "' change order along the shift");
    return below > 0;
}

}  // namespace

const char* to_string(OrderRelation r) {
    switch (r) {
        case OrderRelation::Equal: return "Equal";
        case OrderRelation::Less: return "Less";
        case OrderRelation::StrictlyLess: return "StrictlyLess";
        case OrderRelation::Greater: return "Greater";
        case OrderRelation::StrictlyGreater: return "StrictlyGreater";
        case OrderRelation::Incomparable: return "Incomparable";
    }
    return "Incomparable";
}

OrderRelation order_relation(const Vec& a, const Vec& b, double margin) {
    if (a.size() != b.size())
        throw GridMismatch("order_relation: dimension mismatch");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < a.size(); ++i) {
        double d = b[i] - a[i];
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    if (lo >= -margin && hi <= margin) return OrderRelation::Equal;
    if (lo > margin) return OrderRelation::StrictlyLess;
    if (lo >= -margin) return OrderRelation::Less;
    if (hi < -margin) return OrderRelation::StrictlyGreater;
    if (hi <= margin) return OrderRelation::Greater;
    return OrderRelation::Incomparable;
}

bool leq(const Vec& a, const Vec& b, double slack) {
    for (int i = 0; i < a.size(); ++i)
        if (!(a[i] <= b[i] + slack)) return false;
    return true;
}

bool strictly_less(const Vec& a, const Vec& b, double margin) {
    for (int i = 0; i < a.size(); ++i)
        if (!(a[i] < b[i] - margin)) return false;
    return true;
}

MonotoneCheck check_monotone(const VectorFieldFamily& field, const Vec& lo, const Vec& hi,
                             std::pair<double, double> lambda_range, int grid_per_axis,
                             double tolerance) {
    const int n = field.dim;
    if (lo.size() != n || hi.size() != n)
        throw GridMismatch("check_monotone: box dimension mismatch");
    if (grid_per_axis < 2) grid_per_axis = 2;

    MonotoneCheck res;
    std::vector<int> idx(static_cast<size_t>(n), 0);
    for (;;) {
        Vec x(n);
        for (int i = 0; i < n; ++i)
            x[i] = lo[i] + (hi[i] - lo[i]) * idx[static_cast<size_t>(i)] / (grid_per_axis - 1);
        for (int g = 0; g < grid_per_axis; ++g) {
            double lambda = lambda_range.first +
                            (lambda_range.second - lambda_range.first) * g / (grid_per_axis - 1);
            Mat J = jacobian(field, x, lambda);
            ++res.samples;
            for (int i = 0; i < n && res.monotone; ++i)
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    if (J(i, j) < -tolerance) {
                        res.monotone = false;
                        res.witness_x = x;
                        res.witness_lambda = lambda;
                        res.witness_row = i;
                        res.witness_col = j;
                        res.witness_entry = J(i, j);
                        break;
                    }
                }
            if (!res.monotone) return res;
        }
        int axis = 0;
        while (axis < n && ++idx[static_cast<size_t>(axis)] == grid_per_axis) {
            idx[static_cast<size_t>(axis)] = 0;
            ++axis;
        }
        if (axis == n) break;
    }
    return res;
}

OrderBox OrderBox::lower_set(const Vec& corner) {
    OrderBox b;
    b.kind = BoxKind::LowerSet;
    b.hi = corner;
    return b;
}

OrderBox OrderBox::upper_set(const Vec& corner) {
    OrderBox b;
    b.kind = BoxKind::UpperSet;
    b.lo = corner;
    return b;
}

OrderBox OrderBox::bounded(const Vec& lo, const Vec& hi) {
    if (lo.size() != hi.size())
        throw InvalidInterval("bounded box: corner dimension mismatch");
    for (int i = 0; i < lo.size(); ++i)
        if (!(lo[i] < hi[i]))
            throw InvalidInterval("bounded box needs lo < hi componentwise");
    OrderBox b;
    b.kind = BoxKind::Bounded;
    b.lo = lo;
    b.hi = hi;
    return b;
}

bool OrderBox::contains(const Vec& x, double slack) const {
    if (kind != BoxKind::UpperSet && !leq(x, hi, slack)) return false;
    if (kind != BoxKind::LowerSet && !leq(lo, x, slack)) return false;
    return true;
}

bool OrderBox::contains_interior(const Vec& x, double margin) const {
    if (kind != BoxKind::UpperSet && !strictly_less(x, hi, margin)) return false;
    if (kind != BoxKind::LowerSet && !strictly_less(lo, x, margin)) return false;
    return true;
}

InflowCertificate inflow_box(const VectorFieldFamily& field, double lambda,
                             const OrderBox& box, std::uint64_t seed,
                             double corner_margin) {
    const int n = field.dim;
    InflowCertificate cert;

    auto check_corner = [&](const Vec& corner, int sign, const char* which) {
        Vec f = field.eval(corner, lambda);
        for (int i = 0; i < n; ++i) {
            cert.corner_values.push_back(f[i]);
            if (!(sign * f[i] > corner_margin)) {
                std::ostringstream os;
                os << which << " corner " << fmt_vec(corner) << ": component " << i
                   << " has f_i = " << f[i] << ", needs " << (sign > 0 ? "> " : "< ")
                   << (sign > 0 ? corner_margin : -corner_margin);
                throw SignConditionFailed(os.str());
            }
        }
    };
    if (box.kind != BoxKind::UpperSet) check_corner(box.hi, -1, "upper");
    if (box.kind != BoxKind::LowerSet) check_corner(box.lo, +1, "lower");

    // Spot checks on the faces. The corner conditions already prove inflow
    // when the field is cooperative; a sampled violation therefore flags a
    // non-cooperative field (or a bad box) rather than bad luck.
    Rng rng(seed);
    const int per_face = 10 * n;
    auto face_point = [&](int face_axis, bool upper) {
        Vec x(n);
        for (int j = 0; j < n; ++j) {
            switch (box.kind) {
                case BoxKind::Bounded:
                    x[j] = box.lo[j] + (box.hi[j] - box.lo[j]) * rng.uniform01();
                    break;
                case BoxKind::LowerSet: {
                    double w = 2.0 * std::max(1.0, std::abs(box.hi[j]));
                    x[j] = box.hi[j] - w * rng.uniform01();
                    break;
                }
                case BoxKind::UpperSet: {
                    double w = 2.0 * std::max(1.0, std::abs(box.lo[j]));
                    x[j] = box.lo[j] + w * rng.uniform01();
                    break;
                }
            }
        }
        x[face_axis] = upper ? box.hi[face_axis] : box.lo[face_axis];
        return x;
    };
    for (int i = 0; i < n; ++i) {
        if (box.kind != BoxKind::UpperSet) {
            for (int k = 0; k < per_face; ++k) {
                Vec x = face_point(i, true);
                double fi = field.eval(x, lambda)[i];
                ++cert.boundary_samples;
                if (!(fi < 0.0)) {
                    std::ostringstream os;
                    os << "sampled point " << fmt_vec(x) << " on face x_" << i
                       << " = hi has f_i = " << fi
                       << " >= 0; box is not strictly inflowing";
                    throw SignConditionFailed(os.str());
                }
            }
        }
        if (box.kind != BoxKind::LowerSet) {
            for (int k = 0; k < per_face; ++k) {
                Vec x = face_point(i, false);
                double fi = field.eval(x, lambda)[i];
                ++cert.boundary_samples;
                if (!(fi > 0.0)) {
                    std::ostringstream os;
                    os << "sampled point " << fmt_vec(x) << " on face x_" << i
                       << " = lo has f_i = " << fi
                       << " <= 0; box is not strictly inflowing";
                    throw SignConditionFailed(os.str());
                }
            }
        }
    }
    cert.holds = true;
    return cert;
}

EigenOffsetResult eigen_offset_point(const VectorFieldFamily& field, double lambda,
                                     const Vec& saddle, int side, double delta0) {
    if (side != 1 && side != -1)
        throw ConfigError("eigen_offset_point: side must be +1 or -1");
    auto [mu, w] = positive_eigenpair(jacobian(field, saddle, lambda));

    EigenOffsetResult res;
    res.w = w;
    res.mu = mu;
    double delta = delta0;
    for (int h = 0; h <= 40; ++h, delta *= 0.5) {
        Vec z = saddle + (side * delta) * w;
        Vec f = field.eval(z, lambda);
        bool ok = true;
        for (int i = 0; i < f.size(); ++i)
            if (!(side * f[i] > 0.0)) ok = false;
        if (ok) {
            res.z = z;
            res.delta = delta;
            res.halvings = h;
            return res;
        }
    }
    std::ostringstream os;
    os << "no offset down to delta = " << delta0 * std::pow(0.5, 40)
       << " gives strict componentwise sign " << (side > 0 ? "+" : "-")
       << " at the saddle " << fmt_vec(saddle);
    throw DeltaUnderflow(os.str());
}

const char* to_string(TippingGuaranteeFinding f) {
    switch (f) {
        case TippingGuaranteeFinding::TippingGuaranteed: return "TippingGuaranteed";
        case TippingGuaranteeFinding::TippingGuaranteedLargeR: return "TippingGuaranteedLargeR";
        case TippingGuaranteeFinding::NotApplicable: return "NotApplicable";
    }
    return "NotApplicable";
}

TippingGuarantee guaranteed_tipping_scan(const VectorFieldFamily& field,
                                         const ParameterShift& shift,
                                         const EquilibriumPath& tracked,
                                         const EquilibriumPath& saddle,
                                         double margin) {
    if (tracked.samples.empty() || saddle.samples.empty())
        throw GridMismatch("guaranteed_tipping_scan: empty branch");

    // Cooperativity over the union bounding box, padded 10%.
    const int n = field.dim;
    Vec lo(n, std::numeric_limits<double>::infinity());
    Vec hi(n, -std::numeric_limits<double>::infinity());
    auto absorb = [&](const Vec& x) {
        for (int i = 0; i < n; ++i) {
            lo[i] = std::min(lo[i], x[i]);
            hi[i] = std::max(hi[i], x[i]);
        }
    };
    for (const auto& smp : tracked.samples) absorb(smp.x);
    for (const auto& smp : saddle.samples) absorb(smp.x);
    for (int i = 0; i < n; ++i) {
        double pad = 0.1 * (hi[i] - lo[i]) + 1e-6;
        lo[i] -= pad;
        hi[i] += pad;
    }
    MonotoneCheck mc = check_monotone(field, lo, hi,
                                      {shift.lambda_minus(), shift.lambda_plus()});
    if (!mc.monotone) {
        std::ostringstream os;
        os << "field is not cooperative: J(" << mc.witness_row << ", " << mc.witness_col
           << ") = " << mc.witness_entry << " at x = " << fmt_vec(mc.witness_x)
           << ", lambda = " << mc.witness_lambda;
        throw HypothesisFailed(os.str());
    }

    std::vector<double> grid = common_s_grid(tracked, saddle, 101);
    bool below = tracked_below(tracked, saddle, grid, margin);

    try {
        positive_eigenpair(jacobian(field, saddle.x_minus, shift.lambda_minus()));
        positive_eigenpair(jacobian(field, saddle.x_plus, shift.lambda_plus()));
    } catch (const NoPositiveEigenpair& e) {
        throw HypothesisFailed(std::string("saddle eigenpair hypothesis fails: ") + e.what());
    }

    TippingGuarantee out;
    // Tracked below the saddle tips when the saddle later drops strictly past
    // it; tracked above tips when the saddle later rises strictly past it.
    for (size_t iu = 0; iu < grid.size(); ++iu) {
        const Vec& q = tracked.nearest(grid[iu]).x;
        for (size_t iv = iu + 1; iv < grid.size(); ++iv) {
            const Vec& p = saddle.nearest(grid[iv]).x;
            bool beyond = below ? strictly_less(p, q, margin) : strictly_less(q, p, margin);
            if (beyond) {
                out.finding = TippingGuaranteeFinding::TippingGuaranteed;
                out.s_from = grid[iu];
                out.s_to = grid[iv];
                std::ostringstream os;
                os << "tracked '" << tracked.id << "' at s = " << grid[iu] << " lies strictly "
                   << (below ? "above" : "below") << " the saddle at s = " << grid[iv]
                   << "; a fast enough passage over this window forces tipping";
                out.detail = os.str();
                return out;
            }
        }
    }

    bool limit_beyond = below ? strictly_less(saddle.x_plus, tracked.x_minus, margin)
                              : strictly_less(tracked.x_minus, saddle.x_plus, margin);
    if (limit_beyond) {
        out.finding = TippingGuaranteeFinding::TippingGuaranteedLargeR;
        out.detail = "the frozen limits are strictly beyond each other; plain shifts tip "
                     "at large enough rates";
        return out;
    }
    out.detail = "no grid pair or limit pair is strictly beyond the saddle";
    return out;
}

NoTippingCertificate no_tipping_check(const VectorFieldFamily& field,
                                      const ParameterShift& shift,
                                      const EquilibriumPath& tracked,
                                      const EquilibriumPath& saddle,
                                      const EquilibriumPath& other,
                                      double margin, double delta0) {
    std::vector<double> grid = common_s_grid(tracked, saddle, 201);
    bool below = tracked_below(tracked, saddle, grid, margin);
    bool other_below = tracked_below(other, saddle, grid, margin);
    if (other_below == below)
        throw HypothesisFailed("'" + other.id + "' lies on the same side of the saddle as '" +
                               tracked.id + "'; nothing to exclude");

    // Offset corners z(s) = saddle(s) -+ delta * w(s) with a single global
    // delta. Protective order cones: tracked below uses K(s) = {x <= z(s)}
    // (sign -1), tracked above uses {x >= z(s)} (sign +1).
    const int sign = below ? -1 : +1;
    const size_t m = grid.size();
    std::vector<Vec> saddle_x(m), wvec(m);
    std::vector<double> lam(m);
    for (size_t k = 0; k < m; ++k) {
        lam[k] = shift(grid[k]);
        saddle_x[k] = newton_equilibrium(field, lam[k], saddle.nearest(grid[k]).x).x;
        try {
            wvec[k] = positive_eigenpair(jacobian(field, saddle_x[k], lam[k])).second;
        } catch (const NoPositiveEigenpair& e) {
            throw HypothesisFailed(std::string("saddle eigenpair hypothesis fails: ") +
                                   e.what());
        }
    }

    auto corner_sign_ok = [&](const Vec& z, double lambda) {
        Vec f = field.eval(z, lambda);
        for (int i = 0; i < f.size(); ++i)
            if (!(sign * f[i] > 0.0)) return false;
        return true;
    };
    auto sandwiched = [&](const Vec& q, const Vec& z) {
        return below ? strictly_less(q, z, margin) : strictly_less(z, q, margin);
    };

    double delta = delta0;
    for (int attempt = 0; attempt <= 40; ++attempt, delta *= 0.5) {
        std::vector<Vec> z(m);
        bool ok = true;
        for (size_t k = 0; k < m && ok; ++k) {
            z[k] = saddle_x[k] + (sign * delta) * wvec[k];
            if (!corner_sign_ok(z[k], lam[k])) ok = false;
            if (ok && !sandwiched(tracked.nearest(grid[k]).x, z[k])) ok = false;
        }
        if (!ok) continue;

        // Nested the protective way: cones must never shrink along s.
        bool nested = true;
        for (size_t k = 0; k + 1 < m && nested; ++k)
            nested = below ? leq(z[k], z[k + 1], 1e-12) : leq(z[k + 1], z[k], 1e-12);

        NoTippingCertificate cert;
        cert.excluded_destination = other.id;
        cert.delta = delta;
        cert.samples = static_cast<int>(m);
        if (nested) {
            cert.variant = "nested-family";
            std::ostringstream os;
            os << "order cones around '" << saddle.id << "' are nested along s and "
               << "strictly inflowing at every frozen parameter; '" << tracked.id
               << "' cannot cross toward '" << other.id << "' at any rate";
            cert.detail = os.str();
            return cert;
        }

        // Constant fallback: the componentwise extreme of the family is a
        // single corner that must work against every frozen field.
        Vec zc = z[0];
        for (size_t k = 1; k < m; ++k)
            for (int i = 0; i < zc.size(); ++i)
                zc[i] = below ? std::min(zc[i], z[k][i]) : std::max(zc[i], z[k][i]);
        bool const_ok = true;
        for (size_t k = 0; k < m && const_ok; ++k) {
            if (!corner_sign_ok(zc, lam[k])) const_ok = false;
            if (const_ok && !sandwiched(tracked.nearest(grid[k]).x, zc)) const_ok = false;
        }
        if (const_ok) {
            cert.variant = "constant-corner";
            std::ostringstream os;
            os << "constant order cone at " << fmt_vec(zc)
               << " is strictly inflowing under every frozen parameter; '" << tracked.id
               << "' cannot cross toward '" << other.id << "' at any rate";
            cert.detail = os.str();
            return cert;
        }
    }
    throw ConstructionFailed(
        "no offset delta produced an order-cone family with strict frozen inflow, "
        "nesting (or a constant corner), and a strict sandwich of '" +
        tracked.id + "'");
}

FISCertificate verify_fis(const VectorFieldFamily& field, const ParameterShift& shift,
                          const EquilibriumPath& path, const FisBoxGrid& grid,
                          bool cooperative, const FisOptions& opts) {
    const int n = field.dim;
    const int K = grid.size();
    if (K == 0 || grid.lo.size() != grid.s.size() || grid.hi.size() != grid.s.size())
        throw GridMismatch("verify_fis: grid arrays have mismatched lengths");
    for (int k = 0; k < K; ++k) {
        if (grid.lo[static_cast<size_t>(k)].size() != n ||
            grid.hi[static_cast<size_t>(k)].size() != n)
            throw GridMismatch("verify_fis: box dimension mismatch");
        for (int i = 0; i < n; ++i)
            if (!(grid.lo[static_cast<size_t>(k)][i] < grid.hi[static_cast<size_t>(k)][i]))
                throw GridMismatch("verify_fis: box has lo >= hi");
        if (k > 0 && !(grid.s[static_cast<size_t>(k - 1)] < grid.s[static_cast<size_t>(k)]))
            throw GridMismatch("verify_fis: s values must be strictly ascending");
    }

    FISCertificate cert;
    cert.boxes = K;
    cert.path_id = path.id;
    cert.conditions.resize(5);
    cert.conditions[0].name = "path-interior";
    cert.conditions[1].name = "nesting";
    cert.conditions[2].name = "boundary-inflow";
    cert.conditions[3].name = "limits-interior";
    cert.conditions[4].name = "basin-inclusion";

    // 1: the branch stays strictly inside its box at every grid point.
    {
        bool ok = true;
        for (int k = 0; k < K && ok; ++k) {
            Vec x = path_point(field, shift, path, grid.s[static_cast<size_t>(k)]);
            OrderBox box = OrderBox::bounded(grid.lo[static_cast<size_t>(k)],
                                             grid.hi[static_cast<size_t>(k)]);
            if (!box.contains_interior(x, opts.margin)) {
                ok = false;
                std::ostringstream os;
                os << "branch point " << fmt_vec(x) << " at s = "
                   << grid.s[static_cast<size_t>(k)] << " is not interior to its box";
                cert.conditions[0].detail = os.str();
            }
        }
        cert.conditions[0].holds = ok;
    }

    // 2: boxes never shrink along s.
    {
        bool ok = true;
        for (int k = 0; k + 1 < K && ok; ++k) {
            const Vec& lo0 = grid.lo[static_cast<size_t>(k)];
            const Vec& lo1 = grid.lo[static_cast<size_t>(k + 1)];
            const Vec& hi0 = grid.hi[static_cast<size_t>(k)];
            const Vec& hi1 = grid.hi[static_cast<size_t>(k + 1)];
            if (!leq(lo1, lo0, 1e-12) || !leq(hi0, hi1, 1e-12)) {
                ok = false;
                std::ostringstream os;
                os << "box at s = " << grid.s[static_cast<size_t>(k + 1)]
                   << " does not contain the box at s = " << grid.s[static_cast<size_t>(k)];
                cert.conditions[1].detail = os.str();
            }
        }
        cert.conditions[1].holds = ok;
    }

    // 3: strict boundary inflow of each frozen field.
    {
        bool ok = true;
        Rng rng(opts.seed);
        for (int k = 0; k < K && ok; ++k) {
            const double lambda = shift(grid.s[static_cast<size_t>(k)]);
            const Vec& blo = grid.lo[static_cast<size_t>(k)];
            const Vec& bhi = grid.hi[static_cast<size_t>(k)];
            if (cooperative) {
                Vec fhi = field.eval(bhi, lambda);
                Vec flo = field.eval(blo, lambda);
                for (int i = 0; i < n && ok; ++i) {
                    if (!(fhi[i] < -opts.corner_margin) || !(flo[i] > opts.corner_margin)) {
                        ok = false;
                        std::ostringstream os;
                        os << "corner sign condition fails at s = "
                           << grid.s[static_cast<size_t>(k)] << ", component " << i
                           << " (f at hi = " << fhi[i] << ", f at lo = " << flo[i] << ")";
                        cert.conditions[2].detail = os.str();
                    }
                }
            }
            const int per_face = opts.face_samples * n;
            for (int i = 0; i < n && ok; ++i) {
                for (int k2 = 0; k2 < 2 * per_face && ok; ++k2) {
                    bool upper = k2 < per_face;
                    Vec x(n);
                    for (int j = 0; j < n; ++j)
                        x[j] = blo[j] + (bhi[j] - blo[j]) * rng.uniform01();
                    x[i] = upper ? bhi[i] : blo[i];
                    double fi = field.eval(x, lambda)[i];
                    if (upper ? !(fi < 0.0) : !(fi > 0.0)) {
                        ok = false;
                        std::ostringstream os;
                        os << "sampled face point " << fmt_vec(x) << " at s = "
                           << grid.s[static_cast<size_t>(k)] << " has f_" << i << " = " << fi
                           << " pointing outward";
                        cert.conditions[2].detail = os.str();
                    }
                }
            }
        }
        cert.conditions[2].holds = ok;
        if (ok)
            cert.conditions[2].detail = cooperative
                ? "corner conditions plus sampled faces"
                : "sampled faces only (field not certified cooperative)";
    }

    // 4: frozen limits interior to the end boxes.
    {
        OrderBox first = OrderBox::bounded(grid.lo.front(), grid.hi.front());
        OrderBox last = OrderBox::bounded(grid.lo.back(), grid.hi.back());
        bool okm = first.contains_interior(path.x_minus, opts.margin);
        bool okp = last.contains_interior(path.x_plus, opts.margin);
        cert.conditions[3].holds = okm && okp;
        if (!okm)
            cert.conditions[3].detail = "X_minus " + fmt_vec(path.x_minus) +
                                        " is not interior to the first box";
        else if (!okp)
            cert.conditions[3].detail = "X_plus " + fmt_vec(path.x_plus) +
                                        " is not interior to the last box";
    }

    // 5: the last box lies inside the frozen basin of X_plus (sampled).
    {
        const double lambda = shift.lambda_plus();
        double eps = opts.eps;
        if (eps <= 0.0) eps = std::max(1e-3 * std::max(1.0, norm(path.x_plus)), 1e-4);
        Rng rng(opts.seed + 1);
        QuadraticTarget ball;
        bool have_ball = false;
        {
            double r = eps;
            for (int t = 0; t < 25 && !have_ball; ++t, r *= 0.5) {
                TrackingBall b = make_tracking_ball(field, lambda, path.x_plus, r,
                                                    path.id, rng);
                if (b.verified) {
                    ball = b.target;
                    have_ball = true;
                }
            }
        }
        if (!have_ball) {
            cert.conditions[4].holds = false;
            cert.conditions[4].detail = "no verifiable ball at X_plus";
        } else {
            const Vec& blo = grid.lo.back();
            const Vec& bhi = grid.hi.back();
            std::vector<Vec> pts;
            for (int mask = 0; mask < (1 << n); ++mask) {
                Vec x(n);
                for (int i = 0; i < n; ++i) x[i] = (mask >> i) & 1 ? bhi[i] : blo[i];
                pts.push_back(x);
            }
            int g = opts.basin_grid > 0 ? opts.basin_grid : (n <= 2 ? 10 : 4);
            std::vector<int> idx(static_cast<size_t>(n), 0);
            for (;;) {
                Vec x(n);
                for (int i = 0; i < n; ++i)
                    x[i] = blo[i] + (bhi[i] - blo[i]) * (idx[static_cast<size_t>(i)] + 0.5) / g;
                pts.push_back(x);
                int axis = 0;
                while (axis < n && ++idx[static_cast<size_t>(axis)] == g) {
                    idx[static_cast<size_t>(axis)] = 0;
                    ++axis;
                }
                if (axis == n) break;
            }
            bool ok = true;
            for (const auto& p : pts) {
                SettleResult r = settle_frozen(field, lambda, p, opts.t_settle, {ball});
                if (r.kind != SettleResult::Kind::EnteredTarget) {
                    ok = false;
                    std::ostringstream os;
                    os << "sample " << fmt_vec(p) << " of the last box "
                       << (r.kind == SettleResult::Kind::Escaped ? "escapes"
                                                                 : "does not settle")
                       << " under the frozen final parameter";
                    cert.conditions[4].detail = os.str();
                    break;
                }
            }
            cert.conditions[4].holds = ok;
            if (ok) {
                std::ostringstream os;
                os << pts.size() << " samples (vertices plus " << g << "^" << n
                   << " interior grid) all settle to X_plus";
                cert.conditions[4].detail = os.str();
            }
        }
    }

    cert.holds = true;
    for (const auto& c : cert.conditions) cert.holds = cert.holds && c.holds;
    cert.non_rigorous = true;
    return cert;
}

FisBoxGrid build_fis_boxes_cubic(const ModelSpec& model, const ParameterShift& shift,
                                 const std::string& path_id, int grid_points) {
    if (model.name != "monotone-cubic" || !model.monotone)
        throw ConfigError("build_fis_boxes_cubic needs the monotone-cubic model");
    const std::string id = path_id.empty() ? model.default_path_id : path_id;
    if (id != "p1" && id != "p3")
        throw ConfigError("build_fis_boxes_cubic: branch must be p1 or p3");
    if (grid_points < 2) throw ConfigError("build_fis_boxes_cubic: need >= 2 grid points");
    const bool upper = (id == "p3");
    const VectorFieldFamily& field = model.field;

    const double S = shift.saturation_point(1e-6);
    FisBoxGrid grid;
    for (int k = 0; k < grid_points; ++k)
        grid.s.push_back(-S - 5.0 + (2.0 * S + 10.0) * k / (grid_points - 1));

    // Fine parameter grid for the constant-corner inequality scans.
    std::vector<double> lams;
    for (int k = 0; k < 101; ++k)
        lams.push_back(shift.lambda_minus() +
                       (shift.lambda_plus() - shift.lambda_minus()) * k / 100.0);

    // First-component inequality bound for a corner (c, d): f_1((c, d)) has the
    // form d - B(c, lambda), so the corner sign condition is d < B (upper
    // corners) or d > B (lower corners), with B recovered from the field.
    auto bound_at = [&](double c, double lambda) {
        return -field.eval(Vec{c, 0.0}, lambda)[0];
    };

    // Constant outer corner (C, d) strictly beyond the tracked branch.
    auto branch_first = [&](double lambda) {
        return model.equilibrium(id).point(lambda)[0];
    };
    double extreme = branch_first(lams.front());
    for (double l : lams)
        extreme = upper ? std::max(extreme, branch_first(l))
                        : std::min(extreme, branch_first(l));
    const double C = upper ? extreme + 0.1 : extreme - 0.1;
    double limit = bound_at(C, lams.front());
    for (double l : lams)
        limit = upper ? std::min(limit, bound_at(C, l)) : std::max(limit, bound_at(C, l));
    if (upper ? !(limit > C + 1e-6) : !(limit < C - 1e-6)) {
        std::ostringstream os;
        os << "no feasible second corner component: first component " << C
           << " against inequality bound " << limit << " across the parameter range";
        throw InequalityFails(os.str());
    }
    const Vec outer{C, 0.5 * (C + limit)};

    // Saddle-side corner from the unstable eigen-offset.
    const NamedEquilibrium& saddle = model.equilibrium("p2");
    const int sign = upper ? +1 : -1;
    auto saddle_at = [&](double lambda) {
        return newton_equilibrium(field, lambda, saddle.point(lambda)).x;
    };

    auto sign_ok_everywhere = [&](const Vec& z) {
        for (double l : lams) {
            Vec f = field.eval(z, l);
            for (int i = 0; i < f.size(); ++i)
                if (!(sign * f[i] > 0.0)) return false;
        }
        return true;
    };

    // Per-sample family first (it nests when the saddle recedes from the
    // protective side), then the constant corner from either frozen limit.
    std::vector<double> lam_k;
    for (double s : grid.s) lam_k.push_back(shift(s));
    {
        std::vector<Vec> sx(grid.s.size()), w(grid.s.size());
        for (size_t k = 0; k < grid.s.size(); ++k) {
            sx[k] = saddle_at(lam_k[k]);
            w[k] = positive_eigenpair(jacobian(field, sx[k], lam_k[k])).second;
        }
        double delta = 1e-2;
        for (int attempt = 0; attempt <= 40; ++attempt, delta *= 0.5) {
            std::vector<Vec> z(grid.s.size());
            bool ok = true;
            for (size_t k = 0; k < grid.s.size() && ok; ++k) {
                z[k] = sx[k] + (sign * delta) * w[k];
                Vec f = field.eval(z[k], lam_k[k]);
                for (int i = 0; i < f.size(); ++i)
                    if (!(sign * f[i] > 0.0)) ok = false;
            }
            // The family must recede (cones grow): for the upper branch the
            // saddle-side corner is the box floor and must be nonincreasing.
            for (size_t k = 0; ok && k + 1 < z.size(); ++k)
                ok = upper ? leq(z[k + 1], z[k], 1e-12) : leq(z[k], z[k + 1], 1e-12);
            if (ok) {
                for (size_t k = 0; k < grid.s.size(); ++k) {
                    grid.lo.push_back(upper ? z[k] : outer);
                    grid.hi.push_back(upper ? outer : z[k]);
                }
                return grid;
            }
        }
    }
    for (double lim : {upper ? shift.lambda_plus() : shift.lambda_minus(),
                       upper ? shift.lambda_minus() : shift.lambda_plus()}) {
        Vec sx = saddle_at(lim);
        EigenOffsetResult off;
        try {
            off = eigen_offset_point(field, lim, sx, sign);
        } catch (const DeltaUnderflow&) {
            continue;
        }
        Vec z = off.z;
        double delta = off.delta;
        for (int attempt = 0; attempt <= 40; ++attempt, delta *= 0.5) {
            z = sx + (sign * delta) * off.w;
            if (sign_ok_everywhere(z)) {
                for (size_t k = 0; k < grid.s.size(); ++k) {
                    grid.lo.push_back(upper ? z : outer);
                    grid.hi.push_back(upper ? outer : z);
                }
                return grid;
            }
        }
    }
    throw ConstructionFailed(
        "no saddle eigen-offset corner satisfies the strict sign conditions across "
        "the parameter range for branch '" + id + "'");
}

}  // namespace rtip
