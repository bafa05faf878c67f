// Order machinery: componentwise relations, cooperativity checks, inflow
// certificates for order regions, eigen-offset corners, the order-based
// tipping guarantee / exclusion pair, and the forward-inflowing-stability
// certificate with its cubic box builder.

#include <doctest.h>

#include <cmath>
#include <vector>

#include "rtip/errors.hpp"
#include "rtip/models.hpp"
#include "rtip/monotone.hpp"

using namespace rtip;

namespace {

ModelSpec cubic_with(double ca, double cb) {
    return monotone_cubic(Polynomial{{0.0, ca}}, Polynomial{{0.0, cb}},
                          tanh_shift(0.0, 1.0, 0.0, 1.0));
}

// Closed-form branch sampled on a caller-chosen s grid. Used to probe the
// scan logic with grids that stop short of saturation.
EquilibriumPath sampled_branch(const ModelSpec& m, const std::string& id,
                               const std::vector<double>& ss) {
    const ParameterShift& sh = m.default_shift;
    const NamedEquilibrium& eq = m.equilibrium(id);
    EquilibriumPath p;
    p.id = id;
    for (double s : ss) {
        PathSample smp;
        smp.s = s;
        smp.lambda = sh(s);
        smp.x = eq.point(smp.lambda);
        p.samples.push_back(smp);
    }
    p.x_minus = eq.point(sh.lambda_minus());
    p.x_plus = eq.point(sh.lambda_plus());
    return p;
}

VectorFieldFamily skew_linear() {
    // linear, attracting, but not cooperative: df1/dx2 = -2
    VectorFieldFamily f;
    f.name = "skew-linear";
    f.dim = 2;
    f.escape_radius = 1e6;
    f.eval = [](const Vec& x, double) { return Vec{-x[0] - 2.0 * x[1], -x[1]}; };
    f.jac = [](const Vec&, double) {
        Mat j(2, 2);
        j(0, 0) = -1.0;
        j(0, 1) = -2.0;
        j(1, 0) = 0.0;
        j(1, 1) = -1.0;
        return j;
    };
    return f;
}

}  // namespace

TEST_CASE("componentwise order relations") {
    CHECK(order_relation(Vec{1.0, 2.0}, Vec{1.0, 2.0}) == OrderRelation::Equal);
    CHECK(order_relation(Vec{1.0, 2.0}, Vec{1.0, 3.0}) == OrderRelation::Less);
    CHECK(order_relation(Vec{1.0, 2.0}, Vec{2.0, 3.0}) == OrderRelation::StrictlyLess);
    CHECK(order_relation(Vec{2.0, 3.0}, Vec{1.0, 2.0}) == OrderRelation::StrictlyGreater);
    CHECK(order_relation(Vec{1.0, 3.0}, Vec{1.0, 2.0}) == OrderRelation::Greater);
    CHECK(order_relation(Vec{1.0, 3.0}, Vec{2.0, 2.0}) == OrderRelation::Incomparable);

    // the margin decides whether a tiny difference counts
    CHECK(order_relation(Vec{1.0, 2.0}, Vec{1.0 + 1e-10, 2.0}, 1e-9) == OrderRelation::Equal);
    CHECK(order_relation(Vec{1.0, 2.0}, Vec{1.0 + 1e-10, 2.0}, 1e-12) == OrderRelation::Less);

    CHECK_THROWS_AS((void)order_relation(Vec{1.0}, Vec{1.0, 2.0}), GridMismatch);

    CHECK(to_string(OrderRelation::StrictlyLess) == doctest::String("StrictlyLess"));
    CHECK(to_string(OrderRelation::Incomparable) == doctest::String("Incomparable"));
}

TEST_CASE("leq and strictly_less honor slack and margin") {
    CHECK(leq(Vec{1.0, 2.0}, Vec{1.0, 2.0}));
    CHECK_FALSE(leq(Vec{1.0, 2.0 + 1e-9}, Vec{1.0, 2.0}));
    CHECK(leq(Vec{1.0, 2.0 + 1e-9}, Vec{1.0, 2.0}, 1e-8));

    CHECK(strictly_less(Vec{0.0, 0.0}, Vec{1e-8, 1e-8}, 1e-9));
    CHECK_FALSE(strictly_less(Vec{0.0, 0.0}, Vec{1e-8, 1e-8}, 1e-7));
    CHECK_FALSE(strictly_less(Vec{0.0, 5.0}, Vec{1.0, 5.0}, 1e-9));
}

TEST_CASE("order boxes: membership and validation") {
    OrderBox b = OrderBox::bounded(Vec{0.0, 0.0}, Vec{1.0, 2.0});
    CHECK(b.contains(Vec{0.5, 1.0}));
    CHECK(b.contains(Vec{0.0, 2.0}));
    CHECK_FALSE(b.contains(Vec{1.1, 1.0}));
    CHECK(b.contains(Vec{1.05, 1.0}, 0.1));
    CHECK(b.contains_interior(Vec{0.5, 1.0}, 1e-6));
    CHECK_FALSE(b.contains_interior(Vec{0.0, 1.0}, 1e-6));

    OrderBox lower = OrderBox::lower_set(Vec{1.0, 1.0});
    CHECK(lower.contains(Vec{-50.0, 0.9}));
    CHECK_FALSE(lower.contains(Vec{0.0, 1.1}));

    OrderBox upper = OrderBox::upper_set(Vec{1.0, 1.0});
    CHECK(upper.contains(Vec{50.0, 1.1}));
    CHECK_FALSE(upper.contains(Vec{0.9, 2.0}));

    CHECK_THROWS_AS((void)OrderBox::bounded(Vec{0.0, 0.0}, Vec{1.0, 0.0}), InvalidInterval);
    CHECK_THROWS_AS((void)OrderBox::bounded(Vec{0.0}, Vec{1.0, 1.0}), InvalidInterval);
}

TEST_CASE("cooperativity check: cubic passes, Lorenz fails with a witness") {
    ModelSpec cubic = monotone_cubic_default();
    MonotoneCheck ok = check_monotone(cubic.field, Vec{-2.0, -2.0}, Vec{2.0, 2.0},
                                      {0.0, 1.0});
    CHECK(ok.monotone);
    CHECK(ok.samples == 125);  // 5^2 spatial grid x 5 parameter values

    ModelSpec lorenz = make_model("lorenz63");
    MonotoneCheck bad = check_monotone(lorenz.field, Vec{-1.0, -1.0, -1.0},
                                       Vec{1.0, 1.0, 1.0}, {15.0, 23.0});
    CHECK_FALSE(bad.monotone);
    // first grid corner (-1,-1,-1): d(xy - bz)/dx = y = -1
    CHECK(bad.witness_row == 2);
    CHECK(bad.witness_col == 0);
    CHECK(bad.witness_entry == doctest::Approx(-1.0));
    CHECK(bad.witness_lambda == 15.0);
    CHECK(bad.samples == 1);

    CHECK_THROWS_AS((void)check_monotone(cubic.field, Vec{0.0}, Vec{1.0, 1.0}, {0.0, 1.0}),
                    GridMismatch);
}

TEST_CASE("inflow certificates for order boxes on the frozen cubic") {
    ModelSpec m = monotone_cubic_default();  // a = 0.5, b = 1 at lambda = 1

    SUBCASE("bounded box strictly around the upper attractor") {
        OrderBox box = OrderBox::bounded(Vec{1.0, 0.9}, Vec{2.0, 2.2});
        InflowCertificate cert = inflow_box(m.field, 1.0, box);
        CHECK(cert.holds);
        CHECK(cert.corner_values.size() == 4);
        CHECK(cert.boundary_samples == 80);  // 4 faces x 10 * dim samples
        // upper-corner components negative, lower-corner components positive
        CHECK(cert.corner_values[0] < 0.0);
        CHECK(cert.corner_values[1] < 0.0);
        CHECK(cert.corner_values[2] > 0.0);
        CHECK(cert.corner_values[3] > 0.0);
    }

    SUBCASE("upper order cone on the orderable variant") {
        ModelSpec steep = cubic_with(2.0, 8.0);
        OrderBox cone = OrderBox::upper_set(Vec{2.5, 2.4});
        InflowCertificate cert = inflow_box(steep.field, 1.0, cone);
        CHECK(cert.holds);
        CHECK(cert.corner_values.size() == 2);
        CHECK(cert.boundary_samples == 40);
    }

    SUBCASE("a corner sitting on the diagonal fails the strict sign condition") {
        // f2 = x1 - x2 vanishes at the corner (2, 2)
        OrderBox box = OrderBox::bounded(Vec{1.0, 1.0}, Vec{2.0, 2.0});
        CHECK_THROWS_AS((void)inflow_box(m.field, 1.0, box), SignConditionFailed);
    }

    SUBCASE("an outflowing box is rejected") {
        OrderBox box = OrderBox::bounded(Vec{2.0, 2.5}, Vec{3.0, 3.5});
        CHECK_THROWS_AS((void)inflow_box(m.field, 1.0, box), SignConditionFailed);
    }

    SUBCASE("face sampling catches a non-cooperative field with good corners") {
        // corners pass (f1 = -x1 - 2 x2 has the right sign at both), but on
        // the faces the skew term flips f1's sign
        OrderBox box = OrderBox::bounded(Vec{-1.0, -1.0}, Vec{1.0, 1.0});
        CHECK_THROWS_AS((void)inflow_box(skew_linear(), 0.0, box), SignConditionFailed);
    }
}

TEST_CASE("inflow certificates are sound: passing boxes really deflect samples") {
    // Independent spot check of the corner argument: whenever the certificate
    // is granted, freshly drawn boundary points must flow inward. Random
    // boxes, many of which are rejected; the granted ones are re-sampled with
    // a separate stream.
    ModelSpec cubic = monotone_cubic_default();
    ModelSpec fold = make_model("saddle-node-1d");
    Rng rng(42);
    Rng probe(4242);

    int granted = 0;
    for (int trial = 0; trial < 150; ++trial) {
        bool use_cubic = (trial % 2) == 0;
        const VectorFieldFamily& field = use_cubic ? cubic.field : fold.field;
        const double lambda = rng.uniform(0.0, 1.0);
        const int n = field.dim;

        Vec center = use_cubic
                         ? Vec{std::sqrt(lambda + 1.0), std::sqrt(lambda + 1.0)}
                         : Vec{lambda + 1.0};
        Vec lo(n), hi(n);
        for (int i = 0; i < n; ++i) {
            lo[i] = center[i] - rng.uniform(0.05, 1.5);
            hi[i] = center[i] + rng.uniform(0.05, 1.5);
        }
        OrderBox box = OrderBox::bounded(lo, hi);

        InflowCertificate cert;
        try {
            cert = inflow_box(field, lambda, box, 7);
        } catch (const SignConditionFailed&) {
            continue;
        }
        REQUIRE(cert.holds);
        ++granted;

        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < 10 * n; ++k) {
                Vec x(n);
                for (int j = 0; j < n; ++j) x[j] = probe.uniform(lo[j], hi[j]);
                x[i] = hi[i];
                CHECK(field.eval(x, lambda)[i] < 0.0);
                x[i] = lo[i];
                CHECK(field.eval(x, lambda)[i] > 0.0);
            }
        }
    }
    // the generator must actually exercise the granted branch
    CHECK(granted >= 10);
}

TEST_CASE("eigen offset points leave the saddle along the unstable cone") {
    ModelSpec m = cubic_with(2.0, 8.0);
    const double lambda = 1.0;
    Vec saddle = m.equilibrium("p2").point(lambda);  // (2, 2)

    // J = [[4, 1], [1, -1]]: positive eigenvalue (3 + sqrt(29)) / 2
    const double mu_expected = (3.0 + std::sqrt(29.0)) / 2.0;

    EigenOffsetResult up = eigen_offset_point(m.field, lambda, saddle, +1);
    CHECK(up.mu == doctest::Approx(mu_expected).epsilon(1e-12));
    CHECK(up.w[0] > 0.0);
    CHECK(up.w[1] > 0.0);
    CHECK(norm(up.w) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(up.delta == 1e-2);
    CHECK(up.halvings == 0);
    for (int i = 0; i < 2; ++i)
        CHECK(up.z[i] == doctest::Approx(saddle[i] + up.delta * up.w[i]).epsilon(1e-14));
    Vec fup = m.field.eval(up.z, lambda);
    CHECK(fup[0] > 0.0);
    CHECK(fup[1] > 0.0);

    EigenOffsetResult down = eigen_offset_point(m.field, lambda, saddle, -1);
    Vec fdown = m.field.eval(down.z, lambda);
    CHECK(fdown[0] < 0.0);
    CHECK(fdown[1] < 0.0);

    CHECK_THROWS_AS((void)eigen_offset_point(m.field, lambda, saddle, 2), ConfigError);

    SUBCASE("no positive eigenvalue") {
        VectorFieldFamily stable;
        stable.name = "stable-diag";
        stable.dim = 2;
        stable.eval = [](const Vec& x, double) { return Vec{-x[0], -2.0 * x[1]}; };
        CHECK_THROWS_AS((void)eigen_offset_point(stable, 0.0, Vec{0.0, 0.0}, +1),
                        NoPositiveEigenpair);
    }

    SUBCASE("positive eigenvalue with a mixed-sign eigenvector") {
        VectorFieldFamily mixed;
        mixed.name = "mixed-vector";
        mixed.dim = 2;
        mixed.eval = [](const Vec& x, double) {
            return Vec{x[0] - 2.0 * x[1], -2.0 * x[0] + x[1]};
        };
        CHECK_THROWS_AS((void)eigen_offset_point(mixed, 0.0, Vec{0.0, 0.0}, +1),
                        NoPositiveEigenpair);
    }
}

TEST_CASE("guaranteed tipping scan over the branch grids") {
    SUBCASE("orderable coefficients: an interior window pair is found") {
        ModelSpec m = cubic_with(2.0, 8.0);
        EquilibriumPath p3 = continue_named_path(m, m.default_shift, "p3");
        EquilibriumPath p2 = continue_named_path(m, m.default_shift, "p2");
        TippingGuarantee g = guaranteed_tipping_scan(m.field, m.default_shift, p3, p2);
        CHECK(g.finding == TippingGuaranteeFinding::TippingGuaranteed);
        CHECK(g.s_from < g.s_to);
        CHECK_FALSE(g.detail.empty());
        CHECK(to_string(g.finding) == doctest::String("TippingGuaranteed"));
    }

    SUBCASE("default coefficients: no pair and no limit comparison holds") {
        ModelSpec m = monotone_cubic_default();
        EquilibriumPath p3 = continue_named_path(m, m.default_shift, "p3");
        EquilibriumPath p2 = continue_named_path(m, m.default_shift, "p2");
        TippingGuarantee g = guaranteed_tipping_scan(m.field, m.default_shift, p3, p2);
        CHECK(g.finding == TippingGuaranteeFinding::NotApplicable);
        CHECK(std::isnan(g.s_from));
        CHECK(std::isnan(g.s_to));
    }

    SUBCASE("limits beyond each other while the sampled grid is not: large-rate case") {
        // sample only the unsaturated middle of the shift, where the tracked
        // branch stays clear of the saddle; the frozen limits still cross
        ModelSpec m = cubic_with(1.1, 8.0);
        std::vector<double> ss = {-1.0, -0.5, 0.0, 0.5, 1.0};
        EquilibriumPath p3 = sampled_branch(m, "p3", ss);
        EquilibriumPath p2 = sampled_branch(m, "p2", ss);
        TippingGuarantee g = guaranteed_tipping_scan(m.field, m.default_shift, p3, p2);
        CHECK(g.finding == TippingGuaranteeFinding::TippingGuaranteedLargeR);
    }

    SUBCASE("non-cooperative field is rejected") {
        ModelSpec m = homoclinic2d();
        EquilibriumPath focus = continue_named_path(m, m.default_shift, "right_focus");
        EquilibriumPath saddle = continue_named_path(m, m.default_shift, "saddle");
        CHECK_THROWS_AS(
            (void)guaranteed_tipping_scan(m.field, m.default_shift, focus, saddle),
            HypothesisFailed);
    }
}

TEST_CASE("rate-independent exclusion certificates") {
    SUBCASE("default cubic: constant corner from the far end") {
        ModelSpec m = monotone_cubic_default();
        EquilibriumPath p3 = continue_named_path(m, m.default_shift, "p3");
        EquilibriumPath p2 = continue_named_path(m, m.default_shift, "p2");
        EquilibriumPath p1 = continue_named_path(m, m.default_shift, "p1");
        NoTippingCertificate cert =
            no_tipping_check(m.field, m.default_shift, p3, p2, p1);
        CHECK(cert.excluded_destination == "p1");
        CHECK(cert.variant == "constant-corner");
        CHECK(cert.delta == 1e-2);
        CHECK(cert.samples == 201);
        CHECK_FALSE(cert.detail.empty());
    }

    SUBCASE("descending saddle: the offset family itself nests") {
        ModelSpec m = cubic_with(-0.5, 1.0);
        EquilibriumPath p3 = continue_named_path(m, m.default_shift, "p3");
        EquilibriumPath p2 = continue_named_path(m, m.default_shift, "p2");
        EquilibriumPath p1 = continue_named_path(m, m.default_shift, "p1");
        NoTippingCertificate cert =
            no_tipping_check(m.field, m.default_shift, p3, p2, p1);
        CHECK(cert.variant == "nested-family");
        CHECK(cert.excluded_destination == "p1");
    }

    SUBCASE("fixed saddle with a rotating eigenvector: constant corner again") {
        ModelSpec m = cubic_with(0.0, 1.0);
        EquilibriumPath p3 = continue_named_path(m, m.default_shift, "p3");
        EquilibriumPath p2 = continue_named_path(m, m.default_shift, "p2");
        EquilibriumPath p1 = continue_named_path(m, m.default_shift, "p1");
        NoTippingCertificate cert =
            no_tipping_check(m.field, m.default_shift, p3, p2, p1);
        CHECK(cert.variant == "constant-corner");
    }

    SUBCASE("a branch on the same side as the tracked one cannot be excluded") {
        ModelSpec m = monotone_cubic_default();
        EquilibriumPath p3 = continue_named_path(m, m.default_shift, "p3");
        EquilibriumPath p2 = continue_named_path(m, m.default_shift, "p2");
        CHECK_THROWS_AS((void)no_tipping_check(m.field, m.default_shift, p3, p2, p3),
                        HypothesisFailed);
    }

    SUBCASE("orderable coefficients admit no exclusion certificate") {
        ModelSpec m = cubic_with(2.0, 8.0);
        EquilibriumPath p3 = continue_named_path(m, m.default_shift, "p3");
        EquilibriumPath p2 = continue_named_path(m, m.default_shift, "p2");
        EquilibriumPath p1 = continue_named_path(m, m.default_shift, "p1");
        CHECK_THROWS_AS((void)no_tipping_check(m.field, m.default_shift, p3, p2, p1),
                        ConstructionFailed);
    }
}

TEST_CASE("guarantee and exclusion are mutually exclusive across coefficient choices") {
    struct Case {
        double ca, cb;
    };
    std::vector<Case> cases = {{0.5, 1.0}, {2.0, 8.0}, {0.0, 1.0}, {-0.5, 1.0}, {1.0, 3.0}};

    for (const Case& c : cases) {
        CAPTURE(c.ca);
        CAPTURE(c.cb);
        ModelSpec m = cubic_with(c.ca, c.cb);
        EquilibriumPath p3 = continue_named_path(m, m.default_shift, "p3");
        EquilibriumPath p2 = continue_named_path(m, m.default_shift, "p2");
        EquilibriumPath p1 = continue_named_path(m, m.default_shift, "p1");

        bool guaranteed = false;
        try {
            TippingGuarantee g = guaranteed_tipping_scan(m.field, m.default_shift, p3, p2);
            guaranteed = g.finding != TippingGuaranteeFinding::NotApplicable;
        } catch (const Error&) {
        }

        bool certified = false;
        try {
            (void)no_tipping_check(m.field, m.default_shift, p3, p2, p1);
            certified = true;
        } catch (const Error&) {
        }

        CHECK_FALSE((guaranteed && certified));
    }
}

TEST_CASE("forward-inflowing-stability certificate on the protected cubic") {
    ModelSpec m = monotone_cubic_default();
    EquilibriumPath p3 = continue_named_path(m, m.default_shift, "p3");
    FisBoxGrid grid = build_fis_boxes_cubic(m, m.default_shift, "p3", 41);
    REQUIRE(grid.size() == 41);

    FISCertificate cert = verify_fis(m.field, m.default_shift, p3, grid, true);
    CHECK(cert.holds);
    CHECK(cert.boxes == 41);
    CHECK(cert.path_id == "p3");
    CHECK(cert.non_rigorous);
    REQUIRE(cert.conditions.size() == 5);
    CHECK(cert.conditions[0].name == "path-interior");
    CHECK(cert.conditions[1].name == "nesting");
    CHECK(cert.conditions[2].name == "boundary-inflow");
    CHECK(cert.conditions[3].name == "limits-interior");
    CHECK(cert.conditions[4].name == "basin-inclusion");
    for (const auto& c : cert.conditions) {
        CAPTURE(c.name);
        CHECK(c.holds);
    }

    SUBCASE("the lower branch is protected too") {
        EquilibriumPath p1 = continue_named_path(m, m.default_shift, "p1");
        FisBoxGrid g1 = build_fis_boxes_cubic(m, m.default_shift, "p1", 41);
        FISCertificate c1 = verify_fis(m.field, m.default_shift, p1, g1, true);
        CHECK(c1.holds);
    }

    SUBCASE("shrinking one interior box breaks the nesting condition") {
        FisBoxGrid broken = grid;
        Vec& lo = broken.lo[20];
        Vec& hi = broken.hi[20];
        for (int i = 0; i < 2; ++i) {
            double w = hi[i] - lo[i];
            lo[i] += 0.02 * w;
            hi[i] -= 0.02 * w;
        }
        FISCertificate c = verify_fis(m.field, m.default_shift, p3, broken, true);
        CHECK_FALSE(c.holds);
        CHECK_FALSE(c.conditions[1].holds);
        CHECK(c.conditions[0].holds);  // the branch is still interior
    }

    SUBCASE("malformed grids are rejected") {
        FisBoxGrid empty;
        CHECK_THROWS_AS((void)verify_fis(m.field, m.default_shift, p3, empty, true),
                        GridMismatch);

        FisBoxGrid ragged;
        ragged.s = {0.0, 1.0};
        ragged.lo = {Vec{0.0, 0.0}};
        ragged.hi = {Vec{1.0, 1.0}, Vec{1.0, 1.0}};
        CHECK_THROWS_AS((void)verify_fis(m.field, m.default_shift, p3, ragged, true),
                        GridMismatch);

        FisBoxGrid unsorted;
        unsorted.s = {1.0, 0.0};
        unsorted.lo = {Vec{0.0, 0.0}, Vec{0.0, 0.0}};
        unsorted.hi = {Vec{2.0, 2.0}, Vec{2.0, 2.0}};
        CHECK_THROWS_AS((void)verify_fis(m.field, m.default_shift, p3, unsorted, true),
                        GridMismatch);

        FisBoxGrid inverted;
        inverted.s = {0.0};
        inverted.lo = {Vec{2.0, 2.0}};
        inverted.hi = {Vec{2.0, 2.0}};
        CHECK_THROWS_AS((void)verify_fis(m.field, m.default_shift, p3, inverted, true),
                        GridMismatch);
    }

    SUBCASE("the builder rejects non-cubic models and unknown branches") {
        ModelSpec fold = make_model("saddle-node-1d");
        CHECK_THROWS_AS((void)build_fis_boxes_cubic(fold, fold.default_shift, "stable"),
                        ConfigError);
        CHECK_THROWS_AS((void)build_fis_boxes_cubic(m, m.default_shift, "p2"), ConfigError);
    }
}

TEST_CASE("certificate failure modes on a box family that leaks") {
    // Constant boxes [0.5, 3.5] under a fold shift to lambda = 2: by the end
    // the repelling branch (lambda - 1 = 1) has entered the box, the lower
    // face points outward, and the lower region drains to -infinity.
    ModelSpec m = make_model("saddle-node-1d");
    ParameterShift shift = tanh_shift(0.0, 2.0, 0.0, 1.0);
    EquilibriumPath stable = continue_named_path(m, shift, "stable");

    FisBoxGrid grid;
    for (double s : {-8.0, -4.0, 0.0, 4.0, 8.0}) {
        grid.s.push_back(s);
        grid.lo.push_back(Vec{0.5});
        grid.hi.push_back(Vec{3.5});
    }

    FISCertificate cert = verify_fis(m.field, shift, stable, grid, true);
    CHECK_FALSE(cert.holds);
    CHECK(cert.conditions[0].holds);        // branch in (1, 3) stays interior
    CHECK(cert.conditions[1].holds);        // constant boxes trivially nest
    CHECK_FALSE(cert.conditions[2].holds);  // f(0.5) < 0 once lambda is large
    CHECK(cert.conditions[3].holds);
    CHECK_FALSE(cert.conditions[4].holds);  // 0.5 lies below the final basin
    CHECK_FALSE(cert.conditions[2].detail.empty());
    CHECK_FALSE(cert.conditions[4].detail.empty());
}
