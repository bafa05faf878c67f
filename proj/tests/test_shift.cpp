#include <doctest.h>

#include <cmath>

#include "rtip/errors.hpp"
#include "rtip/shift.hpp"

using namespace rtip;

TEST_CASE("tanh shift matches high-precision reference values") {
    ParameterShift sh = tanh_shift(0.0, 0.65, 0.0, 1.0);
    CHECK(sh(5.0) == doctest::Approx(0.64997049138534342).epsilon(1e-15));
    CHECK(sh(-5.0) == doctest::Approx(2.9508614656582356e-5).epsilon(1e-12));
    CHECK(sh(0.0) == doctest::Approx(0.325).epsilon(1e-15));
    CHECK(sh(40.0) == doctest::Approx(0.65).epsilon(1e-14));
    CHECK(sh(-40.0) == doctest::Approx(0.0));
    CHECK(sh.lambda_minus() == 0.0);
    CHECK(sh.lambda_plus() == 0.65);
}

TEST_CASE("tanh shift is monotone with a finite-difference-consistent slope") {
    ParameterShift sh = tanh_shift(15.0, 23.0, 0.5, 2.0);
    double prev = sh(-30.0);
    for (double s = -29.5; s <= 30.0; s += 0.5) {
        double cur = sh(s);
        CHECK(cur >= prev);
        prev = cur;
    }
    for (double s : {-3.0, -0.5, 0.5, 1.7, 6.0}) {
        double h = 1e-6;
        double fd = (sh(s + h) - sh(s - h)) / (2.0 * h);
        CHECK(sh.slope(s) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("saturation point brackets both tails and shrinks with looser eps") {
    ParameterShift sh = tanh_shift(0.0, 1.0, 2.0, 1.5);  // off-center on purpose
    for (double eps : {1e-4, 1e-6, 1e-8}) {
        double S = sh.saturation_point(eps);
        CHECK(S > 0.0);
        CHECK(std::abs(sh(S) - 1.0) < eps);
        CHECK(std::abs(sh(-S) - 0.0) < eps);
    }
    CHECK(sh.saturation_point(1e-4) < sh.saturation_point(1e-8));
    // symmetric unit shift: the crossing is atanh(1 - 2 eps)
    ParameterShift unit = tanh_shift(0.0, 1.0, 0.0, 1.0);
    double S = unit.saturation_point(1e-6);
    CHECK(std::abs(unit(S) - 1.0) < 1e-6);
    CHECK(S >= 6.9077547789818871 - 1e-9);  // no earlier point qualifies
    CHECK(S < 8.0);
}

TEST_CASE("reparametrization slope obeys the five-piece profile") {
    const double u = -2.0, v = 3.0, M = 40.0, eta = 0.25;
    Reparametrization sg = build_reparametrization(u, v, M, eta);
    const double L = 2.0 * eta / (M + 1.0);
    CHECK(sg.ramp_in_begin() == doctest::Approx(u));
    CHECK(sg.ramp_in_end() == doctest::Approx(u + L).epsilon(1e-14));
    CHECK(sg.ramp_out_end() - sg.ramp_out_begin() == doctest::Approx(L).epsilon(1e-12));

    int in_identity = 0, in_plateau = 0, in_ramp = 0;
    const int kSamples = 10000;
    const double lo = u - 1.0, hi = sg.ramp_out_end() + 1.0;
    for (int i = 0; i <= kSamples; ++i) {
        double s = lo + (hi - lo) * i / kSamples;
        double sl = sg.slope(s);
        if (s <= sg.ramp_in_begin() || s >= sg.ramp_out_end()) {
            CHECK(sl == 1.0);
            ++in_identity;
        } else if (s >= sg.ramp_in_end() && s <= sg.ramp_out_begin()) {
            CHECK(sl == doctest::Approx(M).epsilon(1e-14));
            ++in_plateau;
        } else {
            CHECK(sl >= 1.0 - 1e-12);
            CHECK(sl <= M + 1e-12);
            ++in_ramp;
        }
        // slope must equal the derivative of the map itself
        double h = 1e-7 * std::max(1.0, std::abs(s));
        double fd = (sg(s + h) - sg(s - h)) / (2.0 * h);
        CHECK(sl == doctest::Approx(fd).epsilon(5e-5));
    }
    CHECK(in_identity > 0);
    CHECK(in_plateau > 0);
    CHECK(in_ramp > 0);

    // ramps are monotone in slope
    for (int i = 1; i < 50; ++i) {
        double a = sg.ramp_in_begin() + L * (i - 1) / 50.0;
        double b = sg.ramp_in_begin() + L * i / 50.0;
        CHECK(sg.slope(a) <= sg.slope(b) + 1e-12);
        double c = sg.ramp_out_begin() + L * (i - 1) / 50.0;
        double d = sg.ramp_out_begin() + L * i / 50.0;
        CHECK(sg.slope(c) + 1e-12 >= sg.slope(d));
    }
}

TEST_CASE("reparametrization image anchors: each ramp advances exactly eta") {
    const double u = 0.0, v = 10.0, M = 250.0, eta = 0.5;
    Reparametrization sg = build_reparametrization(u, v, M, eta);
    CHECK(sg(sg.ramp_in_begin()) == doctest::Approx(u).epsilon(1e-13));
    CHECK(sg(sg.ramp_in_end()) == doctest::Approx(u + eta).epsilon(1e-12));
    CHECK(sg(sg.ramp_out_begin()) == doctest::Approx(v - eta).epsilon(1e-12));
    CHECK(sg(sg.ramp_out_end()) == doctest::Approx(v).epsilon(1e-12));
    CHECK(sg.shift_amount() == doctest::Approx(v - sg.ramp_out_end()).epsilon(1e-12));
    // identity before, shifted identity after
    CHECK(sg(-3.0) == -3.0);
    CHECK(sg(sg.ramp_out_end() + 2.0) == doctest::Approx(v + 2.0).epsilon(1e-12));
}

TEST_CASE("map increment equals the quadrature of its slope") {
    const double u = -1.0, v = 2.0, M = 17.0, eta = 0.3;
    Reparametrization sg = build_reparametrization(u, v, M, eta);
    double a = -1.5, b = sg.ramp_out_end() + 0.5;
    // composite Simpson over a grid fine enough for the quintic pieces
    const int n = 20000;  // even
    double h = (b - a) / n;
    double acc = sg.slope(a) + sg.slope(b);
    for (int i = 1; i < n; ++i) acc += sg.slope(a + i * h) * (i % 2 ? 4.0 : 2.0);
    double integral = acc * h / 3.0;
    CHECK(sg(b) - sg(a) == doctest::Approx(integral).epsilon(1e-10));
}

TEST_CASE("second differences stay bounded through the knots") {
    const double u = 0.0, v = 4.0, M = 30.0, eta = 0.2;
    Reparametrization sg = build_reparametrization(u, v, M, eta);
    // C^2 at the knots: the centered second difference has no jump spikes
    for (double knot : {sg.ramp_in_begin(), sg.ramp_in_end(), sg.ramp_out_begin(),
                        sg.ramp_out_end()}) {
        double h = 1e-5;
        double left = (sg.slope(knot - h) - sg.slope(knot - 3.0 * h)) / (2.0 * h);
        double right = (sg.slope(knot + 3.0 * h) - sg.slope(knot + h)) / (2.0 * h);
        // both one-sided slope derivatives approach the same (zero) limit
        CHECK(std::abs(left - right) < 5e-2 * std::max(1.0, M));
        CHECK(std::abs(sg.slope(knot + h) - sg.slope(knot - h)) < 1e-3 * M);
    }
}

TEST_CASE("unit fast slope gives the identity map") {
    Reparametrization sg = build_reparametrization(-1.0, 1.0, 1.0, 0.4);
    for (double s = -3.0; s <= 3.0; s += 0.1) {
        CHECK(sg(s) == doctest::Approx(s).epsilon(1e-14));
        CHECK(sg.slope(s) == 1.0);
    }
}

TEST_CASE("reparametrization parameter validation") {
    CHECK_THROWS_AS(build_reparametrization(2.0, 1.0, 5.0, 0.1), InvalidInterval);
    CHECK_THROWS_AS(build_reparametrization(0.0, 1.0, 0.5, 0.1), InvalidInterval);
    CHECK_THROWS_AS(build_reparametrization(0.0, 1.0, 5.0, -0.1), InvalidInterval);
    CHECK_THROWS_AS(build_reparametrization(0.0, 1.0, 5.0, 0.5), DegenerateWindow);
    CHECK_THROWS_AS(build_reparametrization(0.0, 1.0, 5.0, 0.7), DegenerateWindow);
}

TEST_CASE("composition keeps the limits and obeys the chain rule") {
    ParameterShift base = tanh_shift(15.0, 23.0, 0.0, 1.0);
    Reparametrization sg = build_reparametrization(-2.0, 2.0, 25.0, 0.2);
    ParameterShift comp = compose(base, sg);
    CHECK(comp.lambda_minus() == base.lambda_minus());
    CHECK(comp.lambda_plus() == base.lambda_plus());
    CHECK(comp(-50.0) == doctest::Approx(base(-50.0)).epsilon(1e-14));
    CHECK(comp(50.0) == doctest::Approx(23.0).epsilon(1e-9));
    REQUIRE(comp.spec().sigma.has_value());
    CHECK(comp.spec().sigma->m == 25.0);
    for (double s : {-3.0, -1.99, -1.5, 0.0, 1.5, 2.5}) {
        CHECK(comp(s) == doctest::Approx(base(sg(s))).epsilon(1e-14));
        double h = 1e-7;
        double fd = (comp(s + h) - comp(s - h)) / (2.0 * h);
        CHECK(comp.slope(s) == doctest::Approx(fd).epsilon(1e-5));
    }
    // the composed shift saturates no later than the base
    CHECK(comp.saturation_point(1e-6) <= base.saturation_point(1e-6) + 1e-9);
}
