#include <doctest.h>

#include <cmath>

#include "rtip/eigen.hpp"
#include "rtip/errors.hpp"
#include "rtip/models.hpp"

using namespace rtip;

namespace {

std::vector<ModelSpec> builtins() {
    std::vector<ModelSpec> out;
    for (const auto& name : model_names()) out.push_back(make_model(name));
    return out;
}

double lambda_probe(const ModelSpec& m, int k, int n) {
    double lo = m.default_shift.lambda_minus();
    double hi = m.default_shift.lambda_plus();
    return lo + (hi - lo) * k / (n - 1);
}

}  // namespace

TEST_CASE("closed-form equilibria have residuals at machine precision") {
    for (const auto& m : builtins()) {
        CAPTURE(m.name);
        for (const auto& eq : m.equilibria) {
            CAPTURE(eq.id);
            for (int k = 0; k < 50; ++k) {
                double lam = lambda_probe(m, k, 50);
                Vec f = m.field.eval(eq.point(lam), lam);
                CHECK(norm(f) <= 1e-12 * std::max(1.0, norm(eq.point(lam))));
            }
        }
    }
}

TEST_CASE("declared stability matches the spectrum at both limits") {
    for (const auto& m : builtins()) {
        CAPTURE(m.name);
        for (const auto& eq : m.equilibria) {
            CAPTURE(eq.id);
            for (double lam : {m.default_shift.lambda_minus(),
                               m.default_shift.lambda_plus()}) {
                Spectrum sp = eigen_spectrum(jacobian(m.field, eq.point(lam), lam));
                StabilityLabel lbl = classify_stability(sp);
                if (eq.stable)
                    CHECK(lbl == StabilityLabel::Attracting);
                else
                    CHECK(lbl != StabilityLabel::Attracting);
            }
        }
    }
}

TEST_CASE("analytic jacobians agree with central differences") {
    Rng rng(99);
    for (const auto& m : builtins()) {
        CAPTURE(m.name);
        REQUIRE(static_cast<bool>(m.field.jac));
        for (int trial = 0; trial < 100; ++trial) {
            int n = m.field.dim;
            Vec x(n, 0.0);
            // sample around the interesting part of state space
            double scale = m.name == "lorenz63" ? 20.0 : 2.0;
            for (int i = 0; i < n; ++i) x[i] = rng.uniform(-scale, scale);
            double lam = lambda_probe(m, static_cast<int>(rng.next_u64() % 100), 100);
            Mat Ja = m.field.jac(x, lam);
            double err = 0.0, mag = 1.0;
            for (int j = 0; j < n; ++j) {
                double h = 1e-6 * std::max(1.0, std::abs(x[j]));
                Vec xp = x, xm = x;
                xp[j] += h;
                xm[j] -= h;
                Vec fp = m.field.eval(xp, lam), fm = m.field.eval(xm, lam);
                for (int i = 0; i < n; ++i) {
                    double fd = (fp[i] - fm[i]) / (2.0 * h);
                    err = std::max(err, std::abs(Ja(i, j) - fd));
                    mag = std::max(mag, std::abs(Ja(i, j)));
                }
            }
            CHECK(err <= 1e-5 * mag);
        }
    }
}

TEST_CASE("model registry round-trips and rejects unknown names") {
    auto names = model_names();
    CHECK(names.size() == 4);
    for (const auto& n : names) CHECK(make_model(n).name == n);
    CHECK_THROWS_AS(make_model("not-a-model"), ConfigError);
    ModelSpec m = lorenz63();
    CHECK_THROWS_AS(m.equilibrium("nope"), ConfigError);
}

TEST_CASE("coefficient maps evaluate by Horner and describe themselves") {
    Polynomial p{{1.0, -2.0, 0.5}};
    CHECK(p(0.0) == 1.0);
    CHECK(p(2.0) == doctest::Approx(1.0 - 4.0 + 2.0));
    CHECK(p(-1.0) == doctest::Approx(1.0 + 2.0 + 0.5));
    CHECK(p.describe() == "poly(1, -2, 0.5)");
}

TEST_CASE("cubic family enforces its parameter regime") {
    // |a| < sqrt(b+1) fails past lambda = 1/3 when a = 3 lambda, b = 0
    CHECK_THROWS_AS(monotone_cubic(Polynomial{{0.0, 3.0}}, Polynomial{{0.0, 0.0}},
                                   tanh_shift(0.0, 1.0, 0.0, 1.0)),
                    ParameterRegimeViolation);
    // b dips below -1
    CHECK_THROWS_AS(monotone_cubic(Polynomial{{0.0, 0.0}}, Polynomial{{0.0, -1.5}},
                                   tanh_shift(0.0, 1.0, 0.0, 1.0)),
                    ParameterRegimeViolation);
    // the shipped default regime is fine
    CHECK(monotone_cubic_default().monotone);
}

TEST_CASE("cubic field is odd under state reflection with a negated") {
    ParameterShift sh = tanh_shift(0.0, 1.0, 0.0, 1.0);
    ModelSpec plus = monotone_cubic(Polynomial{{0.0, 0.5}}, Polynomial{{0.0, 1.0}}, sh);
    ModelSpec minus = monotone_cubic(Polynomial{{0.0, -0.5}}, Polynomial{{0.0, 1.0}}, sh);
    Rng rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        Vec x{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        double lam = rng.uniform(0.0, 1.0);
        Vec f = plus.field.eval(x, lam);
        Vec g = minus.field.eval(Vec{-x[0], -x[1]}, lam);
        CHECK(f[0] == doctest::Approx(-g[0]).epsilon(1e-13));
        CHECK(f[1] == doctest::Approx(-g[1]).epsilon(1e-13));
    }
}

TEST_CASE("fold normal form keeps its two branches one unit from the ramp") {
    ModelSpec m = saddle_node_1d();
    CHECK(m.field.dim == 1);
    for (double lam : {0.0, 0.7, 2.0}) {
        CHECK(m.equilibrium("stable").point(lam)[0] == doctest::Approx(lam + 1.0));
        CHECK(m.equilibrium("unstable").point(lam)[0] == doctest::Approx(lam - 1.0));
    }
    CHECK(m.monotone);
}

TEST_CASE("cubic diagonal equilibria sit at the coefficient roots") {
    ModelSpec m = monotone_cubic(Polynomial{{0.0, 2.0}}, Polynomial{{0.0, 8.0}},
                                 tanh_shift(0.0, 1.0, 0.0, 1.0));
    for (double lam : {0.0, 0.5, 1.0}) {
        double root = std::sqrt(8.0 * lam + 1.0);
        CHECK(m.equilibrium("p1").point(lam)[0] == doctest::Approx(-root).epsilon(1e-12));
        CHECK(m.equilibrium("p2").point(lam)[0] == doctest::Approx(2.0 * lam).epsilon(1e-12));
        CHECK(m.equilibrium("p3").point(lam)[0] == doctest::Approx(root).epsilon(1e-12));
        // both coordinates coincide on the diagonal
        for (const char* id : {"p1", "p2", "p3"}) {
            Vec p = m.equilibrium(id).point(lam);
            CHECK(p[0] == p[1]);
        }
    }
}
