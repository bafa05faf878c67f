#include "rtip/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rtip/errors.hpp"

namespace rtip {

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::string Polynomial::describe() const {
    std::ostringstream os;
    os << "poly(";
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (i) os << ", ";
        os << coeffs[i];
    }
    os << ")";
    return os.str();
}

const NamedEquilibrium& ModelSpec::equilibrium(const std::string& id) const {
    for (const auto& e : equilibria)
        if (e.id == id) return e;
    throw ConfigError("model '" + name + "' has no equilibrium named '" + id + "'");
}

std::vector<std::string> ModelSpec::stable_ids() const {
    std::vector<std::string> out;
    for (const auto& e : equilibria)
        if (e.stable) out.push_back(e.id);
    return out;
}

ModelSpec lorenz63() {
    constexpr double kSigma = 10.0;
    constexpr double kBeta = 8.0 / 3.0;

    ModelSpec m;
    m.name = "lorenz63";
    m.field.name = "lorenz63";
    m.field.dim = 3;
    m.field.eval = [](const Vec& x, double rho) {
        return Vec{kSigma * (x[1] - x[0]), x[0] * (rho - x[2]) - x[1],
                   x[0] * x[1] - kBeta * x[2]};
    };
    m.field.jac = [](const Vec& x, double rho) {
        Mat j(3, 3);
        j(0, 0) = -kSigma; j(0, 1) = kSigma;  j(0, 2) = 0.0;
        j(1, 0) = rho - x[2]; j(1, 1) = -1.0; j(1, 2) = -x[0];
        j(2, 0) = x[1];       j(2, 1) = x[0]; j(2, 2) = -kBeta;
        return j;
    };
    m.default_shift = tanh_shift(15.0, 23.0, 0.0, 1.0);

    // The nontrivial fixed points exist for rho >= 1 and coincide with the
    // origin at rho = 1. Convention: C1 carries the positive square roots.
    auto wing = [](double rho, double sign) {
        double q = std::sqrt(std::max(0.0, kBeta * (rho - 1.0)));
        return Vec{sign * q, sign * q, rho - 1.0};
    };
    m.equilibria.push_back({"C1", [wing](double rho) { return wing(rho, +1.0); }, true});
    m.equilibria.push_back({"C2", [wing](double rho) { return wing(rho, -1.0); }, true});
    m.equilibria.push_back({"origin", [](double) { return Vec{0.0, 0.0, 0.0}; }, false});
    m.default_path_id = "C1";
    return m;
}

ModelSpec homoclinic2d() {
    ModelSpec m;
    m.name = "homoclinic2d";
    m.field.name = "homoclinic2d";
    m.field.dim = 2;
    m.field.escape_radius = 100.0;
    // In the co-moving coordinate u = x - lambda the system has a pair of
    // attracting foci at u = +-1/sqrt(2) whose basins are the open loops of
    // G(u, y) = u^2 - u^4 - y^2 = 0, and a saddle at u = 0 on both loop
    // boundaries. The y-damping term is -y * G.
    m.field.eval = [](const Vec& x, double lambda) {
        double u = x[0] - lambda, y = x[1];
        double g = u * u - u * u * u * u - y * y;
        return Vec{-y, -u + 2.0 * u * u * u - y * g};
    };
    m.field.jac = [](const Vec& x, double lambda) {
        double u = x[0] - lambda, y = x[1];
        Mat j(2, 2);
        j(0, 0) = 0.0;
        j(0, 1) = -1.0;
        j(1, 0) = -1.0 + 6.0 * u * u - y * (2.0 * u - 4.0 * u * u * u);
        j(1, 1) = -(u * u - u * u * u * u - y * y) + 2.0 * y * y;
        return j;
    };
    m.default_shift = tanh_shift(0.0, 0.65, 0.0, 1.0);

    const double h = 1.0 / std::sqrt(2.0);
    m.equilibria.push_back(
        {"right_focus", [h](double l) { return Vec{l + h, 0.0}; }, true});
    m.equilibria.push_back(
        {"left_focus", [h](double l) { return Vec{l - h, 0.0}; }, true});
    m.equilibria.push_back({"saddle", [](double l) { return Vec{l, 0.0}; }, false});
    m.default_path_id = "right_focus";
    return m;
}

ModelSpec saddle_node_1d() {
    constexpr double kEps0 = 1.0;

    ModelSpec m;
    m.name = "saddle-node-1d";
    m.field.name = "saddle-node-1d";
    m.field.dim = 1;
    // Fold normal form oriented so the attracting branch rides *above* the
    // repelling one: x' = eps0^2 - (x - lambda)^2. The frozen basin of
    // x = lambda + eps0 is (lambda - eps0, inf), so an upward shift drags the
    // basin boundary toward the state and a fast enough ramp with
    // lambda_plus - lambda_minus > 2 * eps0 ejects it.
    m.field.eval = [](const Vec& x, double lambda) {
        double u = x[0] - lambda;
        return Vec{kEps0 * kEps0 - u * u};
    };
    m.field.jac = [](const Vec& x, double lambda) {
        Mat j(1, 1);
        j(0, 0) = -2.0 * (x[0] - lambda);
        return j;
    };
    m.default_shift = tanh_shift(0.0, 1.0, 0.0, 1.0);
    m.monotone = true;  // scalar, so cooperativity is vacuous
    m.equilibria.push_back({"stable", [](double l) { return Vec{l + kEps0}; }, true});
    m.equilibria.push_back({"unstable", [](double l) { return Vec{l - kEps0}; }, false});
    m.default_path_id = "stable";
    return m;
}

ModelSpec monotone_cubic(const Polynomial& a, const Polynomial& b,
                         const ParameterShift& shift) {
    // The three-branch structure (two attractors sandwiching a saddle on the
    // diagonal) requires b > -1 and |a| < sqrt(b + 1) at every swept
    // parameter value; check on a fine inclusive grid over the shift range.
    const double lo = shift.lambda_minus(), hi = shift.lambda_plus();
    const int kGrid = 2001;
    for (int i = 0; i < kGrid; ++i) {
        double l = lo + (hi - lo) * i / (kGrid - 1);
        double bv = b(l), av = a(l);
        if (!(bv > -1.0) || !(std::abs(av) < std::sqrt(bv + 1.0))) {
            std::ostringstream os;
            os << "monotone-cubic regime violated at lambda = " << l << ": need b > -1 and "
               << "|a| < sqrt(b + 1), got a = " << av << ", b = " << bv;
            throw ParameterRegimeViolation(os.str());
        }
    }

    ModelSpec m;
    m.name = "monotone-cubic";
    m.field.name = "monotone-cubic[a=" + a.describe() + ", b=" + b.describe() + "]";
    m.field.dim = 2;
    m.field.eval = [a, b](const Vec& x, double l) {
        double av = a(l), bv = b(l), x1 = x[0];
        return Vec{-x1 * x1 * x1 + av * x1 * x1 + bv * x1 - av * (bv + 1.0) + x[1],
                   x1 - x[1]};
    };
    m.field.jac = [a, b](const Vec& x, double l) {
        double av = a(l), bv = b(l), x1 = x[0];
        Mat j(2, 2);
        j(0, 0) = -3.0 * x1 * x1 + 2.0 * av * x1 + bv;
        j(0, 1) = 1.0;
        j(1, 0) = 1.0;
        j(1, 1) = -1.0;
        return j;
    };
    m.default_shift = shift;
    m.monotone = true;

    auto diag = [b](double l, double sign) {
        double s = sign * std::sqrt(b(l) + 1.0);
        return Vec{s, s};
    };
    m.equilibria.push_back({"p1", [diag](double l) { return diag(l, -1.0); }, true});
    m.equilibria.push_back({"p2", [a](double l) { double av = a(l); return Vec{av, av}; }, false});
    m.equilibria.push_back({"p3", [diag](double l) { return diag(l, +1.0); }, true});
    m.default_path_id = "p3";
    return m;
}

ModelSpec monotone_cubic_default() {
    return monotone_cubic(Polynomial{{0.0, 0.5}}, Polynomial{{0.0, 1.0}},
                          tanh_shift(0.0, 1.0, 0.0, 1.0));
}

std::vector<std::string> model_names() {
    return {"lorenz63", "homoclinic2d", "monotone-cubic", "saddle-node-1d"};
}

ModelSpec make_model(const std::string& name) {
    if (name == "lorenz63") return lorenz63();
    if (name == "homoclinic2d") return homoclinic2d();
    if (name == "monotone-cubic") return monotone_cubic_default();
    if (name == "saddle-node-1d") return saddle_node_1d();
    throw ConfigError("unknown model '" + name + "' (known: lorenz63, homoclinic2d, "
                      "monotone-cubic, saddle-node-1d)");
}

EquilibriumPath continue_named_path(const ModelSpec& model,
                                    const ParameterShift& shift,
                                    const std::string& id,
                                    const ContinuationOptions& opts) {
    const NamedEquilibrium& eq = model.equilibrium(id);
    double s0 = -shift.saturation_point(opts.eps_lambda);
    return continue_path(model.field, shift, eq.point(shift(s0)), id, opts);
}

std::vector<EquilibriumPath> continue_stable_paths(const ModelSpec& model,
                                                   const ParameterShift& shift,
                                                   const ContinuationOptions& opts) {
    std::vector<EquilibriumPath> out;
    for (const auto& id : model.stable_ids())
        out.push_back(continue_named_path(model, shift, id, opts));
    return out;
}

}  // namespace rtip
