#include "rtip/field.hpp"

#include <cmath>

#include "rtip/errors.hpp"

namespace rtip {

Mat jacobian_fd(const VectorFieldFamily& field, const Vec& x, double lambda) {
    const int n = field.dim;
    Mat J(n, n);
    Vec xp = x, xm = x;
    for (int j = 0; j < n; ++j) {
        const double h = 1e-6 * std::max(1.0, std::fabs(x[j]));
        xp[j] = x[j] + h;
        xm[j] = x[j] - h;
        const Vec fp = field.eval(xp, lambda);
        const Vec fm = field.eval(xm, lambda);
        const double inv = 1.0 / (2.0 * h);
        for (int i = 0; i < n; ++i) J(i, j) = (fp[i] - fm[i]) * inv;
        xp[j] = x[j];
        xm[j] = x[j];
    }
    if (!all_finite(J))
        throw NonFiniteState("jacobian_fd: non-finite entries at " + field.name);
    return J;
}

Mat jacobian(const VectorFieldFamily& field, const Vec& x, double lambda) {
    if (field.jac) {
        Mat J = field.jac(x, lambda);
        if (!all_finite(J))
            throw NonFiniteState("jacobian: non-finite entries at " + field.name);
        return J;
    }
    return jacobian_fd(field, x, lambda);
}

}  // namespace rtip
