#include "rtip/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rtip/errors.hpp"

namespace rtip {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Roots of mu^2 - tr*mu + det = 0 with cancellation-safe real branch.
void quadratic_roots(double tr, double det, std::complex<double>& r1,
                     std::complex<double>& r2) {
    const double half = 0.5 * tr;
    const double disc = half * half - det;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double big = half + (half >= 0.0 ? sq : -sq);
        if (big == 0.0) {
            r1 = r2 = 0.0;
        } else {
            r1 = big;
            r2 = det / big;
        }
    } else {
        const double im = std::sqrt(-disc);
        r1 = {half, im};
        r2 = {half, -im};
    }
}

/// In-place Householder reduction to upper Hessenberg form (no Q needed,
/// eigenvalues only).
void hessenberg_reduce(Mat& H) {
    const int n = H.rows;
    Vec v(n);
    for (int k = 0; k + 2 < n; ++k) {
        double scale = 0.0;
        for (int i = k + 1; i < n; ++i) scale = std::max(scale, std::fabs(H(i, k)));
        if (scale == 0.0) continue;
        double xnorm2 = 0.0;
        for (int i = k + 1; i < n; ++i) {
            v[i] = H(i, k) / scale;
            xnorm2 += v[i] * v[i];
        }
        double alpha = std::sqrt(xnorm2);
        if (v[k + 1] > 0.0) alpha = -alpha;
        v[k + 1] -= alpha;
        double vn2 = 0.0;
        for (int i = k + 1; i < n; ++i) vn2 += v[i] * v[i];
        if (vn2 == 0.0) continue;
        const double beta = 2.0 / vn2;
        // H = (I - beta v v^T) H
        for (int j = k; j < n; ++j) {
            double s = 0.0;
            for (int i = k + 1; i < n; ++i) s += v[i] * H(i, j);
            s *= beta;
            for (int i = k + 1; i < n; ++i) H(i, j) -= s * v[i];
        }
        // H = H (I - beta v v^T)
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = k + 1; j < n; ++j) s += H(i, j) * v[j];
            s *= beta;
            for (int j = k + 1; j < n; ++j) H(i, j) -= s * v[j];
        }
        for (int i = k + 2; i < n; ++i) H(i, k) = 0.0;
        H(k + 1, k) = alpha * scale;
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix; eigenvalues only.
std::vector<std::complex<double>> hessenberg_eigenvalues(Mat H) {
    const int n = H.rows;
    std::vector<std::complex<double>> out;
    out.reserve(n);
    const double hscale = std::max(norm_inf(H), 1e-300);

    int hi = n - 1;
    int iters = 0;
    while (hi >= 0) {
        // Deflation scan: zero negligible subdiagonals, find active block lo.
        int lo = hi;
        while (lo > 0) {
            double s = std::fabs(H(lo - 1, lo - 1)) + std::fabs(H(lo, lo));
            if (s == 0.0) s = hscale;
            if (std::fabs(H(lo, lo - 1)) <= kEps * s) {
                H(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            out.emplace_back(H(hi, hi), 0.0);
            --hi;
            iters = 0;
            continue;
        }
        if (lo == hi - 1) {
            std::complex<double> r1, r2;
            const double tr = H(lo, lo) + H(hi, hi);
            const double det = H(lo, lo) * H(hi, hi) - H(lo, hi) * H(hi, lo);
            quadratic_roots(tr, det, r1, r2);
            out.push_back(r1);
            out.push_back(r2);
            hi -= 2;
            iters = 0;
            continue;
        }

        ++iters;
        if (iters > 120)
            throw ConvergenceFailure("eigen_spectrum: QR failed to deflate in 120 sweeps");

        double s, t;
        if (iters % 13 == 0) {
            // exceptional shift to break rare cycling
            const double w = std::fabs(H(hi, hi - 1)) + std::fabs(H(hi - 1, hi - 2));
            s = 1.5 * w;
            t = w * w;
        } else {
            s = H(hi - 1, hi - 1) + H(hi, hi);
            t = H(hi - 1, hi - 1) * H(hi, hi) - H(hi - 1, hi) * H(hi, hi - 1);
        }

        // First column of (H - a I)(H - b I) on the active block.
        double x = H(lo, lo) * H(lo, lo) + H(lo, lo + 1) * H(lo + 1, lo) - s * H(lo, lo) + t;
        double y = H(lo + 1, lo) * (H(lo, lo) + H(lo + 1, lo + 1) - s);
        double z = (lo + 2 <= hi) ? H(lo + 2, lo + 1) * H(lo + 1, lo) : 0.0;

        for (int k = lo; k <= hi - 2; ++k) {
            // Householder for (x, y, z).
            const double sc = std::fabs(x) + std::fabs(y) + std::fabs(z);
            if (sc != 0.0) {
                const double xs = x / sc, ys = y / sc, zs = z / sc;
                double r = std::sqrt(xs * xs + ys * ys + zs * zs);
                if (xs > 0.0) r = -r;
                if (r != 0.0) {
                    double v0 = xs - r, v1 = ys, v2 = zs;
                    const double vn2 = v0 * v0 + v1 * v1 + v2 * v2;
                    const double beta = 2.0 / vn2;
                    const int jlo = std::max(k - 1, lo);
                    for (int j = jlo; j <= hi; ++j) {
                        const double a0 = H(k, j), a1 = H(k + 1, j), a2 = H(k + 2, j);
                        const double w = beta * (v0 * a0 + v1 * a1 + v2 * a2);
                        H(k, j) = a0 - w * v0;
                        H(k + 1, j) = a1 - w * v1;
                        H(k + 2, j) = a2 - w * v2;
                    }
                    const int imax = std::min(k + 3, hi);
                    for (int i = lo; i <= imax; ++i) {
                        const double a0 = H(i, k), a1 = H(i, k + 1), a2 = H(i, k + 2);
                        const double w = beta * (v0 * a0 + v1 * a1 + v2 * a2);
                        H(i, k) = a0 - w * v0;
                        H(i, k + 1) = a1 - w * v1;
                        H(i, k + 2) = a2 - w * v2;
                    }
                }
            }
            x = H(k + 1, k);
            y = H(k + 2, k);
            z = (k + 3 <= hi) ? H(k + 3, k) : 0.0;
        }
        // Final 2-element reflection on (x, y) acting on rows hi-1, hi.
        {
            const int k = hi - 1;
            const double sc = std::fabs(x) + std::fabs(y);
            if (sc != 0.0) {
                const double xs = x / sc, ys = y / sc;
                double r = std::sqrt(xs * xs + ys * ys);
                if (xs > 0.0) r = -r;
                if (r != 0.0) {
                    double v0 = xs - r, v1 = ys;
                    const double vn2 = v0 * v0 + v1 * v1;
                    const double beta = 2.0 / vn2;
                    const int jlo = std::max(k - 1, lo);
                    for (int j = jlo; j <= hi; ++j) {
                        const double a0 = H(k, j), a1 = H(k + 1, j);
                        const double w = beta * (v0 * a0 + v1 * a1);
                        H(k, j) = a0 - w * v0;
                        H(k + 1, j) = a1 - w * v1;
                    }
                    for (int i = lo; i <= hi; ++i) {
                        const double a0 = H(i, k), a1 = H(i, k + 1);
                        const double w = beta * (v0 * a0 + v1 * a1);
                        H(i, k) = a0 - w * v0;
                        H(i, k + 1) = a1 - w * v1;
                    }
                }
            }
        }
    }
    return out;
}

/// LU with partial pivoting where exactly/nearly singular pivots are replaced
/// by a tiny floor instead of failing; the standard trick that makes inverse
/// iteration work at (numerically) exact eigenvalue shifts.
void lu_factor_floored(Mat& A, std::vector<int>& piv, double floor_scale) {
    const int n = A.rows;
    piv.resize(n);
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::fabs(A(k, k));
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(A(i, k)) > best) {
                best = std::fabs(A(i, k));
                p = i;
            }
        if (p != k)
            for (int j = 0; j < n; ++j) std::swap(A(p, j), A(k, j));
        piv[k] = p;
        if (std::fabs(A(k, k)) < floor_scale)
            A(k, k) = (A(k, k) < 0.0 ? -floor_scale : floor_scale);
        const double inv = 1.0 / A(k, k);
        for (int i = k + 1; i < n; ++i) {
            const double m = A(i, k) * inv;
            A(i, k) = m;
            for (int j = k + 1; j < n; ++j) A(i, j) -= m * A(k, j);
        }
    }
}

void lu_solve_floored(const Mat& LU, const std::vector<int>& piv, Vec& b) {
    const int n = LU.rows;
    for (int k = 0; k < n; ++k) {
        if (piv[k] != k) std::swap(b[piv[k]], b[k]);
        for (int i = k + 1; i < n; ++i) b[i] -= LU(i, k) * b[k];
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) b[i] -= LU(i, j) * b[j];
        b[i] /= LU(i, i);
    }
}

void normalize_sign_convention(Vec& v) {
    const double m = norm_inf(v);
    for (int i = 0; i < v.size(); ++i) {
        if (std::fabs(v[i]) > 1e-12 * m) {
            if (v[i] < 0.0) v *= -1.0;
            return;
        }
    }
}

double eigen_residual(const Mat& A, double mu, const Vec& v) {
    Vec r = A * v;
    for (int i = 0; i < v.size(); ++i) r[i] -= mu * v[i];
    return norm(r);
}

/// Inverse iteration for the eigenvector of real eigenvalue mu. `which`
/// varies the seed so repeated eigenvalues pick up different basis vectors.
Vec real_eigenvector(const Mat& A, double mu, int which) {
    const int n = A.rows;
    const double scale = std::max(norm_inf(A), 1.0);
    Mat B = A;
    for (int i = 0; i < n; ++i) B(i, i) -= mu;
    std::vector<int> piv;
    lu_factor_floored(B, piv, kEps * scale * n);

    for (int attempt = 0; attempt < 4; ++attempt) {
        Vec v(n);
        for (int i = 0; i < n; ++i)
            v[i] = (i == (which + attempt) % n) ? 1.0 : 0.2 / (1.0 + i + which + attempt);
        v *= 1.0 / norm(v);
        for (int it = 0; it < 4; ++it) {
            lu_solve_floored(B, piv, v);
            const double nv = norm(v);
            if (!(nv > 0.0) || !all_finite(v)) break;
            v *= 1.0 / nv;
        }
        if (all_finite(v) && eigen_residual(A, mu, v) <= 1e-8 * scale) {
            v *= 1.0 / norm(v);
            normalize_sign_convention(v);
            return v;
        }
    }
    throw ConvergenceFailure("real_eigenvector: inverse iteration residual above tolerance");
}

}  // namespace

double Spectrum::max_real_part() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& z : values) m = std::max(m, z.real());
    return m;
}

double Spectrum::min_real_part() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& z : values) m = std::min(m, z.real());
    return m;
}

Spectrum eigen_spectrum(const Mat& A) {
    const int n = A.rows;
    if (n == 0 || A.cols != n)
        throw std::invalid_argument("eigen_spectrum: matrix must be square and nonempty");
    if (!all_finite(A)) throw NonFiniteState("eigen_spectrum: matrix has non-finite entries");

    std::vector<std::complex<double>> vals;
    if (n == 1) {
        vals = {A(0, 0)};
    } else if (n == 2) {
        std::complex<double> r1, r2;
        quadratic_roots(A(0, 0) + A(1, 1), A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0), r1, r2);
        vals = {r1, r2};
    } else {
        Mat H = A;
        hessenberg_reduce(H);
        vals = hessenberg_eigenvalues(H);
    }

    std::sort(vals.begin(), vals.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    Spectrum sp;
    sp.values = vals;
    sp.vectors.resize(vals.size());
    int nth_real = 0;
    for (size_t k = 0; k < vals.size(); ++k) {
        if (vals[k].imag() == 0.0) {
            if (n == 1) {
                sp.vectors[k] = Vec{1.0};
            } else {
                sp.vectors[k] = real_eigenvector(A, vals[k].real(), nth_real);
            }
            ++nth_real;
        }
    }
    return sp;
}

const char* to_string(StabilityLabel s) {
    switch (s) {
        case StabilityLabel::Attracting: return "attracting";
        case StabilityLabel::Saddle: return "saddle";
        case StabilityLabel::Repelling: return "repelling";
        case StabilityLabel::Nonhyperbolic: return "nonhyperbolic";
    }
    return "?";
}

StabilityLabel classify_stability(const Spectrum& sp, double margin) {
    int neg = 0, pos = 0;
    for (const auto& z : sp.values) {
        if (z.real() < -margin)
            ++neg;
        else if (z.real() > margin)
            ++pos;
        else
            return StabilityLabel::Nonhyperbolic;
    }
    if (pos == 0) return StabilityLabel::Attracting;
    if (neg == 0) return StabilityLabel::Repelling;
    return StabilityLabel::Saddle;
}

}  // namespace rtip
