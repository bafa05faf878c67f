#include "rtip/linalg.hpp"

#include <cmath>
#include <cstdlib>

#include "rtip/errors.hpp"

namespace rtip {

Vec& Vec::operator+=(const Vec& o) {
    for (int i = 0; i < size(); ++i) d[i] += o.d[i];
    return *this;
}

Vec& Vec::operator-=(const Vec& o) {
    for (int i = 0; i < size(); ++i) d[i] -= o.d[i];
    return *this;
}

Vec& Vec::operator*=(double a) {
    for (double& x : d) x *= a;
    return *this;
}

Vec operator+(Vec a, const Vec& b) { return a += b; }
Vec operator-(Vec a, const Vec& b) { return a -= b; }
Vec operator*(double a, Vec v) { return v *= a; }
Vec operator-(Vec v) { return v *= -1.0; }

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const Vec& a) {
    double m = 0.0;
    for (double x : a.d) m = std::max(m, std::fabs(x));
    return m;
}

double dist(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return std::sqrt(s);
}

bool all_finite(const Vec& a) {
    for (double x : a.d)
        if (!std::isfinite(x)) return false;
    return true;
}

Mat Mat::identity(int n) {
    Mat I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

Mat Mat::transposed() const {
    Mat T(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) T(j, i) = (*this)(i, j);
    return T;
}

Mat operator*(const Mat& A, const Mat& B) {
    Mat C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            const double aik = A(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < B.cols; ++j) C(i, j) += aik * B(k, j);
        }
    return C;
}

Vec operator*(const Mat& A, const Vec& x) {
    Vec y(A.rows);
    for (int i = 0; i < A.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < A.cols; ++j) s += A(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Mat operator+(Mat A, const Mat& B) {
    for (size_t i = 0; i < A.a.size(); ++i) A.a[i] += B.a[i];
    return A;
}

Mat operator*(double s, Mat A) {
    for (double& x : A.a) x *= s;
    return A;
}

double norm_inf(const Mat& A) {
    double m = 0.0;
    for (double x : A.a) m = std::max(m, std::fabs(x));
    return m;
}

bool all_finite(const Mat& A) {
    for (double x : A.a)
        if (!std::isfinite(x)) return false;
    return true;
}

namespace {

/// LU with partial pivoting in place; returns permutation sign, fills piv.
/// Throws SingularJacobian on a relatively-zero pivot.
double lu_factor(Mat& A, std::vector<int>& piv) {
    const int n = A.rows;
    piv.resize(n);
    double scale = norm_inf(A);
    if (scale == 0.0) throw SingularJacobian("lu_factor: zero matrix");
    double sign = 1.0;
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::fabs(A(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::fabs(A(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best <= 1e-14 * scale)
            throw SingularJacobian("lu_factor: pivot below 1e-14 * scale");
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(A(p, j), A(k, j));
            sign = -sign;
        }
        piv[k] = p;
        const double inv = 1.0 / A(k, k);
        for (int i = k + 1; i < n; ++i) {
            const double m = A(i, k) * inv;
            A(i, k) = m;
            for (int j = k + 1; j < n; ++j) A(i, j) -= m * A(k, j);
        }
    }
    return sign;
}

void lu_solve_inplace(const Mat& LU, const std::vector<int>& piv, Vec& b) {
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

}  // namespace

Vec solve(Mat A, Vec b) {
    std::vector<int> piv;
    lu_factor(A, piv);
    lu_solve_inplace(A, piv, b);
    return b;
}

double determinant(Mat A) {
    std::vector<int> piv;
    double det;
    try {
        det = lu_factor(A, piv);
    } catch (const SingularJacobian&) {
        return 0.0;
    }
    for (int i = 0; i < A.rows; ++i) det *= A(i, i);
    return det;
}

Mat lyapunov_solve(const Mat& A, const Mat& Q) {
    const int n = A.rows;
    // vec(A^T P) = (I (x) A^T) vec(P), vec(P A) = (A^T (x) I) vec(P), with
    // vec() stacking columns; indices below use vec(P)[i + n*j] = P(i,j).
    Mat K(n * n, n * n);
    Vec rhs(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int row = i + n * j;
            rhs[row] = -Q(i, j);
            for (int k = 0; k < n; ++k) {
                K(row, k + n * j) += A(k, i);  // (A^T P)(i,j) = sum_k A(k,i) P(k,j)
                K(row, i + n * k) += A(k, j);  // (P A)(i,j)  = sum_k P(i,k) A(k,j)
            }
        }
    Vec p = solve(K, rhs);
    Mat P(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) P(i, j) = p[i + n * j];
    // symmetrize against roundoff
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = 0.5 * (P(i, j) + P(j, i));
            P(i, j) = P(j, i) = v;
        }
    return P;
}

std::uint64_t Rng::next_u64() {
    // splitmix64: tiny, well studied, identical output everywhere.
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
}

Vec Rng::unit_vector(int n) {
    Vec v(n);
    double r = 0.0;
    do {
        for (int i = 0; i < n; ++i) v[i] = normal();
        r = norm(v);
    } while (r < 1e-12);
    v *= 1.0 / r;
    return v;
}

Mat cholesky(const Mat& A) {
    if (A.rows != A.cols) throw SingularJacobian("cholesky: matrix not square");
    const int n = A.rows;
    Mat L(n, n);
    for (int j = 0; j < n; ++j) {
        double diag = A(j, j);
        for (int k = 0; k < j; ++k) diag -= L(j, k) * L(j, k);
        if (!(diag > 0.0))
            throw SingularJacobian("cholesky: matrix not positive definite");
        L(j, j) = std::sqrt(diag);
        for (int i = j + 1; i < n; ++i) {
            double sum = A(i, j);
            for (int k = 0; k < j; ++k) sum -= L(i, k) * L(j, k);
            L(i, j) = sum / L(j, j);
        }
    }
    return L;
}

Vec solve_upper_from_lower(const Mat& L, const Vec& b) {
    const int n = L.rows;
    Vec x(n);
    for (int i = n - 1; i >= 0; --i) {
        double sum = b[i];
        for (int j = i + 1; j < n; ++j) sum -= L(j, i) * x[j];
        if (L(i, i) == 0.0) throw SingularJacobian("triangular solve: zero diagonal");
        x[i] = sum / L(i, i);
    }
    return x;
}

}  // namespace rtip
