#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace rtip {

/// Dense real vector, dimension decided at runtime (models here are small,
/// n <= 16 throughout).
struct Vec {
    std::vector<double> d;

    Vec() = default;
    explicit Vec(int n, double fill = 0.0) : d(static_cast<size_t>(n), fill) {}
    Vec(std::initializer_list<double> xs) : d(xs) {}

    int size() const { return static_cast<int>(d.size()); }
    double& operator[](int i) { return d[static_cast<size_t>(i)]; }
    double operator[](int i) const { return d[static_cast<size_t>(i)]; }

    auto begin() { return d.begin(); }
    auto end() { return d.end(); }
    auto begin() const { return d.begin(); }
    auto end() const { return d.end(); }

    Vec& operator+=(const Vec& o);
    Vec& operator-=(const Vec& o);
    Vec& operator*=(double a);
};

Vec operator+(Vec a, const Vec& b);
Vec operator-(Vec a, const Vec& b);
Vec operator*(double a, Vec v);
Vec operator-(Vec v);

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);      // Euclidean
double norm_inf(const Vec& a);
double dist(const Vec& a, const Vec& b);
bool all_finite(const Vec& a);

/// Dense row-major matrix.
struct Mat {
    int rows = 0, cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c, double fill = 0.0)
        : rows(r), cols(c), a(static_cast<size_t>(r) * c, fill) {}

    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(int n);
    Mat transposed() const;
};

Mat operator*(const Mat& A, const Mat& B);
Vec operator*(const Mat& A, const Vec& x);
Mat operator+(Mat A, const Mat& B);
Mat operator*(double s, Mat A);

double norm_inf(const Mat& A);   // max |a_ij|
bool all_finite(const Mat& A);

/// Solve A x = b by LU with partial pivoting. Throws SingularJacobian when a
/// pivot is (relatively) zero.
Vec solve(Mat A, Vec b);

/// Determinant via the same LU factorization.
double determinant(Mat A);

/// Solve the continuous Lyapunov equation  A^T P + P A = -Q  for symmetric P
/// (A Hurwitz, Q symmetric positive definite). Small n only: builds the n^2
/// Kronecker system and solves it densely.
Mat lyapunov_solve(const Mat& A, const Mat& Q);

/// Lower-triangular L with A = L L^T (A symmetric positive definite).
/// Throws SingularJacobian when a pivot fails to be strictly positive.
Mat cholesky(const Mat& A);

/// Solve L^T x = b for upper-triangular L^T given lower-triangular L.
Vec solve_upper_from_lower(const Mat& L, const Vec& b);

/// Deterministic random source for all sampling-based checks. Fixed algorithm
/// (splitmix64 stream) so outputs do not depend on the C++ standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    double uniform01();                      // [0, 1)
    double uniform(double lo, double hi);
    double normal();                         // standard normal, Box-Muller
    Vec unit_vector(int n);                  // uniform direction on S^{n-1}

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace rtip
