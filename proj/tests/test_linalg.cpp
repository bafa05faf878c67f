#include <doctest.h>

#include <cmath>

#include "rtip/errors.hpp"
#include "rtip/linalg.hpp"

using namespace rtip;

TEST_CASE("vector arithmetic and norms") {
    Vec a{3.0, 4.0};
    Vec b{1.0, -2.0};
    CHECK((a + b)[0] == 4.0);
    CHECK((a - b)[1] == 6.0);
    CHECK((2.0 * a)[1] == 8.0);
    CHECK((-a)[0] == -3.0);
    CHECK(norm(a) == doctest::Approx(5.0));
    CHECK(norm_inf(b) == 2.0);
    CHECK(dist(a, b) == doctest::Approx(std::sqrt(4.0 + 36.0)));
}

TEST_CASE("matrix product against a hand computation") {
    Mat A(2, 2);
    A(0, 0) = 1; A(0, 1) = 2; A(1, 0) = 3; A(1, 1) = 4;
    Mat B(2, 2);
    B(0, 0) = 0; B(0, 1) = 1; B(1, 0) = 1; B(1, 1) = 0;
    Mat C = A * B;
    CHECK(C(0, 0) == 2);
    CHECK(C(0, 1) == 1);
    CHECK(C(1, 0) == 4);
    CHECK(C(1, 1) == 3);
    Vec v = A * Vec{1.0, 1.0};
    CHECK(v[0] == 3);
    CHECK(v[1] == 7);
}

TEST_CASE("dense solve reproduces a known solution") {
    // x = (1, -2, 3) under a fixed nonsingular matrix
    Mat A(3, 3);
    double entries[9] = {4, 1, 0, 1, 3, -1, 0, -1, 2};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) A(i, j) = entries[3 * i + j];
    Vec x_true{1.0, -2.0, 3.0};
    Vec b = A * x_true;
    Vec x = solve(A, b);
    CHECK(dist(x, x_true) < 1e-12);
}

TEST_CASE("solve rejects singular systems") {
    Mat A(2, 2);
    A(0, 0) = 1; A(0, 1) = 2; A(1, 0) = 2; A(1, 1) = 4;
    CHECK_THROWS_AS(solve(A, Vec{1.0, 1.0}), SingularJacobian);
}

TEST_CASE("determinant of triangular and permuted matrices") {
    Mat T(3, 3);
    T(0, 0) = 2; T(0, 1) = 5; T(0, 2) = -1;
    T(1, 1) = -3; T(1, 2) = 4;
    T(2, 2) = 0.5;
    CHECK(determinant(T) == doctest::Approx(-3.0));
    Mat P(2, 2);
    P(0, 1) = 1; P(1, 0) = 1;
    CHECK(determinant(P) == doctest::Approx(-1.0));
}

TEST_CASE("lyapunov solve satisfies its defining equation") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + static_cast<int>(rng.next_u64() % 4);
        // Hurwitz by construction: strictly dominant negative diagonal
        Mat A(n, n);
        for (int i = 0; i < n; ++i) {
            double off = 0.0;
            for (int j = 0; j < n; ++j)
                if (i != j) {
                    A(i, j) = rng.uniform(-1.0, 1.0);
                    off += std::abs(A(i, j));
                }
            A(i, i) = -off - rng.uniform(0.5, 2.0);
        }
        Mat Q = Mat::identity(n);
        Mat P = lyapunov_solve(A, Q);
        Mat R = A.transposed() * P + P * A;  // must equal -Q
        double err = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                err = std::max(err, std::abs(R(i, j) + Q(i, j)));
                CHECK(P(i, j) == doctest::Approx(P(j, i)).epsilon(1e-9));
            }
        CHECK(err < 1e-9);
    }
}

TEST_CASE("cholesky factor reproduces the matrix") {
    Mat A(3, 3);
    // P = B^T B + I for a fixed B, guaranteed SPD
    Mat B(3, 3);
    double entries[9] = {1, 2, 0, -1, 1, 3, 0.5, 0, 1};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) B(i, j) = entries[3 * i + j];
    A = B.transposed() * B;
    for (int i = 0; i < 3; ++i) A(i, i) += 1.0;
    Mat L = cholesky(A);
    Mat LLt = L * L.transposed();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(LLt(i, j) == doctest::Approx(A(i, j)).epsilon(1e-12));
    // upper-triangular solve with the same factor: L^T x = b
    Vec b{1.0, 2.0, 3.0};
    Vec x = solve_upper_from_lower(L, b);
    Vec r = L.transposed() * x;
    CHECK(dist(r, b) < 1e-10);
}

TEST_CASE("cholesky rejects indefinite input") {
    Mat A(2, 2);
    A(0, 0) = 1; A(0, 1) = 2; A(1, 0) = 2; A(1, 1) = 1;  // eigenvalues 3, -1
    CHECK_THROWS_AS(cholesky(A), SingularJacobian);
}

TEST_CASE("seeded rng is deterministic and in range") {
    Rng a(123), b(123), c(124);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 100; ++i) {
        double ua = a.uniform01(), ub = b.uniform01(), uc = c.uniform01();
        all_equal = all_equal && ua == ub;
        any_diff = any_diff || ua != uc;
        CHECK(ua >= 0.0);
        CHECK(ua < 1.0);
    }
    CHECK(all_equal);
    CHECK(any_diff);
    Rng d(5);
    for (int i = 0; i < 50; ++i) {
        Vec u = d.unit_vector(4);
        CHECK(norm(u) == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (int i = 0; i < 50; ++i) {
        double x = d.uniform(-2.0, 3.0);
        CHECK(x >= -2.0);
        CHECK(x <= 3.0);
    }
}
