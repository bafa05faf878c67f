#pragma once

#include <complex>
#include <vector>

#include "rtip/linalg.hpp"

namespace rtip {

/// Eigen decomposition of a small real matrix. `values` always holds n
/// entries (with multiplicity), sorted by (real part, imaginary part).
/// For every real eigenvalue, `vectors` holds a unit-norm real eigenvector
/// whose first nonzero component is positive; for complex eigenvalues the
/// slot is an empty Vec.
struct Spectrum {
    std::vector<std::complex<double>> values;
    std::vector<Vec> vectors;

    double max_real_part() const;
    double min_real_part() const;
};

/// Dense eigenvalue solver for n <= 16: closed forms for n in {1, 2},
/// Householder Hessenberg reduction followed by Francis double-shift QR with
/// deflation otherwise. Eigenvectors of real eigenvalues come from inverse
/// iteration on the original matrix (pivot-floored LU), giving residuals
/// ||A v - mu v|| at roundoff level for the matrices this library meets.
Spectrum eigen_spectrum(const Mat& A);

enum class StabilityLabel { Attracting, Saddle, Repelling, Nonhyperbolic };

const char* to_string(StabilityLabel s);

/// Hyperbolicity margin on real parts; any eigenvalue within `margin` of the
/// imaginary axis makes the point Nonhyperbolic.
StabilityLabel classify_stability(const Spectrum& sp, double margin = 1e-8);

}  // namespace rtip
