// core.hpp — Shared scalar/matrix aliases, tolerances, and error types

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace spincavity {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// State amplitudes in a fixed basis; normalized unless stated otherwise.
using StateVector = Eigen::VectorXcd;
// Hermitian, unit-trace, positive semidefinite (up to solver tolerance).
using DensityMatrix = Eigen::MatrixXcd;

inline constexpr double kHermitianTol = 1e-12;

// Invalid or mutually inconsistent parameters/arguments.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Requested problem exceeds a hard size guard.
struct SizeError : std::length_error {
    using std::length_error::length_error;
};

// An integrator or solver failed its convergence contract.
struct AccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double hermiticity_defect(const ComplexMatrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline void require_hermitian(const ComplexMatrix& m, double tol = kHermitianTol,
                              const std::string& what = "matrix") {
    if (m.rows() != m.cols()) {
        throw ParameterError(what + ": not square");
    }
    if (hermiticity_defect(m) > tol) {
        throw ParameterError(what + ": not Hermitian within tolerance");
    }
}

// Exact values of cos(n*pi/2) and sin(n*pi/2) for integer n; keeps the
// parity-case matrix elements free of floating-point noise.
inline int cos_half_pi(long n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return 1;
        case 2: return -1;
        default: return 0;
    }
}

inline int sin_half_pi(long n) {
    switch (((n % 4) + 4) % 4) {
        case 1: return 1;
        case 3: return -1;
        default: return 0;
    }
}

} // namespace spincavity
