#pragma once

// Small dense complex linear algebra shared by the rest of the library.
// Matrices are Eigen dense types; everything here is pure and reentrant.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace spinlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Largest Hilbert-space dimension any state or operator may have.
inline constexpr std::size_t kMaxHilbertDim = std::size_t{1} << 16;
/// Largest dimension stored as a dense operator; above this only matrix-free application.
inline constexpr std::size_t kMaxDenseDim = std::size_t{1} << 12;

/// Eigenvalues in [-kEigenClamp, 0] are treated as exact zeros before square roots.
inline constexpr double kEigenClamp = 1e-12;

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
/// 0 -> identity, 1 -> x, 2 -> y, 3 -> z.
ComplexMatrix by_index(int index);
}  // namespace pauli

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
/// Left-to-right Kronecker product of all factors (factor 0 is the most significant).
ComplexMatrix kron_all(std::span<const ComplexMatrix> factors);

/// Reduced matrix on the subsystems listed in `keep` (any order; output follows ascending order).
ComplexMatrix partial_trace(const ComplexMatrix& rho, std::span<const int> dims, std::span<const int> keep);

struct HermitianEigenResult {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // columns, orthonormal
};

/// Throws DomainError if `m` is not Hermitian to 1e-10 (relative to its norm).
HermitianEigenResult hermitian_eig(const ComplexMatrix& m);

struct TakagiResult {
  ComplexMatrix unitary;
  RealVector singular_values;  // descending, nonnegative
};

/// s = U diag(d) U^T for complex symmetric s of dimension <= 4.
TakagiResult takagi(const ComplexMatrix& s);

bool is_hermitian(const ComplexMatrix& m, double tol);
bool all_finite(const ComplexMatrix& m);

/// Principal square root of a Hermitian PSD matrix (eigenvalue clamp applied).
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

inline double clamp_nonnegative(double value, double clamp = kEigenClamp) {
  return (value < 0.0 && value >= -clamp) ? 0.0 : value;
}

}  // namespace spinlab
