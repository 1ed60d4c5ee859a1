#include "spinlab/qla.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spinlab/errors.hpp"

namespace spinlab {

namespace pauli {

ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }

ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix y() {
  const Complex i{0.0, 1.0};
  ComplexMatrix m(2, 2);
  m << 0.0, -i, i, 0.0;
  return m;
}

ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

ComplexMatrix by_index(int index) {
  switch (index) {
    case 0: return identity();
    case 1: return x();
    case 2: return y();
    case 3: return z();
    default: throw DomainError("pauli index must be in 0..3, got " + std::to_string(index));
  }
}

}  // namespace pauli

namespace {

double scale_of(const ComplexMatrix& m) { return std::max(1.0, m.norm()); }

void check_dim(std::size_t dim) {
  if (dim > kMaxHilbertDim) {
    throw DimensionError("dimension " + std::to_string(dim) + " exceeds Hilbert-space cap " +
                         std::to_string(kMaxHilbertDim));
  }
}

}  // namespace

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    const Complex v = m.data()[k];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).norm() <= tol * scale_of(m);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!all_finite(a) || !all_finite(b)) throw DomainError("kron: non-finite entry");
  const std::size_t rows = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows());
  const std::size_t cols = static_cast<std::size_t>(a.cols()) * static_cast<std::size_t>(b.cols());
  check_dim(rows);
  check_dim(cols);
  ComplexMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix kron_all(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) return ComplexMatrix::Identity(1, 1);
  ComplexMatrix acc = factors[0];
  for (std::size_t k = 1; k < factors.size(); ++k) acc = kron(acc, factors[k]);
  return acc;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, std::span<const int> dims, std::span<const int> keep) {
  const int n = static_cast<int>(dims.size());
  std::size_t total = 1;
  for (int d : dims) {
    if (d < 1) throw ShapeError("partial_trace: subsystem dimension must be positive");
    total *= static_cast<std::size_t>(d);
  }
  if (rho.rows() != rho.cols() || static_cast<std::size_t>(rho.rows()) != total) {
    throw ShapeError("partial_trace: matrix is " + std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()) +
                     " but subsystem dimensions multiply to " + std::to_string(total));
  }
  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw ShapeError("partial_trace: keep index " + std::to_string(k) + " out of range");
    if (kept[static_cast<std::size_t>(k)]) throw ShapeError("partial_trace: duplicate keep index");
    kept[static_cast<std::size_t>(k)] = true;
  }

  std::vector<std::size_t> stride(static_cast<std::size_t>(n), 1);
  for (int k = n - 2; k >= 0; --k) stride[k] = stride[k + 1] * static_cast<std::size_t>(dims[k + 1]);

  // Offsets of every multi-index restricted to the kept / traced subsystems.
  auto offsets = [&](bool want_kept) {
    std::vector<std::size_t> out{0};
    for (int k = 0; k < n; ++k) {
      if (kept[k] != want_kept) continue;
      std::vector<std::size_t> next;
      next.reserve(out.size() * static_cast<std::size_t>(dims[k]));
      for (std::size_t base : out) {
        for (int v = 0; v < dims[k]; ++v) next.push_back(base + static_cast<std::size_t>(v) * stride[k]);
      }
      out = std::move(next);
    }
    return out;
  };
  const auto keep_off = offsets(true);
  const auto trace_off = offsets(false);

  const auto m = static_cast<Eigen::Index>(keep_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(m, m);
  for (std::size_t t : trace_off) {
    for (Eigen::Index r = 0; r < m; ++r) {
      for (Eigen::Index c = 0; c < m; ++c) {
        out(r, c) += rho(static_cast<Eigen::Index>(keep_off[r] + t), static_cast<Eigen::Index>(keep_off[c] + t));
      }
    }
  }
  return out;
}

HermitianEigenResult hermitian_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("hermitian_eig: matrix is not square");
  if (!all_finite(m)) throw DomainError("hermitian_eig: non-finite entry");
  if (!is_hermitian(m, 1e-10)) throw DomainError("hermitian_eig: matrix is not Hermitian to 1e-10");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success) throw DomainError("hermitian_eig: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const auto eig = hermitian_eig(m);
  RealVector roots(eig.eigenvalues.size());
  for (Eigen::Index k = 0; k < roots.size(); ++k) {
    roots[k] = std::sqrt(std::max(0.0, clamp_nonnegative(eig.eigenvalues[k])));
  }
  return eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.adjoint();
}

TakagiResult takagi(const ComplexMatrix& s) {
  if (s.rows() != s.cols()) throw ShapeError("takagi: matrix is not square");
  if (s.rows() > 4) throw ShapeError("takagi: dimension above 4 is not supported");
  if (!all_finite(s)) throw DomainError("takagi: non-finite entry");
  if ((s - s.transpose()).norm() > 1e-10 * scale_of(s)) throw DomainError("takagi: matrix is not symmetric");

  const Eigen::Index n = s.rows();
  // For s = A + iB the real symmetric [[A, B], [B, -A]] has eigenpairs (+d, (x; y)) with
  // s conj(u) = d u for u = x + iy; the positive half spans an orthonormal Takagi basis
  // even inside degenerate clusters.
  Eigen::MatrixXd doubled(2 * n, 2 * n);
  const Eigen::MatrixXd a = s.real();
  const Eigen::MatrixXd b = s.imag();
  doubled << a, b, b, -a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(doubled);

  const double d_max = std::max(std::abs(solver.eigenvalues()[2 * n - 1]), std::abs(solver.eigenvalues()[0]));
  const double zero_tol = 1e-12 * std::max(1.0, d_max);

  ComplexMatrix u = ComplexMatrix::Zero(n, n);
  RealVector d = RealVector::Zero(n);
  Eigen::Index filled = 0;
  for (Eigen::Index k = 2 * n - 1; k >= n && filled < n; --k) {
    const double value = solver.eigenvalues()[k];
    if (value <= zero_tol) break;
    const Eigen::VectorXd v = solver.eigenvectors().col(k);
    u.col(filled) = v.head(n).cast<Complex>() + Complex{0.0, 1.0} * v.tail(n).cast<Complex>();
    d[filled] = value;
    ++filled;
  }

  // Complete the null directions with an orthonormal basis of the complement.
  for (Eigen::Index e = 0; e < n && filled < n; ++e) {
    ComplexVector candidate = ComplexVector::Unit(n, e);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < filled; ++j) candidate -= u.col(j) * u.col(j).dot(candidate);
    }
    const double norm = candidate.norm();
    if (norm < 1e-6) continue;
    u.col(filled) = candidate / norm;
    d[filled] = 0.0;
    ++filled;
  }
  return {u, d};
}

}  // namespace spinlab
