#pragma once

#include <array>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinlab/hamiltonian.hpp"
#include "spinlab/qla.hpp"

namespace spinlab {

/// Validated one- or two-qubit density matrix.
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  /// Throws ValidationError naming the failed invariant (dimension, Hermiticity, trace, PSD).
  static DensityMatrix from_matrix(ComplexMatrix m, double tol = kTolerance);
  /// |psi><psi| of a normalized (or normalizable) 2- or 4-vector.
  static DensityMatrix from_pure(const ComplexVector& psi);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  explicit DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {}
  ComplexMatrix matrix_;
};

/// Wootters spin flip (sy x sy) rho* (sy x sy).
ComplexMatrix spin_flip(const DensityMatrix& rho);

struct ConcurrenceResult {
  double c = 0.0;
  std::array<double, 4> lambdas{};  // descending
};

/// C = max(0, l1 - l2 - l3 - l4), l_i from the Hermitian form sqrt(rho) rho~ sqrt(rho).
ConcurrenceResult concurrence(const DensityMatrix& rho);
/// 2 |a00 a11 - a01 a10| for a normalized two-qubit vector.
double pure_concurrence(const ComplexVector& psi);

/// tau_1 = 4 det(rho).
double one_tangle(const DensityMatrix& rho);
/// tau_1(site) - sum_nu C_nu^2. Negative values are reported, not rejected.
double monogamy_residual(const DensityMatrix& site_rho, std::span<const double> neighbor_concurrences);
/// min(sqrt(tau1 / Z), sqrt(1 / Z)).
double concurrence_bound(double tau1, int z);
/// Next-nearest-neighbour bound 1 / sqrt(2 D (D - 1)) on a D-dimensional hypercubic lattice.
double nnn_bound(int d);
/// (||J|| + 2 ||B||) sqrt(C).
double energy_gap_bound(double c, const SpinModel& model);

struct EnsembleMember {
  double weight = 0.0;
  ComplexVector state;  // normalized
};

/// Pure-state ensemble whose members all carry the concurrence of the mixture.
struct WoottersDecomposition {
  std::vector<EnsembleMember> ensemble;
  double concurrence = 0.0;

  ComplexMatrix reconstruct() const;
};

WoottersDecomposition wootters_decompose(const DensityMatrix& rho);

/// psi = sqrt(1 - C) |psi_mu>|psi_nu> + sqrt(C) (U_mu x U_nu) |Phi+>.
struct AbouraddySplit {
  double c = 0.0;
  ComplexVector psi_mu;     // 2-vector
  ComplexVector psi_nu;     // 2-vector
  ComplexVector bell_part;  // 4-vector, maximally entangled
  ComplexMatrix u_mu;
  ComplexMatrix u_nu;

  ComplexVector product_part() const;
  ComplexVector reconstruct() const;
};

AbouraddySplit abouraddy_split(const ComplexVector& psi);

/// rho = (1 - p)|up><up| + p|dn><dn| + alpha|up><dn| + h.c.
struct OnsiteAnalysis {
  double p = 0.0;
  Complex alpha{0.0, 0.0};
};

OnsiteAnalysis onsite_analysis(const DensityMatrix& rho);

struct ExponentIteration {
  double c_exponent = 0.0;
  double tau_exponent = 0.0;
  std::vector<double> trace;  // c_0, c_1, ...
  int iterations = 0;
};

/// Bootstraps the scaling exponents C <= O(Z^-c), tau1 <= O(Z^-t):
/// t_n = c_n / 2 and c_{n+1} = (t_n + 1) / 2. Fixed point (2/3, 1/3).
ExponentIteration iterate_exponents(double c0, int max_iter = 100, double tol = 1e-12);

/// Haar-random pure state of dimension `dim`.
ComplexVector random_pure_state(std::mt19937_64& rng, int dim);
/// Partial trace of a random pure state on dim x ancilla_dim (full rank when ancilla_dim >= dim).
DensityMatrix random_density(std::mt19937_64& rng, int dim, int ancilla_dim);
/// Haar-ish random unitary (QR of a complex Gaussian matrix).
ComplexMatrix random_unitary(std::mt19937_64& rng, int dim);

/// {"dim": 2|4, "re": [[..]], "im": [[..]]}
DensityMatrix density_from_json(const nlohmann::json& doc);
nlohmann::json density_to_json(const DensityMatrix& rho);

}  // namespace spinlab
