#pragma once

#include <optional>

#include <Eigen/Dense>
#include <json.hpp>

#include "spinlab/kernels.hpp"
#include "spinlab/lattice.hpp"
#include "spinlab/qla.hpp"

namespace spinlab {

using Matrix3 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;

/// H = (1/Z) sum_{<mu,nu>} sigma_mu . J . sigma_nu + sum_mu B . sigma_mu
///
/// The pair sum runs over unordered edges, each edge counted once, with
/// sigma_low . J . sigma_high. Every downstream constant (mean-field energy,
/// IMF energy, xi_min) is derived under this convention.
struct SpinModel {
  Matrix3 j_tensor = Matrix3::Zero();
  Vector3 b_field = Vector3::Zero();
  LatticeGraph graph;
};

/// Scalar couplings of H = -(J/Z) sum sx sx - B sum sz.
struct IsingCouplings {
  double j = 0.0;
  double b = 0.0;
};

struct IsingModel {
  double j = 0.0;
  double b = 0.0;
  LatticeGraph graph;
};

/// j_tensor = diag(-j, 0, 0), b_field = (0, 0, -b).
SpinModel ising(double j, double b, LatticeGraph graph);
SpinModel ising(const IsingModel& model);

/// Recovers (J, B) when the model has exactly the Ising structure.
std::optional<IsingCouplings> as_ising(const SpinModel& model);

struct ModelNorms {
  double j_norm = 0.0;  // sum_ij |J_ij|
  double b_norm = 0.0;  // sum_i |B_i|
};

ModelNorms norms(const SpinModel& model);

/// Matrix-free representation; throws ConventionError for irregular graphs.
kernels::PauliSum pauli_terms(const SpinModel& model);

/// Dense Hamiltonian assembled from Kronecker products (dimension <= 2^12).
ComplexMatrix build(const SpinModel& model);

/// sum of |coefficients| over all Pauli terms: an upper bound on the operator norm.
double operator_norm_bound(const SpinModel& model);

/// <psi| H |psi> for a normalized state, via the matrix-free kernel.
double expectation(const SpinModel& model, std::span<const Complex> psi);

/// {"J": [[..]x3], "B": [..x3], "lattice": {...}} or {"ising": {"J":, "B":}, "lattice": {...}}.
SpinModel model_from_json(const nlohmann::json& doc);
nlohmann::json model_to_json(const SpinModel& model);

}  // namespace spinlab
