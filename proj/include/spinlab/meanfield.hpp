#pragma once

#include <array>
#include <string>
#include <vector>

#include "spinlab/hamiltonian.hpp"

namespace spinlab {

struct BlochAngles {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2 pi)
};

/// (sin t cos p, sin t sin p, cos t)
Vector3 bloch_vector(const BlochAngles& a);
/// Inverse of bloch_vector for a nonzero vector; phi is set to 0 at the poles.
BlochAngles angles_from_vector(const Vector3& m);

/// Two-sublattice product-state energy per site, 1/2 [m_a . J_s . m_b + B . (m_a + m_b)],
/// with J_s the symmetric part of the coupling tensor.
double mf_energy(const BlochAngles& a, const BlochAngles& b, const SpinModel& model);
/// d/d(theta_a, phi_a, theta_b, phi_b) of mf_energy.
std::array<double, 4> mf_energy_gradient(const BlochAngles& a, const BlochAngles& b, const SpinModel& model);

enum class Regime { paramagnetic, ferromagnetic, antiferromagnetic, critical };
std::string to_string(Regime regime);

struct MfMinimum {
  BlochAngles a;
  BlochAngles b;
  double energy = 0.0;
};

struct MfSolution {
  BlochAngles angles_a;
  BlochAngles angles_b;
  double energy_per_site = 0.0;
  std::vector<MfMinimum> minima;  // within 1e-9 of the global minimum, lexicographic order
  Regime regime = Regime::paramagnetic;
  bool reliable = true;
  std::string warning;
};

/// Grid multi-start (17 x 16 per sublattice) followed by Riemannian Newton refinement on S^2 x S^2.
MfSolution mf_minimize(const SpinModel& model);

struct EnergyChainReport {
  double e_mf = 0.0;     // per site
  double e_exact = 0.0;  // per site
  double gap = 0.0;      // e_mf - e_exact
  double bound = 0.0;    // (||J|| + 2 ||B||) sqrt(C)
  bool holds = false;
};

/// Checks 0 <= (E_mf - E_exact)/N <= (||J|| + 2||B||) sqrt(c_nn) with slack 1e-9.
/// `ed_ground_energy` is the total exact ground energy.
EnergyChainReport mf_state_energy_chain(const SpinModel& model, double ed_ground_energy, double c_nn);

}  // namespace spinlab
