#pragma once

#include <vector>

#include "spinlab/entanglement.hpp"
#include "spinlab/hamiltonian.hpp"

namespace spinlab {

/// Entangler strength xi applied uniformly on every edge of a lattice with coordination z.
struct ImfParams {
  Complex xi{0.0, 0.0};
  int z = 1;

  /// Scaling variable Z |xi|.
  double zeta() const { return z * std::abs(xi); }
};

struct ChiOmega {
  double chi = 1.0;    // cos(2 Im xi) / cosh(2 Re xi)
  double omega = 0.0;  // sin(2 Im xi) / cosh(2 Re xi)
};

ChiOmega chi_omega(const ImfParams& p);

enum class SiteExponent { z, half_z };

/// 1/2 (1 + chi^m sz) with m = Z (default) or Z/2.
DensityMatrix imf_rho_site(const ImfParams& p, SiteExponent exponent = SiteExponent::z);
/// Nearest-neighbour reduced matrix; throws ParameterRangeError when the formula leaves the PSD cone.
DensityMatrix imf_rho_pair(const ImfParams& p);

/// Energy per site -(J/2) tanh(2 Re xi) - B chi^Z.
double imf_energy(const ImfParams& p, const IsingCouplings& c);

struct ImfOptimum {
  double xi_min = 0.0;
  double energy = 0.0;
  double reference_xi = 0.0;   // J / (2 B Z)
  double constant = 0.0;   // xi_min Z B / J (0 when J = 0)
};

/// Real-xi minimizer of imf_energy. Throws DomainError when B <= 0.
ImfOptimum imf_optimize(const IsingCouplings& c, int z);
/// dE/dxi for real xi.
double imf_energy_derivative(double xi, const IsingCouplings& c, int z);

/// 1 - cosh(2 xi)^(-2Z)
double imf_one_tangle(double xi, int z);
/// 2 (zeta - zeta^2) / Z for zeta < 1, else 0.
double imf_concurrence_asymptotic(double zeta, int z);
/// Wootters concurrence of imf_rho_pair.
double imf_concurrence_exact(const ImfParams& p);

struct ImfSweepRow {
  double zeta = 0.0;
  double xi = 0.0;
  double energy = 0.0;
  double tau1 = 0.0;
  double c_exact = 0.0;
  double c_asymptotic = 0.0;
};

/// One row per zeta, xi = sign(J) zeta / Z, rows in input order.
std::vector<ImfSweepRow> imf_sweep_zeta(const IsingCouplings& c, int z, const std::vector<double>& zetas);

}  // namespace spinlab
