#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spinlab/entanglement.hpp"
#include "spinlab/hamiltonian.hpp"
#include "spinlab/imf.hpp"
#include "spinlab/lattice.hpp"

namespace spinlab {

/// Lowest eigenspace of H. A degenerate sector is carried as an orthonormal member set and
/// stands for the incoherent equal-weight mixture of its members.
struct GroundStateResult {
  double energy = 0.0;
  std::vector<ComplexVector> members;
  int degeneracy = 1;
  double gap = 0.0;        // first level above the sector (0 when the spectrum is exhausted)
  double residual = 0.0;   // max_k ||H v_k - E v_k||
  double tolerance = 0.0;  // degeneracy window 1e-9 ||H||
  std::string method;      // "dense" or "lanczos"
};

/// Dense solve for N <= 8, restarted Lanczos with deflation for 9 <= N <= 16.
///
/// Degenerate members are rotated to eigenvectors of the total magnetization component
/// with the largest spread inside the sector, so symmetry-broken partners come out separately.
GroundStateResult ground_state(const SpinModel& model);

inline constexpr int kMaxSites = 16;
inline constexpr int kDenseSites = 8;

/// prod_edges (cosh xi + sinh xi sx_a sx_b) |up...up>, normalized. `order` permutes the edge product.
ComplexVector construct_imf_state(const LatticeGraph& graph, Complex xi,
                                  std::optional<std::span<const Edge>> order = std::nullopt);

/// One- or two-site reduced matrix (sites in ascending output order).
DensityMatrix reduced(const ComplexVector& psi, int n_sites, std::span<const int> sites);
/// Equal-weight mixture over the ground-state members.
DensityMatrix reduced(const GroundStateResult& ground, int n_sites, std::span<const int> sites);

/// max over a, b in {x, y, z} of |<s_a s_b> - <s_a><s_b>| for a two-site matrix.
double max_connected_correlation(const DensityMatrix& pair);

struct LatticeEntanglementReport {
  GroundStateResult ground;
  std::vector<double> tau1;  // per site
  std::vector<Edge> edges;
  std::vector<double> edge_concurrence;
  std::vector<double> edge_max_correlation;
  std::vector<Edge> nnn_pairs;
  std::vector<double> nnn_concurrence;
  std::vector<double> monogamy_residual;  // per site, nearest neighbours only
};

LatticeEntanglementReport entanglement_report(const SpinModel& model);
/// Same report for a given ground state (avoids a second solve).
LatticeEntanglementReport entanglement_report(const SpinModel& model, GroundStateResult ground);

/// Two adjacent centres (sites 0 and 1), each carrying z - 1 leaves: both centres have degree z
/// and the graph is a tree.
LatticeGraph make_double_star(int z);

struct ImfVerificationRow {
  std::string graph;          // "star", "double_star", "ring"
  int n_sites = 0;
  int z = 0;
  double xi = 0.0;
  double site_dev_z = 0.0;    // Frobenius, centre site vs exponent Z
  double site_dev_half = 0.0; // Frobenius, centre site vs exponent Z/2
  double pair_dev = 0.0;      // Frobenius, reference pair vs imf_rho_pair
  double energy_dev = 0.0;    // |energy estimate on the explicit state - imf_energy|
  std::string winner;         // "Z", "Z/2" or "tie"
};

struct ImfVerificationOptions {
  std::vector<int> star_z{2, 3, 4, 5, 6, 7, 8};
  std::vector<double> xi{0.0, 0.02, 0.05, 0.1};
  std::vector<int> ring_sites{10};
  IsingCouplings couplings{1.0, 2.0};
};

/// Compares explicit IMF states with the analytic site, pair and energy formulas.
/// Star rows use the centre site and a centre-leaf pair, double-star rows the centre-centre
/// pair, ring rows site 0 and edge (0, 1) plus the full lattice energy.
std::vector<ImfVerificationRow> verify_imf_formulas(const ImfVerificationOptions& options = {});

}  // namespace spinlab
