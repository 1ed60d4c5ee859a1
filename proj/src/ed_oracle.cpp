#include "spinlab/ed_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "spinlab/errors.hpp"
#include "spinlab/kernels.hpp"

namespace spinlab {

namespace {

constexpr double kDegeneracyRel = 1e-9;
constexpr int kKrylovDim = 100;
constexpr int kMaxRestarts = 60;
constexpr std::uint64_t kStartSeed = 0x5eed;

std::span<const Complex> view(const ComplexVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<Complex> view(ComplexVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

class Operator {
 public:
  explicit Operator(kernels::PauliSum terms) : terms_(std::move(terms)) {}
  ComplexVector apply(const ComplexVector& v) const {
    ComplexVector out(v.size());
    kernels::apply_pauli_sum(terms_, view(v), view(out));
    return out;
  }

 private:
  kernels::PauliSum terms_;
};

void project_out(ComplexVector& w, const std::vector<ComplexVector>& locked) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& l : locked) w -= l * l.dot(w);
  }
}

struct RitzPair {
  double value = 0.0;
  ComplexVector vector;
  double residual = 0.0;
};

// One Lanczos cycle with full reorthogonalization on the complement of `locked`.
RitzPair lanczos_cycle(const Operator& h, const std::vector<ComplexVector>& locked, ComplexVector v, int m,
                       double scale) {
  const Eigen::Index dim = v.size();
  ComplexMatrix basis(dim, m);
  std::vector<double> alpha;
  std::vector<double> beta;
  project_out(v, locked);
  v.normalize();
  int k = 0;
  for (; k < m; ++k) {
    basis.col(k) = v;
    ComplexVector w = h.apply(v);
    project_out(w, locked);
    alpha.push_back(v.dot(w).real());
    for (int pass = 0; pass < 2; ++pass) {
      const ComplexVector coeff = basis.leftCols(k + 1).adjoint() * w;
      w -= basis.leftCols(k + 1) * coeff;
      project_out(w, locked);
    }
    const double b = w.norm();
    if (k + 1 == m || b <= 1e-13 * scale) {
      ++k;
      break;
    }
    beta.push_back(b);
    v = w / b;
  }
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    t(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
  RitzPair out;
  out.value = eig.eigenvalues()[0];
  out.vector = basis.leftCols(k) * eig.eigenvectors().col(0).cast<Complex>();
  project_out(out.vector, locked);
  out.vector.normalize();
  ComplexVector r = h.apply(out.vector);
  project_out(r, locked);
  out.value = out.vector.dot(r).real();
  out.residual = (r - out.value * out.vector).norm();
  return out;
}

RitzPair lowest_in_complement(const Operator& h, const std::vector<ComplexVector>& locked, const ComplexVector& start,
                              double scale) {
  const auto dim = static_cast<int>(start.size());
  const int m = std::max(1, std::min(kKrylovDim, dim - static_cast<int>(locked.size())));
  ComplexVector v = start;
  std::vector<double> trace;
  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    RitzPair p = lanczos_cycle(h, locked, v, m, scale);
    trace.push_back(p.residual);
    if (p.residual <= 1e-11 * scale) return p;
    v = p.vector;
  }
  std::ostringstream msg;
  msg << "ground_state: Lanczos did not converge; residual trace:";
  for (double r : trace) msg << ' ' << r;
  throw SolverError(msg.str());
}

ComplexVector start_vector(Eigen::Index dim) {
  std::mt19937_64 rng(kStartSeed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = 1.0 + 1e-3 * Complex{u(rng), u(rng)};
  return v.normalized();
}

ComplexMatrix total_magnetization(int n, int axis, const ComplexMatrix& sector) {
  kernels::PauliSum sum{n, {}};
  for (int s = 0; s < n; ++s) {
    kernels::PauliTerm t;
    const auto bit = kernels::site_bit(n, s);
    if (axis == 0) t.x_mask = bit;
    if (axis == 1) t.y_mask = bit;
    if (axis == 2) t.z_mask = bit;
    t.coeff = 1.0;
    sum.terms.push_back(t);
  }
  const Operator m(sum);
  ComplexMatrix applied(sector.rows(), sector.cols());
  for (Eigen::Index c = 0; c < sector.cols(); ++c) applied.col(c) = m.apply(sector.col(c));
  ComplexMatrix proj = sector.adjoint() * applied;
  return 0.5 * (proj + proj.adjoint());
}

// Fix the global phase: the first component of near-maximal modulus becomes real positive.
void fix_phase(ComplexVector& v) {
  const double peak = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= 0.5 * peak) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      return;
    }
  }
}

void split_degenerate_sector(int n, std::vector<ComplexVector>& members) {
  if (members.size() < 2) return;
  ComplexMatrix sector(members.front().size(), static_cast<Eigen::Index>(members.size()));
  for (std::size_t k = 0; k < members.size(); ++k) sector.col(static_cast<Eigen::Index>(k)) = members[k];
  int best_axis = -1;
  double best_spread = 1e-8;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> best;
  for (int axis = 0; axis < 3; ++axis) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(total_magnetization(n, axis, sector));
    const double spread = eig.eigenvalues().maxCoeff() - eig.eigenvalues().minCoeff();
    if (spread > best_spread) {
      best_spread = spread;
      best_axis = axis;
      best = eig;
    }
  }
  if (best_axis >= 0) sector = sector * best.eigenvectors();
  for (std::size_t k = 0; k < members.size(); ++k) {
    members[k] = sector.col(static_cast<Eigen::Index>(k)).normalized();
    fix_phase(members[k]);
  }
}

}  // namespace

GroundStateResult ground_state(const SpinModel& model) {
  const int n = model.graph.n_sites();
  if (n > kMaxSites) throw SizeError("ground_state: " + std::to_string(n) + " sites exceeds the limit of 16");
  const Operator h(pauli_terms(model));
  const double scale = std::max(operator_norm_bound(model), 1e-300);
  const Eigen::Index dim = Eigen::Index{1} << n;

  GroundStateResult out;
  out.tolerance = kDegeneracyRel * scale;
  if (n <= kDenseSites) {
    out.method = "dense";
    ComplexMatrix dense(dim, dim);
    ComplexMatrix unit = ComplexMatrix::Identity(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) dense.col(c) = h.apply(unit.col(c));
    dense = 0.5 * (dense + dense.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(dense);
    out.energy = eig.eigenvalues()[0];
    Eigen::Index k = 0;
    while (k < dim && eig.eigenvalues()[k] <= out.energy + out.tolerance) {
      out.members.emplace_back(eig.eigenvectors().col(k));
      ++k;
    }
    out.gap = k < dim ? eig.eigenvalues()[k] - out.energy : 0.0;
  } else {
    out.method = "lanczos";
    std::vector<ComplexVector> locked;
    const ComplexVector start = start_vector(dim);
    RitzPair first = lowest_in_complement(h, locked, start, scale);
    out.energy = first.value;
    locked.push_back(first.vector);
    out.gap = 0.0;
    while (static_cast<Eigen::Index>(locked.size()) < dim) {
      RitzPair next = lowest_in_complement(h, locked, start, scale);
      if (next.value > out.energy + out.tolerance) {
        out.gap = next.value - out.energy;
        break;
      }
      locked.push_back(next.vector);
      out.energy = std::min(out.energy, next.value);
    }
    out.members = std::move(locked);
  }

  split_degenerate_sector(n, out.members);
  out.degeneracy = static_cast<int>(out.members.size());
  // Energy as the sector average of Rayleigh quotients; residuals against it.
  double sum = 0.0;
  for (const auto& v : out.members) sum += v.dot(h.apply(v)).real();
  out.energy = sum / out.degeneracy;
  out.residual = 0.0;
  for (const auto& v : out.members) out.residual = std::max(out.residual, (h.apply(v) - out.energy * v).norm());
  return out;
}

ComplexVector construct_imf_state(const LatticeGraph& graph, Complex xi, std::optional<std::span<const Edge>> order) {
  const int n = graph.n_sites();
  if (n > kMaxSites) throw SizeError("construct_imf_state: " + std::to_string(n) + " sites exceeds the limit of 16");
  std::vector<Edge> edges = graph.edges();
  if (order) {
    std::vector<Edge> given(order->begin(), order->end());
    for (auto& e : given) {
      if (e.a > e.b) std::swap(e.a, e.b);
    }
    std::vector<Edge> sorted = given;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != edges) throw ValidationError("construct_imf_state: edge order is not a permutation of the graph edges");
    edges = std::move(given);
  }
  ComplexVector psi = ComplexVector::Zero(Eigen::Index{1} << n);
  psi[0] = 1.0;
  const Complex c = std::cosh(xi);
  const Complex s = std::sinh(xi);
  for (const auto& e : edges) kernels::apply_xx_entangler(view(psi), n, e.a, e.b, c, s);
  const double norm = std::sqrt(kernels::norm_squared(view(psi)));
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("construct_imf_state: state norm vanished or overflowed");
  return psi / norm;
}

DensityMatrix reduced(const ComplexVector& psi, int n_sites, std::span<const int> sites) {
  if (sites.size() != 1 && sites.size() != 2) throw ShapeError("reduced: expected one or two sites");
  if (psi.size() != (Eigen::Index{1} << n_sites)) throw ShapeError("reduced: state dimension does not match 2^N");
  std::vector<int> keep(sites.begin(), sites.end());
  std::sort(keep.begin(), keep.end());
  for (int s : keep) {
    if (s < 0 || s >= n_sites) throw ShapeError("reduced: site index out of range");
  }
  if (keep.size() == 2 && keep[0] == keep[1]) throw ShapeError("reduced: sites must be distinct");
  return DensityMatrix::from_matrix(kernels::reduce_pure(view(psi), n_sites, keep));
}

DensityMatrix reduced(const GroundStateResult& ground, int n_sites, std::span<const int> sites) {
  if (ground.members.empty()) throw ShapeError("reduced: empty ground state");
  ComplexMatrix sum;
  for (const auto& v : ground.members) {
    const ComplexMatrix r = reduced(v, n_sites, sites).matrix();
    sum = sum.size() == 0 ? r : ComplexMatrix(sum + r);
  }
  return DensityMatrix::from_matrix(sum / static_cast<double>(ground.members.size()));
}

double max_connected_correlation(const DensityMatrix& pair) {
  if (pair.dim() != 4) throw ShapeError("max_connected_correlation: expected a two-site matrix");
  const int keep_a[1] = {0};
  const int keep_b[1] = {1};
  const int dims[2] = {2, 2};
  const ComplexMatrix ra = partial_trace(pair.matrix(), dims, keep_a);
  const ComplexMatrix rb = partial_trace(pair.matrix(), dims, keep_b);
  double best = 0.0;
  for (int a = 1; a <= 3; ++a) {
    const double ea = (ra * pauli::by_index(a)).trace().real();
    for (int b = 1; b <= 3; ++b) {
      const double eb = (rb * pauli::by_index(b)).trace().real();
      const double eab = (pair.matrix() * kron(pauli::by_index(a), pauli::by_index(b))).trace().real();
      best = std::max(best, std::abs(eab - ea * eb));
    }
  }
  return best;
}

LatticeEntanglementReport entanglement_report(const SpinModel& model) {
  return entanglement_report(model, ground_state(model));
}

LatticeEntanglementReport entanglement_report(const SpinModel& model, GroundStateResult ground) {
  const auto& g = model.graph;
  const int n = g.n_sites();
  LatticeEntanglementReport r;
  r.ground = std::move(ground);
  r.edges = g.edges();
  r.nnn_pairs = nnn_pairs(g);

  std::vector<std::vector<double>> site_c(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    const int site[1] = {s};
    r.tau1.push_back(one_tangle(reduced(r.ground, n, site)));
  }
  for (const auto& e : r.edges) {
    const int pair[2] = {e.a, e.b};
    const DensityMatrix rho = reduced(r.ground, n, pair);
    const double c = concurrence(rho).c;
    r.edge_concurrence.push_back(c);
    r.edge_max_correlation.push_back(max_connected_correlation(rho));
    site_c[static_cast<std::size_t>(e.a)].push_back(c);
    site_c[static_cast<std::size_t>(e.b)].push_back(c);
  }
  for (const auto& e : r.nnn_pairs) {
    const int pair[2] = {e.a, e.b};
    r.nnn_concurrence.push_back(concurrence(reduced(r.ground, n, pair)).c);
  }
  for (int s = 0; s < n; ++s) {
    const int site[1] = {s};
    r.monogamy_residual.push_back(monogamy_residual(reduced(r.ground, n, site), site_c[static_cast<std::size_t>(s)]));
  }
  return r;
}

LatticeGraph make_double_star(int z) {
  if (z < 1) throw SizeError("make_double_star: z must be >= 1");
  std::vector<Edge> edges{{0, 1}};
  int next = 2;
  for (int centre = 0; centre < 2; ++centre) {
    for (int leaf = 0; leaf < z - 1; ++leaf) edges.push_back({centre, next++});
  }
  return LatticeGraph::from_edges(next, std::move(edges), LatticeFamily::custom);
}

std::vector<ImfVerificationRow> verify_imf_formulas(const ImfVerificationOptions& options) {
  std::vector<ImfVerificationRow> rows;
  const auto& c = options.couplings;
  auto zz_x = [](const DensityMatrix& pair) {
    return (pair.matrix() * kron(pauli::x(), pauli::x())).trace().real();
  };
  auto sz = [](const DensityMatrix& site) { return (site.matrix() * pauli::z()).trace().real(); };

  auto fill = [&](ImfVerificationRow& row, const DensityMatrix& site, const DensityMatrix& pair, int z, double xi) {
    const ImfParams p{Complex{xi, 0.0}, z};
    row.site_dev_z = (site.matrix() - imf_rho_site(p, SiteExponent::z).matrix()).norm();
    row.site_dev_half = (site.matrix() - imf_rho_site(p, SiteExponent::half_z).matrix()).norm();
    row.pair_dev = (pair.matrix() - imf_rho_pair(p).matrix()).norm();
    const double tie = 1e-13;
    if (std::abs(row.site_dev_z - row.site_dev_half) <= tie) {
      row.winner = "tie";
    } else {
      row.winner = row.site_dev_z < row.site_dev_half ? "Z" : "Z/2";
    }
  };

  for (int z : options.star_z) {
    for (double xi : options.xi) {
      for (int variant = 0; variant < 2; ++variant) {
        const LatticeGraph g = variant == 0 ? make_star(z) : make_double_star(z);
        const ComplexVector psi = construct_imf_state(g, Complex{xi, 0.0});
        const int centre[1] = {0};
        const int pair_sites[2] = {0, 1};
        const DensityMatrix site = reduced(psi, g.n_sites(), centre);
        const DensityMatrix pair = reduced(psi, g.n_sites(), pair_sites);
        ImfVerificationRow row;
        row.graph = variant == 0 ? "star" : "double_star";
        row.n_sites = g.n_sites();
        row.z = z;
        row.xi = xi;
        fill(row, site, pair, z, xi);
        const double estimate = -0.5 * c.j * zz_x(pair) - c.b * sz(site);
        row.energy_dev = std::abs(estimate - imf_energy({Complex{xi, 0.0}, z}, c));
        rows.push_back(row);
      }
    }
  }

  for (int n : options.ring_sites) {
    const LatticeGraph g = make_ring(n);
    const SpinModel model = ising(c.j, c.b, g);
    for (double xi : options.xi) {
      const ComplexVector psi = construct_imf_state(g, Complex{xi, 0.0});
      const int centre[1] = {0};
      const int pair_sites[2] = {0, 1};
      ImfVerificationRow row;
      row.graph = "ring";
      row.n_sites = n;
      row.z = 2;
      row.xi = xi;
      fill(row, reduced(psi, n, centre), reduced(psi, n, pair_sites), 2, xi);
      row.energy_dev = std::abs(expectation(model, view(psi)) / n - imf_energy({Complex{xi, 0.0}, 2}, c));
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace spinlab
