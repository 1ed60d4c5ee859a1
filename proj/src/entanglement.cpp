#include "spinlab/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinlab/errors.hpp"

namespace spinlab {

namespace {

const ComplexMatrix& flip_operator() {
  static const ComplexMatrix s = kron(pauli::y(), pauli::y());
  return s;
}

// Bilinear form a^T (sy x sy) b; |tau(w, w)| is the concurrence of a normalized w.
Complex flip_form(const ComplexVector& a, const ComplexVector& b) {
  return (a.transpose() * flip_operator() * b)(0, 0);
}

void require_dim(const DensityMatrix& rho, int dim, const char* what) {
  if (rho.dim() != dim) {
    throw ShapeError(std::string(what) + ": expected a " + std::to_string(dim) + "x" + std::to_string(dim) +
                     " density matrix");
  }
}

// Real orthogonal V with diag(V A V^T) = 0 for real symmetric traceless A, built from
// Givens rotations that zero one diagonal entry at a time.
Eigen::MatrixXd zero_diagonal_rotation(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const double akk = a(k, k);
    if (std::abs(akk) <= 1e-16) continue;
    Eigen::Index partner = -1;
    double best = 0.0;
    for (Eigen::Index j = k + 1; j < n; ++j) {
      const double opposite = -std::copysign(1.0, akk) * a(j, j);
      if (opposite > best) {
        best = opposite;
        partner = j;
      }
    }
    if (partner < 0) continue;
    const double b = a(k, partner);
    const double d = a(partner, partner);
    const double disc = std::sqrt(std::max(0.0, b * b - akk * d));
    const double t1 = (-b + disc) / d;
    const double t2 = (-b - disc) / d;
    const double t = std::abs(t1) < std::abs(t2) ? t1 : t2;
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
    g(k, k) = c;
    g(k, partner) = s;
    g(partner, k) = -s;
    g(partner, partner) = c;
    a = g * a * g.transpose();
    v = g * v;
  }
  return v;
}

// Angles alpha_j with sum_j d_j exp(i alpha_j) = 0 for descending d with d0 <= d1 + d2 + d3.
std::array<double, 4> closing_angles(const std::array<double, 4>& d) {
  std::array<double, 4> alpha{0.0, 0.0, 0.0, 0.0};
  const double radius = std::max(std::abs(d[0] - d[3]), std::abs(d[1] - d[2]));
  if (d[0] * d[3] > 0.0) {
    const double cos3 = std::clamp((radius * radius - d[0] * d[0] - d[3] * d[3]) / (2.0 * d[0] * d[3]), -1.0, 1.0);
    alpha[3] = std::acos(cos3);
  }
  const Complex p = d[0] + d[3] * std::polar(1.0, alpha[3]);
  // First two sides already cancel: the other two must as well (radius is then ~0).
  if (std::abs(p) <= 1e-14 * d[0] || radius <= 1e-14 * d[0]) {
    alpha[2] = std::numbers::pi;
    return alpha;
  }
  if (d[1] <= 0.0) return alpha;
  const double cos_beta = std::clamp((d[1] * d[1] + radius * radius - d[2] * d[2]) / (2.0 * d[1] * radius), -1.0, 1.0);
  alpha[1] = std::arg(-p) + std::acos(cos_beta);
  const Complex rest = -p - d[1] * std::polar(1.0, alpha[1]);
  if (d[2] > 0.0) alpha[2] = std::arg(rest);
  return alpha;
}

Eigen::MatrixXd hadamard(Eigen::Index n) {
  Eigen::MatrixXd h(n, n);
  if (n == 2) {
    h << 1, 1, 1, -1;
    return h / std::sqrt(2.0);
  }
  h << 1, 1, 1, 1, 1, 1, -1, -1, 1, -1, 1, -1, 1, -1, -1, 1;
  return h / 2.0;
}

}  // namespace

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix m, double tol) {
  if (m.rows() != m.cols() || (m.rows() != 2 && m.rows() != 4)) {
    throw ValidationError("density matrix: dimension must be 2 or 4 (got " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ")");
  }
  if (!all_finite(m)) throw ValidationError("density matrix: non-finite entry");
  if ((m - m.adjoint()).norm() > tol) throw ValidationError("density matrix: not Hermitian within tolerance");
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  const Complex trace = h.trace();
  if (std::abs(trace - 1.0) > tol) {
    throw ValidationError("density matrix: trace " + std::to_string(trace.real()) + " is not 1 within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues()[0] < -tol) {
    throw ValidationError("density matrix: not positive semidefinite (min eigenvalue " +
                          std::to_string(solver.eigenvalues()[0]) + ")");
  }
  return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::from_pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (norm <= 0.0) throw DomainError("density matrix: zero state vector");
  const ComplexVector unit = psi / norm;
  return from_matrix(unit * unit.adjoint());
}

ComplexMatrix spin_flip(const DensityMatrix& rho) {
  require_dim(rho, 4, "spin_flip");
  const ComplexMatrix& s = flip_operator();
  return s * rho.matrix().conjugate() * s;
}

ConcurrenceResult concurrence(const DensityMatrix& rho) {
  require_dim(rho, 4, "concurrence");
  // lambda_i^2 are the eigenvalues of sqrt(rho) rho~ sqrt(rho); we take them as singular values
  // of X^T (sy x sy) X with rho = X X^+, which stays accurate for rank-deficient rho.
  const auto eig = hermitian_eig(rho.matrix());
  ComplexMatrix x = eig.eigenvectors;
  for (int k = 0; k < 4; ++k) x.col(k) *= std::sqrt(std::max(0.0, clamp_nonnegative(eig.eigenvalues[k])));
  const ComplexMatrix tau = x.transpose() * flip_operator() * x;
  const Eigen::JacobiSVD<ComplexMatrix> svd(tau);

  ConcurrenceResult out;
  for (int k = 0; k < 4; ++k) out.lambdas[k] = svd.singularValues()[k];
  const double raw = out.lambdas[0] - out.lambdas[1] - out.lambdas[2] - out.lambdas[3];
  out.c = std::clamp(raw, 0.0, 1.0);
  return out;
}

double pure_concurrence(const ComplexVector& psi) {
  if (psi.size() != 4) throw ShapeError("pure_concurrence: expected a 4-vector");
  const ComplexVector unit = psi / psi.norm();
  return std::min(1.0, 2.0 * std::abs(unit[0] * unit[3] - unit[1] * unit[2]));
}

double one_tangle(const DensityMatrix& rho) {
  require_dim(rho, 2, "one_tangle");
  const double det = (rho.matrix()(0, 0) * rho.matrix()(1, 1) - rho.matrix()(0, 1) * rho.matrix()(1, 0)).real();
  return std::clamp(4.0 * det, 0.0, 1.0);
}

double monogamy_residual(const DensityMatrix& site_rho, std::span<const double> neighbor_concurrences) {
  double sum = 0.0;
  for (double c : neighbor_concurrences) {
    if (c < 0.0 || c > 1.0) throw DomainError("monogamy_residual: concurrence outside [0, 1]");
    sum += c * c;
  }
  return one_tangle(site_rho) - sum;
}

double concurrence_bound(double tau1, int z) {
  if (z < 1) throw DomainError("concurrence_bound: Z must be >= 1");
  if (tau1 < 0.0 || tau1 > 1.0) throw DomainError("concurrence_bound: tau1 outside [0, 1]");
  return std::min(std::sqrt(tau1 / z), std::sqrt(1.0 / z));
}

double nnn_bound(int d) {
  if (d < 2) throw DomainError("nnn_bound: needs D >= 2, got " + std::to_string(d));
  return 1.0 / std::sqrt(2.0 * d * (d - 1));
}

double energy_gap_bound(double c, const SpinModel& model) {
  if (c < 0.0 || c > 1.0) throw DomainError("energy_gap_bound: concurrence outside [0, 1]");
  const auto n = norms(model);
  return (n.j_norm + 2.0 * n.b_norm) * std::sqrt(c);
}

ComplexMatrix WoottersDecomposition::reconstruct() const {
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  for (const auto& member : ensemble) rho += member.weight * member.state * member.state.adjoint();
  return rho;
}

WoottersDecomposition wootters_decompose(const DensityMatrix& rho) {
  require_dim(rho, 4, "wootters_decompose");
  const auto eig = hermitian_eig(rho.matrix());

  // Subnormalized eigenvectors v_k = sqrt(p_k) e_k, largest weight first.
  std::vector<ComplexVector> v;
  for (int k = 3; k >= 0; --k) {
    if (eig.eigenvalues[k] > 1e-13) v.emplace_back(std::sqrt(eig.eigenvalues[k]) * eig.eigenvectors.col(k));
  }
  const auto r = static_cast<Eigen::Index>(v.size());
  ComplexMatrix basis(4, r);
  for (Eigen::Index k = 0; k < r; ++k) basis.col(k) = v[static_cast<std::size_t>(k)];

  ComplexMatrix tau(r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < r; ++j) tau(i, j) = flip_form(basis.col(i), basis.col(j));
  }
  tau = 0.5 * (tau + tau.transpose());
  const auto tk = takagi(tau);
  // x_i = sum_j conj(U_ji) v_j diagonalizes the flip form: tau(x_i, x_k) = d_i delta_ik.
  const ComplexMatrix x = basis * tk.unitary.conjugate();

  std::array<double, 4> d{0.0, 0.0, 0.0, 0.0};
  for (Eigen::Index k = 0; k < r; ++k) d[k] = tk.singular_values[k];
  const double raw = d[0] - d[1] - d[2] - d[3];

  ComplexMatrix members;
  WoottersDecomposition out;
  if (raw > 0.0) {
    out.concurrence = std::min(raw, 1.0);
    ComplexMatrix y = x;
    for (Eigen::Index k = 1; k < r; ++k) y.col(k) *= Complex{0.0, 1.0};
    Eigen::MatrixXd target = Eigen::MatrixXd::Zero(r, r);
    for (Eigen::Index k = 0; k < r; ++k) target(k, k) = (k == 0 ? d[0] : -d[k]);
    const Eigen::MatrixXd gram = (y.adjoint() * y).real();
    const Eigen::MatrixXd v_rot = zero_diagonal_rotation(target - raw * gram);
    members = y * v_rot.transpose().cast<Complex>();
  } else if (r == 1) {
    members = x;
  } else {
    const Eigen::Index n = (r == 2) ? 2 : 4;
    const auto alpha = closing_angles(d);
    ComplexMatrix y = ComplexMatrix::Zero(4, n);
    for (Eigen::Index k = 0; k < r; ++k) y.col(k) = std::polar(1.0, 0.5 * alpha[k]) * x.col(k);
    members = y * hadamard(n).transpose().cast<Complex>();
  }

  for (Eigen::Index i = 0; i < members.cols(); ++i) {
    const double weight = members.col(i).squaredNorm();
    if (weight <= 1e-15) continue;
    out.ensemble.push_back({weight, members.col(i) / std::sqrt(weight)});
  }
  double total = 0.0;
  for (const auto& m : out.ensemble) total += m.weight;
  for (auto& m : out.ensemble) m.weight /= total;
  return out;
}

ComplexVector AbouraddySplit::product_part() const {
  ComplexVector out(4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out[2 * i + j] = psi_mu[i] * psi_nu[j];
  }
  return out;
}

ComplexVector AbouraddySplit::reconstruct() const {
  ComplexVector phi_plus = ComplexVector::Zero(4);
  phi_plus[0] = phi_plus[3] = 1.0 / std::sqrt(2.0);
  const ComplexVector bell = kron(u_mu, u_nu) * phi_plus;
  return std::sqrt(std::max(0.0, 1.0 - c)) * product_part() + std::sqrt(c) * bell;
}

AbouraddySplit abouraddy_split(const ComplexVector& psi) {
  if (psi.size() != 4) throw ShapeError("abouraddy_split: expected a 4-vector");
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-8) throw DomainError("abouraddy_split: input is not normalized");
  const ComplexVector unit = psi / norm;

  ComplexMatrix coeff(2, 2);
  coeff << unit[0], unit[1], unit[2], unit[3];
  Eigen::JacobiSVD<ComplexMatrix> svd(coeff, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double a = svd.singularValues()[0];
  const double b = svd.singularValues()[1];
  const ComplexVector e0 = svd.matrixU().col(0);
  const ComplexVector e1 = svd.matrixU().col(1);
  const ComplexVector f0 = svd.matrixV().col(0).conjugate();
  const ComplexVector f1 = svd.matrixV().col(1).conjugate();
  const Complex i{0.0, 1.0};

  AbouraddySplit out;
  out.c = std::min(1.0, 2.0 * a * b);
  // Product part u x w with u = cos(t) e0 + i sin(t) e1, cos^2(t) = a / (a + b), weight a - b.
  const double cos_t = std::sqrt(a / (a + b));
  const double sin_t = std::sqrt(b / (a + b));
  out.psi_mu = cos_t * e0 + i * sin_t * e1;
  out.psi_nu = cos_t * f0 + i * sin_t * f1;

  const double diag = std::sqrt(2.0 * a * b) / (a + b);
  const Complex off = -i * (a - b) / ((a + b) * std::sqrt(2.0));
  auto outer = [](const ComplexVector& u, const ComplexVector& w) {
    ComplexVector v(4);
    for (int r = 0; r < 2; ++r) {
      for (int s = 0; s < 2; ++s) v[2 * r + s] = u[r] * w[s];
    }
    return v;
  };
  out.bell_part = diag * (outer(e0, f0) + outer(e1, f1)) + off * (outer(e0, f1) + outer(e1, f0));

  // (U x 1)|Phi+> has coefficient matrix U / sqrt(2).
  ComplexMatrix bell_coeff(2, 2);
  bell_coeff << out.bell_part[0], out.bell_part[1], out.bell_part[2], out.bell_part[3];
  Eigen::JacobiSVD<ComplexMatrix> polar(std::sqrt(2.0) * bell_coeff, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.u_mu = polar.matrixU() * polar.matrixV().adjoint();
  out.u_nu = ComplexMatrix::Identity(2, 2);
  return out;
}

OnsiteAnalysis onsite_analysis(const DensityMatrix& rho) {
  require_dim(rho, 2, "onsite_analysis");
  return {rho.matrix()(1, 1).real(), rho.matrix()(0, 1)};
}

ExponentIteration iterate_exponents(double c0, int max_iter, double tol) {
  if (!(c0 > 0.0 && c0 <= 1.0)) throw DomainError("iterate_exponents: c0 must lie in (0, 1]");
  if (!(tol > 0.0)) throw DomainError("iterate_exponents: tol must be positive");
  ExponentIteration out;
  out.trace.push_back(c0);
  double c = c0;
  for (int n = 1; n <= max_iter; ++n) {
    const double tau = c / 2.0;            // tau1 <= O(sqrt(C))
    const double next = (tau + 1.0) / 2.0;  // C <= sqrt(tau1 / Z)
    out.trace.push_back(next);
    out.iterations = n;
    const bool done = std::abs(next - c) <= tol;
    c = next;
    if (done) {
      out.c_exponent = c;
      out.tau_exponent = c / 2.0;
      return out;
    }
  }
  throw IterationError("iterate_exponents: no convergence within " + std::to_string(max_iter) + " iterations");
}

ComplexVector random_pure_state(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal;
  ComplexVector psi(dim);
  for (int k = 0; k < dim; ++k) psi[k] = Complex{normal(rng), normal(rng)};
  return psi / psi.norm();
}

DensityMatrix random_density(std::mt19937_64& rng, int dim, int ancilla_dim) {
  const ComplexVector psi = random_pure_state(rng, dim * ancilla_dim);
  const ComplexMatrix pure = psi * psi.adjoint();
  const int dims[2] = {dim, ancilla_dim};
  const int keep[1] = {0};
  return DensityMatrix::from_matrix(partial_trace(pure, dims, keep));
}

ComplexMatrix random_unitary(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal;
  ComplexMatrix g(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) g(r, c) = Complex{normal(rng), normal(rng)};
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    const Complex diag = rmat(k, k);
    if (std::abs(diag) > 0.0) q.col(k) *= diag / std::abs(diag);
  }
  return q;
}

DensityMatrix density_from_json(const nlohmann::json& doc) {
  try {
    const int dim = doc.at("dim").get<int>();
    if (dim != 2 && dim != 4) throw ValidationError("density matrix: dim must be 2 or 4");
    const auto& re = doc.at("re");
    const auto& im = doc.at("im");
    if (!re.is_array() || !im.is_array() || re.size() != static_cast<std::size_t>(dim) ||
        im.size() != static_cast<std::size_t>(dim)) {
      throw ValidationError("density matrix: re/im must be " + std::to_string(dim) + "x" + std::to_string(dim));
    }
    ComplexMatrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
      if (re[r].size() != static_cast<std::size_t>(dim) || im[r].size() != static_cast<std::size_t>(dim)) {
        throw ValidationError("density matrix: row " + std::to_string(r) + " has the wrong length");
      }
      for (int c = 0; c < dim; ++c) m(r, c) = Complex{re[r][c].get<double>(), im[r][c].get<double>()};
    }
    return DensityMatrix::from_matrix(std::move(m));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("density matrix: ") + e.what());
  }
}

nlohmann::json density_to_json(const DensityMatrix& rho) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (int r = 0; r < rho.dim(); ++r) {
    nlohmann::json rr = nlohmann::json::array();
    nlohmann::json ii = nlohmann::json::array();
    for (int c = 0; c < rho.dim(); ++c) {
      rr.push_back(rho.matrix()(r, c).real());
      ii.push_back(rho.matrix()(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"dim", rho.dim()}, {"re", re}, {"im", im}};
}

}  // namespace spinlab
