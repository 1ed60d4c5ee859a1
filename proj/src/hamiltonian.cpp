#include "spinlab/hamiltonian.hpp"

#include <cmath>
#include <string>

#include "spinlab/errors.hpp"

namespace spinlab {

namespace {

void require_finite(const SpinModel& model) {
  if (!model.j_tensor.allFinite() || !model.b_field.allFinite()) throw DomainError("model: non-finite coupling");
}

void require_regular(const LatticeGraph& graph) {
  if (!graph.regular()) {
    throw ConventionError("hamiltonian: the 1/Z normalization needs a regular graph (family " +
                          to_string(graph.family()) + " is irregular)");
  }
}

void set_pauli(kernels::PauliTerm& term, std::uint32_t bit, int axis) {
  switch (axis) {
    case 0: term.x_mask |= bit; break;
    case 1: term.y_mask |= bit; break;
    default: term.z_mask |= bit; break;
  }
}

}  // namespace

SpinModel ising(double j, double b, LatticeGraph graph) {
  if (!std::isfinite(j) || !std::isfinite(b)) throw DomainError("ising: non-finite coupling");
  SpinModel model{Matrix3::Zero(), Vector3::Zero(), std::move(graph)};
  model.j_tensor(0, 0) = -j;
  model.b_field(2) = -b;
  return model;
}

SpinModel ising(const IsingModel& model) { return ising(model.j, model.b, model.graph); }

std::optional<IsingCouplings> as_ising(const SpinModel& model) {
  Matrix3 rest = model.j_tensor;
  rest(0, 0) = 0.0;
  if (!rest.isZero(0.0) || model.b_field(0) != 0.0 || model.b_field(1) != 0.0) return std::nullopt;
  return IsingCouplings{-model.j_tensor(0, 0), -model.b_field(2)};
}

ModelNorms norms(const SpinModel& model) {
  return {model.j_tensor.cwiseAbs().sum(), model.b_field.cwiseAbs().sum()};
}

kernels::PauliSum pauli_terms(const SpinModel& model) {
  require_finite(model);
  require_regular(model.graph);
  const int n = model.graph.n_sites();
  if ((std::size_t{1} << n) > kMaxHilbertDim) {
    throw SizeError("hamiltonian: 2^" + std::to_string(n) + " exceeds the Hilbert-space cap");
  }
  const double inv_z = 1.0 / model.graph.z();
  kernels::PauliSum sum;
  sum.n_qubits = n;
  for (const Edge& e : model.graph.edges()) {
    for (int alpha = 0; alpha < 3; ++alpha) {
      for (int beta = 0; beta < 3; ++beta) {
        const double c = model.j_tensor(alpha, beta);
        if (c == 0.0) continue;
        kernels::PauliTerm term;
        set_pauli(term, kernels::site_bit(n, e.a), alpha);
        set_pauli(term, kernels::site_bit(n, e.b), beta);
        term.coeff = c * inv_z;
        sum.terms.push_back(term);
      }
    }
  }
  for (int site = 0; site < n; ++site) {
    for (int alpha = 0; alpha < 3; ++alpha) {
      const double c = model.b_field(alpha);
      if (c == 0.0) continue;
      kernels::PauliTerm term;
      set_pauli(term, kernels::site_bit(n, site), alpha);
      term.coeff = c;
      sum.terms.push_back(term);
    }
  }
  return sum;
}

ComplexMatrix build(const SpinModel& model) {
  require_finite(model);
  require_regular(model.graph);
  const int n = model.graph.n_sites();
  const std::size_t dim = std::size_t{1} << n;
  if (dim > kMaxDenseDim) {
    throw SizeError("hamiltonian: dense build limited to 2^12 states, model has 2^" + std::to_string(n));
  }
  const auto d = static_cast<Eigen::Index>(dim);
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  std::vector<ComplexMatrix> factors(static_cast<std::size_t>(n), pauli::identity());
  const double inv_z = 1.0 / model.graph.z();

  for (const Edge& e : model.graph.edges()) {
    for (int alpha = 0; alpha < 3; ++alpha) {
      for (int beta = 0; beta < 3; ++beta) {
        const double c = model.j_tensor(alpha, beta);
        if (c == 0.0) continue;
        factors[e.a] = pauli::by_index(alpha + 1);
        factors[e.b] = pauli::by_index(beta + 1);
        h += (c * inv_z) * kron_all(factors);
        factors[e.a] = pauli::identity();
        factors[e.b] = pauli::identity();
      }
    }
  }
  for (int site = 0; site < n; ++site) {
    ComplexMatrix local = ComplexMatrix::Zero(2, 2);
    for (int alpha = 0; alpha < 3; ++alpha) local += model.b_field(alpha) * pauli::by_index(alpha + 1);
    if (local.isZero(0.0)) continue;
    factors[site] = local;
    h += kron_all(factors);
    factors[site] = pauli::identity();
  }
  return h;
}

double operator_norm_bound(const SpinModel& model) {
  const int n = model.graph.n_sites();
  const double edges = static_cast<double>(model.graph.edges().size());
  const double z = std::max(1, model.graph.z());
  return edges / z * model.j_tensor.cwiseAbs().sum() + n * model.b_field.cwiseAbs().sum();
}

double expectation(const SpinModel& model, std::span<const Complex> psi) {
  const auto terms = pauli_terms(model);
  std::vector<Complex> h_psi(psi.size());
  kernels::apply_pauli_sum(terms, psi, h_psi);
  return kernels::inner(psi, h_psi).real();
}

SpinModel model_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("model: document must be an object");
  try {
    LatticeGraph graph = lattice_from_json(doc.at("lattice"));
    if (doc.contains("ising")) {
      const auto& p = doc.at("ising");
      return ising(p.at("J").get<double>(), p.at("B").get<double>(), std::move(graph));
    }
    SpinModel model{Matrix3::Zero(), Vector3::Zero(), std::move(graph)};
    const auto& j = doc.at("J");
    const auto& b = doc.at("B");
    if (!j.is_array() || j.size() != 3) throw ValidationError("model: J must be a 3x3 array");
    if (!b.is_array() || b.size() != 3) throw ValidationError("model: B must have 3 entries");
    for (int r = 0; r < 3; ++r) {
      if (!j[r].is_array() || j[r].size() != 3) throw ValidationError("model: J row " + std::to_string(r) + " must have 3 entries");
      for (int c = 0; c < 3; ++c) model.j_tensor(r, c) = j[r][c].get<double>();
      model.b_field(r) = b[r].get<double>();
    }
    require_finite(model);
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("model: ") + e.what());
  }
}

nlohmann::json model_to_json(const SpinModel& model) {
  nlohmann::json j = nlohmann::json::array();
  for (int r = 0; r < 3; ++r) j.push_back({model.j_tensor(r, 0), model.j_tensor(r, 1), model.j_tensor(r, 2)});
  return {{"J", j},
          {"B", {model.b_field(0), model.b_field(1), model.b_field(2)}},
          {"lattice", lattice_to_json(model.graph)}};
}

}  // namespace spinlab
