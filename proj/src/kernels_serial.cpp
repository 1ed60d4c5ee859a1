// Serial reference kernels. Kept deliberately naive; used by tests and benchmarks only.

#include <string>

#include "spinlab/errors.hpp"
#include "spinlab/kernels.hpp"

namespace spinlab::kernels::serial {

void apply_pauli_sum(const PauliSum& op, std::span<const Complex> in, std::span<Complex> out) {
  const std::size_t dim = std::size_t{1} << op.n_qubits;
  if (in.size() != dim || out.size() != dim) throw ShapeError("serial::apply_pauli_sum: length mismatch");
  std::fill(out.begin(), out.end(), Complex{0.0, 0.0});
  for (const PauliTerm& term : op.terms) {
    const std::uint32_t flip = term.x_mask | term.y_mask;
    for (std::uint32_t t = 0; t < dim; ++t) {
      out[t ^ flip] += term.coeff * pauli_phase(term, t) * in[t];
    }
  }
}

void apply_xx_entangler(std::span<Complex> psi, int n_qubits, int site_a, int site_b, Complex cosh_xi,
                        Complex sinh_xi) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (psi.size() != dim) throw ShapeError("serial::apply_xx_entangler: length mismatch");
  const std::uint32_t mask = site_bit(n_qubits, site_a) | site_bit(n_qubits, site_b);
  std::vector<Complex> copy(psi.begin(), psi.end());
  for (std::uint32_t s = 0; s < dim; ++s) psi[s] = cosh_xi * copy[s] + sinh_xi * copy[s ^ mask];
}

ComplexMatrix reduce_pure(std::span<const Complex> psi, int n_qubits, std::span<const int> keep) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (psi.size() != dim) throw ShapeError("serial::reduce_pure: length mismatch");
  const auto k = keep.size();
  std::uint32_t keep_mask = 0;
  for (int site : keep) keep_mask |= site_bit(n_qubits, site);
  auto deposit = [&](std::uint32_t a) {
    std::uint32_t s = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (a & (1u << (k - 1 - j))) s |= site_bit(n_qubits, keep[j]);
    }
    return s;
  };
  const auto m = static_cast<Eigen::Index>(std::size_t{1} << k);
  ComplexMatrix rho = ComplexMatrix::Zero(m, m);
  for (std::uint32_t rest = 0; rest < dim; ++rest) {
    if (rest & keep_mask) continue;
    for (Eigen::Index r = 0; r < m; ++r) {
      for (Eigen::Index c = 0; c < m; ++c) {
        rho(r, c) += psi[rest | deposit(static_cast<std::uint32_t>(r))] *
                     std::conj(psi[rest | deposit(static_cast<std::uint32_t>(c))]);
      }
    }
  }
  return rho;
}

double norm_squared(std::span<const Complex> psi) {
  double acc = 0.0;
  for (const Complex& v : psi) acc += std::norm(v);
  return acc;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw ShapeError("serial::inner: length mismatch");
  Complex acc{0.0, 0.0};
  for (std::size_t s = 0; s < a.size(); ++s) acc += std::conj(a[s]) * b[s];
  return acc;
}

}  // namespace spinlab::kernels::serial
