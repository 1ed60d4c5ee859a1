#pragma once

// Data-parallel kernels over the 2^N computational basis.
//
// Every kernel exists twice: an OpenMP version used by the library and a
// serial reference written along a different loop order (scatter instead of
// gather, rest-index-outer instead of basis-outer). The unit tests compare the
// two, and bench/ times them against each other.
//
// Basis convention: site 0 is the most significant bit, so the state index
// matches kron(site0, site1, ...). Bit value 0 is |up> (sigma^z = +1).

#include <cstdint>
#include <span>
#include <vector>

#include "spinlab/qla.hpp"

namespace spinlab::kernels {

/// coeff * (tensor product of Paulis), encoded by site bit masks.
struct PauliTerm {
  std::uint32_t x_mask = 0;
  std::uint32_t y_mask = 0;
  std::uint32_t z_mask = 0;
  Complex coeff{0.0, 0.0};
};

struct PauliSum {
  int n_qubits = 0;
  std::vector<PauliTerm> terms;
};

inline std::uint32_t site_bit(int n_qubits, int site) { return std::uint32_t{1} << (n_qubits - 1 - site); }

/// Number of threads an OpenMP region will use (honours SPINLAB_THREADS via set_thread_cap).
int thread_count();
/// Caps OpenMP parallelism; values < 1 are ignored.
void set_thread_cap(int threads);
/// Reads SPINLAB_THREADS from the environment and applies it if set.
void apply_thread_env();

// OpenMP implementations.
void apply_pauli_sum(const PauliSum& op, std::span<const Complex> in, std::span<Complex> out);
/// (cosh + sinh sigma^x_a sigma^x_b) |psi>, in place.
void apply_xx_entangler(std::span<Complex> psi, int n_qubits, int site_a, int site_b, Complex cosh_xi, Complex sinh_xi);
/// Reduced density matrix of a pure state on the (ascending, distinct) sites in `keep`.
ComplexMatrix reduce_pure(std::span<const Complex> psi, int n_qubits, std::span<const int> keep);
double norm_squared(std::span<const Complex> psi);
Complex inner(std::span<const Complex> a, std::span<const Complex> b);

namespace serial {
void apply_pauli_sum(const PauliSum& op, std::span<const Complex> in, std::span<Complex> out);
void apply_xx_entangler(std::span<Complex> psi, int n_qubits, int site_a, int site_b, Complex cosh_xi, Complex sinh_xi);
ComplexMatrix reduce_pure(std::span<const Complex> psi, int n_qubits, std::span<const int> keep);
double norm_squared(std::span<const Complex> psi);
Complex inner(std::span<const Complex> a, std::span<const Complex> b);
}  // namespace serial

/// Phase picked up by a basis state under a Pauli string: P|t> = phase(t) |t ^ flip>.
Complex pauli_phase(const PauliTerm& term, std::uint32_t basis_state);

}  // namespace spinlab::kernels
