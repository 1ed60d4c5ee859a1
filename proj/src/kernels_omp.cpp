#include <omp.h>

#include <bit>
#include <cstdlib>
#include <string>

#include "spinlab/errors.hpp"
#include "spinlab/kernels.hpp"

namespace spinlab::kernels {

namespace {

constexpr Complex kImagPowers[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};

void check_sizes(std::size_t in, std::size_t out, int n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (in != dim || out != dim) throw ShapeError("kernel: vector length does not match 2^" + std::to_string(n_qubits));
}

// Position of each kept site in the reduced index (keep[0] is most significant).
struct KeepLayout {
  std::uint32_t keep_mask = 0;
  std::vector<std::uint32_t> bits;  // bit of keep[j] in the full index

  KeepLayout(int n_qubits, std::span<const int> keep) {
    int previous = -1;
    for (int site : keep) {
      if (site < 0 || site >= n_qubits || site <= previous) {
        throw ShapeError("reduce_pure: keep sites must be ascending, distinct and in range");
      }
      previous = site;
      bits.push_back(site_bit(n_qubits, site));
      keep_mask |= bits.back();
    }
  }

  std::uint32_t extract(std::uint32_t s) const {
    std::uint32_t a = 0;
    for (std::uint32_t bit : bits) a = (a << 1) | ((s & bit) ? 1u : 0u);
    return a;
  }

  std::uint32_t deposit(std::uint32_t a) const {
    std::uint32_t s = 0;
    const auto k = bits.size();
    for (std::size_t j = 0; j < k; ++j) {
      if (a & (1u << (k - 1 - j))) s |= bits[j];
    }
    return s;
  }
};

}  // namespace

Complex pauli_phase(const PauliTerm& term, std::uint32_t basis_state) {
  const int ny = std::popcount(term.y_mask);
  const int sign = std::popcount(basis_state & (term.y_mask | term.z_mask)) & 1;
  const Complex phase = kImagPowers[ny & 3];
  return sign ? -phase : phase;
}

int thread_count() { return omp_get_max_threads(); }

void set_thread_cap(int threads) {
  if (threads >= 1) omp_set_num_threads(threads);
}

void apply_thread_env() {
  if (const char* env = std::getenv("SPINLAB_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && value >= 1) set_thread_cap(static_cast<int>(value));
  }
}

void apply_pauli_sum(const PauliSum& op, std::span<const Complex> in, std::span<Complex> out) {
  check_sizes(in.size(), out.size(), op.n_qubits);
  const auto dim = static_cast<std::int64_t>(in.size());
  const auto n_terms = op.terms.size();

#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < dim; ++s) {
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < n_terms; ++k) {
      const PauliTerm& term = op.terms[k];
      const auto source = static_cast<std::uint32_t>(s) ^ (term.x_mask | term.y_mask);
      acc += term.coeff * pauli_phase(term, source) * in[source];
    }
    out[static_cast<std::size_t>(s)] = acc;
  }
}

void apply_xx_entangler(std::span<Complex> psi, int n_qubits, int site_a, int site_b, Complex cosh_xi,
                        Complex sinh_xi) {
  check_sizes(psi.size(), psi.size(), n_qubits);
  if (site_a == site_b) throw ShapeError("apply_xx_entangler: sites must differ");
  const std::uint32_t bit_a = site_bit(n_qubits, site_a);
  const std::uint32_t mask = bit_a | site_bit(n_qubits, site_b);
  const auto dim = static_cast<std::int64_t>(psi.size());

#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < dim; ++s) {
    const auto lo = static_cast<std::uint32_t>(s);
    if (lo & bit_a) continue;
    const std::uint32_t hi = lo ^ mask;
    const Complex p = psi[lo];
    const Complex q = psi[hi];
    psi[lo] = cosh_xi * p + sinh_xi * q;
    psi[hi] = cosh_xi * q + sinh_xi * p;
  }
}

ComplexMatrix reduce_pure(std::span<const Complex> psi, int n_qubits, std::span<const int> keep) {
  check_sizes(psi.size(), psi.size(), n_qubits);
  const KeepLayout layout(n_qubits, keep);
  const auto m = std::size_t{1} << keep.size();
  const auto dim = static_cast<std::int64_t>(psi.size());

  std::vector<std::uint32_t> deposits(m);
  for (std::uint32_t a = 0; a < m; ++a) deposits[a] = layout.deposit(a);

  const int threads = omp_get_max_threads();
  std::vector<std::vector<Complex>> partial(static_cast<std::size_t>(threads), std::vector<Complex>(m * m));

#pragma omp parallel num_threads(threads)
  {
    auto& acc = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
    for (std::int64_t s = 0; s < dim; ++s) {
      const auto state = static_cast<std::uint32_t>(s);
      const Complex amp = psi[state];
      if (amp == Complex{0.0, 0.0}) continue;
      const std::uint32_t row = layout.extract(state);
      const std::uint32_t rest = state & ~layout.keep_mask;
      for (std::size_t col = 0; col < m; ++col) {
        acc[row * m + col] += amp * std::conj(psi[rest | deposits[col]]);
      }
    }
  }

  ComplexMatrix rho = ComplexMatrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (const auto& acc : partial) {
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += acc[r * m + c];
    }
  }
  return rho;
}

double norm_squared(std::span<const Complex> psi) {
  const auto dim = static_cast<std::int64_t>(psi.size());
  double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
  for (std::int64_t s = 0; s < dim; ++s) acc += std::norm(psi[static_cast<std::size_t>(s)]);
  return acc;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw ShapeError("inner: length mismatch");
  const auto dim = static_cast<std::int64_t>(a.size());
  double re = 0.0;
  double im = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : re, im)
  for (std::int64_t s = 0; s < dim; ++s) {
    const Complex v = std::conj(a[static_cast<std::size_t>(s)]) * b[static_cast<std::size_t>(s)];
    re += v.real();
    im += v.imag();
  }
  return {re, im};
}

}  // namespace spinlab::kernels
