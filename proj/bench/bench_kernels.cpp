// OpenMP kernels against their serial references on IMF-type states.
#include <benchmark/benchmark.h>

#include <vector>

#include "spinlab/ed_oracle.hpp"
#include "spinlab/hamiltonian.hpp"
#include "spinlab/kernels.hpp"
#include "spinlab/lattice.hpp"

namespace {

using namespace spinlab;

std::vector<Complex> imf_state(int n) {
  const ComplexVector psi = construct_imf_state(make_ring(n), Complex{0.1, 0.0});
  return {psi.data(), psi.data() + psi.size()};
}

template <bool Parallel>
void BM_ApplyPauliSum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto terms = pauli_terms(ising(1.0, 2.0, make_ring(n)));
  const auto in = imf_state(n);
  std::vector<Complex> out(in.size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::apply_pauli_sum(terms, in, out);
    } else {
      kernels::serial::apply_pauli_sum(terms, in, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(in.size()));
}

template <bool Parallel>
void BM_Entangler(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto psi = imf_state(n);
  const Complex c = std::cosh(Complex{0.01, 0.0});
  const Complex s = std::sinh(Complex{0.01, 0.0});
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::apply_xx_entangler(psi, n, 0, n / 2, c, s);
    } else {
      kernels::serial::apply_xx_entangler(psi, n, 0, n / 2, c, s);
    }
    benchmark::DoNotOptimize(psi.data());
  }
}

template <bool Parallel>
void BM_ReducePure(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto psi = imf_state(n);
  const int keep[2] = {0, 1};
  for (auto _ : state) {
    ComplexMatrix rho = Parallel ? kernels::reduce_pure(psi, n, keep) : kernels::serial::reduce_pure(psi, n, keep);
    benchmark::DoNotOptimize(rho.data());
  }
}

}  // namespace

BENCHMARK(BM_ApplyPauliSum<true>)->DenseRange(10, 16, 2);
BENCHMARK(BM_ApplyPauliSum<false>)->DenseRange(10, 16, 2);
BENCHMARK(BM_Entangler<true>)->DenseRange(10, 16, 2);
BENCHMARK(BM_Entangler<false>)->DenseRange(10, 16, 2);
BENCHMARK(BM_ReducePure<true>)->DenseRange(10, 16, 2);
BENCHMARK(BM_ReducePure<false>)->DenseRange(10, 16, 2);

BENCHMARK_MAIN();
