#include <gtest/gtest.h>

#include <random>

#include "spinlab/errors.hpp"
#include "spinlab/hamiltonian.hpp"

using namespace spinlab;

namespace {

ComplexMatrix site_operator(int n, std::vector<std::pair<int, ComplexMatrix>> ops) {
  std::vector<ComplexMatrix> f(static_cast<std::size_t>(n), pauli::identity());
  for (auto& [site, op] : ops) f[static_cast<std::size_t>(site)] = op;
  return kron_all(f);
}

ComplexVector product_state(int n, const ComplexVector& single) {
  ComplexVector psi = single;
  for (int k = 1; k < n; ++k) psi = kron(psi, single);
  return psi;
}

std::vector<double> spectrum(const ComplexMatrix& h) {
  const auto e = hermitian_eig(h).eigenvalues;
  return {e.data(), e.data() + e.size()};
}

}  // namespace

TEST(Build, FreeSpinsBinomialSpectrum) {
  const int n = 5;
  SpinModel m{Matrix3::Zero(), Vector3(0, 0, 0.7), make_ring(n)};
  const auto e = spectrum(build(m));
  std::vector<double> expected;
  const int binom[6] = {1, 5, 10, 10, 5, 1};
  for (int k = n; k >= 0; --k) {
    for (int r = 0; r < binom[k]; ++r) expected.push_back(0.7 * (n - 2 * k));
  }
  std::sort(expected.begin(), expected.end());
  ASSERT_EQ(e.size(), expected.size());
  for (std::size_t i = 0; i < e.size(); ++i) EXPECT_NEAR(e[i], expected[i], 1e-12);
}

TEST(Build, IsingPairGroundEnergyIsMinusRootFive) {
  const auto e = spectrum(build(ising(1.0, 1.0, make_complete(2))));
  EXPECT_NEAR(e.front(), -std::sqrt(5.0), 1e-12);
}

TEST(Build, HermitianForRandomCouplings) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  SpinModel m = ising(0.0, 0.0, make_ring(3));
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m.j_tensor(r, c) = normal(rng);
    m.b_field(r) = normal(rng);
  }
  m.graph = make_ring(8);
  const ComplexMatrix h = build(m);
  EXPECT_LE((h - h.adjoint()).norm(), 1e-12);
}

TEST(Build, RejectsIrregularGraph) {
  EXPECT_THROW(build(ising(1, 1, make_star(3))), ConventionError);
  EXPECT_THROW(pauli_terms(ising(1, 1, make_star(3))), ConventionError);
}

TEST(Build, RejectsOversizedDense) { EXPECT_THROW(build(ising(1, 1, make_ring(13))), SizeError); }

TEST(Ising, MatchesEquationSubstitution) {
  const int n = 4;
  const ComplexMatrix h = build(ising(1.0, 2.0, make_ring(n)));
  ComplexMatrix ref = ComplexMatrix::Zero(16, 16);
  for (int s = 0; s < n; ++s) {
    ref -= 0.5 * site_operator(n, {{s, pauli::x()}, {(s + 1) % n, pauli::x()}});
    ref -= 2.0 * site_operator(n, {{s, pauli::z()}});
  }
  EXPECT_LE((h - ref).norm(), 1e-12);
}

TEST(Ising, ZeroCouplingIsParamagnet) {
  const int n = 6;
  const auto g = make_ring(n);
  const auto eig = hermitian_eig(build(ising(0.0, 1.0, g)));
  EXPECT_NEAR(eig.eigenvalues[0] / n, -1.0, 1e-12);
  EXPECT_NEAR(std::abs(eig.eigenvectors(0, 0)), 1.0, 1e-12);
}

TEST(Ising, ClassicalLimitDoublyDegenerate) {
  const auto e = spectrum(build(ising(1.0, 0.0, make_ring(4))));
  EXPECT_NEAR(e[0], e[1], 1e-12);
  EXPECT_GT(e[2] - e[1], 0.5);
}

TEST(Ising, TensorLayout) {
  const auto m = ising(1.5, 0.25, make_ring(3));
  EXPECT_EQ(m.j_tensor(0, 0), -1.5);
  EXPECT_EQ(m.b_field(2), -0.25);
  const auto c = as_ising(m);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->j, 1.5);
  EXPECT_EQ(c->b, 0.25);
  SpinModel general = m;
  general.j_tensor(1, 1) = 0.1;
  EXPECT_FALSE(as_ising(general).has_value());
}

TEST(Norms, Examples) {
  const auto a = norms(ising(1.0, 2.0, make_ring(3)));
  EXPECT_EQ(a.j_norm, 1.0);
  EXPECT_EQ(a.b_norm, 2.0);
  SpinModel half{Matrix3::Constant(0.5), Vector3::Zero(), make_ring(3)};
  EXPECT_DOUBLE_EQ(norms(half).j_norm, 4.5);
  SpinModel zero{Matrix3::Zero(), Vector3::Zero(), make_ring(3)};
  EXPECT_EQ(norms(zero).j_norm, 0.0);
  EXPECT_EQ(norms(zero).b_norm, 0.0);
}

TEST(Extensivity, AlignedFieldGroundEnergy) {
  const int n = 6;
  const Vector3 b(0.3, -0.4, 1.2);
  SpinModel m{Matrix3::Zero(), b, make_ring(n)};
  EXPECT_NEAR(spectrum(build(m)).front(), -n * b.norm(), 1e-12);
}

TEST(ConventionLock, UnorderedEdgeFingerprints) {
  // All-up: the pair term vanishes, so E/N = -B. All-right (sx = +1): E/N = -J/2,
  // which fixes each edge counted once (an ordered sum would give -J).
  const ComplexVector up = (ComplexVector(2) << 1, 0).finished();
  const ComplexVector right = (ComplexVector(2) << 1, 1).finished() / std::sqrt(2.0);
  for (const auto& g : {make_ring(4), make_ring(6), make_hypercubic({4, 4}, true), make_complete(4)}) {
    const int n = g.n_sites();
    const SpinModel m = ising(1.3, 0.7, g);
    const ComplexVector psi_up = product_state(n, up);
    const ComplexVector psi_right = product_state(n, right);
    EXPECT_NEAR(expectation(m, {psi_up.data(), static_cast<std::size_t>(psi_up.size())}) / n, -0.7, 1e-12);
    EXPECT_NEAR(expectation(m, {psi_right.data(), static_cast<std::size_t>(psi_right.size())}) / n, -1.3 / 2, 1e-12);
  }
}

TEST(Expectation, MatchesDense) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> normal;
  const SpinModel m = ising(0.8, 1.1, make_ring(5));
  ComplexVector psi(32);
  for (int i = 0; i < 32; ++i) psi[i] = Complex{normal(rng), normal(rng)};
  psi.normalize();
  const double dense = (psi.adjoint() * build(m) * psi)(0, 0).real();
  EXPECT_NEAR(expectation(m, {psi.data(), 32}), dense, 1e-12);
}

TEST(OperatorNorm, BoundsSpectrum) {
  const SpinModel m = ising(1.0, 2.0, make_ring(6));
  const auto e = spectrum(build(m));
  EXPECT_LE(std::max(std::abs(e.front()), std::abs(e.back())), operator_norm_bound(m) + 1e-12);
  EXPECT_DOUBLE_EQ(operator_norm_bound(m), 6 * 0.5 + 12.0);
}

TEST(Json, RoundTripAndIsingForm) {
  const auto m = model_from_json(nlohmann::json::parse(R"({"ising": {"J": 1, "B": 2}, "lattice": {"family": "ring", "sites": 4}})"));
  EXPECT_LE((build(m) - build(ising(1, 2, make_ring(4)))).norm(), 0.0);
  const auto round = model_from_json(model_to_json(m));
  EXPECT_LE((round.j_tensor - m.j_tensor).norm(), 0.0);
  EXPECT_LE((round.b_field - m.b_field).norm(), 0.0);
  EXPECT_THROW(model_from_json(nlohmann::json::parse(R"({"J": [[1,0,0]], "B": [0,0,1], "lattice": {"family": "ring", "sites": 4}})")),
               ValidationError);
}
