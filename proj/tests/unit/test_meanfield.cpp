#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "spinlab/ed_oracle.hpp"
#include "spinlab/meanfield.hpp"

using namespace spinlab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Bloch, Vectors) {
  EXPECT_LE((bloch_vector({0.0, 1.3}) - Vector3(0, 0, 1)).norm(), 1e-16);
  EXPECT_LE((bloch_vector({kPi, 2.0}) - Vector3(0, 0, -1)).norm(), 1e-15);
  EXPECT_LE((bloch_vector({kPi / 2, 0.0}) - Vector3(1, 0, 0)).norm(), 1e-16);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const BlochAngles a{kPi * u(rng), 2 * kPi * u(rng)};
    EXPECT_NEAR(bloch_vector(a).norm(), 1.0, 1e-15);
    const auto back = angles_from_vector(bloch_vector(a));
    EXPECT_NEAR(back.theta, a.theta, 1e-12);
    EXPECT_NEAR(back.phi, a.phi, 1e-12);
  }
}

TEST(Energy, IsingExamples) {
  const auto m = ising(1.3, 0.7, make_ring(4));
  EXPECT_NEAR(mf_energy({0, 0}, {0, 0}, m), -0.7, 1e-15);
  EXPECT_NEAR(mf_energy({kPi / 2, 0}, {kPi / 2, 0}, m), -1.3 / 2, 1e-15);
}

TEST(Energy, IsingClosedForm) {
  const double j = 0.9, b = 1.7;
  const auto m = ising(j, b, make_ring(6));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const BlochAngles a{kPi * u(rng), 2 * kPi * u(rng)};
    const BlochAngles c{kPi * u(rng), 2 * kPi * u(rng)};
    const double expected = -0.5 * (j * std::sin(a.theta) * std::cos(a.phi) * std::sin(c.theta) * std::cos(c.phi) +
                                    b * (std::cos(a.theta) + std::cos(c.theta)));
    EXPECT_NEAR(mf_energy(a, c, m), expected, 1e-15);
  }
}

TEST(Energy, IdentityCouplingAlignedSpins) {
  SpinModel m{Matrix3::Identity(), Vector3::Zero(), make_ring(4)};
  EXPECT_DOUBLE_EQ(mf_energy({0, 0}, {0, 0}, m), 0.5);
}

TEST(Energy, MatchesLatticeExpectationOfProductState) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  SpinModel m = ising(0.0, 0.0, make_ring(3));
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m.j_tensor(r, c) = normal(rng);
    m.b_field(r) = normal(rng);
  }
  m.j_tensor = 0.5 * (m.j_tensor + m.j_tensor.transpose()).eval();
  m.graph = make_ring(6);
  const BlochAngles a{0.7, 1.1};
  const BlochAngles b{2.1, 4.0};
  auto single = [](const BlochAngles& s) {
    ComplexVector v(2);
    v << std::cos(s.theta / 2), std::polar(std::sin(s.theta / 2), s.phi);
    return v;
  };
  ComplexVector psi = single(a);
  for (int site = 1; site < 6; ++site) psi = kron(psi, single(site % 2 ? b : a));
  EXPECT_NEAR(expectation(m, {psi.data(), static_cast<std::size_t>(psi.size())}) / 6, mf_energy(a, b, m), 1e-12);
}

TEST(Gradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> u(0.05, 0.95);
  SpinModel m = ising(0.0, 0.0, make_ring(3));
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m.j_tensor(r, c) = normal(rng);
    m.b_field(r) = normal(rng);
  }
  m.graph = make_ring(4);
  const double h = 1e-6;
  for (int k = 0; k < 100; ++k) {
    const BlochAngles a{kPi * u(rng), 2 * kPi * u(rng)};
    const BlochAngles b{kPi * u(rng), 2 * kPi * u(rng)};
    const auto g = mf_energy_gradient(a, b, m);
    const double fd[4] = {
        (mf_energy({a.theta + h, a.phi}, b, m) - mf_energy({a.theta - h, a.phi}, b, m)) / (2 * h),
        (mf_energy({a.theta, a.phi + h}, b, m) - mf_energy({a.theta, a.phi - h}, b, m)) / (2 * h),
        (mf_energy(a, {b.theta + h, b.phi}, m) - mf_energy(a, {b.theta - h, b.phi}, m)) / (2 * h),
        (mf_energy(a, {b.theta, b.phi + h}, m) - mf_energy(a, {b.theta, b.phi - h}, m)) / (2 * h)};
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(g[static_cast<std::size_t>(i)], fd[i], 1e-6);
  }
}

TEST(Minimize, ParamagnetUniqueMinimum) {
  const auto sol = mf_minimize(ising(1.0, 2.0, make_ring(4)));
  ASSERT_EQ(sol.minima.size(), 1u);
  EXPECT_EQ(sol.regime, Regime::paramagnetic);
  EXPECT_NEAR(sol.energy_per_site, -2.0, 1e-12);
  EXPECT_NEAR(sol.angles_a.theta, 0.0, 1e-9);
  EXPECT_NEAR(sol.angles_b.theta, 0.0, 1e-9);
}

TEST(Minimize, FerromagnetTwoMinima) {
  const auto m = ising(2.0, 1.0, make_ring(4));
  const auto sol = mf_minimize(m);
  ASSERT_EQ(sol.minima.size(), 2u);
  EXPECT_EQ(sol.regime, Regime::ferromagnetic);
  EXPECT_NEAR(sol.energy_per_site, -1.25, 1e-12);
  EXPECT_NEAR(sol.minima[0].energy, sol.minima[1].energy, 1e-12);
  for (const auto& mn : sol.minima) {
    EXPECT_NEAR(std::cos(mn.a.theta), 0.5, 1e-8);
    EXPECT_NEAR(std::cos(mn.b.theta), 0.5, 1e-8);
    EXPECT_NEAR(mn.a.phi, mn.b.phi, 1e-8);
  }
  EXPECT_NEAR(sol.minima[0].a.phi, 0.0, 1e-8);
  EXPECT_NEAR(sol.minima[1].a.phi, kPi, 1e-8);
  const auto grad = mf_energy_gradient(sol.angles_a, sol.angles_b, m);
  for (double g : grad) EXPECT_LE(std::abs(g), 1e-10);
}

TEST(Minimize, CriticalPoint) {
  const auto sol = mf_minimize(ising(1.0, 1.0, make_ring(4)));
  EXPECT_EQ(sol.regime, Regime::critical);
  ASSERT_EQ(sol.minima.size(), 1u);
  EXPECT_EQ(sol.minima[0].a.theta, 0.0);
  EXPECT_NEAR(sol.energy_per_site, -1.0, 1e-12);
}

TEST(Minimize, AntiferromagnetBipartiteAndFrustrated) {
  const auto bip = mf_minimize(ising(-2.0, 1.0, make_ring(4)));
  EXPECT_EQ(bip.regime, Regime::antiferromagnetic);
  EXPECT_TRUE(bip.reliable);
  EXPECT_NEAR(bip.energy_per_site, -1.25, 1e-12);
  const auto frus = mf_minimize(ising(-2.0, 1.0, make_ring(5)));
  EXPECT_EQ(frus.regime, Regime::antiferromagnetic);
  EXPECT_FALSE(frus.reliable);
  EXPECT_FALSE(frus.warning.empty());
}

TEST(Minimize, EnergyMatchesReportedAngles) {
  for (auto [j, b] : {std::pair{1.0, 2.0}, {2.0, 1.0}, {-1.5, 0.5}, {0.3, 0.0}}) {
    const auto m = ising(j, b, make_ring(6));
    const auto sol = mf_minimize(m);
    EXPECT_NEAR(sol.energy_per_site, mf_energy(sol.angles_a, sol.angles_b, m), 1e-12);
  }
}

TEST(Minimize, ParamagneticUniquenessSweep) {
  for (double b : {1.01, 1.5, 3.0, 10.0}) {
    for (double j : {1.0, -1.0, 0.5}) {
      const auto sol = mf_minimize(ising(j, b, make_ring(4)));
      ASSERT_EQ(sol.minima.size(), 1u) << "J=" << j << " B=" << b;
      EXPECT_EQ(sol.minima[0].a.theta, 0.0);
      EXPECT_EQ(sol.regime, Regime::paramagnetic);
    }
  }
}

TEST(Minimize, GeneralModelLowerThanGrid) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 5; ++trial) {
    SpinModel m = ising(0.0, 0.0, make_ring(3));
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m.j_tensor(r, c) = normal(rng);
      m.b_field(r) = normal(rng);
    }
    m.graph = make_ring(4);
    const auto sol = mf_minimize(m);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 2000; ++k) {
      const BlochAngles a{kPi * u(rng), 2 * kPi * u(rng)};
      const BlochAngles b{kPi * u(rng), 2 * kPi * u(rng)};
      EXPECT_GE(mf_energy(a, b, m), sol.energy_per_site - 1e-12);
    }
  }
}

TEST(Minimize, VariationalBoundAgainstExact) {
  for (auto [j, b] : {std::pair{1.0, 2.0}, {1.0, 4.0}, {1.0, 1.2}, {2.0, 1.0}}) {
    const auto m = ising(j, b, make_ring(8));
    const auto gs = ground_state(m);
    EXPECT_GE(mf_minimize(m).energy_per_site, gs.energy / 8 - 1e-10);
  }
}

TEST(Chain, ZeroCouplingHoldsWithEquality) {
  SpinModel m{Matrix3::Zero(), Vector3(0, 0, -1.0), make_ring(6)};
  const auto gs = ground_state(m);
  const auto r = mf_state_energy_chain(m, gs.energy, 0.0);
  EXPECT_NEAR(r.gap, 0.0, 1e-12);
  EXPECT_EQ(r.bound, 0.0);
  EXPECT_TRUE(r.holds);
}

TEST(Chain, ParamagneticInstances) {
  for (const auto& [m, label] : {std::pair{ising(1.0, 4.0, make_ring(10)), "ring10"},
                                 std::pair{ising(1.0, 2.0, make_complete(8)), "complete8"}}) {
    const auto report = entanglement_report(m);
    double c = 0.0;
    for (double x : report.edge_concurrence) c += x;
    c /= static_cast<double>(report.edge_concurrence.size());
    const auto r = mf_state_energy_chain(m, report.ground.energy, c);
    EXPECT_TRUE(r.holds) << label << " gap " << r.gap << " bound " << r.bound;
    EXPECT_GE(r.gap, 0.0);
  }
}

TEST(Chain, ViolationIsFlaggedNotThrown) {
  const auto m = ising(1.0, 2.0, make_ring(4));
  const auto r = mf_state_energy_chain(m, -100.0, 0.0);
  EXPECT_FALSE(r.holds);
}
