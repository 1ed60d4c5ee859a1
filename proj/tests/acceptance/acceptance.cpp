// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "spinlab/ed_oracle.hpp"
#include "spinlab/entanglement.hpp"
#include "spinlab/hamiltonian.hpp"
#include "spinlab/imf.hpp"
#include "spinlab/lattice.hpp"
#include "spinlab/meanfield.hpp"

using namespace spinlab;

namespace {

constexpr double kTol = 1e-9;

struct Instance {
  std::string name;
  SpinModel model;
  IsingCouplings couplings;
  LatticeEntanglementReport report;
};

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<Instance> build_instances(double* elapsed) {
  const auto t0 = Clock::now();
  std::vector<std::pair<std::string, LatticeGraph>> graphs;
  for (int n : {8, 10, 12}) graphs.emplace_back("ring(" + std::to_string(n) + ")", make_ring(n));
  for (int n = 4; n <= 10; ++n) graphs.emplace_back("complete(" + std::to_string(n) + ")", make_complete(n));
  graphs.emplace_back("torus(3x4)", make_hypercubic({3, 4}, true));
  std::vector<Instance> out;
  for (const auto& [name, g] : graphs) {
    for (IsingCouplings c : {IsingCouplings{1.0, 2.0}, {1.0, 4.0}, {1.0, 1.2}}) {
      Instance inst{name + " J=" + fmt("%g", c.j) + " B=" + fmt("%g", c.b), ising(c.j, c.b, g), c, {}};
      inst.report = entanglement_report(inst.model);
      out.push_back(std::move(inst));
    }
  }
  *elapsed = seconds_since(t0);
  return out;
}

Outcome criterion_monogamy(const std::vector<Instance>& set, double elapsed) {
  Outcome o;
  double worst = 1e300;
  for (const auto& inst : set) {
    for (double m : inst.report.monogamy_residual) {
      worst = std::min(worst, m);
      if (m < -kTol) {
        o.pass = false;
        o.detail += " " + inst.name;
      }
    }
  }
  if (elapsed > 120.0) o.pass = false;
  o.detail = std::to_string(set.size()) + " instances, min residual " + fmt("%.3e", worst) + ", solve time " +
             fmt("%.1f s", elapsed) + o.detail;
  return o;
}

Outcome criterion_bound(const std::vector<Instance>& set) {
  Outcome o;
  double worst = -1e300;
  for (const auto& inst : set) {
    const int z = inst.model.graph.z();
    for (std::size_t k = 0; k < inst.report.edges.size(); ++k) {
      const auto& e = inst.report.edges[k];
      const double tau = std::min(inst.report.tau1[static_cast<std::size_t>(e.a)],
                                  inst.report.tau1[static_cast<std::size_t>(e.b)]);
      const double slack = inst.report.edge_concurrence[k] - std::sqrt(std::max(tau, 0.0) / z);
      worst = std::max(worst, slack);
      if (slack > kTol) o.pass = false;
    }
  }
  o.detail = "max C - sqrt(tau1/Z) = " + fmt("%.3e", worst);
  return o;
}

Outcome criterion_iteration() {
  const auto t0 = Clock::now();
  const auto it = iterate_exponents(0.5);
  Outcome o;
  o.pass = it.trace.size() >= 2 && it.trace[1] == 0.625 && std::abs(it.c_exponent - 2.0 / 3.0) <= 1e-12 &&
           std::abs(it.tau_exponent - 1.0 / 3.0) <= 1e-12 && it.iterations <= 100;
  const double dt = seconds_since(t0);
  o.pass = o.pass && dt < 1.0;
  o.detail = "c1 = " + fmt("%.17g", it.trace.size() > 1 ? it.trace[1] : NAN) + ", fixed point (" +
             fmt("%.15f", it.c_exponent) + ", " + fmt("%.15f", it.tau_exponent) + ") after " +
             std::to_string(it.iterations) + " iterations";
  return o;
}

Outcome criterion_energy_chain(const std::vector<Instance>& set) {
  Outcome o;
  int checked = 0;
  double worst_ratio = 0.0;
  for (const auto& inst : set) {
    if (inst.couplings.b < 2.0 * std::abs(inst.couplings.j)) continue;
    double c_sum = 0.0;
    for (double c : inst.report.edge_concurrence) c_sum += c;
    const double c_mean = c_sum / static_cast<double>(inst.report.edge_concurrence.size());
    const auto chain = mf_state_energy_chain(inst.model, inst.report.ground.energy, c_mean);
    ++checked;
    if (chain.bound > 0.0) worst_ratio = std::max(worst_ratio, chain.gap / chain.bound);
    if (!(chain.gap >= -kTol && chain.gap <= chain.bound + kTol)) {
      o.pass = false;
      o.detail += " " + inst.name;
    }
  }
  o.detail = std::to_string(checked) + " paramagnetic instances, max gap/bound " + fmt("%.3f", worst_ratio) + o.detail;
  return o;
}

Outcome criterion_imf_improvement() {
  Outcome o;
  constexpr double tol = 1e-10;
  int checks = 0;
  for (IsingCouplings c : {IsingCouplings{1.0, 2.0}, {-1.0, 2.0}, {1.0, 4.0}, {1.0, 1.2}}) {
    // Stars: the centre-centre estimator on the explicit state agrees with the closed form.
    for (int z = 2; z <= 8; ++z) {
      const auto opt = imf_optimize(c, z);
      ++checks;
      if (!(opt.energy < -c.b)) o.pass = false;
      ImfVerificationOptions vo;
      vo.star_z = {z};
      vo.xi = {opt.xi_min};
      vo.ring_sites = {};
      vo.couplings = c;
      for (const auto& row : verify_imf_formulas(vo)) {
        if (row.graph == "star" && row.energy_dev > tol) {
          o.pass = false;
          o.detail += " star Z=" + std::to_string(z);
        }
      }
    }
    for (int n : {8, 10, 12}) {
      const auto model = ising(c.j, c.b, make_ring(n));
      const auto opt = imf_optimize(c, 2);
      const auto psi = construct_imf_state(model.graph, Complex{opt.xi_min, 0.0});
      const double e_state = expectation(model, {psi.data(), static_cast<std::size_t>(psi.size())}) / n;
      const double e_exact = ground_state(model).energy / n;
      ++checks;
      if (!(e_exact <= e_state + tol && e_state < -c.b && e_exact <= opt.energy + tol && opt.energy < -c.b)) {
        o.pass = false;
        o.detail += " ring(" + std::to_string(n) + ")";
      }
    }
  }
  o.detail = std::to_string(checks) + " checks" + o.detail;
  return o;
}

Outcome criterion_law() {
  const auto t0 = Clock::now();
  const int z = 200;
  std::vector<double> zetas;
  for (int k = 1; k <= 9; ++k) zetas.push_back(0.1 * k);
  const auto rows = imf_sweep_zeta({1.0, 1.0}, z, zetas);
  Outcome o;
  double worst = 0.0;
  std::size_t arg = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    worst = std::max(worst, std::abs(rows[k].c_exact - rows[k].c_asymptotic));
    if (rows[k].c_exact > rows[arg].c_exact) arg = k;
  }
  // Fine grid for the location of the maximum.
  std::vector<double> fine;
  for (int k = 0; k <= 1500; ++k) fine.push_back(0.001 * k);
  const auto fine_rows = imf_sweep_zeta({1.0, 1.0}, z, fine);
  std::size_t farg = 0;
  for (std::size_t k = 0; k < fine_rows.size(); ++k)
    if (fine_rows[k].c_exact > fine_rows[farg].c_exact) farg = k;
  const double bound = 10.0 / (static_cast<double>(z) * z);
  o.pass = worst <= bound && std::abs(fine_rows[farg].zeta - 0.5) <= 0.02 && std::abs(rows[arg].zeta - 0.5) <= 0.02 &&
           seconds_since(t0) <= 10.0;
  o.detail = "max |C - 2(zeta - zeta^2)/Z| = " + fmt("%.3e", worst) + " (bound " + fmt("%.1e", bound) +
             "), argmax zeta = " + fmt("%.3f", fine_rows[farg].zeta);
  return o;
}

Outcome criterion_exponent() {
  ImfVerificationOptions vo;
  vo.xi = {0.02, 0.05, 0.1};
  vo.ring_sites = {};
  Outcome o;
  double worst_z = 0.0;
  double half_at_8 = 0.0;
  for (const auto& row : verify_imf_formulas(vo)) {
    if (row.graph != "star") continue;
    worst_z = std::max(worst_z, row.site_dev_z);
    if (row.site_dev_z > 1e-12 || row.winner != "Z") o.pass = false;
    if (row.z == 8 && row.xi == 0.1) half_at_8 = row.site_dev_half;
  }
  if (!(half_at_8 > 1e-4)) o.pass = false;
  o.detail = "max dev vs chi^Z " + fmt("%.2e", worst_z) + ", dev vs chi^(Z/2) at Z=8 xi=0.1 " + fmt("%.3e", half_at_8);
  return o;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += std::log(x[k]);
    my += std::log(y[k]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (std::log(x[k]) - mx) * (std::log(y[k]) - my);
    sxx += (std::log(x[k]) - mx) * (std::log(x[k]) - mx);
  }
  return sxy / sxx;
}

Outcome criterion_scaling() {
  const IsingCouplings c{1.0, 1.0};
  std::vector<double> zs, xis, taus, constants, tau_products;
  for (int z : {100, 1000, 10000}) {
    const auto opt = imf_optimize(c, z);
    zs.push_back(z);
    xis.push_back(opt.xi_min);
    taus.push_back(imf_one_tangle(opt.xi_min, z));
    constants.push_back(opt.constant);
    tau_products.push_back(imf_one_tangle(opt.reference_xi, z) * z * c.b * c.b / (c.j * c.j));
  }
  const double s_xi = loglog_slope(zs, xis);
  const double s_tau = loglog_slope(zs, taus);
  const double conv = std::abs(constants[2] - constants[1]) / constants[2];
  Outcome o;
  o.pass = conv <= 0.01 && std::abs(tau_products[2] - 1.0) <= 0.01 && std::abs(tau_products[1] - 1.0) <= 0.01 &&
           std::abs(s_xi + 1.0) <= 0.01 && std::abs(s_tau + 1.0) <= 0.01;
  o.detail = "xi_min Z B/J = " + fmt("%.6f", constants[2]) + " (closed-form estimate J/(2BZ) has 0.5; the unordered edge sum gives 1/4)" +
             ", tau1 Z B^2/J^2 at J/(2BZ) = " + fmt("%.6f", tau_products[2]) + ", slopes " + fmt("%.4f", s_xi) + " / " +
             fmt("%.4f", s_tau);
  return o;
}

Outcome criterion_decompositions() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  Outcome o;
  double worst_rec = 0.0, worst_spread = 0.0;
  for (int k = 0; k < 200; ++k) {
    const auto rho = random_density(rng, 4, 4);
    const auto dec = wootters_decompose(rho);
    worst_rec = std::max(worst_rec, (dec.reconstruct() - rho.matrix()).norm());
    double lo = 1e300, hi = -1e300;
    for (const auto& m : dec.ensemble) {
      const double cm = pure_concurrence(m.state);
      lo = std::min(lo, cm);
      hi = std::max(hi, cm);
    }
    worst_spread = std::max(worst_spread, std::max(hi - lo, std::abs(hi - dec.concurrence)));
  }
  double worst_split = 0.0, worst_orth = 0.0, worst_bell = 0.0;
  for (int k = 0; k < 200; ++k) {
    const auto psi = random_pure_state(rng, 4);
    const auto s = abouraddy_split(psi);
    worst_split = std::max(worst_split, (s.reconstruct() - psi).norm());
    worst_orth = std::max(worst_orth, std::abs(s.product_part().dot(s.bell_part)));
    worst_bell = std::max(worst_bell, std::abs(pure_concurrence(s.bell_part) - 1.0));
  }
  o.pass = worst_rec <= 1e-9 && worst_spread <= 1e-9 && worst_split <= 1e-10 && worst_orth <= 1e-10 &&
           worst_bell <= 1e-10 && seconds_since(t0) <= 30.0;
  o.detail = "Wootters rec " + fmt("%.1e", worst_rec) + " spread " + fmt("%.1e", worst_spread) + "; split rec " +
             fmt("%.1e", worst_split) + " overlap " + fmt("%.1e", worst_orth) + " Bell " + fmt("%.1e", worst_bell);
  return o;
}

Outcome criterion_correlation(const std::vector<Instance>& set) {
  Outcome o;
  double worst = 1e300;
  for (const auto& inst : set) {
    for (std::size_t k = 0; k < inst.report.edges.size(); ++k) {
      const double d = inst.report.edge_max_correlation[k] - inst.report.edge_concurrence[k];
      worst = std::min(worst, d);
      if (d < -kTol) o.pass = false;
    }
  }
  o.detail = "min (max correlation - C) = " + fmt("%.3e", worst);
  return o;
}

Outcome criterion_conjecture_table(const std::vector<Instance>& set) {
  std::printf("  complete-graph scan (not asserted):\n  %-3s %-5s %-5s %-22s %-22s\n", "Z", "J", "B", "C_edge", "Z*C_edge");
  for (const auto& inst : set) {
    if (inst.model.graph.family() != LatticeFamily::complete) continue;
    const int z = inst.model.graph.z();
    const double c = inst.report.edge_concurrence[0];
    std::printf("  %-3d %-5g %-5g %-22.15e %-22.15e\n", z, inst.couplings.j, inst.couplings.b, c, z * c);
  }
  return {true, "table emitted"};
}

}  // namespace

int main() {
  double elapsed = 0.0;
  const auto set = build_instances(&elapsed);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"monogamy", [&] { return criterion_monogamy(set, elapsed); }},
      {"concurrence bound", [&] { return criterion_bound(set); }},
      {"exponent iteration", criterion_iteration},
      {"energy chain", [&] { return criterion_energy_chain(set); }},
      {"imf improvement", criterion_imf_improvement},
      {"concurrence law", criterion_law},
      {"exponent adjudication", criterion_exponent},
      {"xi_min and tau1 scaling", criterion_scaling},
      {"decomposition suites", criterion_decompositions},
      {"correlation diagnostic", [&] { return criterion_correlation(set); }},
      {"conjecture scan", [&] { return criterion_conjecture_table(set); }},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
