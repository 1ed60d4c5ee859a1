#include "spinlab/imf.hpp"

#include <cmath>
#include <exception>
#include <limits>

#include "spinlab/errors.hpp"

namespace spinlab {

namespace {

void require_valid(const ImfParams& p) {
  if (p.z < 1) throw DomainError("imf: Z must be >= 1");
  if (!std::isfinite(p.xi.real()) || !std::isfinite(p.xi.imag())) throw DomainError("imf: non-finite xi");
}

// sech(2x)^z evaluated through logs so that large Z does not lose the small deviation from 1.
double sech_power(double x, double z) { return std::exp(-z * std::log1p(2.0 * std::sinh(x) * std::sinh(x))); }

double energy_real(double xi, const IsingCouplings& c, int z) {
  return -0.5 * c.j * std::tanh(2.0 * xi) - c.b * sech_power(xi, z);
}

}  // namespace

ChiOmega chi_omega(const ImfParams& p) {
  require_valid(p);
  const double denom = std::cosh(2.0 * p.xi.real());
  return {std::cos(2.0 * p.xi.imag()) / denom, std::sin(2.0 * p.xi.imag()) / denom};
}

DensityMatrix imf_rho_site(const ImfParams& p, SiteExponent exponent) {
  const auto co = chi_omega(p);
  const double m = exponent == SiteExponent::z ? p.z : 0.5 * p.z;
  if (co.chi < 0.0 && m != std::floor(m)) throw ParameterRangeError("imf_rho_site: negative chi with half-integer exponent");
  const double sz = (p.xi.imag() == 0.0 && exponent == SiteExponent::z) ? sech_power(p.xi.real(), p.z)
                                                                          : std::pow(co.chi, m);
  ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
  rho(0, 0) = 0.5 * (1.0 + sz);
  rho(1, 1) = 0.5 * (1.0 - sz);
  return DensityMatrix::from_matrix(rho);
}

DensityMatrix imf_rho_pair(const ImfParams& p) {
  const auto co = chi_omega(p);
  const double t = std::tanh(2.0 * p.xi.real());
  const double c = std::pow(co.chi, 2 * (p.z - 1));
  const double s = std::pow(co.chi, p.z);
  const double w = std::pow(co.omega, p.z);
  using namespace pauli;
  const ComplexMatrix one = ComplexMatrix::Identity(4, 4);
  const ComplexMatrix rho = 0.25 * (one + t * (kron(x(), x()) - c * kron(y(), y())) + c * kron(z(), z()) +
                                    s * (kron(z(), identity()) + kron(identity(), z())) +
                                    w * (kron(x(), y()) + kron(y(), x())));
  try {
    return DensityMatrix::from_matrix(rho);
  } catch (const ValidationError& e) {
    throw ParameterRangeError(std::string("imf_rho_pair: xi outside the physical range (") + e.what() + ")");
  }
}

double imf_energy(const ImfParams& p, const IsingCouplings& c) {
  const auto co = chi_omega(p);
  if (p.xi.imag() == 0.0) return energy_real(p.xi.real(), c, p.z);
  return -0.5 * c.j * std::tanh(2.0 * p.xi.real()) - c.b * std::pow(co.chi, p.z);
}

double imf_energy_derivative(double xi, const IsingCouplings& c, int z) {
  const double sech = 1.0 / std::cosh(2.0 * xi);
  return -c.j * sech * sech + 2.0 * c.b * z * sech_power(xi, z) * std::tanh(2.0 * xi);
}

ImfOptimum imf_optimize(const IsingCouplings& c, int z) {
  if (!(c.b > 0.0)) throw DomainError("imf_optimize: requires B > 0");
  if (z < 1) throw DomainError("imf_optimize: Z must be >= 1");
  ImfOptimum out;
  out.reference_xi = c.j / (2.0 * c.b * z);
  if (c.j == 0.0) {
    out.energy = -c.b;
    return out;
  }

  // The energy is odd-symmetric in (J, xi); minimize over x = |xi| >= 0 with |J|.
  const double sign = c.j > 0.0 ? 1.0 : -1.0;
  const IsingCouplings abs_c{std::abs(c.j), c.b};
  auto energy = [&](double x) { return energy_real(x, abs_c, z); };
  auto slope = [&](double x) { return imf_energy_derivative(x, abs_c, z); };

  // Geometric scan for sign changes of dE/dx from - to +, each bracketing a local minimum.
  constexpr double kLo = 1e-12;
  constexpr double kHi = 10.0;
  constexpr int kScan = 600;
  std::vector<std::pair<double, double>> brackets;
  double prev = kLo;
  for (int k = 1; k <= kScan; ++k) {
    const double x = kLo * std::pow(kHi / kLo, static_cast<double>(k) / kScan);
    if (slope(prev) < 0.0 && slope(x) >= 0.0) brackets.emplace_back(prev, x);
    prev = x;
  }

  double best_x = kHi;
  double best_e = energy(kHi);
  constexpr double kGolden = 0.6180339887498949;
  for (auto [lo, hi] : brackets) {
    double a = lo;
    double b = hi;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = energy(x1);
    double f2 = energy(x2);
    while (b - a > 1e-14 * std::max(1.0, b)) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kGolden * (b - a);
        f1 = energy(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kGolden * (b - a);
        f2 = energy(x2);
      }
    }
    // The energy is flat at the minimum, so polish on the derivative.
    double l = lo;
    double h = hi;
    for (int it = 0; it < 200 && h - l > std::numeric_limits<double>::epsilon() * h; ++it) {
      const double mid = 0.5 * (l + h);
      (slope(mid) < 0.0 ? l : h) = mid;
    }
    double x = 0.5 * (l + h);
    if (energy(0.5 * (a + b)) < energy(x)) x = 0.5 * (a + b);
    if (energy(x) < best_e) {
      best_e = energy(x);
      best_x = x;
    }
  }

  out.xi_min = sign * best_x;
  out.energy = energy_real(out.xi_min, c, z);
  out.constant = out.xi_min * z * c.b / c.j;
  return out;
}

double imf_one_tangle(double xi, int z) {
  if (z < 1) throw DomainError("imf_one_tangle: Z must be >= 1");
  // 1 - cosh(2 xi)^(-2Z), with cosh(2 xi) = 1 + 2 sinh^2(xi).
  return -std::expm1(-2.0 * z * std::log1p(2.0 * std::sinh(xi) * std::sinh(xi)));
}

double imf_concurrence_asymptotic(double zeta, int z) {
  if (zeta < 0.0) throw DomainError("imf_concurrence_asymptotic: zeta must be >= 0");
  if (z < 1) throw DomainError("imf_concurrence_asymptotic: Z must be >= 1");
  return zeta < 1.0 ? 2.0 * (zeta - zeta * zeta) / z : 0.0;
}

double imf_concurrence_exact(const ImfParams& p) { return concurrence(imf_rho_pair(p)).c; }

std::vector<ImfSweepRow> imf_sweep_zeta(const IsingCouplings& c, int z, const std::vector<double>& zetas) {
  if (z < 1) throw DomainError("imf_sweep_zeta: Z must be >= 1");
  const double sign = c.j < 0.0 ? -1.0 : 1.0;
  std::vector<ImfSweepRow> rows(zetas.size());
  const auto n = static_cast<long>(zetas.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) {
    try {
      ImfSweepRow r;
      r.zeta = zetas[static_cast<std::size_t>(k)];
      r.xi = sign * r.zeta / z;
      const ImfParams p{Complex{r.xi, 0.0}, z};
      r.energy = imf_energy(p, c);
      r.tau1 = imf_one_tangle(r.xi, z);
      r.c_exact = imf_concurrence_exact(p);
      r.c_asymptotic = imf_concurrence_asymptotic(r.zeta, z);
      rows[static_cast<std::size_t>(k)] = r;
    } catch (...) {
#pragma omp critical(spinlab_imf_sweep)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

}  // namespace spinlab
