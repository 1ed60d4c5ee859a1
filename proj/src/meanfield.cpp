#include "spinlab/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "spinlab/entanglement.hpp"
#include "spinlab/errors.hpp"

namespace spinlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kThetaSteps = 17;
constexpr int kPhiSteps = 16;
constexpr double kGradTol = 1e-10;
constexpr double kDegeneracyTol = 1e-9;
constexpr double kDedupTol = 1e-7;
constexpr double kPoleSnap = 1e-3;

struct Landscape {
  Matrix3 k;  // symmetric coupling
  Vector3 b;

  explicit Landscape(const SpinModel& model)
      : k(0.5 * (model.j_tensor + model.j_tensor.transpose())), b(model.b_field) {}

  double energy(const Vector3& ma, const Vector3& mb) const { return 0.5 * (ma.dot(k * mb) + b.dot(ma + mb)); }
  Vector3 grad_a(const Vector3& mb) const { return 0.5 * (k * mb + b); }
  Vector3 grad_b(const Vector3& ma) const { return 0.5 * (k * ma + b); }
};

// Orthonormal basis of the plane orthogonal to the unit vector m.
Eigen::Matrix<double, 3, 2> tangent_basis(const Vector3& m) {
  Vector3 seed = std::abs(m.x()) < 0.9 ? Vector3::UnitX() : Vector3::UnitY();
  Vector3 u = (seed - seed.dot(m) * m).normalized();
  Vector3 v = m.cross(u);
  Eigen::Matrix<double, 3, 2> t;
  t.col(0) = u;
  t.col(1) = v;
  return t;
}

struct Point {
  Vector3 ma;
  Vector3 mb;
};

Eigen::Vector4d riemannian_gradient(const Landscape& f, const Point& p, const Eigen::Matrix<double, 3, 2>& ta,
                                    const Eigen::Matrix<double, 3, 2>& tb) {
  Eigen::Vector4d g;
  g.head<2>() = ta.transpose() * f.grad_a(p.mb);
  g.tail<2>() = tb.transpose() * f.grad_b(p.ma);
  return g;
}

Point retract(const Point& p, const Eigen::Matrix<double, 3, 2>& ta, const Eigen::Matrix<double, 3, 2>& tb,
              const Eigen::Vector4d& step) {
  return {(p.ma + ta * step.head<2>()).normalized(), (p.mb + tb * step.tail<2>()).normalized()};
}

Point refine(const Landscape& f, Point p) {
  for (int iter = 0; iter < 500; ++iter) {
    const auto ta = tangent_basis(p.ma);
    const auto tb = tangent_basis(p.mb);
    const Eigen::Vector4d g = riemannian_gradient(f, p, ta, tb);
    if (g.norm() <= 0.1 * kGradTol) break;

    Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
    h.topLeftCorner<2, 2>() = -p.ma.dot(f.grad_a(p.mb)) * Eigen::Matrix2d::Identity();
    h.bottomRightCorner<2, 2>() = -p.mb.dot(f.grad_b(p.ma)) * Eigen::Matrix2d::Identity();
    const Eigen::Matrix2d cross = 0.5 * ta.transpose() * f.k * tb;
    h.topRightCorner<2, 2>() = cross;
    h.bottomLeftCorner<2, 2>() = cross.transpose();

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(h);
    Eigen::Vector4d lambda = eig.eigenvalues().cwiseAbs().cwiseMax(1e-8);
    Eigen::Vector4d step = -eig.eigenvectors() * (eig.eigenvectors().transpose() * g).cwiseQuotient(lambda);
    if (step.norm() > 0.5) step *= 0.5 / step.norm();

    const double e0 = f.energy(p.ma, p.mb);
    const double slope = g.dot(step);
    double scale = 1.0;
    Point next = retract(p, ta, tb, step);
    while (f.energy(next.ma, next.mb) > e0 + 1e-4 * scale * slope && scale > 1e-12) {
      scale *= 0.5;
      next = retract(p, ta, tb, scale * step);
    }
    if (scale <= 1e-12) break;
    p = next;
  }
  return p;
}

BlochAngles snap_pole(BlochAngles a, const std::function<double(const BlochAngles&)>& energy) {
  const double e = energy(a);
  if (a.theta < kPoleSnap) {
    BlochAngles pole{0.0, 0.0};
    if (energy(pole) <= e + 1e-12) return pole;
  } else if (a.theta > kPi - kPoleSnap) {
    BlochAngles pole{kPi, 0.0};
    if (energy(pole) <= e + 1e-12) return pole;
  }
  return a;
}

double angle_gap(double x, double y) {
  const double d = std::fmod(std::abs(x - y), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

bool same_angles(const BlochAngles& x, const BlochAngles& y) {
  return std::abs(x.theta - y.theta) <= kDedupTol && angle_gap(x.phi, y.phi) <= kDedupTol;
}

// No energy barrier on the normalized straight path between two configurations.
bool same_basin(const MfMinimum& x, const MfMinimum& y, const SpinModel& model) {
  const Vector3 xa = bloch_vector(x.a), xb = bloch_vector(x.b);
  const Vector3 ya = bloch_vector(y.a), yb = bloch_vector(y.b);
  const double ceiling = std::max(x.energy, y.energy) + 1e-12;
  constexpr int kSamples = 64;
  for (int k = 1; k < kSamples; ++k) {
    const double t = static_cast<double>(k) / kSamples;
    const Vector3 a = (1 - t) * xa + t * ya;
    const Vector3 b = (1 - t) * xb + t * yb;
    if (a.norm() < 1e-6 || b.norm() < 1e-6) return false;
    if (mf_energy(angles_from_vector(a), angles_from_vector(b), model) > ceiling) return false;
  }
  return true;
}

auto lexicographic(const MfMinimum& m) { return std::tuple(m.a.theta, m.a.phi, m.b.theta, m.b.phi); }

}  // namespace

Vector3 bloch_vector(const BlochAngles& a) {
  return {std::sin(a.theta) * std::cos(a.phi), std::sin(a.theta) * std::sin(a.phi), std::cos(a.theta)};
}

BlochAngles angles_from_vector(const Vector3& m) {
  const double norm = m.norm();
  if (!(norm > 0.0)) throw DomainError("angles_from_vector: zero vector");
  const Vector3 u = m / norm;
  BlochAngles a;
  a.theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
  if (std::hypot(u.x(), u.y()) <= 1e-15) return {a.theta, 0.0};
  a.phi = std::atan2(u.y(), u.x());
  if (a.phi < 0.0) a.phi += 2.0 * kPi;
  if (a.phi >= 2.0 * kPi) a.phi = 0.0;
  return a;
}

double mf_energy(const BlochAngles& a, const BlochAngles& b, const SpinModel& model) {
  return Landscape(model).energy(bloch_vector(a), bloch_vector(b));
}

std::array<double, 4> mf_energy_gradient(const BlochAngles& a, const BlochAngles& b, const SpinModel& model) {
  const Landscape f(model);
  const Vector3 ma = bloch_vector(a);
  const Vector3 mb = bloch_vector(b);
  auto d_theta = [](const BlochAngles& s) {
    return Vector3{std::cos(s.theta) * std::cos(s.phi), std::cos(s.theta) * std::sin(s.phi), -std::sin(s.theta)};
  };
  auto d_phi = [](const BlochAngles& s) {
    return Vector3{-std::sin(s.theta) * std::sin(s.phi), std::sin(s.theta) * std::cos(s.phi), 0.0};
  };
  const Vector3 ga = f.grad_a(mb);
  const Vector3 gb = f.grad_b(ma);
  return {ga.dot(d_theta(a)), ga.dot(d_phi(a)), gb.dot(d_theta(b)), gb.dot(d_phi(b))};
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::paramagnetic: return "paramagnetic";
    case Regime::ferromagnetic: return "ferromagnetic";
    case Regime::antiferromagnetic: return "antiferromagnetic";
    case Regime::critical: return "critical";
  }
  return "unknown";
}

MfSolution mf_minimize(const SpinModel& model) {
  const Landscape f(model);
  if (!f.k.allFinite() || !f.b.allFinite()) throw ValidationError("mf_minimize: non-finite couplings");

  // Grid points per sublattice, with a single representative at each pole.
  std::vector<BlochAngles> grid;
  std::vector<std::array<int, 2>> grid_index;
  for (int it = 0; it < kThetaSteps; ++it) {
    const bool pole = (it == 0 || it == kThetaSteps - 1);
    for (int ip = 0; ip < (pole ? 1 : kPhiSteps); ++ip) {
      grid.push_back({kPi * it / (kThetaSteps - 1), 2.0 * kPi * ip / kPhiSteps});
      grid_index.push_back({it, ip});
    }
  }
  auto index_of = [&](int it, int ip) -> int {
    if (it == 0) return 0;
    if (it == kThetaSteps - 1) return static_cast<int>(grid.size()) - 1;
    ip = ((ip % kPhiSteps) + kPhiSteps) % kPhiSteps;
    return 1 + (it - 1) * kPhiSteps + ip;
  };
  auto neighbours = [&](int g) {
    std::vector<int> out;
    const auto [it, ip] = grid_index[static_cast<std::size_t>(g)];
    if (it == 0 || it == kThetaSteps - 1) {
      const int ring = (it == 0) ? 1 : kThetaSteps - 2;
      for (int p = 0; p < kPhiSteps; ++p) out.push_back(index_of(ring, p));
      return out;
    }
    out.push_back(index_of(it - 1, ip));
    out.push_back(index_of(it + 1, ip));
    out.push_back(index_of(it, ip - 1));
    out.push_back(index_of(it, ip + 1));
    return out;
  };

  const int ng = static_cast<int>(grid.size());
  std::vector<Vector3> vecs(grid.size());
  for (int g = 0; g < ng; ++g) vecs[static_cast<std::size_t>(g)] = bloch_vector(grid[static_cast<std::size_t>(g)]);
  std::vector<std::vector<int>> adj(grid.size());
  for (int g = 0; g < ng; ++g) adj[static_cast<std::size_t>(g)] = neighbours(g);

  std::vector<double> energy(grid.size() * grid.size());
#pragma omp parallel for schedule(static)
  for (int ga = 0; ga < ng; ++ga) {
    for (int gb = 0; gb < ng; ++gb) {
      energy[static_cast<std::size_t>(ga) * grid.size() + static_cast<std::size_t>(gb)] =
          f.energy(vecs[static_cast<std::size_t>(ga)], vecs[static_cast<std::size_t>(gb)]);
    }
  }
  auto e_at = [&](int ga, int gb) { return energy[static_cast<std::size_t>(ga) * grid.size() + static_cast<std::size_t>(gb)]; };

  std::vector<std::pair<int, int>> starts;
  for (int ga = 0; ga < ng; ++ga) {
    for (int gb = 0; gb < ng; ++gb) {
      const double e = e_at(ga, gb);
      bool local_min = true;
      for (int na : adj[static_cast<std::size_t>(ga)]) local_min = local_min && e <= e_at(na, gb);
      for (int nb : adj[static_cast<std::size_t>(gb)]) local_min = local_min && e <= e_at(ga, nb);
      if (local_min) starts.emplace_back(ga, gb);
    }
  }

  std::vector<MfMinimum> refined(starts.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t s = 0; s < starts.size(); ++s) {
    const Point p = refine(f, {vecs[static_cast<std::size_t>(starts[s].first)],
                               vecs[static_cast<std::size_t>(starts[s].second)]});
    MfMinimum m{angles_from_vector(p.ma), angles_from_vector(p.mb), 0.0};
    m.a = snap_pole(m.a, [&](const BlochAngles& x) { return mf_energy(x, m.b, model); });
    m.b = snap_pole(m.b, [&](const BlochAngles& x) { return mf_energy(m.a, x, model); });
    m.energy = mf_energy(m.a, m.b, model);
    refined[s] = m;
  }

  // Lowest energy first so each basin keeps its best representative.
  std::sort(refined.begin(), refined.end(), [](const MfMinimum& x, const MfMinimum& y) {
    return std::tuple(x.energy, lexicographic(x)) < std::tuple(y.energy, lexicographic(y));
  });
  const double best = refined.front().energy;

  MfSolution out;
  for (const auto& m : refined) {
    if (m.energy > best + kDegeneracyTol) continue;
    const bool duplicate = std::any_of(out.minima.begin(), out.minima.end(), [&](const MfMinimum& q) {
      return (same_angles(q.a, m.a) && same_angles(q.b, m.b)) || same_basin(q, m, model);
    });
    if (!duplicate) out.minima.push_back(m);
  }
  std::sort(out.minima.begin(), out.minima.end(), [](const MfMinimum& x, const MfMinimum& y) {
    return lexicographic(x) < lexicographic(y);
  });

  auto global = std::min_element(out.minima.begin(), out.minima.end(),
                                 [](const MfMinimum& x, const MfMinimum& y) { return x.energy < y.energy; });
  out.angles_a = global->a;
  out.angles_b = global->b;
  out.energy_per_site = mf_energy(out.angles_a, out.angles_b, model);

  const auto ising_couplings = as_ising(model);
  const bool all_uniform = std::all_of(out.minima.begin(), out.minima.end(), [](const MfMinimum& m) {
    return (bloch_vector(m.a) - bloch_vector(m.b)).norm() <= 1e-6;
  });
  if (ising_couplings && std::abs(std::abs(ising_couplings->j) - ising_couplings->b) <= 1e-12) {
    out.regime = Regime::critical;
  } else if (out.minima.size() == 1) {
    out.regime = Regime::paramagnetic;
  } else if (all_uniform) {
    out.regime = Regime::ferromagnetic;
  } else {
    out.regime = Regime::antiferromagnetic;
    if (!model.graph.bipartite()) {
      out.reliable = false;
      out.warning = "frustrated lattice: no consistent two-sublattice mean-field background";
    }
  }
  return out;
}

EnergyChainReport mf_state_energy_chain(const SpinModel& model, double ed_ground_energy, double c_nn) {
  const int n = model.graph.n_sites();
  if (n < 1) throw ValidationError("mf_state_energy_chain: empty lattice");
  EnergyChainReport r;
  r.e_mf = mf_minimize(model).energy_per_site;
  r.e_exact = ed_ground_energy / n;
  r.gap = r.e_mf - r.e_exact;
  r.bound = energy_gap_bound(std::clamp(c_nn, 0.0, 1.0), model);
  r.holds = r.gap >= -1e-9 && r.gap <= r.bound + 1e-9;
  return r;
}

}  // namespace spinlab
