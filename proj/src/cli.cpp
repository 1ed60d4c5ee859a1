#include "spinlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinlab/csv.hpp"
#include "spinlab/ed_oracle.hpp"
#include "spinlab/entanglement.hpp"
#include "spinlab/errors.hpp"
#include "spinlab/hamiltonian.hpp"
#include "spinlab/imf.hpp"
#include "spinlab/kernels.hpp"
#include "spinlab/lattice.hpp"
#include "spinlab/meanfield.hpp"

namespace spinlab::cli {

namespace {

using nlohmann::json;

constexpr double kCheckTol = 1e-9;

struct ModelFlags {
  std::string model_file;
  std::string lattice = "ring";
  int sites = 8;
  std::string dims;
  bool open = false;
  double j = 1.0;
  double b = 2.0;
};

struct RunConfig {
  std::string command;
  std::string output;
  std::uint64_t seed = 0;
  ModelFlags model;

  // measure
  std::string rho_file;
  int random_states = 0;
  // imf
  int z = 0;
  std::optional<double> xi;
  bool optimize = false;
  std::string sweep_zeta;
  // ed
  bool report = false;
  // bounds
  std::optional<double> tau1;
  std::optional<int> dimension;
  std::optional<double> concurrence;
  bool iterate = false;
  double c0 = 0.5;
  // verify
  int z_max = 8;
  std::string xi_list = "0,0.02,0.05,0.1";
  // sweep
  std::string sweep_param = "B";
  std::string sweep_range;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("'" + path + "': " + e.what());
  }
}

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, 'x')) {
    std::istringstream parts(token);
    std::string piece;
    while (std::getline(parts, piece, ',')) {
      if (piece.empty()) continue;
      try {
        dims.push_back(std::stoi(piece));
      } catch (const std::exception&) {
        throw ValidationError("--dims: invalid side '" + piece + "'");
      }
    }
  }
  if (dims.empty()) throw ValidationError("--dims: expected e.g. 3x4");
  return dims;
}

LatticeGraph lattice_from_flags(const ModelFlags& f) {
  if (f.lattice == "ring") return make_ring(f.sites);
  if (f.lattice == "complete") return make_complete(f.sites);
  if (f.lattice == "star") return make_star(f.sites);
  if (f.lattice == "hypercubic" || f.lattice == "torus") {
    return make_hypercubic(parse_dims(f.dims.empty() ? std::to_string(f.sites) : f.dims), !f.open);
  }
  throw ValidationError("--lattice: unknown family '" + f.lattice + "'");
}

SpinModel model_from_flags(const ModelFlags& f) {
  if (!f.model_file.empty()) return model_from_json(read_json_file(f.model_file));
  return ising(f.j, f.b, lattice_from_flags(f));
}

json angles_json(const BlochAngles& a) { return {{"theta", a.theta}, {"phi", a.phi}}; }

json matrix_json(const ComplexMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array();
    json ii = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"dim", m.rows()}, {"re", re}, {"im", im}};
}

struct Output {
  std::string text;
  int status = kExitOk;
};

Output json_output(const json& doc, int status = kExitOk) { return {doc.dump(2) + "\n", status}; }

// --- measure -------------------------------------------------------------

Output cmd_measure(const RunConfig& cfg) {
  if (cfg.random_states > 0) {
    std::mt19937_64 rng(cfg.seed);
    csv::Table table{{"index", "concurrence", "members", "reconstruction_error", "concurrence_spread"}, {}};
    bool ok = true;
    for (int k = 0; k < cfg.random_states; ++k) {
      const DensityMatrix rho = random_density(rng, 4, 4);
      const auto dec = wootters_decompose(rho);
      const double err = (dec.reconstruct() - rho.matrix()).norm();
      double lo = 1.0;
      double hi = 0.0;
      for (const auto& m : dec.ensemble) {
        const double c = pure_concurrence(m.state);
        lo = std::min(lo, c);
        hi = std::max(hi, c);
      }
      const double spread = hi - lo;
      ok = ok && err <= kCheckTol && spread <= kCheckTol;
      table.rows.push_back({csv::format_number(static_cast<long long>(k)), csv::format_number(concurrence(rho).c),
                            csv::format_number(static_cast<long long>(dec.ensemble.size())), csv::format_number(err),
                            csv::format_number(spread)});
    }
    return {csv::to_string(table), ok ? kExitOk : kExitCheckFailed};
  }
  if (cfg.rho_file.empty()) throw ValidationError("measure: needs --rho <file> or --random <count>");
  const DensityMatrix rho = density_from_json(read_json_file(cfg.rho_file));
  if (rho.dim() == 2) {
    const auto a = onsite_analysis(rho);
    return json_output({{"dim", 2}, {"one_tangle", one_tangle(rho)}, {"p", a.p},
                        {"alpha", {{"re", a.alpha.real()}, {"im", a.alpha.imag()}}}});
  }
  const auto c = concurrence(rho);
  const auto dec = wootters_decompose(rho);
  const int dims[2] = {2, 2};
  json tangles = json::array();
  for (int s = 0; s < 2; ++s) {
    const int keep[1] = {s};
    tangles.push_back(one_tangle(DensityMatrix::from_matrix(partial_trace(rho.matrix(), dims, keep))));
  }
  json members = json::array();
  for (const auto& m : dec.ensemble) {
    members.push_back({{"weight", m.weight}, {"concurrence", pure_concurrence(m.state)}});
  }
  return json_output({{"dim", 4},
                      {"concurrence", c.c},
                      {"lambdas", c.lambdas},
                      {"one_tangles", tangles},
                      {"decomposition", members},
                      {"reconstruction_error", (dec.reconstruct() - rho.matrix()).norm()}});
}

// --- mf ------------------------------------------------------------------

Output cmd_mf(const RunConfig& cfg) {
  const SpinModel model = model_from_flags(cfg.model);
  const MfSolution sol = mf_minimize(model);
  json minima = json::array();
  for (const auto& m : sol.minima) {
    minima.push_back({{"theta", m.a.theta}, {"phi", m.a.phi}, {"theta_b", m.b.theta}, {"phi_b", m.b.phi},
                      {"energy", m.energy}});
  }
  json doc{{"energy", sol.energy_per_site},
           {"minima", minima},
           {"regime", to_string(sol.regime)},
           {"reliable", sol.reliable},
           {"sublattice_a", angles_json(sol.angles_a)},
           {"sublattice_b", angles_json(sol.angles_b)}};
  if (!sol.warning.empty()) doc["warning"] = sol.warning;
  return json_output(doc);
}

// --- imf -----------------------------------------------------------------

Output cmd_imf(const RunConfig& cfg) {
  if (cfg.z < 1) throw ValidationError("imf: --Z must be >= 1");
  const IsingCouplings c{cfg.model.j, cfg.model.b};
  if (!cfg.sweep_zeta.empty()) {
    const auto rows = imf_sweep_zeta(c, cfg.z, parse_range(cfg.sweep_zeta));
    csv::Table table{{"zeta", "xi", "energy", "tau1", "C_exact", "C_asymptotic"}, {}};
    for (const auto& r : rows) {
      table.rows.push_back({csv::format_number(r.zeta), csv::format_number(r.xi), csv::format_number(r.energy),
                            csv::format_number(r.tau1), csv::format_number(r.c_exact),
                            csv::format_number(r.c_asymptotic)});
    }
    return {csv::to_string(table), kExitOk};
  }
  if (cfg.xi) {
    const ImfParams p{Complex{*cfg.xi, 0.0}, cfg.z};
    const auto co = chi_omega(p);
    return json_output({{"xi", *cfg.xi},
                        {"Z", cfg.z},
                        {"zeta", p.zeta()},
                        {"chi", co.chi},
                        {"omega", co.omega},
                        {"energy", imf_energy(p, c)},
                        {"tau1", imf_one_tangle(*cfg.xi, cfg.z)},
                        {"C_exact", imf_concurrence_exact(p)},
                        {"C_asymptotic", imf_concurrence_asymptotic(p.zeta(), cfg.z)},
                        {"rho_site", matrix_json(imf_rho_site(p).matrix())},
                        {"rho_pair", matrix_json(imf_rho_pair(p).matrix())}});
  }
  const auto opt = imf_optimize(c, cfg.z);
  const bool improves = c.j == 0.0 ? opt.energy <= -c.b + 1e-12 : opt.energy < -c.b;
  return json_output({{"Z", cfg.z},
                      {"J", c.j},
                      {"B", c.b},
                      {"xi_min", opt.xi_min},
                      {"energy", opt.energy},
                      {"mean_field_energy", -c.b},
                      {"constant", opt.constant},
                      {"reference_xi", opt.reference_xi},
                      {"reference_constant", 0.5},
                      {"note", "xi_min * Z * B / J under the unordered edge sum; the closed-form estimate J/(2BZ) corresponds to 1/2"}},
                     improves ? kExitOk : kExitCheckFailed);
}

// --- ed ------------------------------------------------------------------

Output cmd_ed(const RunConfig& cfg) {
  const SpinModel model = model_from_flags(cfg.model);
  const int n = model.graph.n_sites();
  GroundStateResult gs = ground_state(model);
  json doc{{"n_sites", n},
           {"Z", model.graph.z()},
           {"energy", gs.energy},
           {"energy_per_site", gs.energy / n},
           {"degeneracy", gs.degeneracy},
           {"gap", gs.gap},
           {"residual", gs.residual},
           {"degeneracy_tolerance", gs.tolerance},
           {"method", gs.method}};
  if (!cfg.report) return json_output(doc);

  const auto r = entanglement_report(model, std::move(gs));
  bool ok = true;
  json sites = json::array();
  for (int s = 0; s < n; ++s) {
    const double res = r.monogamy_residual[static_cast<std::size_t>(s)];
    ok = ok && res >= -kCheckTol;
    sites.push_back({{"site", s}, {"tau1", r.tau1[static_cast<std::size_t>(s)]}, {"monogamy_residual", res}});
  }
  json edges = json::array();
  for (std::size_t k = 0; k < r.edges.size(); ++k) {
    const auto& e = r.edges[k];
    const double c = r.edge_concurrence[k];
    const double bound = std::sqrt(std::min(r.tau1[static_cast<std::size_t>(e.a)], r.tau1[static_cast<std::size_t>(e.b)]) /
                                   model.graph.z());
    ok = ok && c <= bound + kCheckTol;
    edges.push_back({{"a", e.a}, {"b", e.b}, {"C", c}, {"bound", bound},
                     {"max_correlation", r.edge_max_correlation[k]}});
  }
  json nnn = json::array();
  for (std::size_t k = 0; k < r.nnn_pairs.size(); ++k) {
    nnn.push_back({{"a", r.nnn_pairs[k].a}, {"b", r.nnn_pairs[k].b}, {"C", r.nnn_concurrence[k]}});
  }
  doc["sites"] = sites;
  doc["edges"] = edges;
  doc["nnn_pairs"] = nnn;
  doc["checks_passed"] = ok;
  return json_output(doc, ok ? kExitOk : kExitCheckFailed);
}

// --- bounds --------------------------------------------------------------

Output cmd_bounds(const RunConfig& cfg) {
  json doc = json::object();
  if (cfg.z > 0) {
    doc["Z"] = cfg.z;
    doc["C_max"] = concurrence_bound(1.0, cfg.z);
    if (cfg.tau1) doc["C_bound"] = concurrence_bound(*cfg.tau1, cfg.z);
  }
  if (cfg.dimension) {
    doc["D"] = *cfg.dimension;
    doc["C_nnn_max"] = nnn_bound(*cfg.dimension);
  }
  if (cfg.concurrence) {
    const SpinModel model = ising(cfg.model.j, cfg.model.b, make_ring(3));
    doc["energy_gap_bound"] = energy_gap_bound(*cfg.concurrence, model);
  }
  if (cfg.iterate) {
    const auto it = iterate_exponents(cfg.c0);
    doc["trace"] = it.trace;
    doc["c_exponent"] = it.c_exponent;
    doc["tau_exponent"] = it.tau_exponent;
    doc["iterations"] = it.iterations;
  }
  if (doc.empty()) throw ValidationError("bounds: give at least one of --Z, --D, --C, --iterate");
  return json_output(doc);
}

// --- verify --------------------------------------------------------------

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ',')) {
    try {
      out.push_back(std::stod(piece));
    } catch (const std::exception&) {
      throw ValidationError("invalid number '" + piece + "'");
    }
  }
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

Output cmd_verify(const RunConfig& cfg) {
  if (cfg.z_max < 2 || cfg.z_max > 8) throw ValidationError("verify: --z-max must lie in [2, 8]");
  ImfVerificationOptions opt;
  opt.star_z.clear();
  for (int z = 2; z <= cfg.z_max; ++z) opt.star_z.push_back(z);
  opt.xi = parse_list(cfg.xi_list);
  opt.couplings = {cfg.model.j, cfg.model.b};
  const auto rows = verify_imf_formulas(opt);
  csv::Table table{{"graph", "n_sites", "Z", "xi", "site_dev_Z", "site_dev_half_Z", "pair_dev", "energy_dev", "winner"},
                   {}};
  bool ok = true;
  for (const auto& r : rows) {
    if (r.graph == "star") ok = ok && r.site_dev_z <= 1e-12 && r.energy_dev <= 1e-12 && (r.xi == 0.0 || r.winner == "Z");
    if (r.graph == "double_star") ok = ok && r.pair_dev <= 1e-10;
    table.rows.push_back({r.graph, csv::format_number(static_cast<long long>(r.n_sites)),
                          csv::format_number(static_cast<long long>(r.z)), csv::format_number(r.xi),
                          csv::format_number(r.site_dev_z), csv::format_number(r.site_dev_half),
                          csv::format_number(r.pair_dev), csv::format_number(r.energy_dev), r.winner});
  }
  return {csv::to_string(table), ok ? kExitOk : kExitCheckFailed};
}

// --- sweep ---------------------------------------------------------------

Output cmd_sweep(const RunConfig& cfg) {
  if (cfg.sweep_range.empty()) throw ValidationError("sweep: needs --range a:b:step");
  if (cfg.sweep_param != "B" && cfg.sweep_param != "J" && cfg.sweep_param != "sites") {
    throw ValidationError("sweep: --param must be B, J or sites");
  }
  const auto values = parse_range(cfg.sweep_range);
  csv::Table table{{"value", "N", "Z", "J", "B", "e_exact", "e_mf", "e_imf", "C_edge_mean", "C_edge_max", "tau1_mean",
                    "monogamy_min", "Z_times_C"},
                   {}};
  bool ok = true;
  for (double v : values) {
    ModelFlags f = cfg.model;
    if (cfg.sweep_param == "B") f.b = v;
    if (cfg.sweep_param == "J") f.j = v;
    if (cfg.sweep_param == "sites") {
      if (v != std::floor(v)) throw ValidationError("sweep: site counts must be integers");
      f.sites = static_cast<int>(v);
    }
    const SpinModel model = model_from_flags(f);
    const int n = model.graph.n_sites();
    const int z = model.graph.z();
    const auto r = entanglement_report(model);
    double c_sum = 0.0;
    double c_max = 0.0;
    for (double c : r.edge_concurrence) {
      c_sum += c;
      c_max = std::max(c_max, c);
    }
    double tau_sum = 0.0;
    for (double t : r.tau1) tau_sum += t;
    const double mono = *std::min_element(r.monogamy_residual.begin(), r.monogamy_residual.end());
    ok = ok && mono >= -kCheckTol;
    const double c_mean = c_sum / static_cast<double>(r.edge_concurrence.size());
    const double e_imf = f.b > 0.0 ? imf_optimize({f.j, f.b}, z).energy : std::nan("");
    table.rows.push_back({csv::format_number(v), csv::format_number(static_cast<long long>(n)),
                          csv::format_number(static_cast<long long>(z)), csv::format_number(f.j),
                          csv::format_number(f.b), csv::format_number(r.ground.energy / n),
                          csv::format_number(mf_minimize(model).energy_per_site), csv::format_number(e_imf),
                          csv::format_number(c_mean), csv::format_number(c_max), csv::format_number(tau_sum / n),
                          csv::format_number(mono), csv::format_number(z * c_max)});
  }
  return {csv::to_string(table), ok ? kExitOk : kExitCheckFailed};
}

void add_model_flags(CLI::App* sub, ModelFlags& f) {
  sub->add_option("--model", f.model_file, "Model JSON file (overrides the Ising flags)");
  sub->add_option("--lattice", f.lattice, "ring | complete | star | hypercubic | torus")->capture_default_str();
  sub->add_option("--sites", f.sites, "Site count (ring, complete) or Z (star)")->capture_default_str();
  sub->add_option("--dims", f.dims, "Side lengths for hypercubic lattices, e.g. 3x4");
  sub->add_flag("--open", f.open, "Open boundaries for hypercubic lattices");
  sub->add_option("--J", f.j, "Ising coupling J")->capture_default_str();
  sub->add_option("--B", f.b, "Transverse field B")->capture_default_str();
}

}  // namespace

std::vector<double> parse_range(const std::string& spec) {
  std::vector<double> parts;
  std::istringstream in(spec);
  std::string piece;
  while (std::getline(in, piece, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      throw ValidationError("range '" + spec + "': invalid number '" + piece + "'");
    }
  }
  if (parts.size() != 3) throw ValidationError("range '" + spec + "': expected a:b:step");
  const double a = parts[0];
  const double b = parts[1];
  const double step = parts[2];
  if (!(step > 0.0)) throw ValidationError("range '" + spec + "': step must be > 0");
  if (!(a <= b)) throw ValidationError("range '" + spec + "': needs a <= b");
  const auto count = static_cast<long long>(std::floor((b - a) / step + 1e-9)) + 1;
  if (count > 10'000'000) throw ValidationError("range '" + spec + "': too many points");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long long k = 0; k < count; ++k) out.push_back(a + static_cast<double>(k) * step);
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  kernels::apply_thread_env();
  RunConfig cfg;
  CLI::App app{"spinlab: entanglement bounds, mean-field and IMF ansatz, exact diagonalization", "spinlab"};
  app.require_subcommand(1);
  app.add_option("--seed", cfg.seed, "Seed for all random state generation")->capture_default_str();
  app.add_option("-o,--out", cfg.output, "Write the result to this file instead of stdout");

  auto* measure = app.add_subcommand("measure", "Concurrence, tangles and decomposition of a density matrix");
  measure->add_option("--rho", cfg.rho_file, "Density-matrix JSON file");
  measure->add_option("--random", cfg.random_states, "Check the decomposition on N seeded random mixed states");

  auto* mf = app.add_subcommand("mf", "Two-sublattice mean-field minimization");
  add_model_flags(mf, cfg.model);

  auto* imf = app.add_subcommand("imf", "Improved mean-field ansatz");
  imf->add_option("--Z", cfg.z, "Coordination number")->required();
  imf->add_option("--J", cfg.model.j, "Ising coupling J")->capture_default_str();
  imf->add_option("--B", cfg.model.b, "Transverse field B")->capture_default_str();
  auto* xi_opt = imf->add_option("--xi", cfg.xi, "Evaluate at this real xi");
  auto* optimize_opt = imf->add_flag("--optimize", cfg.optimize, "Minimize the energy over real xi (default)");
  imf->add_option("--sweep-zeta", cfg.sweep_zeta, "CSV sweep over zeta = a:b:step");
  xi_opt->excludes(optimize_opt);

  auto* ed = app.add_subcommand("ed", "Exact ground state and entanglement report");
  add_model_flags(ed, cfg.model);
  ed->add_flag("--report", cfg.report, "Per-site and per-edge entanglement report with bound checks");

  auto* bounds = app.add_subcommand("bounds", "Closed-form bounds and the exponent iteration");
  bounds->add_option("--Z", cfg.z, "Coordination number for the concurrence bound");
  bounds->add_option("--tau1", cfg.tau1, "One-tangle for the concurrence bound");
  bounds->add_option("--D", cfg.dimension, "Hypercubic dimension for the next-nearest-neighbour bound");
  bounds->add_option("--C", cfg.concurrence, "Concurrence for the energy-correction bound (uses --J, --B)");
  bounds->add_option("--J", cfg.model.j, "Ising coupling J")->capture_default_str();
  bounds->add_option("--B", cfg.model.b, "Transverse field B")->capture_default_str();
  bounds->add_flag("--iterate", cfg.iterate, "Iterate the scaling exponents to their fixed point");
  bounds->add_option("--c0", cfg.c0, "Starting concurrence exponent")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Compare explicit IMF states with the analytic formulas");
  verify->add_option("--z-max", cfg.z_max, "Largest star coordination (2..8)")->capture_default_str();
  verify->add_option("--xi", cfg.xi_list, "Comma-separated real xi values")->capture_default_str();
  verify->add_option("--J", cfg.model.j, "Ising coupling J")->capture_default_str();
  verify->add_option("--B", cfg.model.b, "Transverse field B")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Exact/mean-field/IMF comparison over a parameter grid");
  add_model_flags(sweep, cfg.model);
  sweep->add_option("--param", cfg.sweep_param, "B, J or sites")->capture_default_str();
  sweep->add_option("--range", cfg.sweep_range, "a:b:step")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInvalid;
  }

  try {
    Output result;
    if (measure->parsed()) result = cmd_measure(cfg);
    else if (mf->parsed()) result = cmd_mf(cfg);
    else if (imf->parsed()) result = cmd_imf(cfg);
    else if (ed->parsed()) result = cmd_ed(cfg);
    else if (bounds->parsed()) result = cmd_bounds(cfg);
    else if (verify->parsed()) result = cmd_verify(cfg);
    else if (sweep->parsed()) result = cmd_sweep(cfg);

    if (cfg.output.empty()) {
      out << result.text;
    } else {
      std::ofstream file(cfg.output, std::ios::binary | std::ios::trunc);
      if (!file) throw Error("cannot open '" + cfg.output + "' for writing");
      file << result.text;
      if (!file.flush()) throw Error("write to '" + cfg.output + "' failed");
    }
    if (result.status == kExitCheckFailed) err << "check failed: see output for the offending values\n";
    return result.status;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace spinlab::cli
