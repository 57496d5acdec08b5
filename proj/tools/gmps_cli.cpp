// Command-line front end: build GMPS states, run spectral analyses, emit
// JSON/CSV artifacts. One command = one computation; exit codes are part of
// the contract (0 ok, 2 parse error, 3 invalid state, 4 critical).

#include "gmps/lattice.hpp"
#include "gmps/parent_hamiltonian.hpp"
#include "gmps/protocols.hpp"
#include "gmps/random_maps.hpp"
#include "gmps/serialize.hpp"
#include "gmps/spectral.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <numbers>

namespace {

using namespace gmps;

constexpr double kPi = std::numbers::pi;

constexpr int kExitParse = 2;
constexpr int kExitInvalid = 3;
constexpr int kExitCritical = 4;

struct CommonOptions {
  std::string spec_path;
  std::string out_path;
  int n_override = 0;
  int m_override = 0;
  std::string boundary;
  int phi_grid = 64;
  int n_max = 32;
  int finite_n = 0;
  double tol_psd = tol::psd;
  double tol_purity = tol::purity;
  double tol_sym = tol::sym;
};

void add_spec_options(CLI::App* cmd, CommonOptions& opt, bool with_out) {
  cmd->add_option("--spec", opt.spec_path, "GmpsSpec JSON file")->required();
  cmd->add_option("--N", opt.n_override, "override the chain length of a uniform spec");
  cmd->add_option("--M", opt.m_override, "assert the bond count of the spec");
  cmd->add_option("--boundary", opt.boundary, "periodic|open")
      ->check(CLI::IsMember({"periodic", "open"}));
  cmd->add_option("--tol-psd", opt.tol_psd, "uncertainty-relation tolerance");
  cmd->add_option("--tol-purity", opt.tol_purity, "purity tolerance");
  cmd->add_option("--tol-sym", opt.tol_sym, "symmetry tolerance");
  if (with_out) cmd->add_option("--out", opt.out_path, "output file (default: stdout)");
}

GmpsSpec load_spec(const CommonOptions& opt) {
  GmpsSpec spec = spec_from_json(parse_json_file(opt.spec_path));
  if (opt.n_override > 0) {
    if (!spec.translation_invariant())
      throw std::invalid_argument("--N override requires a uniform spec");
    spec.sites.assign(static_cast<size_t>(opt.n_override), spec.sites.front());
  }
  if (opt.m_override > 0 && opt.m_override != spec.bonds)
    throw std::invalid_argument("--M disagrees with the spec (M = " +
                                std::to_string(spec.bonds) + ")");
  if (opt.boundary == "periodic") spec.boundary = Boundary::Periodic;
  if (opt.boundary == "open") spec.boundary = Boundary::Open;
  spec.validate();
  return spec;
}

GaussChannel pure_ti_site(const GmpsSpec& spec) {
  if (!spec.translation_invariant())
    throw std::invalid_argument("this command requires a translation-invariant spec");
  const GaussChannel& site = spec.sites.front();
  if (site.n_out != 1)
    throw std::invalid_argument("this command requires one physical mode per site");
  if (!purity(site.cm).pure)
    throw std::invalid_argument("this command requires a pure site map");
  return site;
}

void emit(const CommonOptions& opt, const std::string& text) {
  if (opt.out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
  } else {
    std::ofstream out(opt.out_path);
    if (!out) throw std::runtime_error("cannot write " + opt.out_path);
    out << text;
  }
}

int cmd_build(const CommonOptions& opt) {
  const GmpsSpec spec = load_spec(opt);
  const CovMat chain = build_gmps(spec);
  const auto validity = validate_state(chain, opt.tol_psd);
  const auto pur = purity(chain, opt.tol_purity);
  json summary{{"valid", validity.valid},
               {"min_eigenvalue", validity.min_eigenvalue},
               {"pure", pur.pure},
               {"det", pur.det},
               {"critical", chain.critical},
               {"translation_invariant",
                spec.translation_invariant() && spec.boundary == Boundary::Periodic}};
  if (spec.translation_invariant() && spec.boundary == Boundary::Periodic)
    summary["circulant_defect"] = circulant_defect(chain);
  std::cout << summary.dump(2) << "\n";
  if (!validity.valid) {
    std::cerr << "state violates the uncertainty relation (min eigenvalue "
              << validity.min_eigenvalue << ")\n";
    return kExitInvalid;
  }
  if (!opt.out_path.empty()) write_json_file(opt.out_path, to_json(chain));
  return chain.critical ? kExitCritical : 0;
}

int cmd_correlations(const CommonOptions& opt) {
  const GmpsSpec spec = load_spec(opt);
  const GaussChannel site = pure_ti_site(spec);

  std::vector<int> ns;
  std::vector<double> gq, gp, gr;
  std::vector<std::pair<std::string, std::string>> meta;

  if (opt.finite_n > 0) {
    const int n = opt.finite_n;
    std::vector<Eigen::Matrix2cd> samples(n);
    for (int m = 0; m < n; ++m) samples[m] = gamma_hat(site, 2.0 * kPi * m / n);
    const CovMat chain = chain_from_spectral_samples(samples);
    const auto blocks = circulant_blocks(chain);
    meta.emplace_back("mode", "finite");
    meta.emplace_back("N", std::to_string(n));
    for (int dist = 0; dist <= std::min(opt.n_max, n - 1); ++dist) {
      ns.push_back(dist);
      gq.push_back(blocks[dist](0, 0));
      gp.push_back(blocks[dist](1, 1));
      gr.push_back(blocks[dist](0, 1));
    }
  } else {
    const RationalCM rc = rationalize(site, spec.bonds);
    const auto cl = correlation_length(rc);
    meta.emplace_back("mode", "infinite");
    meta.emplace_back("L", std::to_string(rc.degree_bound));
    meta.emplace_back("xi", format_double(cl.xi));
    meta.emplace_back("z_star", format_double(cl.z_star.real()) + "+" +
                                    format_double(cl.z_star.imag()) + "i");
    for (int dist = 0; dist <= opt.n_max; ++dist) {
      ns.push_back(dist);
      gq.push_back(correlations_infinite(rc, CorrComponent::Q, dist));
      gp.push_back(correlations_infinite(rc, CorrComponent::P, dist));
      gr.push_back(correlations_infinite(rc, CorrComponent::R, dist));
    }
  }
  emit(opt, correlations_csv(ns, gq, gp, gr, meta));
  return 0;
}

int cmd_corrlength(const CommonOptions& opt) {
  const GmpsSpec spec = load_spec(opt);
  const GaussChannel site = pure_ti_site(spec);
  const RationalCM rc = rationalize(site, spec.bonds);
  const auto cl = correlation_length(rc);
  emit(opt, json{{"xi", cl.xi},
                 {"z_star", {cl.z_star.real(), cl.z_star.imag()}},
                 {"L", rc.degree_bound},
                 {"unit_circle_margin", rc.unit_circle_margin},
                 {"fit_residual", rc.fit_residual}}
                .dump(2));
  return 0;
}

json converse_json(const QuadHamiltonian& h) {
  const auto conv = has_gmps_ground_state(h);
  json out{{"status", conv.status == GmpsGroundState::Status::Yes          ? "yes"
                      : conv.status == GmpsGroundState::Status::No         ? "no"
                                                                           : "indeterminate"},
           {"pairing_margin", conv.pairing_margin}};
  if (conv.witness_root)
    out["witness_root"] = {conv.witness_root->real(), conv.witness_root->imag()};
  if (conv.state) out["state"] = to_json(*conv.state);
  return out;
}

int cmd_parent_ham(const CommonOptions& opt, const std::string& hamiltonian_path) {
  if (!hamiltonian_path.empty()) {
    // converse mode: test a given local Hamiltonian for a GMPS ground state
    const QuadHamiltonian h = hamiltonian_from_json(parse_json_file(hamiltonian_path));
    emit(opt, json{{"hamiltonian", to_json(h)},
                   {"energy_density", ground_energy_density(h)},
                   {"converse", converse_json(h)}}
                  .dump(2));
    return 0;
  }
  const GmpsSpec spec = load_spec(opt);
  const GaussChannel site = pure_ti_site(spec);
  const RationalCM rc = rationalize(site, spec.bonds);
  const QuadHamiltonian h = parent_hamiltonian(rc);
  const SpectralCM gs = ground_state(h);
  double residual = 0.0;
  for (int i = 0; i < opt.phi_grid; ++i) {
    const double phi = 2.0 * kPi * i / opt.phi_grid;
    residual = std::max(residual, (gs.eval(phi) - rc.eval(phi).cast<std::complex<double>>())
                                      .cwiseAbs()
                                      .maxCoeff());
  }
  emit(opt, json{{"hamiltonian", to_json(h)},
                 {"energy_density", ground_energy_density(h)},
                 {"roundtrip_residual", residual},
                 {"converse", converse_json(h)}}
                .dump(2));
  return 0;
}

int cmd_schmidt(const CommonOptions& opt) {
  const GmpsSpec spec = load_spec(opt);
  if (!spec.translation_invariant())
    throw std::invalid_argument("schmidt requires a translation-invariant spec");
  const GaussChannel& site = spec.sites.front();
  const SchmidtForm sf = schmidt_decompose(site.cm, spec.bonds);
  auto matrix_json = [](const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(row);
    }
    return rows;
  };
  emit(opt, json{{"squeezings", sf.squeezings},
                 {"S_A", matrix_json(sf.s_a.s)},
                 {"S_BC", matrix_json(sf.s_bc.s)},
                 {"reassembly_error", sf.reassembly_error}}
                .dump(2));
  return 0;
}

int cmd_reduce_bonds(const CommonOptions& opt) {
  const GmpsSpec spec = load_spec(opt);
  const BondReduction br = reduce_bond_entanglement(spec);
  if (!opt.out_path.empty()) write_json_file(opt.out_path, to_json(br.reduced));
  std::cout << json{{"squeezings", br.squeezings},
                    {"max_gamma_hat_deviation", br.max_gamma_hat_deviation},
                    {"schmidt_reassembly_error", br.form.reassembly_error}}
                   .dump(2)
            << "\n";
  return 0;
}

int cmd_protocol_demo(const CommonOptions& opt, int n_sites) {
  auto rng = seeded_engine();
  const CovMat gin = random_valid_cm(n_sites, 0.5, rng);
  const SymplecticOp gate = SymplecticOp::from_generator(random_qq_generator(rng));
  const CovMat direct = apply_symplectic(chain_gate_product(gate, n_sites), gin);
  const std::vector<double> s_grid = {4.0, 6.0, 8.0, 10.0, 12.0};
  std::vector<double> errors;
  for (double s : s_grid) {
    const CovMat out = protocol_round(gin, gate, s);
    errors.push_back((out.entries - direct.entries).cwiseAbs().maxCoeff());
  }
  // least-squares slope of log(error) against s_bond
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < s_grid.size(); ++i) {
    const double y = std::log(errors[i]);
    sx += s_grid[i];
    sy += y;
    sxx += s_grid[i] * s_grid[i];
    sxy += s_grid[i] * y;
  }
  const double count = static_cast<double>(s_grid.size());
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  emit(opt, json{{"s_bond", s_grid}, {"error", errors}, {"slope", slope}}.dump(2));
  return 0;
}

int cmd_verify(const CommonOptions& opt) {
  const GmpsSpec spec = load_spec(opt);
  json checks = json::object();
  bool ok = true;
  bool critical = false;

  bool sites_pure = true;
  for (const auto& site : spec.sites) {
    const auto validity = validate_state(site.cm, opt.tol_psd);
    if (!validity.valid) throw std::invalid_argument("site map CM is not a valid state");
    sites_pure = sites_pure && purity(site.cm, opt.tol_purity).pure;
  }
  checks["site_maps_valid"] = true;
  checks["site_maps_pure"] = sites_pure;

  GmpsSpec small = spec;
  if (spec.translation_invariant() && spec.n_sites() > 8)
    small.sites.assign(8, spec.sites.front());
  const CovMat chain = build_gmps(small);
  critical = critical || chain.critical;
  const bool chain_valid = validate_state(chain, opt.tol_psd).valid;
  checks["chain_valid"] = chain_valid;
  ok = ok && chain_valid;
  if (sites_pure && spec.boundary == Boundary::Periodic) {
    // open chains trace out the unmatched edge ports and come out mixed
    const bool chain_pure = std::abs(chain.entries.determinant() - 1.0) <= 1e-7;
    checks["chain_pure"] = chain_pure;
    ok = ok && chain_pure;
  }

  if (spec.translation_invariant() && spec.boundary == Boundary::Periodic) {
    const double defect = circulant_defect(chain);
    checks["circulant_defect"] = defect;
    ok = ok && defect <= 1e-9;

    if (sites_pure && spec.d_phys() == 1) {
      const GaussChannel site = spec.sites.front();
      const int n = small.n_sites();
      std::vector<Eigen::Matrix2cd> samples(n);
      for (int m = 0; m < n; ++m) samples[m] = gamma_hat(site, 2.0 * kPi * m / n);
      const double fourier_dev =
          (chain_from_spectral_samples(samples).entries - chain.entries).cwiseAbs().maxCoeff();
      checks["finite_fourier_deviation"] = fourier_dev;
      ok = ok && fourier_dev <= 1e-8;

      const RationalCM rc = rationalize(site, spec.bonds);
      critical = critical || rc.critical;
      checks["rational_degree_bound"] = rc.degree_bound;
      ok = ok && rc.degree_bound <= 2 * spec.bonds + 1;
      const Poly defect_poly = rc.p * rc.q - rc.r * rc.r - rc.d * rc.d;
      const double scale =
          std::max({(rc.p * rc.q).max_abs_coeff(), (rc.d * rc.d).max_abs_coeff(), 1.0});
      const double purity_identity = defect_poly.max_abs_coeff() / scale;
      checks["purity_identity"] = purity_identity;
      ok = ok && purity_identity <= 1e-7;

      const SpectralCM gs = ground_state(parent_hamiltonian(rc));
      double residual = 0.0;
      for (int i = 0; i < opt.phi_grid; ++i) {
        const double phi = 2.0 * kPi * i / opt.phi_grid;
        residual = std::max(residual, (gs.eval(phi) - rc.eval(phi).cast<std::complex<double>>())
                                          .cwiseAbs()
                                          .maxCoeff());
      }
      checks["parent_hamiltonian_roundtrip"] = residual;
      ok = ok && residual <= 1e-10;
    }
  }

  checks["critical"] = critical;
  json report{{"ok", ok && !critical}, {"checks", checks}};
  emit(opt, report.dump(2));
  if (critical) return kExitCritical;
  return ok ? 0 : kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian matrix product states: lattice construction, spectral analysis, "
               "parent Hamiltonians"};
  app.require_subcommand(1);

  CommonOptions opt;
  int protocol_sites = 4;

  auto* build = app.add_subcommand("build", "assemble the chain CM of a GMPS spec");
  add_spec_options(build, opt, true);

  auto* correlations =
      app.add_subcommand("correlations", "two-point correlation table (CSV)");
  add_spec_options(correlations, opt, true);
  correlations->add_option("--n-max", opt.n_max, "largest distance (default 32)")
      ->check(CLI::NonNegativeNumber);
  correlations->add_option("--finite", opt.finite_n,
                           "finite-chain mode: sample the N-site chain instead")
      ->check(CLI::Range(2, 1 << 20));

  auto* corrlength = app.add_subcommand("corrlength", "correlation length via residues");
  add_spec_options(corrlength, opt, true);

  auto* parent = app.add_subcommand("parent-ham", "parent Hamiltonian synthesis and checks");
  std::string hamiltonian_path;
  parent->add_option("--spec", opt.spec_path, "GmpsSpec JSON file");
  parent->add_option("--hamiltonian", hamiltonian_path,
                     "QuadHamiltonian JSON: run the converse ground-state test instead");
  parent->add_option("--N", opt.n_override, "override the chain length of a uniform spec");
  parent->add_option("--M", opt.m_override, "assert the bond count of the spec");
  parent->add_option("--phi-grid", opt.phi_grid, "round-trip grid size (default 64)");
  parent->add_option("--out", opt.out_path, "output file (default: stdout)");

  auto* schmidt = app.add_subcommand("schmidt", "Schmidt form of the site map (A|BC split)");
  add_spec_options(schmidt, opt, true);

  auto* reduce = app.add_subcommand("reduce-bonds", "rewrite to finitely entangled bonds");
  add_spec_options(reduce, opt, true);

  auto* demo = app.add_subcommand("protocol-demo",
                                  "teleportation-round convergence report (GMPS_SEED)");
  demo->add_option("--N", protocol_sites, "chain length (default 4)");
  demo->add_option("--out", opt.out_path, "output file (default: stdout)");

  auto* verify = app.add_subcommand("verify", "run the consistency battery on a spec");
  add_spec_options(verify, opt, true);
  verify->add_option("--phi-grid", opt.phi_grid, "round-trip grid size (default 64)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (build->parsed()) return cmd_build(opt);
    if (correlations->parsed()) return cmd_correlations(opt);
    if (corrlength->parsed()) return cmd_corrlength(opt);
    if (parent->parsed()) {
      if (opt.spec_path.empty() && hamiltonian_path.empty())
        throw std::invalid_argument("parent-ham needs --spec or --hamiltonian");
      return cmd_parent_ham(opt, hamiltonian_path);
    }
    if (schmidt->parsed()) return cmd_schmidt(opt);
    if (reduce->parsed()) return cmd_reduce_bonds(opt);
    if (demo->parsed()) return cmd_protocol_demo(opt, protocol_sites);
    if (verify->parsed()) return cmd_verify(opt);
  } catch (const ParseError& e) {
    std::cerr << "parse error at line " << e.line << ", column " << e.column << ": "
              << e.what() << "\n";
    return kExitParse;
  } catch (const CriticalStateError& e) {
    std::cerr << "critical state: " << e.what()
              << " (unit-circle distance " << e.unit_circle_distance << ")\n";
    return kExitCritical;
  } catch (const FitError& e) {
    std::cerr << "rational fit failed: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
