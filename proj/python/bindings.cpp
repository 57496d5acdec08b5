// Python bindings for the main operations. Covariance matrices cross the
// boundary as plain numpy arrays (interleaved ordering, Q1 P1 Q2 P2 ...);
// channels are passed as (cm, n_in, n_out) and rational CMs / Hamiltonians as
// coefficient dicts.

#include "gmps/lattice.hpp"
#include "gmps/parent_hamiltonian.hpp"
#include "gmps/protocols.hpp"
#include "gmps/random_maps.hpp"
#include "gmps/spectral.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numbers>

namespace py = pybind11;
using namespace gmps;

namespace {

CovMat as_covmat(const Eigen::MatrixXd& entries) {
  return CovMat::from_entries(entries);
}

GaussChannel as_channel(const Eigen::MatrixXd& cm, int n_in, int n_out) {
  GaussChannel ch;
  ch.n_in = n_in;
  ch.n_out = n_out;
  ch.cm = as_covmat(cm);
  ch.pure = purity(ch.cm).pure;
  return ch;
}

py::dict rational_to_dict(const RationalCM& rc) {
  py::dict d;
  d["L"] = rc.degree_bound;
  d["p"] = rc.p.coeffs();
  d["q"] = rc.q.coeffs();
  d["r"] = rc.r.coeffs();
  d["d"] = rc.d.coeffs();
  d["fit_residual"] = rc.fit_residual;
  d["unit_circle_margin"] = rc.unit_circle_margin;
  d["critical"] = rc.critical;
  return d;
}

RationalCM rational_from_dict(const py::dict& d) {
  auto poly = [&](const char* key) {
    return Poly(d[key].cast<std::vector<double>>());
  };
  return RationalCM::from_polys(poly("p"), poly("q"), poly("r"), poly("d"));
}

CorrComponent component_from_string(const std::string& s) {
  if (s == "q") return CorrComponent::Q;
  if (s == "p") return CorrComponent::P;
  if (s == "r") return CorrComponent::R;
  throw std::invalid_argument("component must be one of 'q', 'p', 'r'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gaussian matrix product states: covariance-matrix calculus, lattice "
            "assembly, Fourier characterization, parent Hamiltonians";

  py::register_exception<CriticalStateError>(m, "CriticalStateError");

  m.def("symplectic_form",
        [](int n_modes, const std::string& ordering) {
          return symplectic_form_matrix(
              n_modes, ordering == "blocked" ? Ordering::Blocked : Ordering::Interleaved);
        },
        py::arg("n_modes"), py::arg("ordering") = "interleaved");

  m.def("validate_state",
        [](const Eigen::MatrixXd& gamma, double tau_psd) {
          const auto rep = validate_state(as_covmat(gamma), tau_psd);
          return py::make_tuple(rep.valid, rep.min_eigenvalue);
        },
        py::arg("gamma"), py::arg("tau_psd") = tol::psd,
        "returns (valid, min eigenvalue of gamma + i sigma)");

  m.def("purity",
        [](const Eigen::MatrixXd& gamma, double tau) {
          const auto rep = purity(as_covmat(gamma), tau);
          py::dict d;
          d["pure"] = rep.pure;
          d["det"] = rep.det;
          d["max_ccr_dev"] = rep.max_ccr_dev;
          return d;
        },
        py::arg("gamma"), py::arg("tau") = tol::purity);

  m.def("schur_complement",
        [](const Eigen::MatrixXd& m_in, const std::vector<int>& block_x) {
          return schur_complement(m_in, block_x).matrix;
        },
        py::arg("m"), py::arg("block_x"));

  m.def("partial_transpose",
        [](const Eigen::MatrixXd& gamma, const std::vector<int>& modes) {
          return partial_transpose(as_covmat(gamma), modes).entries;
        },
        py::arg("gamma"), py::arg("modes"));

  m.def("collapse_epr",
        [](const Eigen::MatrixXd& gamma, const std::vector<int>& modes_a,
           const std::vector<int>& modes_b) {
          return collapse_epr(as_covmat(gamma), modes_a, modes_b).entries;
        },
        py::arg("gamma"), py::arg("modes_a"), py::arg("modes_b"),
        "ideal EPR projection of A against B; returns the CM of the rest");

  m.def("xy_decompose", [](const Eigen::MatrixXd& gamma) {
    const auto d = xy_decompose(as_covmat(gamma));
    py::dict out;
    out["X"] = d.x;
    out["Y"] = d.y;
    out["reassembly_error"] = d.reassembly_error;
    out["qp_asymmetry"] = d.qp_asymmetry;
    return out;
  });

  m.def("williamson", [](const Eigen::MatrixXd& gamma) {
    const auto w = williamson(gamma);
    return py::make_tuple(w.s, w.nu);
  });

  m.def("tms_state", [](double s) { return tms_state(s).entries; }, py::arg("s"));

  m.def("apply_channel",
        [](const Eigen::MatrixXd& cm, int n_in, int n_out, const Eigen::MatrixXd& gamma_in) {
          return apply_channel(as_channel(cm, n_in, n_out), as_covmat(gamma_in)).entries;
        },
        py::arg("channel_cm"), py::arg("n_in"), py::arg("n_out"), py::arg("gamma_in"));

  m.def("apply_symplectic",
        [](const Eigen::MatrixXd& s, const Eigen::MatrixXd& gamma) {
          return apply_symplectic(SymplecticOp{static_cast<int>(s.rows()) / 2, s},
                                  as_covmat(gamma))
              .entries;
        },
        py::arg("s"), py::arg("gamma"));

  m.def("channel_compose",
        [](const Eigen::MatrixXd& cm2, int n_in2, int n_out2, const Eigen::MatrixXd& cm1,
           int n_in1, int n_out1) {
          const GaussChannel composed =
              channel_compose(as_channel(cm2, n_in2, n_out2), as_channel(cm1, n_in1, n_out1));
          return composed.cm.entries;
        },
        py::arg("cm2"), py::arg("n_in2"), py::arg("n_out2"), py::arg("cm1"), py::arg("n_in1"),
        py::arg("n_out1"));

  m.def("build_gmps",
        [](const Eigen::MatrixXd& site_cm, int bonds, int n_sites,
           const std::string& boundary) {
          const GaussChannel site =
              as_channel(site_cm, 2 * bonds, static_cast<int>(site_cm.rows()) / 2 - 2 * bonds);
          const GmpsSpec spec = GmpsSpec::uniform(
              site, n_sites, bonds,
              boundary == "open" ? Boundary::Open : Boundary::Periodic);
          return build_gmps(spec).entries;
        },
        py::arg("site_cm"), py::arg("bonds"), py::arg("n_sites"),
        py::arg("boundary") = "periodic");

  m.def("gamma_hat",
        [](const Eigen::MatrixXd& site_cm, int bonds, double phi) {
          const GaussChannel site = as_channel(site_cm, 2 * bonds, 1);
          return Eigen::Matrix2cd(gamma_hat(site, phi));
        },
        py::arg("site_cm"), py::arg("bonds"), py::arg("phi"));

  m.def("rationalize",
        [](const Eigen::MatrixXd& site_cm, int bonds) {
          return rational_to_dict(rationalize(as_channel(site_cm, 2 * bonds, 1), bonds));
        },
        py::arg("site_cm"), py::arg("bonds"));

  m.def("correlations_infinite",
        [](const py::dict& rc, const std::string& component, int n) {
          return correlations_infinite(rational_from_dict(rc), component_from_string(component),
                                       n);
        },
        py::arg("rc"), py::arg("component"), py::arg("n"));

  m.def("correlation_length",
        [](const py::dict& rc) {
          const auto cl = correlation_length(rational_from_dict(rc));
          return py::make_tuple(cl.xi, cl.z_star);
        },
        py::arg("rc"), "returns (xi, dominant zero of d-tilde inside the unit circle)");

  m.def("parent_hamiltonian",
        [](const py::dict& rc) {
          const QuadHamiltonian h = parent_hamiltonian(rational_from_dict(rc));
          py::dict d;
          d["p"] = h.h_q.coeffs();
          d["q"] = h.h_p.coeffs();
          d["r"] = (h.h_qp * -1.0).coeffs();
          d["range"] = h.range;
          std::vector<Eigen::Matrix2d> couplings = h.couplings;
          d["couplings"] = couplings;
          return d;
        },
        py::arg("rc"));

  m.def("ground_state_eval",
        [](const py::dict& rc, const std::vector<double>& phis) {
          const SpectralCM gs = ground_state(parent_hamiltonian(rational_from_dict(rc)));
          std::vector<Eigen::Matrix2cd> out;
          out.reserve(phis.size());
          for (double phi : phis) out.push_back(gs.eval(phi));
          return out;
        },
        py::arg("rc"), py::arg("phis"));

  m.def("ground_energy_density",
        [](const py::dict& rc) {
          return ground_energy_density(parent_hamiltonian(rational_from_dict(rc)));
        },
        py::arg("rc"));

  m.def("has_gmps_ground_state",
        [](const std::vector<double>& p, const std::vector<double>& q,
           const std::vector<double>& r) {
          const QuadHamiltonian h =
              make_quad_hamiltonian(Poly(p), Poly(q), Poly(r) * -1.0);
          const auto res = has_gmps_ground_state(h);
          py::dict d;
          d["status"] = res.status == GmpsGroundState::Status::Yes          ? "yes"
                        : res.status == GmpsGroundState::Status::No         ? "no"
                                                                            : "indeterminate";
          if (res.witness_root) d["witness_root"] = *res.witness_root;
          if (res.state) d["state"] = rational_to_dict(*res.state);
          return d;
        },
        py::arg("p"), py::arg("q"), py::arg("r"),
        "H_hat = [[p, -r], [-r, q]] as polynomial coefficient lists in cos(phi)");

  m.def("schmidt_decompose",
        [](const Eigen::MatrixXd& gamma, int n_a) {
          const SchmidtForm sf = schmidt_decompose(as_covmat(gamma), n_a);
          py::dict d;
          d["squeezings"] = sf.squeezings;
          d["S_A"] = sf.s_a.s;
          d["S_BC"] = sf.s_bc.s;
          d["reassembly_error"] = sf.reassembly_error;
          return d;
        },
        py::arg("gamma"), py::arg("n_a"));

  m.def("reduce_bond_entanglement",
        [](const Eigen::MatrixXd& site_cm, int bonds, int n_sites) {
          const GaussChannel site =
              as_channel(site_cm, 2 * bonds, static_cast<int>(site_cm.rows()) / 2 - 2 * bonds);
          const BondReduction br =
              reduce_bond_entanglement(GmpsSpec::uniform(site, n_sites, bonds));
          py::dict d;
          d["site_cm"] = br.reduced.sites.front().cm.entries;
          d["squeezings"] = br.squeezings;
          d["max_gamma_hat_deviation"] = br.max_gamma_hat_deviation;
          return d;
        },
        py::arg("site_cm"), py::arg("bonds"), py::arg("n_sites"));

  m.def("protocol_round",
        [](const Eigen::MatrixXd& chain, const Eigen::MatrixXd& gate, double s_bond) {
          return protocol_round(as_covmat(chain), SymplecticOp{2, gate}, s_bond).entries;
        },
        py::arg("chain"), py::arg("gate"), py::arg("s_bond"));

  m.def("chain_gate_product",
        [](const Eigen::MatrixXd& gate, int n_sites) {
          return chain_gate_product(SymplecticOp{2, gate}, n_sites).s;
        },
        py::arg("gate"), py::arg("n_sites"));

  m.def("random_pure_map",
        [](int bonds, int d_phys, uint64_t seed) {
          auto rng = seeded_engine(seed);
          return random_pure_map(bonds, d_phys, rng).cm.entries;
        },
        py::arg("bonds"), py::arg("d_phys") = 1, py::arg("seed") = 1234);

  m.def("symplectic_from_generator",
        [](const Eigen::MatrixXd& h) { return SymplecticOp::from_generator(h).s; },
        py::arg("h"));

  m.attr("__version__") = "0.1.0";
}
