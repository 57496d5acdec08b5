#pragma once

#include "gmps/spectral.hpp"

namespace gmps {

/// Quadratic translation-invariant Hamiltonian in Fourier form,
/// H_hat(phi) = [[h_q, h_qp], [h_qp, h_p]] with polynomial entries in cos(phi);
/// real-space couplings per cosine harmonic, interaction range = max degree.
struct QuadHamiltonian {
  Poly h_q, h_p, h_qp;
  int range = 0;
  std::vector<Eigen::Matrix2d> couplings;  // harmonic blocks k = 0..range
  std::optional<Poly> spectral_root;       // polynomial sqrt of det H_hat when known

  Eigen::Matrix2d eval(double phi) const;
  double min_eigenvalue_on_grid(int grid = 512) const;
};

/// Builds the Hamiltonian struct, converting the power-basis entries to
/// harmonic couplings and checking H_hat >= 0 on a 512-point grid.
QuadHamiltonian make_quad_hamiltonian(Poly h_q, Poly h_p, Poly h_qp,
                                      std::optional<Poly> spectral_root = std::nullopt);

/// H_hat = [[p, -r], [-r, q]] from a pure rational CM; the spectral function
/// is d itself, which is recorded for exact downstream use.
QuadHamiltonian parent_hamiltonian(const RationalCM& rc);

/// sqrt(det H_hat(phi)) as an evaluator; `poly` is set when det H_hat is a
/// perfect polynomial square (then eval uses it directly).
struct SpectralFunction {
  std::function<double(double)> eval;
  std::optional<Poly> poly;
};

SpectralFunction spectral_function(const QuadHamiltonian& h);

/// Ground state gamma_hat(phi) = E(phi)^{-1} sigma H_hat(phi) sigma^T.
SpectralCM ground_state(const QuadHamiltonian& h);

/// Per-site ground energy (1/2pi) * integral of E(phi)/2, by doubling
/// trapezoid quadrature (periodic analytic integrand) to relative 1e-9.
double ground_energy_density(const QuadHamiltonian& h);

struct GmpsGroundState {
  enum class Status { Yes, No, Indeterminate };
  Status status = Status::Indeterminate;
  std::optional<RationalCM> state;           // on Yes
  std::optional<std::complex<double>> witness_root;  // odd-multiplicity root on No
  double pairing_margin = 0.0;               // worst root-pairing distance found
};

/// Converse test: does det H_hat = pq - r^2 admit a polynomial square root?
/// Decided by root clustering; borderline multiplicities are reported as
/// Indeterminate with the pairing margin.
GmpsGroundState has_gmps_ground_state(const QuadHamiltonian& h);

}  // namespace gmps
