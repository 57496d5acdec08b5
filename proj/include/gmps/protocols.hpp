#pragma once

#include "gmps/lattice.hpp"
#include "gmps/spectral.hpp"

#include <random>

namespace gmps {

struct TrotterLayer {
  enum class Kind { Onsite, NearestNeighbor };
  SymplecticOp op;  // two-mode
  Kind kind;
};

/// First-order alternating split of exp(sigma H t) into on-site and coupling
/// factors, J repetitions.
struct TrotterPlan {
  std::vector<TrotterLayer> layers;
  int repetitions = 0;

  Eigen::MatrixXd product() const;  // composed 4x4 symplectic
};

/// H must be a symmetric 4x4 generator (two modes, interleaved).
TrotterPlan trotterize(const Eigen::Matrix4d& h_nn, double t, int repetitions);

/// One completeness-protocol round on a periodic chain (one mode per site):
/// teleport every mode left through a TMS(s_bond) bond, apply the two-mode
/// gate to (teleported mode, second-bond half), teleport back right.
/// As s_bond grows the result approaches chain_gate_product(gate, N) applied
/// to the input.
CovMat protocol_round(const CovMat& chain_in, const SymplecticOp& gate, double s_bond);

/// Product of the translated two-mode gates the protocol realizes: gate j
/// acts on (site j+1 mod N, site j). Order follows j = 0..N-1; for commuting
/// gate families this is exp(sigma sum_j H_j).
SymplecticOp chain_gate_product(const SymplecticOp& gate, int n_sites);

/// Random nearest-neighbor generator supported on the position quadratures
/// only; its chain translates commute exactly.
Eigen::Matrix4d random_qq_generator(std::mt19937_64& rng, double scale = 0.4);

/// Gaussian Schmidt form of a pure state split A | D: local symplectics plus
/// two-mode squeezing values, gamma = (S_A ⊕ S_D) * ref * (S_A ⊕ S_D)^T where
/// ref carries TMS(r_k) between A_k and D_{n_D - n_A + k} and vacuum elsewhere.
struct SchmidtForm {
  SymplecticOp s_a;
  SymplecticOp s_bc;
  std::vector<double> squeezings;  // descending, cosh(2r) = nu
  double reassembly_error = 0.0;
};

SchmidtForm schmidt_decompose(const CovMat& pure_state, int n_a);

/// Reference state of the Schmidt form (for tests and reassembly).
CovMat schmidt_reference(const std::vector<double>& squeezings, int n_a, int n_d);

struct BondReduction {
  GmpsSpec reduced;                // effective finite maps + declared TMS(r) bonds
  std::vector<double> squeezings;  // per bond
  SchmidtForm form;
  double max_gamma_hat_deviation = 0.0;  // over 64 phi points
};

/// Rewrites a translation-invariant pure-map spec so the declared bonds are
/// TMS(r) with r from the Schmidt split of the site map; the physical state
/// is unchanged.
BondReduction reduce_bond_entanglement(const GmpsSpec& spec);

}  // namespace gmps
