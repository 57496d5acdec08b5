#pragma once

#include "gmps/channels.hpp"

#include <optional>

namespace gmps {

enum class Boundary { Periodic, Open };

std::string to_string(Boundary b);

/// Full description of a GMPS chain: one 2M -> d_phys Gaussian map per site
/// (ports A then B, M bond modes each), glued by ideal EPR bonds.
/// `bond_squeezings`, when set, documents finite TMS(r) bond resources whose
/// effect is already embedded in the site maps (see reduce_bond_entanglement).
struct GmpsSpec {
  int bonds = 1;  // M
  Boundary boundary = Boundary::Periodic;
  std::vector<GaussChannel> sites;
  std::optional<std::vector<double>> bond_squeezings;

  int n_sites() const { return static_cast<int>(sites.size()); }
  int d_phys() const { return sites.empty() ? 0 : sites.front().n_out; }
  bool translation_invariant() const;
  void validate() const;  // throws on inconsistent port counts

  static GmpsSpec uniform(const GaussChannel& site, int n_sites, int bonds,
                          Boundary boundary = Boundary::Periodic);
};

/// The 0/±1 map taking the stacked ports A|B|C of ⊕_i Gamma^{[i]} onto A'|C:
/// rows merge A_{i+1} with (theta-transposed) B_i, the circulant shift
/// providing the i+1 -> i pairing. Open chains drop the wrap-around link and
/// route the unmatched ports of the first/last site to `discarded_modes`.
struct PiMatrix {
  Eigen::MatrixXd matrix;  // (2*(n_merge*M + N*d)) x (2*(2*N*M + N*d))
  int n_sites = 0;
  int bonds = 0;
  int d_phys = 1;
  Boundary boundary = Boundary::Periodic;
  std::vector<int> discarded_modes;  // mode indices in the A|B|C grouping
};

PiMatrix build_pi(int n_sites, int bonds, Boundary boundary, int d_phys = 1);

struct BuildOptions {
  /// Open boundary only: project unmatched edge ports onto the vacuum instead
  /// of tracing them out.
  bool project_boundary_to_vacuum = false;
};

/// Physical N*d_phys-mode CM of the GMPS, assembled via
/// SC_{A'}[Pi (⊕_i Gamma^{[i]}) Pi^T].
CovMat build_gmps(const GmpsSpec& spec, const BuildOptions& opts = {});

/// Permutation sending the site-major mode order (A_1 B_1 C_1 A_2 B_2 C_2 ...)
/// to the A|B|C grouping used by the Pi matrix.
Eigen::PermutationMatrix<Eigen::Dynamic> site_major_to_grouped(int n_sites, int bonds,
                                                               int d_phys);

}  // namespace gmps
