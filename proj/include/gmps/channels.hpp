#pragma once

#include "gmps/covmat.hpp"

namespace gmps {

/// Gaussian map in Jamiolkowski form: an (n_in + n_out)-mode CM over ports
/// B (input, first) and C (output). `regularized` marks Choi states built
/// from a finitely squeezed EPR resource.
struct GaussChannel {
  int n_in = 0;
  int n_out = 0;
  CovMat cm;
  bool pure = false;
  bool regularized = false;

  int n_modes() const { return n_in + n_out; }
};

/// Linear symplectic transformation S with S sigma S^T = sigma.
struct SymplecticOp {
  int n_modes = 0;
  Eigen::MatrixXd s;

  static SymplecticOp identity(int n_modes);
  /// e^{sigma H} for a symmetric generator H (interleaved layout).
  static SymplecticOp from_generator(const Eigen::MatrixXd& h);
  static SymplecticOp single_mode_squeezer(double s);
  static SymplecticOp direct_sum(const SymplecticOp& a, const SymplecticOp& b);
  /// Embed a k-mode operation acting on the listed modes of an n-mode system.
  static SymplecticOp embed(const SymplecticOp& op, const std::vector<int>& modes, int n_total);

  double symplectic_defect() const;  // ||S sigma S^T - sigma||_max
};

/// Two-mode squeezed state, cm = [[cosh(2s) I, sinh(2s) Z], [sinh(2s) Z, cosh(2s) I]].
CovMat tms_state(double s);

/// Channel application gamma_out = Gamma_C - Gamma_CB (Gamma_B + theta gamma theta)^{-1} Gamma_BC.
CovMat apply_channel(const GaussChannel& ch, const CovMat& in);

CovMat apply_symplectic(const SymplecticOp& s, const CovMat& g);

/// Jamiolkowski CM of ch2 after ch1, realized by EPR-collapsing ch1's output
/// ports against ch2's input ports.
GaussChannel channel_compose(const GaussChannel& ch2, const GaussChannel& ch1);

/// Choi state of a symplectic, regularized through TMS(s_reg) resources.
GaussChannel channel_from_symplectic(const SymplecticOp& op, double s_reg = 12.0);

GaussChannel make_channel(int n_in, int n_out, CovMat cm, double purity_tau = tol::purity);

}  // namespace gmps
