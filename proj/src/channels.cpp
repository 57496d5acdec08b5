#include "gmps/channels.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace gmps {

SymplecticOp SymplecticOp::identity(int n_modes) {
  return SymplecticOp{n_modes, Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes)};
}

SymplecticOp SymplecticOp::from_generator(const Eigen::MatrixXd& h) {
  detail::require_symmetric(h, 1e-10);
  const int n = static_cast<int>(h.rows()) / 2;
  const Eigen::MatrixXd gen = symplectic_form_matrix(n) * h;
  return SymplecticOp{n, gen.exp()};
}

SymplecticOp SymplecticOp::single_mode_squeezer(double s) {
  Eigen::MatrixXd m(2, 2);
  m << std::exp(s), 0.0, 0.0, std::exp(-s);
  return SymplecticOp{1, m};
}

SymplecticOp SymplecticOp::direct_sum(const SymplecticOp& a, const SymplecticOp& b) {
  SymplecticOp out;
  out.n_modes = a.n_modes + b.n_modes;
  out.s = Eigen::MatrixXd::Identity(2 * out.n_modes, 2 * out.n_modes);
  out.s.topLeftCorner(2 * a.n_modes, 2 * a.n_modes) = a.s;
  out.s.bottomRightCorner(2 * b.n_modes, 2 * b.n_modes) = b.s;
  return out;
}

SymplecticOp SymplecticOp::embed(const SymplecticOp& op, const std::vector<int>& modes,
                                 int n_total) {
  if (static_cast<int>(modes.size()) != op.n_modes)
    throw std::invalid_argument("SymplecticOp::embed: mode list size mismatch");
  const auto rows = detail::mode_rows(modes);
  SymplecticOp out;
  out.n_modes = n_total;
  out.s = Eigen::MatrixXd::Identity(2 * n_total, 2 * n_total);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows.size(); ++j) out.s(rows[i], rows[j]) = op.s(i, j);
  return out;
}

double SymplecticOp::symplectic_defect() const {
  const Eigen::MatrixXd sigma = symplectic_form_matrix(n_modes);
  return (s * sigma * s.transpose() - sigma).cwiseAbs().maxCoeff();
}

CovMat tms_state(double s) {
  if (s < 0.0) throw std::invalid_argument("tms_state: squeezing must be >= 0");
  const double ch = std::cosh(2.0 * s);
  const double sh = std::sinh(2.0 * s);
  Eigen::MatrixXd m(4, 4);
  m << ch, 0, sh, 0,  //
      0, ch, 0, -sh,  //
      sh, 0, ch, 0,   //
      0, -sh, 0, ch;
  CovMat g = CovMat::from_entries(std::move(m));
  return g;
}

CovMat apply_channel(const GaussChannel& ch, const CovMat& in) {
  if (in.n_modes != ch.n_in)
    throw std::invalid_argument("apply_channel: input has " + std::to_string(in.n_modes) +
                                " modes, channel expects " + std::to_string(ch.n_in));
  const CovMat gin = to_ordering(in, Ordering::Interleaved);
  const CovMat gch = to_ordering(ch.cm, Ordering::Interleaved);

  std::vector<int> all_in(ch.n_in);
  for (int i = 0; i < ch.n_in; ++i) all_in[i] = i;
  const CovMat theta_g = partial_transpose(gin, all_in);

  const int bd = 2 * ch.n_in;
  const int cd = 2 * ch.n_out;
  const Eigen::MatrixXd gamma_b = gch.entries.topLeftCorner(bd, bd);
  const Eigen::MatrixXd gamma_cb = gch.entries.bottomLeftCorner(cd, bd);
  const Eigen::MatrixXd gamma_c = gch.entries.bottomRightCorner(cd, cd);

  SchurResult sc = detail::schur_correction(gamma_c, gamma_cb, gamma_b + theta_g.entries);
  CovMat out;
  out.n_modes = ch.n_out;
  out.ordering = Ordering::Interleaved;
  out.entries = std::move(sc.matrix);
  out.critical = in.critical || ch.cm.critical || sc.critical;
  return out;
}

CovMat apply_symplectic(const SymplecticOp& op, const CovMat& g) {
  if (op.n_modes != g.n_modes)
    throw std::invalid_argument("apply_symplectic: dimension mismatch");
  if (op.symplectic_defect() > 1e-10)
    throw std::invalid_argument("apply_symplectic: operator violates S sigma S^T = sigma");
  const CovMat gi = to_ordering(g, Ordering::Interleaved);
  CovMat out = gi;
  out.entries = op.s * gi.entries * op.s.transpose();
  out.entries = 0.5 * (out.entries + out.entries.transpose()).eval();
  return out;
}

GaussChannel channel_compose(const GaussChannel& ch2, const GaussChannel& ch1) {
  if (ch1.n_out != ch2.n_in)
    throw std::invalid_argument("channel_compose: port mismatch");
  const CovMat joint = direct_sum(to_ordering(ch1.cm, Ordering::Interleaved),
                                  to_ordering(ch2.cm, Ordering::Interleaved));
  std::vector<int> a(ch1.n_out), b(ch2.n_in);
  for (int i = 0; i < ch1.n_out; ++i) a[i] = ch1.n_in + i;
  for (int i = 0; i < ch2.n_in; ++i) b[i] = ch1.n_modes() + i;
  CovMat cm = collapse_epr(joint, a, b);
  // The EPR projection hands correlations through with a pi phase-space
  // rotation; rotate the output ports back so composing with the (regularized)
  // identity channel reproduces the original Choi CM entrywise. The applied
  // map is unchanged: a sign flip of all output modes is invisible to
  // apply_channel.
  const int bd = 2 * ch1.n_in;
  const int cd = 2 * ch2.n_out;
  cm.entries.block(0, bd, bd, cd) *= -1.0;
  cm.entries.block(bd, 0, cd, bd) *= -1.0;
  GaussChannel out;
  out.n_in = ch1.n_in;
  out.n_out = ch2.n_out;
  out.pure = ch1.pure && ch2.pure && !cm.critical;
  out.regularized = ch1.regularized || ch2.regularized;
  out.cm = std::move(cm);
  return out;
}

GaussChannel channel_from_symplectic(const SymplecticOp& op, double s_reg) {
  // Apply the symplectic to the output halves of n TMS(s_reg) pairs; the
  // exact Choi CM of a unitary has divergent entries.
  const int n = op.n_modes;
  CovMat pairs = tms_state(s_reg);
  for (int i = 1; i < n; ++i) pairs = direct_sum(pairs, tms_state(s_reg));
  // pairs come as (B_1, C_1, B_2, C_2, ...); regroup to (B..., C...)
  std::vector<int> perm_modes(2 * n);
  for (int i = 0; i < n; ++i) {
    perm_modes[2 * i] = i;          // B_i -> slot i
    perm_modes[2 * i + 1] = n + i;  // C_i -> slot n+i
  }
  Eigen::VectorXi rowperm(4 * n);
  for (int i = 0; i < 2 * n; ++i) {
    rowperm(2 * i) = 2 * perm_modes[i];
    rowperm(2 * i + 1) = 2 * perm_modes[i] + 1;
  }
  Eigen::PermutationMatrix<Eigen::Dynamic> pm(rowperm);
  CovMat grouped;
  grouped.n_modes = 2 * n;
  grouped.ordering = Ordering::Interleaved;
  grouped.entries = pm * pairs.entries * pm.transpose();

  const SymplecticOp on_out = SymplecticOp::direct_sum(SymplecticOp::identity(n), op);
  GaussChannel ch;
  ch.n_in = n;
  ch.n_out = n;
  ch.cm = apply_symplectic(on_out, grouped);
  ch.pure = true;
  ch.regularized = true;
  return ch;
}

GaussChannel make_channel(int n_in, int n_out, CovMat cm, double purity_tau) {
  if (cm.n_modes != n_in + n_out)
    throw std::invalid_argument("make_channel: CM must have n_in + n_out modes");
  const auto validity = validate_state(cm);
  if (!validity.valid)
    throw std::invalid_argument("make_channel: CM is not a valid state (min eig " +
                                std::to_string(validity.min_eigenvalue) + ")");
  GaussChannel ch;
  ch.n_in = n_in;
  ch.n_out = n_out;
  ch.pure = purity(cm, purity_tau).pure;
  ch.cm = std::move(cm);
  return ch;
}

}  // namespace gmps
