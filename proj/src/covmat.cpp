#include "gmps/covmat.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>

namespace gmps {

std::string to_string(Ordering o) {
  return o == Ordering::Interleaved ? "interleaved" : "blocked";
}

CovMat CovMat::vacuum(int n_modes, Ordering ordering) {
  if (n_modes < 1) throw std::invalid_argument("vacuum: n_modes must be >= 1");
  CovMat g;
  g.n_modes = n_modes;
  g.ordering = ordering;
  g.entries = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  return g;
}

CovMat CovMat::from_entries(Eigen::MatrixXd m, Ordering ordering) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0)
    throw std::invalid_argument("CovMat: entries must be square with even dimension");
  detail::require_symmetric(m);
  CovMat g;
  g.n_modes = static_cast<int>(m.rows()) / 2;
  g.ordering = ordering;
  g.entries = std::move(m);
  return g;
}

Eigen::MatrixXd symplectic_form_matrix(int n_modes, Ordering ordering) {
  if (n_modes < 1) throw std::invalid_argument("symplectic_form: n_modes must be >= 1");
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  if (ordering == Ordering::Interleaved) {
    for (int k = 0; k < n_modes; ++k) {
      s(2 * k, 2 * k + 1) = 1.0;
      s(2 * k + 1, 2 * k) = -1.0;
    }
  } else {
    for (int k = 0; k < n_modes; ++k) {
      s(k, n_modes + k) = 1.0;
      s(n_modes + k, k) = -1.0;
    }
  }
  return s;
}

SymplecticForm symplectic_form(int n_modes, Ordering ordering) {
  return SymplecticForm{n_modes, ordering, symplectic_form_matrix(n_modes, ordering)};
}

Eigen::PermutationMatrix<Eigen::Dynamic> interleaved_to_blocked(int n_modes) {
  // blocked index of interleaved coordinate 2k (=Q_k) is k, of 2k+1 (=P_k) is n+k
  Eigen::VectorXi idx(2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    idx(2 * k) = k;
    idx(2 * k + 1) = n_modes + k;
  }
  return Eigen::PermutationMatrix<Eigen::Dynamic>(idx);
}

CovMat to_ordering(const CovMat& g, Ordering target) {
  if (g.ordering == target) return g;
  const auto perm = interleaved_to_blocked(g.n_modes);
  CovMat out = g;
  out.ordering = target;
  if (target == Ordering::Blocked)
    out.entries = perm * g.entries * perm.transpose();
  else
    out.entries = perm.transpose() * g.entries * perm;
  return out;
}

ValidityReport validate_state(const CovMat& g, double tau_psd) {
  detail::require_symmetric(g.entries);
  const Eigen::MatrixXd sigma = symplectic_form_matrix(g.n_modes, g.ordering);
  Eigen::MatrixXcd h = g.entries.cast<std::complex<double>>();
  h += std::complex<double>(0.0, 1.0) * sigma.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  return ValidityReport{min_eig >= -tau_psd, min_eig};
}

PurityReport purity(const CovMat& g, double tau) {
  const Eigen::MatrixXd sigma = symplectic_form_matrix(g.n_modes, g.ordering);
  const Eigen::MatrixXd sg = sigma * g.entries;
  const Eigen::MatrixXd ccr = sg * sg + Eigen::MatrixXd::Identity(g.dim(), g.dim());
  PurityReport rep;
  rep.det = g.entries.determinant();
  rep.max_ccr_dev = ccr.cwiseAbs().maxCoeff();
  rep.pure = std::abs(rep.det - 1.0) <= tau && rep.max_ccr_dev <= 10.0 * tau;
  return rep;
}

namespace {

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

struct LongPinv {
  LongMatrix inv;
  bool critical = false;
};

LongPinv pinv_symmetric_long(const LongMatrix& a, double rel_threshold) {
  Eigen::SelfAdjointEigenSolver<LongMatrix> es(a);
  if (es.info() != Eigen::Success) throw std::runtime_error("pinv_symmetric: eigensolver failed");
  const auto& ev = es.eigenvalues();
  long double max_abs_ev = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) max_abs_ev = std::max(max_abs_ev, fabsl(ev(i)));
  const long double cutoff = static_cast<long double>(rel_threshold) * max_abs_ev;
  Eigen::Vector<long double, Eigen::Dynamic> inv_ev =
      Eigen::Vector<long double, Eigen::Dynamic>::Zero(ev.size());
  LongPinv r;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (fabsl(ev(i)) > cutoff)
      inv_ev(i) = 1.0L / ev(i);
    else
      r.critical = true;
  }
  r.inv = es.eigenvectors() * inv_ev.asDiagonal() * es.eigenvectors().transpose();
  return r;
}

}  // namespace

SchurResult pinv_symmetric(const Eigen::MatrixXd& a, double rel_threshold) {
  LongPinv p = pinv_symmetric_long(a.cast<long double>(), rel_threshold);
  SchurResult r;
  r.matrix = p.inv.cast<double>();
  r.critical = p.critical;
  return r;
}

namespace detail {

SchurResult schur_correction(const Eigen::MatrixXd& yy, const Eigen::MatrixXd& yx,
                             const Eigen::MatrixXd& xx, double rel_threshold) {
  LongPinv p = pinv_symmetric_long(xx.cast<long double>(), rel_threshold);
  LongMatrix out = yy.cast<long double>() -
                   yx.cast<long double>() * p.inv * yx.transpose().cast<long double>();
  out = (0.5L * (out + out.transpose())).eval();
  SchurResult r;
  r.matrix = out.cast<double>();
  r.critical = p.critical;
  return r;
}

}  // namespace detail

namespace {

std::vector<int> complement_indices(int dim, const std::vector<int>& x) {
  std::set<int> xs(x.begin(), x.end());
  std::vector<int> y;
  y.reserve(dim - xs.size());
  for (int i = 0; i < dim; ++i)
    if (!xs.count(i)) y.push_back(i);
  return y;
}

Eigen::MatrixXd pick(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                     const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

}  // namespace

SchurResult schur_complement(const Eigen::MatrixXd& m, const std::vector<int>& block_x) {
  detail::require_symmetric(m, 1e-9);
  const int dim = static_cast<int>(m.rows());
  for (int i : block_x)
    if (i < 0 || i >= dim) throw std::out_of_range("schur_complement: index out of range");
  if (std::set<int>(block_x.begin(), block_x.end()).size() != block_x.size())
    throw std::invalid_argument("schur_complement: duplicate indices");
  const auto ys = complement_indices(dim, block_x);

  const Eigen::MatrixXd uxx = pick(m, block_x, block_x);
  const Eigen::MatrixXd uyx = pick(m, ys, block_x);
  const Eigen::MatrixXd uyy = pick(m, ys, ys);
  return detail::schur_correction(uyy, uyx, uxx);
}

namespace detail {

void require_symmetric(const Eigen::MatrixXd& m, double tau) {
  const double dev = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (dev > tau)
    throw std::invalid_argument("matrix is not symmetric (max deviation " + std::to_string(dev) +
                                ")");
}

std::vector<int> mode_rows(const std::vector<int>& modes) {
  std::vector<int> rows;
  rows.reserve(2 * modes.size());
  for (int m : modes) {
    rows.push_back(2 * m);
    rows.push_back(2 * m + 1);
  }
  return rows;
}

}  // namespace detail

CovMat partial_transpose(const CovMat& g, const std::vector<int>& modes) {
  if (g.ordering != Ordering::Interleaved)
    return to_ordering(partial_transpose(to_ordering(g, Ordering::Interleaved), modes),
                       g.ordering);
  CovMat out = g;
  for (int m : modes) {
    if (m < 0 || m >= g.n_modes) throw std::out_of_range("partial_transpose: bad mode index");
    out.entries.row(2 * m + 1) *= -1.0;
    out.entries.col(2 * m + 1) *= -1.0;
  }
  return out;
}

CovMat collapse_epr(const CovMat& g, const std::vector<int>& modes_a,
                    const std::vector<int>& modes_b) {
  if (g.ordering != Ordering::Interleaved)
    return collapse_epr(to_ordering(g, Ordering::Interleaved), modes_a, modes_b);
  if (modes_a.size() != modes_b.size())
    throw std::invalid_argument("collapse_epr: |A| != |B|");
  if (modes_a.empty()) return g;
  {
    std::set<int> all(modes_a.begin(), modes_a.end());
    all.insert(modes_b.begin(), modes_b.end());
    if (all.size() != modes_a.size() + modes_b.size())
      throw std::invalid_argument("collapse_epr: A and B must be disjoint");
    for (int m : all)
      if (m < 0 || m >= g.n_modes) throw std::out_of_range("collapse_epr: bad mode index");
  }

  const CovMat pt = partial_transpose(g, modes_b);

  const int n_pairs = static_cast<int>(modes_a.size());
  std::set<int> measured(modes_a.begin(), modes_a.end());
  measured.insert(modes_b.begin(), modes_b.end());
  std::vector<int> modes_c;
  for (int m = 0; m < g.n_modes; ++m)
    if (!measured.count(m)) modes_c.push_back(m);

  const auto rows_a = detail::mode_rows(modes_a);
  const auto rows_b = detail::mode_rows(modes_b);
  const auto rows_c = detail::mode_rows(modes_c);

  // merged block: entrywise sum of the A and (transposed) B blocks
  const int md = 2 * n_pairs;
  const int cd = static_cast<int>(rows_c.size());
  Eigen::MatrixXd merged(md + cd, md + cd);
  merged.topLeftCorner(md, md) = pick(pt.entries, rows_a, rows_a) +
                                 pick(pt.entries, rows_a, rows_b) +
                                 pick(pt.entries, rows_b, rows_a) +
                                 pick(pt.entries, rows_b, rows_b);
  merged.topRightCorner(md, cd) =
      pick(pt.entries, rows_a, rows_c) + pick(pt.entries, rows_b, rows_c);
  merged.bottomLeftCorner(cd, md) = merged.topRightCorner(md, cd).transpose();
  merged.bottomRightCorner(cd, cd) = pick(pt.entries, rows_c, rows_c);

  std::vector<int> block_x(md);
  for (int i = 0; i < md; ++i) block_x[i] = i;
  SchurResult sc = schur_complement(merged, block_x);

  CovMat out;
  out.n_modes = static_cast<int>(modes_c.size());
  out.ordering = Ordering::Interleaved;
  out.entries = std::move(sc.matrix);
  out.critical = g.critical || sc.critical;
  return out;
}

XYDecomposition xy_decompose(const CovMat& g, double tau_purity) {
  const PurityReport pr = purity(g, tau_purity);
  if (!pr.pure)
    throw std::invalid_argument("xy_decompose: input is not pure (det = " +
                                std::to_string(pr.det) + ")");
  const CovMat gb = to_ordering(g, Ordering::Blocked);
  const int n = g.n_modes;
  const Eigen::MatrixXd gq = gb.entries.topLeftCorner(n, n);
  const Eigen::MatrixXd gqp = gb.entries.topRightCorner(n, n);

  Eigen::LLT<Eigen::MatrixXd> llt(gq);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("xy_decompose: gamma_Q is not positive definite");

  XYDecomposition d;
  d.x = gq;
  d.y = llt.solve(gqp);
  d.qp_asymmetry = (gqp - gqp.transpose()).cwiseAbs().maxCoeff();

  Eigen::MatrixXd rec(2 * n, 2 * n);
  rec.topLeftCorner(n, n) = d.x;
  rec.topRightCorner(n, n) = d.x * d.y;
  rec.bottomLeftCorner(n, n) = d.y * d.x;
  rec.bottomRightCorner(n, n) = llt.solve(Eigen::MatrixXd::Identity(n, n)) + d.y * d.x * d.y;
  d.reassembly_error = (rec - gb.entries).cwiseAbs().maxCoeff();
  return d;
}

WilliamsonResult williamson(const Eigen::MatrixXd& gamma) {
  detail::require_symmetric(gamma, 1e-9);
  const int dim = static_cast<int>(gamma.rows());
  const int n = dim / 2;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("williamson: matrix must be positive definite");
  const Eigen::MatrixXd inv_sqrt = es.operatorInverseSqrt();

  // K = gamma^{-1/2} sigma gamma^{-1/2} is skew with eigenvalues +-i/nu_k.
  const Eigen::MatrixXd sigma = symplectic_form_matrix(n, Ordering::Interleaved);
  const Eigen::MatrixXd k = inv_sqrt * sigma * inv_sqrt;

  // Real Schur form of the skew matrix: orthogonal U with U^T K U block
  // diagonal, 2x2 blocks ~ [[0, mu],[-mu, 0]]. Orthogonality of U holds even
  // for degenerate symplectic eigenvalues.
  Eigen::RealSchur<Eigen::MatrixXd> schur(k);
  if (schur.info() != Eigen::Success) throw std::runtime_error("williamson: Schur failed");
  Eigen::MatrixXd u = schur.matrixU();
  const Eigen::MatrixXd& t = schur.matrixT();

  struct Pair {
    double mu;
    int col;  // first column of the 2x2 block in U
    bool flip;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < dim;) {
    if (i + 1 >= dim || std::abs(t(i + 1, i)) < 1e-14 * k.norm())
      throw std::runtime_error("williamson: singular skew form (matrix not positive definite?)");
    const double mu = 0.5 * (t(i, i + 1) - t(i + 1, i));
    pairs.push_back({std::abs(mu), i, mu < 0.0});
    i += 2;
  }
  if (static_cast<int>(pairs.size()) != n)
    throw std::runtime_error("williamson: unexpected spectrum of the skew form");
  // mu = 1/nu ascending <=> nu descending
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.mu < b.mu; });

  Eigen::MatrixXd o(dim, dim);
  Eigen::VectorXd nu(n);
  for (int kk = 0; kk < n; ++kk) {
    nu(kk) = 1.0 / pairs[kk].mu;
    const int c = pairs[kk].col;
    // orientation: want o_q^T K o_p = +mu
    o.col(2 * kk) = u.col(pairs[kk].flip ? c + 1 : c);
    o.col(2 * kk + 1) = u.col(pairs[kk].flip ? c : c + 1);
  }

  Eigen::VectorXd dsqrt(dim);
  for (int kk = 0; kk < n; ++kk) {
    dsqrt(2 * kk) = std::sqrt(nu(kk));
    dsqrt(2 * kk + 1) = std::sqrt(nu(kk));
  }

  WilliamsonResult w;
  w.s = dsqrt.asDiagonal() * o.transpose() * inv_sqrt;
  w.nu = nu;
  return w;
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& gamma) {
  const int n = static_cast<int>(gamma.rows()) / 2;
  const Eigen::MatrixXd sigma = symplectic_form_matrix(n, Ordering::Interleaved);
  Eigen::MatrixXcd m = std::complex<double>(0, 1) * (sigma * gamma).cast<std::complex<double>>();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(m, false);
  std::vector<double> mags;
  for (Eigen::Index i = 0; i < ces.eigenvalues().size(); ++i) {
    const double re = ces.eigenvalues()(i).real();
    if (re > 0.0) mags.push_back(re);
  }
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  return Eigen::Map<Eigen::VectorXd>(mags.data(), static_cast<Eigen::Index>(mags.size()));
}

double entanglement_entropy(const Eigen::VectorXd& nu) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    const double v = nu(i);
    if (v <= 1.0 + 1e-12) continue;
    const double a = (v + 1.0) / 2.0;
    const double b = (v - 1.0) / 2.0;
    s += a * std::log(a) - b * std::log(b);
  }
  return s;
}

CovMat direct_sum(const CovMat& a, const CovMat& b) {
  if (a.ordering != Ordering::Interleaved || b.ordering != Ordering::Interleaved)
    throw std::invalid_argument("direct_sum: interleaved ordering required");
  CovMat out;
  out.n_modes = a.n_modes + b.n_modes;
  out.ordering = Ordering::Interleaved;
  out.entries = Eigen::MatrixXd::Zero(out.dim(), out.dim());
  out.entries.topLeftCorner(a.dim(), a.dim()) = a.entries;
  out.entries.bottomRightCorner(b.dim(), b.dim()) = b.entries;
  out.critical = a.critical || b.critical;
  return out;
}

}  // namespace gmps
