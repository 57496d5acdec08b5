#include "gmps/protocols.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace gmps {

Eigen::MatrixXd TrotterPlan::product() const {
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(4, 4);
  for (const auto& layer : layers) acc = layer.op.s * acc;  // first layer acts first
  return acc;
}

TrotterPlan trotterize(const Eigen::Matrix4d& h_nn, double t, int repetitions) {
  if (repetitions < 1) throw std::invalid_argument("trotterize: need at least one repetition");
  detail::require_symmetric(h_nn, 1e-10);

  Eigen::Matrix4d h_onsite = Eigen::Matrix4d::Zero();
  h_onsite.topLeftCorner(2, 2) = h_nn.topLeftCorner(2, 2);
  h_onsite.bottomRightCorner(2, 2) = h_nn.bottomRightCorner(2, 2);
  const Eigen::Matrix4d h_coupling = h_nn - h_onsite;

  const double dt = t / repetitions;
  const SymplecticOp on = SymplecticOp::from_generator(h_onsite * dt);
  const SymplecticOp nn = SymplecticOp::from_generator(h_coupling * dt);

  TrotterPlan plan;
  plan.repetitions = repetitions;
  plan.layers.reserve(2 * repetitions);
  for (int j = 0; j < repetitions; ++j) {
    plan.layers.push_back({on, TrotterLayer::Kind::Onsite});
    plan.layers.push_back({nn, TrotterLayer::Kind::NearestNeighbor});
  }
  return plan;
}

SymplecticOp chain_gate_product(const SymplecticOp& gate, int n_sites) {
  if (gate.n_modes != 2) throw std::invalid_argument("chain_gate_product: gate must act on 2 modes");
  if (n_sites < 2) throw std::invalid_argument("chain_gate_product: need at least 2 sites");
  SymplecticOp acc = SymplecticOp::identity(n_sites);
  for (int j = 0; j < n_sites; ++j) {
    const SymplecticOp g = SymplecticOp::embed(gate, {(j + 1) % n_sites, j}, n_sites);
    acc.s = g.s * acc.s;
  }
  acc.n_modes = n_sites;
  return acc;
}

Eigen::Matrix4d random_qq_generator(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> dist(0.0, scale);
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  h(0, 0) = dist(rng);
  h(2, 2) = dist(rng);
  h(0, 2) = h(2, 0) = dist(rng);
  return h;
}

CovMat protocol_round(const CovMat& chain_in, const SymplecticOp& gate, double s_bond) {
  if (gate.n_modes != 2) throw std::invalid_argument("protocol_round: gate must act on 2 modes");
  const int n = chain_in.n_modes;
  if (n < 2) throw std::invalid_argument("protocol_round: need at least 2 sites");
  const CovMat gin = to_ordering(chain_in, Ordering::Interleaved);
  const int dim = 2 * n;

  // Wires per site: input m_j; first bond (u_j, v_j); second bond (beta_j,
  // w_j), with u_j, beta_j at site j-1. Round: EPR-measure (m_j, v_j) --
  // content continues in u_j -- then the gate acts at site j on (u_{j+1},
  // w_j), then (u_j, beta_j) is measured and the content lands in w_j.
  //
  // Collapsing the measured pairs naively subtracts O(cosh^2) blocks to
  // produce O(1) results, which at s_bond ~ 12 costs six decimal digits.
  // Both collapses are instead evaluated with the identity cosh^2 - sinh^2
  // = 1 absorbed symbolically (Woodbury on the merged block), so every
  // intermediate stays O(1).
  const double c = std::cosh(2.0 * s_bond);
  const double t = std::tanh(2.0 * s_bond);

  // Each EPR teleportation hands the content over with a pi phase-space
  // rotation (correlations to the moved mode flip sign); u_{j+1} sits between
  // the two teleportations, so the gate's first argument is conjugated by -1
  // to act in the logical frame.
  Eigen::Matrix4d wg = gate.s;
  wg.topRightCorner(2, 2) *= -1.0;
  wg.bottomLeftCorner(2, 2) *= -1.0;

  // teleport left, in place: gamma <- (I/c + t^2 (gamma + I/c)^{-1})^{-1}
  Eigen::MatrixXd gamma = gin.entries;
  {
    Eigen::MatrixXd inner = gamma + Eigen::MatrixXd::Identity(dim, dim) / c;
    Eigen::MatrixXd inv = inner.ldlt().solve(Eigen::MatrixXd::Identity(dim, dim));
    Eigen::MatrixXd outer = t * t * inv + Eigen::MatrixXd::Identity(dim, dim) / c;
    gamma = outer.ldlt().solve(Eigen::MatrixXd::Identity(dim, dim));
    gamma = 0.5 * (gamma + gamma.transpose()).eval();
  }

  // gate application and teleport right, fused. Site-local blocks of the
  // wire gate acting on (u_{j+1}, w_j):
  Eigen::MatrixXd pb = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd qb = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd rb = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd sb = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(dim, dim);  // (E u)_j = u_{j+1}
  for (int j = 0; j < n; ++j) {
    pb.block<2, 2>(2 * j, 2 * j) = wg.topLeftCorner<2, 2>();
    qb.block<2, 2>(2 * j, 2 * j) = wg.topRightCorner<2, 2>();
    rb.block<2, 2>(2 * j, 2 * j) = wg.bottomLeftCorner<2, 2>();
    sb.block<2, 2>(2 * j, 2 * j) = wg.bottomRightCorner<2, 2>();
    shift.block<2, 2>(2 * j, 2 * ((j + 1) % n)) = Eigen::Matrix2d::Identity();
  }

  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::MatrixXd a = pb * gamma * pb.transpose() + id / c;
  const Eigen::MatrixXd u = qb + t * shift;
  const Eigen::MatrixXd x = rb * shift * gamma * pb.transpose();
  const Eigen::MatrixXd y = sb * shift;

  const Eigen::MatrixXd ai = a.ldlt().solve(id);
  const Eigen::MatrixXd b = u.transpose() * ai * u;
  const Eigen::MatrixXd w = (id / c + b).ldlt().solve(id);
  const Eigen::MatrixXd minv = ai - ai * u * w * u.transpose() * ai;
  const Eigen::MatrixXd aiuw = ai * u * w;

  Eigen::MatrixXd out = rb * shift * gamma * shift.transpose() * rb.transpose() -
                        x * minv * x.transpose() - x * aiuw * y.transpose() -
                        y * aiuw.transpose() * x.transpose() + y * w * y.transpose();
  out = 0.5 * (out + out.transpose()).eval();

  CovMat result;
  result.n_modes = n;
  result.ordering = Ordering::Interleaved;
  result.entries = std::move(out);
  result.critical = gin.critical;
  return result;
}

CovMat schmidt_reference(const std::vector<double>& squeezings, int n_a, int n_d) {
  if (static_cast<int>(squeezings.size()) != n_a)
    throw std::invalid_argument("schmidt_reference: need one squeezing per A mode");
  if (n_a > n_d) throw std::invalid_argument("schmidt_reference: n_a must be <= n_d");
  CovMat g = CovMat::vacuum(n_a + n_d);
  for (int k = 0; k < n_a; ++k) {
    const double ch = std::cosh(2.0 * squeezings[k]);
    const double sh = std::sinh(2.0 * squeezings[k]);
    const int pa = k;
    const int pd = n_a + (n_d - n_a) + k;
    g.entries(2 * pa, 2 * pa) = ch;
    g.entries(2 * pa + 1, 2 * pa + 1) = ch;
    g.entries(2 * pd, 2 * pd) = ch;
    g.entries(2 * pd + 1, 2 * pd + 1) = ch;
    g.entries(2 * pa, 2 * pd) = sh;
    g.entries(2 * pd, 2 * pa) = sh;
    g.entries(2 * pa + 1, 2 * pd + 1) = -sh;
    g.entries(2 * pd + 1, 2 * pa + 1) = -sh;
  }
  return g;
}

namespace {

Eigen::MatrixXd symplectic_inverse(const Eigen::MatrixXd& s) {
  const int n = static_cast<int>(s.rows()) / 2;
  const Eigen::MatrixXd sigma = symplectic_form_matrix(n);
  return sigma.transpose() * s.transpose() * sigma;
}

Eigen::MatrixXd theta_matrix(int n_modes) {
  Eigen::VectorXd d(2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    d(2 * k) = 1.0;
    d(2 * k + 1) = -1.0;
  }
  return d.asDiagonal();
}

}  // namespace

SchmidtForm schmidt_decompose(const CovMat& pure_state, int n_a) {
  const CovMat g = to_ordering(pure_state, Ordering::Interleaved);
  const int n = g.n_modes;
  const int n_d = n - n_a;
  if (n_a < 1 || n_d < 1) throw std::invalid_argument("schmidt_decompose: bad partition");
  if (n_a > n_d) throw std::invalid_argument("schmidt_decompose: A side must not exceed BC side");
  const PurityReport pr = purity(g, 1e-6);
  if (!pr.pure)
    throw std::invalid_argument("schmidt_decompose: state is not pure (det = " +
                                std::to_string(pr.det) + ")");

  const Eigen::MatrixXd gamma_a = g.entries.topLeftCorner(2 * n_a, 2 * n_a);
  const Eigen::MatrixXd gamma_d = g.entries.bottomRightCorner(2 * n_d, 2 * n_d);
  const WilliamsonResult wa = williamson(gamma_a);
  const WilliamsonResult wd = williamson(gamma_d);

  // doubly-Williamson frame: the coupling decomposes into per-mode 2x2 blocks
  // pairing the k-th descending eigenvalue on both sides
  Eigen::MatrixXd frame = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  frame.topLeftCorner(2 * n_a, 2 * n_a) = wa.s;
  frame.bottomRightCorner(2 * n_d, 2 * n_d) = wd.s;
  const Eigen::MatrixXd gpp = frame * g.entries * frame.transpose();

  std::vector<double> squeezings(n_a);
  Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(2 * n_d, 2 * n_d);
  const Eigen::Matrix2d zmat = (Eigen::Matrix2d() << 1, 0, 0, -1).finished();
  for (int k = 0; k < n_a; ++k) {
    const double nu = wa.nu(k);
    squeezings[k] = nu <= 1.0 ? 0.0 : 0.5 * std::acosh(nu);
    const double sh = std::sinh(2.0 * squeezings[k]);
    if (sh < 1e-12) continue;
    const Eigen::Matrix2d f = gpp.block<2, 2>(2 * k, 2 * n_a + 2 * k);
    // want rotation R with F R^T = sh * Z
    Eigen::Matrix2d r = sh * zmat * f.inverse().transpose();
    // project onto the orthogonal group
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    r = svd.matrixU() * svd.matrixV().transpose();
    rot.block<2, 2>(2 * k, 2 * k) = r;
  }

  // move the entangled D modes to the tail so the head is vacuum (B side)
  Eigen::VectorXi perm(2 * n_d);
  for (int k = 0; k < n_d; ++k) {
    const int target = k < n_a ? (n_d - n_a + k) : (k - n_a);
    perm(2 * k) = 2 * target;
    perm(2 * k + 1) = 2 * target + 1;
  }
  const Eigen::PermutationMatrix<Eigen::Dynamic> pd(perm);

  SchmidtForm out;
  out.squeezings = squeezings;
  out.s_a = SymplecticOp{n_a, symplectic_inverse(wa.s)};
  out.s_bc = SymplecticOp{n_d, symplectic_inverse(pd * rot * wd.s)};

  const CovMat ref = schmidt_reference(squeezings, n_a, n_d);
  Eigen::MatrixXd assemble = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  assemble.topLeftCorner(2 * n_a, 2 * n_a) = out.s_a.s;
  assemble.bottomRightCorner(2 * n_d, 2 * n_d) = out.s_bc.s;
  out.reassembly_error =
      (assemble * ref.entries * assemble.transpose() - g.entries).cwiseAbs().maxCoeff();
  return out;
}

BondReduction reduce_bond_entanglement(const GmpsSpec& spec) {
  spec.validate();
  if (!spec.translation_invariant())
    throw std::invalid_argument("reduce_bond_entanglement: spec must be translation invariant");
  if (spec.bond_squeezings)
    throw std::invalid_argument("reduce_bond_entanglement: bonds are already finite");
  const GaussChannel& site = spec.sites.front();
  if (!site.pure) throw std::invalid_argument("reduce_bond_entanglement: site map must be pure");
  const int m = spec.bonds;
  const int d = site.n_out;

  BondReduction out;
  out.form = schmidt_decompose(site.cm, m);
  out.squeezings = out.form.squeezings;

  // merge S_A, teleported one site over, into the BC operation:
  // S~_BC = (theta S_A^{-1} theta ⊕ 1_C) S_BC
  const Eigen::MatrixXd theta_b = theta_matrix(m);
  Eigen::MatrixXd merge = Eigen::MatrixXd::Identity(2 * (m + d), 2 * (m + d));
  merge.topLeftCorner(2 * m, 2 * m) = theta_b * symplectic_inverse(out.form.s_a.s) * theta_b;
  const Eigen::MatrixXd s_bc_new = merge * out.form.s_bc.s;

  const CovMat ref = schmidt_reference(out.squeezings, m, m + d);
  Eigen::MatrixXd assemble = Eigen::MatrixXd::Identity(2 * (2 * m + d), 2 * (2 * m + d));
  assemble.bottomRightCorner(2 * (m + d), 2 * (m + d)) = s_bc_new;
  CovMat cm_eff;
  cm_eff.n_modes = 2 * m + d;
  cm_eff.ordering = Ordering::Interleaved;
  cm_eff.entries = assemble * ref.entries * assemble.transpose();
  cm_eff.entries = 0.5 * (cm_eff.entries + cm_eff.entries.transpose()).eval();

  GaussChannel eff = make_channel(2 * m, d, std::move(cm_eff));
  out.reduced = GmpsSpec::uniform(eff, spec.n_sites(), m, spec.boundary);
  out.reduced.bond_squeezings = out.squeezings;

  if (d == 1) {
    double dev = 0.0;
    for (int i = 0; i < 64; ++i) {
      const double phi = 2.0 * std::numbers::pi * i / 64;
      dev = std::max(dev, (gamma_hat(site, phi) - gamma_hat(eff, phi)).cwiseAbs().maxCoeff());
    }
    out.max_gamma_hat_deviation = dev;
  }
  return out;
}

}  // namespace gmps
