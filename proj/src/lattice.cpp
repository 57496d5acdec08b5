#include "gmps/lattice.hpp"

#include <set>

namespace gmps {

std::string to_string(Boundary b) { return b == Boundary::Periodic ? "periodic" : "open"; }

bool GmpsSpec::translation_invariant() const {
  for (size_t i = 1; i < sites.size(); ++i) {
    if (sites[i].n_in != sites[0].n_in || sites[i].n_out != sites[0].n_out) return false;
    if ((sites[i].cm.entries - sites[0].cm.entries).cwiseAbs().maxCoeff() > 0.0) return false;
  }
  return !sites.empty();
}

void GmpsSpec::validate() const {
  if (sites.size() < 2) throw std::invalid_argument("GmpsSpec: need at least 2 sites");
  if (bonds < 1) throw std::invalid_argument("GmpsSpec: M must be >= 1");
  for (const auto& s : sites) {
    if (s.n_in != 2 * bonds)
      throw std::invalid_argument("GmpsSpec: every site map must have 2M input ports");
    if (s.n_out != sites.front().n_out)
      throw std::invalid_argument("GmpsSpec: inconsistent physical dimension");
    if (s.cm.n_modes != s.n_in + s.n_out)
      throw std::invalid_argument("GmpsSpec: site CM has wrong mode count");
  }
  if (bond_squeezings && static_cast<int>(bond_squeezings->size()) != bonds)
    throw std::invalid_argument("GmpsSpec: bond_squeezings must have M entries");
}

GmpsSpec GmpsSpec::uniform(const GaussChannel& site, int n_sites, int bonds, Boundary boundary) {
  GmpsSpec spec;
  spec.bonds = bonds;
  spec.boundary = boundary;
  spec.sites.assign(static_cast<size_t>(n_sites), site);
  spec.validate();
  return spec;
}

Eigen::PermutationMatrix<Eigen::Dynamic> site_major_to_grouped(int n_sites, int bonds,
                                                               int d_phys) {
  const int per_site = 2 * bonds + d_phys;
  const int n_modes = n_sites * per_site;
  Eigen::VectorXi idx(2 * n_modes);
  for (int site = 0; site < n_sites; ++site) {
    for (int k = 0; k < per_site; ++k) {
      const int old_mode = site * per_site + k;
      int new_mode;
      if (k < bonds)
        new_mode = site * bonds + k;  // A block
      else if (k < 2 * bonds)
        new_mode = n_sites * bonds + site * bonds + (k - bonds);  // B block
      else
        new_mode = 2 * n_sites * bonds + site * d_phys + (k - 2 * bonds);  // C block
      idx(2 * old_mode) = 2 * new_mode;
      idx(2 * old_mode + 1) = 2 * new_mode + 1;
    }
  }
  return Eigen::PermutationMatrix<Eigen::Dynamic>(idx);
}

PiMatrix build_pi(int n_sites, int bonds, Boundary boundary, int d_phys) {
  if (n_sites < 2) throw std::invalid_argument("build_pi: need at least 2 sites");
  if (bonds < 1 || d_phys < 1) throw std::invalid_argument("build_pi: bad M or d_phys");

  const int nm = n_sites * bonds;            // modes in each of A, B
  const int nc = n_sites * d_phys;           // modes in C
  const int n_links = boundary == Boundary::Periodic ? n_sites : n_sites - 1;
  const int rows_modes = n_links * bonds + nc;
  const int cols_modes = 2 * nm + nc;

  PiMatrix pi;
  pi.n_sites = n_sites;
  pi.bonds = bonds;
  pi.d_phys = d_phys;
  pi.boundary = boundary;
  pi.matrix = Eigen::MatrixXd::Zero(2 * rows_modes, 2 * cols_modes);

  // Merge row block: link i pairs A_{i+1} with theta B_i. For open chains the
  // links run i = 0..N-2, leaving A of site 0 and B of site N-1 unmatched.
  int merge = 0;
  for (int link = 0; link < n_links; ++link) {
    const int site_a = boundary == Boundary::Periodic ? (link + 1) % n_sites : link + 1;
    const int site_b = link;
    for (int m = 0; m < bonds; ++m) {
      const int row = 2 * (merge * bonds + m);
      const int col_a = 2 * (site_a * bonds + m);
      const int col_b = 2 * (nm + site_b * bonds + m);
      pi.matrix(row, col_a) = 1.0;
      pi.matrix(row + 1, col_a + 1) = 1.0;
      pi.matrix(row, col_b) = 1.0;  // theta on B: (+1, -1)
      pi.matrix(row + 1, col_b + 1) = -1.0;
    }
    ++merge;
  }
  // C identity block
  for (int c = 0; c < 2 * nc; ++c) pi.matrix(2 * n_links * bonds + c, 2 * (2 * nm) + c) = 1.0;

  if (boundary == Boundary::Open) {
    for (int m = 0; m < bonds; ++m) {
      pi.discarded_modes.push_back(m);                              // A ports of site 0
      pi.discarded_modes.push_back(nm + (n_sites - 1) * bonds + m);  // B ports of last site
    }
  }
  return pi;
}

CovMat build_gmps(const GmpsSpec& spec, const BuildOptions& opts) {
  spec.validate();
  const int n = spec.n_sites();
  const int m = spec.bonds;
  const int d = spec.d_phys();

  CovMat stacked = to_ordering(spec.sites[0].cm, Ordering::Interleaved);
  for (int i = 1; i < n; ++i)
    stacked = direct_sum(stacked, to_ordering(spec.sites[i].cm, Ordering::Interleaved));

  const auto perm = site_major_to_grouped(n, m, d);
  Eigen::MatrixXd grouped = perm * stacked.entries * perm.transpose();

  PiMatrix pi = build_pi(n, m, spec.boundary, d);

  // Apply the theta partial transposition on all B modes, then merge; the
  // Pi matrix carries theta in its B entries, so grouped is used as-is.
  Eigen::MatrixXd t;
  std::vector<int> eliminate;
  if (spec.boundary == Boundary::Open && !opts.project_boundary_to_vacuum) {
    // trace the unmatched edge ports: drop their rows/columns before Pi
    std::set<int> drop(pi.discarded_modes.begin(), pi.discarded_modes.end());
    std::vector<int> keep_rows;
    for (int mode = 0; mode < stacked.n_modes; ++mode) {
      if (drop.count(mode)) continue;
      keep_rows.push_back(2 * mode);
      keep_rows.push_back(2 * mode + 1);
    }
    Eigen::MatrixXd reduced(keep_rows.size(), keep_rows.size());
    for (size_t i = 0; i < keep_rows.size(); ++i)
      for (size_t j = 0; j < keep_rows.size(); ++j)
        reduced(i, j) = grouped(keep_rows[i], keep_rows[j]);
    // drop the matching columns of Pi
    Eigen::MatrixXd pim(pi.matrix.rows(), keep_rows.size());
    for (size_t j = 0; j < keep_rows.size(); ++j) pim.col(j) = pi.matrix.col(keep_rows[j]);
    t = pim * reduced * pim.transpose();
    const int n_merge_rows = static_cast<int>(pi.matrix.rows()) - 2 * n * d;
    eliminate.resize(n_merge_rows);
    for (int i = 0; i < n_merge_rows; ++i) eliminate[i] = i;
  } else if (spec.boundary == Boundary::Open) {
    // vacuum projection: keep the edge ports, EPR-collapse them against
    // vacuum ancillas == Schur complement after adding the identity.
    const int n_merge_rows = static_cast<int>(pi.matrix.rows()) - 2 * n * d;
    const int n_extra = static_cast<int>(pi.discarded_modes.size());
    Eigen::MatrixXd pim =
        Eigen::MatrixXd::Zero(pi.matrix.rows() + 2 * n_extra, pi.matrix.cols());
    pim.topRows(n_merge_rows) = pi.matrix.topRows(n_merge_rows);
    for (int e = 0; e < n_extra; ++e) {
      const int mode = pi.discarded_modes[e];
      pim(n_merge_rows + 2 * e, 2 * mode) = 1.0;
      pim(n_merge_rows + 2 * e + 1, 2 * mode + 1) = 1.0;
    }
    pim.bottomRows(2 * n * d) = pi.matrix.bottomRows(2 * n * d);
    t = pim * grouped * pim.transpose();
    // vacuum heterodyne: gamma_DD + 1 before eliminating
    for (int e = 0; e < 2 * n_extra; ++e) t(n_merge_rows + e, n_merge_rows + e) += 1.0;
    eliminate.resize(n_merge_rows + 2 * n_extra);
    for (size_t i = 0; i < eliminate.size(); ++i) eliminate[i] = static_cast<int>(i);
  } else {
    t = pi.matrix * grouped * pi.matrix.transpose();
    const int n_merge_rows = static_cast<int>(pi.matrix.rows()) - 2 * n * d;
    eliminate.resize(n_merge_rows);
    for (int i = 0; i < n_merge_rows; ++i) eliminate[i] = i;
  }

  t = 0.5 * (t + t.transpose()).eval();
  SchurResult sc = schur_complement(t, eliminate);

  CovMat out;
  out.n_modes = n * d;
  out.ordering = Ordering::Interleaved;
  out.entries = std::move(sc.matrix);
  out.critical = sc.critical;
  for (const auto& s : spec.sites) out.critical = out.critical || s.cm.critical;
  return out;
}

}  // namespace gmps
