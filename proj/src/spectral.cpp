#include "gmps/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gmps {

namespace {

constexpr double kPi = std::numbers::pi;

/// Hermitian pseudo-inverse with relative eigenvalue cutoff.
std::pair<Eigen::MatrixXcd, bool> pinv_hermitian(const Eigen::MatrixXcd& a,
                                                 double rel_threshold = tol::pinv_rel) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double cutoff = rel_threshold * ev.cwiseAbs().maxCoeff();
  Eigen::VectorXcd inv_ev = Eigen::VectorXcd::Zero(ev.size());
  bool critical = false;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) > cutoff)
      inv_ev(i) = 1.0 / ev(i);
    else
      critical = true;
  }
  return {es.eigenvectors() * inv_ev.asDiagonal() * es.eigenvectors().adjoint(), critical};
}

}  // namespace

Eigen::Matrix2cd gamma_hat(const GaussChannel& ch, double phi, bool* critical) {
  if (ch.n_out != 1)
    throw std::invalid_argument("gamma_hat: channel must have one output mode");
  if (ch.n_in % 2 != 0)
    throw std::invalid_argument("gamma_hat: channel must have 2M input ports");
  const int m = ch.n_in / 2;
  const CovMat g = to_ordering(ch.cm, Ordering::Interleaved);
  const int abd = 4 * m;  // A+B phase dimension

  const Eigen::MatrixXd gamma_ab = g.entries.topLeftCorner(abd, abd);
  const Eigen::MatrixXd gamma_ab_c = g.entries.topRightCorner(abd, 2);
  const Eigen::MatrixXd gamma_c = g.entries.bottomRightCorner(2, 2);

  // Lambda = (1_A ; e^{i phi} theta_B), 2M x 4M at phase-space level
  Eigen::MatrixXcd lambda = Eigen::MatrixXcd::Zero(2 * m, abd);
  const std::complex<double> ph(std::cos(phi), std::sin(phi));
  for (int k = 0; k < m; ++k) {
    lambda(2 * k, 2 * k) = 1.0;
    lambda(2 * k + 1, 2 * k + 1) = 1.0;
    lambda(2 * k, 2 * m + 2 * k) = ph;
    lambda(2 * k + 1, 2 * m + 2 * k + 1) = -ph;
  }

  const Eigen::MatrixXcd middle = lambda * gamma_ab.cast<std::complex<double>>() * lambda.adjoint();
  auto [inv, crit] = pinv_hermitian(middle);
  if (critical) *critical = crit;

  const Eigen::MatrixXcd coupling = lambda * gamma_ab_c.cast<std::complex<double>>();
  Eigen::Matrix2cd out =
      gamma_c.cast<std::complex<double>>() - coupling.adjoint() * inv * coupling;
  out = 0.5 * (out + out.adjoint()).eval();
  return out;
}

SpectralCM spectral_from_channel(const GaussChannel& ch) {
  SpectralCM s;
  s.bond_count = ch.n_in / 2;
  s.eval = [ch](double phi) { return gamma_hat(ch, phi); };
  return s;
}

Eigen::Matrix2d RationalCM::eval(double phi) const {
  const double c = std::cos(phi);
  const double dv = d(c);
  Eigen::Matrix2d out;
  out << q(c), r(c), r(c), p(c);
  return out / dv;
}

namespace {

double unit_circle_margin_of(const Poly& d) {
  if (d.degree() < 1) return 1.0;  // constant denominator: nothing on the circle
  const ZPoly dz = ZPoly::expand(d);
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& z : dz.coefficients.roots())
    margin = std::min(margin, std::abs(std::abs(z) - 1.0));
  return margin;
}

}  // namespace

RationalCM RationalCM::from_polys(Poly p, Poly q, Poly r, Poly d) {
  const double scale = d(1.0);
  if (std::abs(scale) < 1e-14)
    throw CriticalStateError("RationalCM: d(1) vanishes (critical at phi = 0)", 0.0);
  RationalCM rc;
  rc.p = p * (1.0 / scale);
  rc.q = q * (1.0 / scale);
  rc.r = r * (1.0 / scale);
  rc.d = d * (1.0 / scale);
  rc.degree_bound = std::max({rc.p.degree(), rc.q.degree(), rc.r.degree(), rc.d.degree(), 0});
  rc.unit_circle_margin = unit_circle_margin_of(rc.d);
  rc.critical = rc.unit_circle_margin < tol::critical_margin;
  return rc;
}

namespace {

struct FitAttempt {
  Poly p, q, r, d;
  double residual = std::numeric_limits<double>::infinity();
};

/// Residual of the candidate polynomials against fresh gamma_hat samples.
double heldout_residual(const GaussChannel& ch, const Poly& p, const Poly& q, const Poly& r,
                        const Poly& d, int n_points = 64) {
  double res = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const double phi = 2.0 * kPi * (i + 0.37) / n_points;
    const double c = std::cos(phi);
    const double dv = d(c);
    if (std::abs(dv) < 1e-12) return std::numeric_limits<double>::infinity();
    const Eigen::Matrix2cd g = gamma_hat(ch, phi);
    res = std::max(res, std::abs(q(c) / dv - g(0, 0).real()));
    res = std::max(res, std::abs(r(c) / dv - g(0, 1).real()));
    res = std::max(res, std::abs(p(c) / dv - g(1, 1).real()));
    res = std::max(res, std::abs(g(0, 0).imag()));
  }
  return res;
}

FitAttempt fit_degree(const GaussChannel& ch, int degree) {
  const int n_coeff = degree + 1;
  const int n_nodes = 4 * degree + 4;
  // unknowns: q, r, p (full), d without its constant term (d0 = 1 - sum d_k)
  const int n_unknowns = 3 * n_coeff + degree;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3 * n_nodes, n_unknowns);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(3 * n_nodes);

  for (int i = 0; i < n_nodes; ++i) {
    const double phi = kPi * (i + 0.5) / n_nodes;  // Chebyshev angles in (0, pi)
    const double c = std::cos(phi);
    const Eigen::Matrix2cd g = gamma_hat(ch, phi);
    const double gv[3] = {g(0, 0).real(), g(0, 1).real(), g(1, 1).real()};
    for (int e = 0; e < 3; ++e) {
      const int row = 3 * i + e;
      double cp = 1.0;
      for (int k = 0; k < n_coeff; ++k) {
        a(row, e * n_coeff + k) = cp;  // s_k c^k
        cp *= c;
      }
      // -gv * d(c) with d(c) = (1 - sum_k d_k) + sum_k d_k c^k
      b(row) = gv[e];  // from the constant part of d
      cp = c;
      for (int k = 1; k <= degree; ++k) {
        a(row, 3 * n_coeff + (k - 1)) = -gv[e] * (cp - 1.0);
        cp *= c;
      }
    }
  }

  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  auto take = [&](int offset, int count) {
    std::vector<double> c(count);
    for (int k = 0; k < count; ++k) c[k] = x(offset + k);
    return Poly(std::move(c));
  };
  FitAttempt f;
  f.q = take(0, n_coeff);
  f.r = take(n_coeff, n_coeff);
  f.p = take(2 * n_coeff, n_coeff);
  std::vector<double> dc(n_coeff, 0.0);
  double d0 = 1.0;
  for (int k = 1; k <= degree; ++k) {
    dc[k] = x(3 * n_coeff + (k - 1));
    d0 -= dc[k];
  }
  dc[0] = d0;
  f.d = Poly(std::move(dc));
  f.residual = heldout_residual(ch, f.p, f.q, f.r, f.d);
  return f;
}

/// Deflate root clusters common to all four polynomials while the held-out
/// residual does not get worse.
FitAttempt reduce_common_factors(const GaussChannel& ch, FitAttempt f) {
  bool changed = true;
  while (changed && f.d.degree() >= 1) {
    changed = false;
    for (const auto& root : f.d.roots()) {
      if (root.imag() < -1e-12) continue;  // conjugate handled with its partner
      auto near = [&](const Poly& s) {
        if (s.degree() < 1) return false;
        for (const auto& z : s.roots())
          if (std::abs(z - root) < tol::root_cluster) return true;
        return false;
      };
      if (!near(f.p) || !near(f.q) || !near(f.r)) continue;
      FitAttempt g = f;
      try {
        g.p = g.p.deflate(root);
        g.q = g.q.deflate(root);
        g.r = g.r.deflate(root);
        g.d = g.d.deflate(root);
      } catch (const std::invalid_argument&) {
        continue;
      }
      if (std::abs(g.d(1.0)) < 1e-10) continue;
      const double s = 1.0 / g.d(1.0);
      g.p = g.p * s;
      g.q = g.q * s;
      g.r = g.r * s;
      g.d = g.d * s;
      g.residual = heldout_residual(ch, g.p, g.q, g.r, g.d);
      if (g.residual <= f.residual) {
        f = std::move(g);
        changed = true;
        break;
      }
    }
  }
  return f;
}

}  // namespace

RationalCM rationalize(const GaussChannel& ch, int bonds, double residual_gate) {
  if (!ch.pure) throw std::invalid_argument("rationalize: channel must be pure");
  const int max_degree = 2 * bonds + 1;

  FitAttempt best;
  for (int degree = 0; degree <= max_degree; ++degree) {
    FitAttempt f = fit_degree(ch, degree);
    if (f.residual < best.residual) best = f;
    if (f.residual <= 1e-9) {
      best = f;
      break;
    }
  }
  if (best.residual > residual_gate)
    throw FitError("rationalize: residual " + std::to_string(best.residual) +
                       " exceeds gate (critical state or degree deficiency?)",
                   best.residual);
  best = reduce_common_factors(ch, best);

  RationalCM rc = RationalCM::from_polys(best.p, best.q, best.r, best.d);
  rc.fit_residual = best.residual;
  return rc;
}

Poly component_poly(const RationalCM& rc, CorrComponent s) {
  switch (s) {
    case CorrComponent::Q: return rc.q;
    case CorrComponent::P: return rc.p;
    case CorrComponent::R: return rc.r;
  }
  throw std::logic_error("component_poly: bad component");
}

namespace {

/// Taylor coefficient `order` of s(z)/d0(z) around z = 0, d0(0) != 0.
double series_division_coeff(const Poly& s, const Poly& d0, int order) {
  if (order < 0) return 0.0;
  std::vector<double> t(order + 1, 0.0);
  const auto& sc = s.coeffs();
  const auto& dc = d0.coeffs();
  for (int j = 0; j <= order; ++j) {
    double acc = j < static_cast<int>(sc.size()) ? sc[j] : 0.0;
    for (int i = 0; i < j; ++i) {
      const int k = j - i;
      if (k < static_cast<int>(dc.size())) acc -= t[i] * dc[k];
    }
    t[j] = acc / dc[0];
  }
  return t[order];
}

struct PoleSet {
  Poly s_tilde, d_tilde;
  std::vector<RootCluster> inside;  // non-origin poles strictly inside
  int origin_multiplicity = 0;      // zeros of d_tilde at z = 0
  double margin = std::numeric_limits<double>::infinity();
};

PoleSet analyze_poles(const Poly& s, const Poly& d) {
  PoleSet ps;
  // common K so that s~/d~ = s/d on the circle
  const int k = std::max({s.degree(), d.degree(), 0});
  const ZPoly dz = ZPoly::expand(d, k);
  ps.s_tilde = ZPoly::expand(s, k).coefficients;
  ps.d_tilde = dz.coefficients;
  ps.origin_multiplicity = dz.trailing_zeros;

  const std::vector<double>& dc = ps.d_tilde.coeffs();
  Poly d0(std::vector<double>(dc.begin() + ps.origin_multiplicity, dc.end()));
  if (d0.degree() >= 1) {
    const auto roots = d0.roots();
    for (const auto& cl : cluster_roots(roots, tol::root_cluster)) {
      ps.margin = std::min(ps.margin, std::abs(std::abs(cl.center) - 1.0));
      if (std::abs(cl.center) < 1.0) ps.inside.push_back(cl);
    }
  }
  return ps;
}

std::complex<double> integrand(const PoleSet& ps, std::complex<double> z, int n) {
  return ps.s_tilde(z) * std::pow(z, n - 1) / ps.d_tilde(z);
}

/// Residue via trapezoidal contour quadrature on a small circle.
std::complex<double> contour_residue(const PoleSet& ps, std::complex<double> center,
                                     double radius, int n) {
  constexpr int kPoints = 256;
  std::complex<double> acc = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double t = 2.0 * kPi * i / kPoints;
    const std::complex<double> e(std::cos(t), std::sin(t));
    acc += integrand(ps, center + radius * e, n) * e;
  }
  return acc * radius / static_cast<double>(kPoints);
}

}  // namespace

double correlations_infinite(const RationalCM& rc, CorrComponent comp, int n) {
  if (n < 0) throw std::invalid_argument("correlations_infinite: n must be >= 0");
  const Poly s = component_poly(rc, comp);
  if (s.is_zero()) return 0.0;
  const PoleSet ps = analyze_poles(s, rc.d);
  if (ps.margin < tol::critical_margin)
    throw CriticalStateError("correlations_infinite: denominator zero on the unit circle",
                             ps.margin);

  std::complex<double> total = 0.0;

  // origin: residue of (s~/d0~) z^{n-1-m0} = Taylor coefficient m0 - n
  if (ps.origin_multiplicity > 0 || n == 0) {
    std::vector<double> dc = ps.d_tilde.coeffs();
    Poly d0(std::vector<double>(dc.begin() + ps.origin_multiplicity, dc.end()));
    total += series_division_coeff(ps.s_tilde, d0, ps.origin_multiplicity - n);
  }

  for (size_t i = 0; i < ps.inside.size(); ++i) {
    const auto& pole = ps.inside[i];
    if (pole.multiplicity == 1 && std::abs(pole.center) > 1e-8) {
      const std::complex<double> z = pole.center;
      total += ps.s_tilde(z) * std::pow(z, n - 1) / ps.d_tilde.derivative()(z);
      continue;
    }
    // multiple pole: local contour integral
    double dist = 1.0 - std::abs(pole.center);  // stay inside the unit circle
    for (size_t j = 0; j < ps.inside.size(); ++j)
      if (j != i) dist = std::min(dist, std::abs(ps.inside[j].center - pole.center));
    if (ps.origin_multiplicity > 0 || n == 0)
      dist = std::min(dist, std::abs(pole.center));  // keep the origin pole outside
    double radius = 0.45 * dist;
    if (n > 3) radius = std::min(radius, 3.0 * std::abs(pole.center) / n);
    total += contour_residue(ps, pole.center, radius, n);
  }

  if (std::abs(total.imag()) > 1e-9 * std::max(1.0, std::abs(total.real())))
    throw std::runtime_error("correlations_infinite: residue sum is not real (imag = " +
                             std::to_string(total.imag()) + ")");
  return total.real();
}

CorrelationLength correlation_length(const RationalCM& rc) {
  CorrelationLength out;
  if (rc.d.degree() < 1) return out;  // constant denominator
  const ZPoly dz = ZPoly::expand(rc.d);
  const auto clusters = cluster_roots(dz.coefficients.roots(), tol::root_cluster);
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& cl : clusters) margin = std::min(margin, std::abs(std::abs(cl.center) - 1.0));
  if (margin < tol::critical_margin)
    throw CriticalStateError("correlation_length: denominator zero on the unit circle, distance " +
                                 std::to_string(margin),
                             margin);
  double best = 0.0;
  for (const auto& cl : clusters) {
    const double m = std::abs(cl.center);
    if (m < 1.0 && m > best) {
      best = m;
      out.z_star = cl.center;
    }
  }
  if (best > 0.0) out.xi = -1.0 / std::log(best);
  return out;
}

std::vector<std::complex<double>> dft_forward(const std::vector<std::complex<double>>& a) {
  const int n = static_cast<int>(a.size());
  if (n < 1) throw std::invalid_argument("dft_forward: empty input");
  std::vector<std::complex<double>> tw(n), out(n);
  for (int k = 0; k < n; ++k) tw[k] = std::polar(1.0, -2.0 * kPi * k / n);
  for (int m = 0; m < n; ++m) {
    std::complex<double> acc = 0.0;
    for (int j = 0; j < n; ++j) acc += a[j] * tw[static_cast<int>((static_cast<long long>(j) * m) % n)];
    out[m] = acc;
  }
  return out;
}

std::vector<std::complex<double>> dft_inverse(const std::vector<std::complex<double>>& a_hat) {
  const int n = static_cast<int>(a_hat.size());
  if (n < 1) throw std::invalid_argument("dft_inverse: empty input");
  std::vector<std::complex<double>> tw(n), out(n);
  for (int k = 0; k < n; ++k) tw[k] = std::polar(1.0, 2.0 * kPi * k / n);
  for (int m = 0; m < n; ++m) {
    std::complex<double> acc = 0.0;
    for (int j = 0; j < n; ++j) acc += a_hat[j] * tw[static_cast<int>((static_cast<long long>(j) * m) % n)];
    out[m] = acc / static_cast<double>(n);
  }
  return out;
}

std::vector<Eigen::Matrix2d> circulant_blocks(const CovMat& chain) {
  const CovMat g = to_ordering(chain, Ordering::Interleaved);
  std::vector<Eigen::Matrix2d> blocks(g.n_modes);
  for (int n = 0; n < g.n_modes; ++n) blocks[n] = g.entries.block<2, 2>(2 * n, 0);
  return blocks;
}

std::vector<Eigen::Matrix2cd> spectral_samples(const std::vector<Eigen::Matrix2d>& blocks) {
  const int n = static_cast<int>(blocks.size());
  std::vector<Eigen::Matrix2cd> out(n);
  std::vector<std::complex<double>> seq(n);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      for (int j = 0; j < n; ++j) seq[j] = blocks[j](a, b);
      const auto hat = dft_forward(seq);
      for (int m = 0; m < n; ++m) out[m](a, b) = hat[m];
    }
  return out;
}

CovMat chain_from_spectral_samples(const std::vector<Eigen::Matrix2cd>& samples) {
  const int n = static_cast<int>(samples.size());
  std::vector<Eigen::Matrix2d> blocks(n);
  std::vector<std::complex<double>> seq(n);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      for (int m = 0; m < n; ++m) seq[m] = samples[m](a, b);
      const auto inv = dft_inverse(seq);
      for (int j = 0; j < n; ++j) {
        if (std::abs(inv[j].imag()) > 1e-8)
          throw std::invalid_argument("chain_from_spectral_samples: blocks are not real");
        blocks[j](a, b) = inv[j].real();
      }
    }
  CovMat out;
  out.n_modes = n;
  out.ordering = Ordering::Interleaved;
  out.entries.resize(2 * n, 2 * n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) out.entries.block<2, 2>(2 * k, 2 * l) = blocks[(k - l + n) % n];
  out.entries = 0.5 * (out.entries + out.entries.transpose()).eval();
  return out;
}

double circulant_defect(const CovMat& chain) {
  const CovMat g = to_ordering(chain, Ordering::Interleaved);
  const int n = g.n_modes;
  double dev = 0.0;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const Eigen::Matrix2d a = g.entries.block<2, 2>(2 * k, 2 * l);
      const Eigen::Matrix2d b =
          g.entries.block<2, 2>(2 * ((k + 1) % n), 2 * ((l + 1) % n));
      dev = std::max(dev, (a - b).cwiseAbs().maxCoeff());
    }
  return dev;
}

}  // namespace gmps
