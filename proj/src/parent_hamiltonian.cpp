#include "gmps/parent_hamiltonian.hpp"

#include <cmath>
#include <numbers>

namespace gmps {

namespace {
constexpr double kPi = std::numbers::pi;
}

Eigen::Matrix2d QuadHamiltonian::eval(double phi) const {
  const double c = std::cos(phi);
  Eigen::Matrix2d m;
  m << h_q(c), h_qp(c), h_qp(c), h_p(c);
  return m;
}

double QuadHamiltonian::min_eigenvalue_on_grid(int grid) const {
  double min_eig = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const Eigen::Matrix2d m = eval(2.0 * kPi * i / grid);
    const double tr = m.trace();
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * m.determinant()));
    min_eig = std::min(min_eig, 0.5 * (tr - disc));
  }
  return min_eig;
}

QuadHamiltonian make_quad_hamiltonian(Poly h_q, Poly h_p, Poly h_qp,
                                      std::optional<Poly> spectral_root) {
  QuadHamiltonian h;
  h.h_q = std::move(h_q);
  h.h_p = std::move(h_p);
  h.h_qp = std::move(h_qp);
  h.range = std::max({h.h_q.degree(), h.h_p.degree(), h.h_qp.degree(), 0});
  h.spectral_root = std::move(spectral_root);

  const auto hq = chebyshev_harmonics(h.h_q);
  const auto hp = chebyshev_harmonics(h.h_p);
  const auto hqp = chebyshev_harmonics(h.h_qp);
  h.couplings.assign(h.range + 1, Eigen::Matrix2d::Zero());
  for (int k = 0; k <= h.range; ++k) {
    const double a = k < static_cast<int>(hq.size()) ? hq[k] : 0.0;
    const double c = k < static_cast<int>(hp.size()) ? hp[k] : 0.0;
    const double b = k < static_cast<int>(hqp.size()) ? hqp[k] : 0.0;
    h.couplings[k] << a, b, b, c;
  }

  const double min_eig = h.min_eigenvalue_on_grid();
  if (min_eig < -1e-9)
    throw std::invalid_argument("QuadHamiltonian: H_hat not positive semidefinite (min eig " +
                                std::to_string(min_eig) + ")");
  return h;
}

QuadHamiltonian parent_hamiltonian(const RationalCM& rc) {
  const Poly purity_defect = rc.p * rc.q - rc.r * rc.r - rc.d * rc.d;
  const double scale =
      std::max({(rc.p * rc.q).max_abs_coeff(), (rc.d * rc.d).max_abs_coeff(), 1.0});
  if (purity_defect.max_abs_coeff() > 1e-6 * scale)
    throw std::invalid_argument("parent_hamiltonian: rc does not satisfy pq - r^2 = d^2");
  return make_quad_hamiltonian(rc.p, rc.q, rc.r * -1.0, rc.d);
}

SpectralFunction spectral_function(const QuadHamiltonian& h) {
  SpectralFunction e;
  if (h.spectral_root) {
    Poly root = *h.spectral_root;
    if (root(1.0) < 0.0) root = root * -1.0;
    e.poly = root;
    e.eval = [root](double phi) { return root(std::cos(phi)); };
    return e;
  }
  const Poly det = h.h_q * h.h_p - h.h_qp * h.h_qp;
  e.eval = [det](double phi) { return std::sqrt(std::max(0.0, det(std::cos(phi)))); };
  return e;
}

SpectralCM ground_state(const QuadHamiltonian& h) {
  const SpectralFunction e = spectral_function(h);
  SpectralCM s;
  s.eval = [h, e](double phi) {
    const double energy = e.eval(phi);
    if (energy <= 0.0)
      throw CriticalStateError("ground_state: spectral function vanishes at phi = " +
                                   std::to_string(phi),
                               0.0);
    const Eigen::Matrix2d m = h.eval(phi);
    Eigen::Matrix2d g;  // sigma H sigma^T
    g << m(1, 1), -m(0, 1), -m(0, 1), m(0, 0);
    return Eigen::Matrix2cd(g.cast<std::complex<double>>() / energy);
  };
  return s;
}

double ground_energy_density(const QuadHamiltonian& h) {
  const SpectralFunction e = spectral_function(h);
  if (!e.poly) {
    // pointwise sqrt: refuse near-critical determinants, the cusp breaks the
    // spectral convergence of the trapezoid rule
    const Poly det = h.h_q * h.h_p - h.h_qp * h.h_qp;
    double min_det = std::numeric_limits<double>::infinity(), max_det = 0.0;
    for (int i = 0; i < 1024; ++i) {
      const double v = det(std::cos(2.0 * kPi * i / 1024));
      min_det = std::min(min_det, v);
      max_det = std::max(max_det, std::abs(v));
    }
    if (min_det < 1e-10 * std::max(max_det, 1.0))
      throw CriticalStateError("ground_energy_density: spectral function has a near-zero", 0.0);
  }

  auto mean_on_grid = [&](int n) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += e.eval(2.0 * kPi * i / n);
    return acc / n;
  };
  double prev = mean_on_grid(32);
  for (int n = 64; n <= (1 << 22); n *= 2) {
    const double cur = mean_on_grid(n);
    if (std::abs(cur - prev) <= 1e-9 * std::max(std::abs(cur), 1e-30)) return 0.5 * cur;
    prev = cur;
  }
  throw std::runtime_error("ground_energy_density: quadrature did not converge");
}

namespace {

/// Max |d_cand(c)^2 - det(c)| over [-1, 1], relative to the determinant scale.
double square_residual(const Poly& d_cand, const Poly& det) {
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i <= 256; ++i) {
    const double c = -1.0 + 2.0 * i / 256;
    const double dv = d_cand(c);
    worst = std::max(worst, std::abs(dv * dv - det(c)));
    scale = std::max(scale, std::abs(det(c)));
  }
  return worst / std::max(scale, 1e-300);
}

}  // namespace

GmpsGroundState has_gmps_ground_state(const QuadHamiltonian& h) {
  GmpsGroundState out;
  const Poly det = h.h_q * h.h_p - h.h_qp * h.h_qp;

  if (det.degree() <= 0) {
    const double v = det.is_zero() ? 0.0 : det.coeffs()[0];
    if (v <= 0.0) {
      out.status = GmpsGroundState::Status::No;
      return out;
    }
    out.status = GmpsGroundState::Status::Yes;
    out.state = RationalCM::from_polys(h.h_q, h.h_p, h.h_qp * -1.0,
                                       Poly::constant(std::sqrt(v)));
    return out;
  }

  const double lead = det.coeffs()[det.degree()];
  std::vector<std::complex<double>> roots = det.roots();

  // Greedy nearest-neighbor pairing. Double roots split under coefficient
  // noise proportionally to their magnitude and conditioning, so no fixed
  // clustering radius is reliable; the reconstruction d_cand^2 = det is
  // verified explicitly instead and decides the answer.
  std::vector<std::complex<double>> centers;
  std::vector<std::complex<double>> leftover;
  double pairing_margin = 0.0;
  if (roots.size() % 2 == 0 && lead > 0.0) {
    std::vector<bool> used(roots.size(), false);
    while (centers.size() < roots.size() / 2) {
      // take the globally closest unused pair
      double best = std::numeric_limits<double>::infinity();
      size_t bi = 0, bj = 0;
      for (size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        for (size_t j = i + 1; j < roots.size(); ++j) {
          if (used[j]) continue;
          const double dist = std::abs(roots[i] - roots[j]);
          if (dist < best) {
            best = dist;
            bi = i;
            bj = j;
          }
        }
      }
      used[bi] = used[bj] = true;
      pairing_margin = std::max(pairing_margin, best);
      std::complex<double> center = 0.5 * (roots[bi] + roots[bj]);
      if (std::abs(center.imag()) <= tol::root_cluster * (1.0 + std::abs(center)))
        center = std::complex<double>(center.real(), 0.0);
      centers.push_back(center);
    }

    try {
      const Poly d_cand = Poly::from_roots(centers, std::sqrt(lead));
      const double residual = square_residual(d_cand, det);
      out.pairing_margin = pairing_margin;
      if (residual <= 1e-7) {
        out.status = GmpsGroundState::Status::Yes;
        out.state = RationalCM::from_polys(h.h_q, h.h_p, h.h_qp * -1.0, d_cand);
        return out;
      }
      if (residual <= 1e-3) {
        out.status = GmpsGroundState::Status::Indeterminate;
        return out;
      }
    } catch (const std::invalid_argument&) {
      // centers without conjugate partners: not a real square
    }
  }

  // no polynomial square root: witness an odd-multiplicity root cluster
  out.status = GmpsGroundState::Status::No;
  for (const auto& cl : cluster_roots(roots, tol::root_cluster)) {
    if (cl.multiplicity % 2 != 0 && std::abs(cl.center.imag()) <= tol::root_cluster) {
      out.witness_root = cl.center;
      break;
    }
  }
  if (!out.witness_root && !roots.empty()) out.witness_root = roots.front();
  out.pairing_margin = pairing_margin;
  return out;
}

}  // namespace gmps
