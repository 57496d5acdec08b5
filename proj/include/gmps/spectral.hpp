#pragma once

#include "gmps/channels.hpp"
#include "gmps/poly.hpp"

#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace gmps {

/// Raised where criticality (denominator zeros on the unit circle) forbids
/// the requested computation.
class CriticalStateError : public std::runtime_error {
 public:
  CriticalStateError(const std::string& what, double unit_circle_distance)
      : std::runtime_error(what), unit_circle_distance(unit_circle_distance) {}
  double unit_circle_distance;
};

class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, double residual)
      : std::runtime_error(what), residual(residual) {}
  double residual;
};

/// Fourier transform of a translation-invariant CM as a function of
/// phi in [0, 2pi): 2x2 complex Hermitian for one mode per site.
struct SpectralCM {
  std::function<Eigen::Matrix2cd(double)> eval;
  std::optional<int> bond_count;
};

/// Closed-form gamma_hat(phi) of the translation-invariant GMPS generated by
/// a pure 2M -> 1 map: Gamma_C minus the Lambda-contracted Schur correction.
/// Sets *critical when the contracted middle matrix needed a pseudo-inverse.
Eigen::Matrix2cd gamma_hat(const GaussChannel& ch, double phi, bool* critical = nullptr);

SpectralCM spectral_from_channel(const GaussChannel& ch);

/// gamma_hat(phi) = (1/d) [[q, r], [r, p]] with p, q, r, d real polynomials in
/// cos(phi), normalized d(1) = 1.
struct RationalCM {
  Poly p, q, r, d;
  int degree_bound = 0;  // L: max degree among p, q, r, d
  double fit_residual = 0.0;
  double unit_circle_margin = 0.0;  // min | |z| - 1 | over zeros of d-tilde
  bool critical = false;

  Eigen::Matrix2d eval(double phi) const;
  static RationalCM from_polys(Poly p, Poly q, Poly r, Poly d);
};

/// Least-squares fit of the rational representation on Chebyshev nodes with
/// held-out validation; scans L = 0..2M+1 and deflates common root clusters
/// when that does not hurt the residual. Throws FitError when no degree meets
/// the residual gate.
RationalCM rationalize(const GaussChannel& ch, int bonds, double residual_gate = 1e-7);

enum class CorrComponent { Q, P, R };

Poly component_poly(const RationalCM& rc, CorrComponent s);

/// Exact infinite-chain correlation (gamma_s)_n by residue summation over the
/// zeros of d-tilde inside the unit circle. Throws CriticalStateError when a
/// zero sits within tol::critical_margin of the unit circle.
double correlations_infinite(const RationalCM& rc, CorrComponent s, int n);

struct CorrelationLength {
  double xi = 0.0;                        // 0 = strictly finite-range correlations
  std::complex<double> z_star{0.0, 0.0};  // dominant zero of d-tilde inside the circle
};

CorrelationLength correlation_length(const RationalCM& rc);

/// Plain DFT pair, A_hat(phi_m) = sum_n A_n e^{-i n phi_m}, phi_m = 2 pi m / N.
std::vector<std::complex<double>> dft_forward(const std::vector<std::complex<double>>& a);
std::vector<std::complex<double>> dft_inverse(const std::vector<std::complex<double>>& a_hat);

/// 2x2 blocks A_n of a block-circulant chain CM (one mode per site),
/// A_n = gamma(site n, site 0).
std::vector<Eigen::Matrix2d> circulant_blocks(const CovMat& chain);

/// Forward transform of the block sequence at all phi_m.
std::vector<Eigen::Matrix2cd> spectral_samples(const std::vector<Eigen::Matrix2d>& blocks);

/// Inverse: rebuild the full block-circulant chain CM from gamma_hat samples.
CovMat chain_from_spectral_samples(const std::vector<Eigen::Matrix2cd>& samples);

/// Max deviation from block-circulant structure (translation invariance).
double circulant_defect(const CovMat& chain);

}  // namespace gmps
