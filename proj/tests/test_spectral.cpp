#include "gmps/spectral.hpp"
#include "gmps/lattice.hpp"
#include "gmps/random_maps.hpp"

#include <doctest.h>

#include <algorithm>
#include <numbers>

using namespace gmps;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

GaussChannel decoupled_map(std::mt19937_64& rng) {
  GaussChannel ch;
  ch.n_in = 2;
  ch.n_out = 1;
  ch.cm = direct_sum(random_pure_cm(2, 0.5, rng), CovMat::vacuum(1));
  ch.pure = true;
  return ch;
}

/// gamma_q = 1/(5 - 4 cos phi) family: pure, dominant zero z* = 1/2.
RationalCM half_decay_family() {
  const double beta = 0.75;
  const Poly d({5.0, -4.0});
  const Poly q({1.0});
  const Poly r({beta});
  const Poly p = d * d + r * r;  // q p = d^2 + r^2 exactly
  return RationalCM::from_polys(p, q, r, d);
}

}  // namespace

TEST_CASE("gamma_hat_decoupled_is_constant") {
  auto rng = seeded_engine(107);
  const GaussChannel ch = decoupled_map(rng);
  for (double phi : {0.0, 0.7, 2.9}) {
    const Eigen::Matrix2cd g = gamma_hat(ch, phi);
    CHECK((g - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("gamma_hat_periodicity") {
  auto rng = seeded_engine(109);
  const GaussChannel ch = random_pure_map(1, 1, rng);
  const Eigen::Matrix2cd a = gamma_hat(ch, 0.0);
  const Eigen::Matrix2cd b = gamma_hat(ch, 2.0 * kPi);
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("gamma_hat_real_symmetric_and_pure") {
  auto rng = seeded_engine(113);
  for (int bonds : {1, 2}) {
    const GaussChannel ch = random_pure_map(bonds, 1, rng);
    for (int i = 0; i < 16; ++i) {
      const Eigen::Matrix2cd g = gamma_hat(ch, 2.0 * kPi * (i + 0.3) / 16);
      CHECK(g.imag().cwiseAbs().maxCoeff() <= 1e-9);
      CHECK(std::abs(g(0, 1).real() - g(1, 0).real()) <= 1e-9);
      CHECK(std::abs(g.determinant().real() - 1.0) <= 1e-7);
    }
  }
}

TEST_CASE("gamma_hat_matches_finite_chain_dft") {
  auto rng = seeded_engine(127);
  const int n = 32;
  const GaussChannel ch = random_pure_map(1, 1, rng);
  const CovMat chain = build_gmps(GmpsSpec::uniform(ch, n, 1));
  const auto samples = spectral_samples(circulant_blocks(chain));
  for (int m = 0; m < n; ++m) {
    const Eigen::Matrix2cd direct = gamma_hat(ch, 2.0 * kPi * m / n);
    CHECK((samples[m] - direct).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("rationalize_constant_state") {
  auto rng = seeded_engine(131);
  const RationalCM rc = rationalize(decoupled_map(rng), 1);
  CHECK(rc.degree_bound == 0);
  CHECK(rc.p(0.3) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rc.q(0.3) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(rc.r(0.3)) <= 1e-10);
  CHECK(rc.d(0.3) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("gamma_hat_flags_rank_loss_of_the_contracted_block") {
  // Q quadratures of the two bond ports almost perfectly correlated: the
  // Lambda-contracted block loses rank at phi = pi
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(6, 6);
  m(0, 0) = m(2, 2) = 1.0 + 1e-14;
  m(0, 2) = m(2, 0) = 1.0;
  GaussChannel ch;
  ch.n_in = 2;
  ch.n_out = 1;
  ch.cm = CovMat::from_entries(std::move(m));
  ch.pure = false;
  bool critical = false;
  gamma_hat(ch, std::numbers::pi, &critical);
  CHECK(critical);
  critical = true;
  gamma_hat(ch, 0.4, &critical);
  CHECK_FALSE(critical);
}

TEST_CASE("rationalize_reports_degree_deficiency") {
  // an M = 2 map generically needs degree 5; fitting with the M = 1 bound fails
  auto rng = seeded_engine(317);
  const GaussChannel ch = random_pure_map(2, 1, rng);
  CHECK_THROWS_AS(rationalize(ch, 1), FitError);
}

TEST_CASE("rationalize_degree_bound_and_purity_identity") {
  auto rng = seeded_engine(137);
  for (int trial = 0; trial < 20; ++trial) {
    const GaussChannel ch = random_pure_map(1, 1, rng);
    const RationalCM rc = rationalize(ch, 1);
    CHECK(rc.degree_bound <= 3);
    const Poly defect = rc.p * rc.q - rc.r * rc.r - rc.d * rc.d;
    const double scale = std::max({(rc.p * rc.q).max_abs_coeff(),
                                   (rc.d * rc.d).max_abs_coeff(), 1.0});
    CHECK(defect.max_abs_coeff() <= 1e-7 * scale);
  }
}

TEST_CASE("rationalize_reconstructs_gamma_hat") {
  auto rng = seeded_engine(139);
  const GaussChannel ch = random_pure_map(1, 1, rng);
  const RationalCM rc = rationalize(ch, 1);
  for (int i = 0; i < 64; ++i) {
    const double phi = 2.0 * kPi * (i + 0.11) / 64;
    const Eigen::Matrix2cd direct = gamma_hat(ch, phi);
    CHECK((rc.eval(phi).cast<std::complex<double>>() - direct).cwiseAbs().maxCoeff() <= 1e-7);
  }
}

TEST_CASE("determinant_fixing_zeros_of_pq") {
  auto rng = seeded_engine(149);
  const GaussChannel ch = random_pure_map(1, 1, rng);
  const RationalCM rc = rationalize(ch, 1);
  auto sorted = [](std::vector<std::complex<double>> v) {
    std::sort(v.begin(), v.end(), [](auto a, auto b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return v;
  };
  const auto lhs = sorted((rc.p * rc.q).roots());
  const auto rhs = sorted((rc.d * rc.d + rc.r * rc.r).roots());
  REQUIRE(lhs.size() == rhs.size());
  for (size_t i = 0; i < lhs.size(); ++i) CHECK(std::abs(lhs[i] - rhs[i]) <= 1e-6);
}

TEST_CASE("correlations_polynomial_spectrum_has_finite_range") {
  // gamma_hat = [[1/s, c/s], [c/s, (1+c^2)/s]]-style d = 1 instance:
  // p q - r^2 = 1 with q constant, r = cos(phi)
  const double s = 1.3;
  const Poly q({s});
  const Poly r({0.0, 1.0});
  const Poly p = (Poly({1.0}) + r * r) * (1.0 / s);
  const RationalCM rc = RationalCM::from_polys(p, q, r, Poly({1.0}));
  // q component: constant, so only n = 0 survives
  CHECK(correlations_infinite(rc, CorrComponent::Q, 0) == doctest::Approx(s).epsilon(1e-12));
  for (int n = 1; n <= 5; ++n)
    CHECK(std::abs(correlations_infinite(rc, CorrComponent::Q, n)) <= 1e-12);
  // r component: a bare cosine, only n = 1
  CHECK(correlations_infinite(rc, CorrComponent::R, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(correlations_infinite(rc, CorrComponent::R, 0)) <= 1e-12);
  CHECK(std::abs(correlations_infinite(rc, CorrComponent::R, 2)) <= 1e-12);
  // p component: (1 + cos^2)/s -> 3/(2s) at n=0, 1/(4s) at n=2, zero beyond
  CHECK(correlations_infinite(rc, CorrComponent::P, 0) ==
        doctest::Approx(1.5 / s).epsilon(1e-12));
  CHECK(std::abs(correlations_infinite(rc, CorrComponent::P, 1)) <= 1e-12);
  CHECK(correlations_infinite(rc, CorrComponent::P, 2) ==
        doctest::Approx(0.25 / s).epsilon(1e-12));
  CHECK(std::abs(correlations_infinite(rc, CorrComponent::P, 3)) <= 1e-12);
}

TEST_CASE("correlations_half_decay_family_vs_dft_oracle") {
  const RationalCM rc = half_decay_family();
  const int big = 4096;
  std::vector<std::complex<double>> samples(big);
  for (int m = 0; m < big; ++m) samples[m] = rc.eval(2.0 * kPi * m / big)(0, 0);
  const auto corr = dft_inverse(samples);
  for (int n = 0; n <= 30; ++n) {
    const double res = correlations_infinite(rc, CorrComponent::Q, n);
    CHECK(std::abs(res - corr[n].real()) <= 1e-8);
  }
  // analytic: (gamma_q)_n = (1/3) 2^{-n}
  CHECK(correlations_infinite(rc, CorrComponent::Q, 0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(correlations_infinite(rc, CorrComponent::Q, 7) ==
        doctest::Approx(std::pow(0.5, 7) / 3.0).epsilon(1e-10));
}

TEST_CASE("correlations_zero_distance_matches_quadrature") {
  const RationalCM rc = half_decay_family();
  for (auto comp : {CorrComponent::Q, CorrComponent::P, CorrComponent::R}) {
    double riemann = 0.0;
    const int big = 8192;
    const Poly s = component_poly(rc, comp);
    for (int m = 0; m < big; ++m) {
      const double c = std::cos(2.0 * kPi * m / big);
      riemann += s(c) / rc.d(c);
    }
    riemann /= big;
    CHECK(std::abs(correlations_infinite(rc, comp, 0) - riemann) <= 1e-9);
  }
}

TEST_CASE("correlation_length_half_decay_family") {
  const auto cl = correlation_length(half_decay_family());
  CHECK(std::abs(cl.z_star - std::complex<double>(0.5, 0.0)) <= 1e-12);
  CHECK(cl.xi == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("correlation_length_constant_denominator") {
  const RationalCM rc = RationalCM::from_polys(Poly({1.0}), Poly({1.0}), Poly(), Poly({1.0}));
  const auto cl = correlation_length(rc);
  CHECK(cl.xi == 0.0);
}

TEST_CASE("correlation_decay_slope") {
  const RationalCM rc = half_decay_family();
  // least-squares slope of log|gamma_q(n)| over n in [10, 40]
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int n = 10; n <= 40; ++n) {
    const double v = std::log(std::abs(correlations_infinite(rc, CorrComponent::Q, n)));
    sx += n;
    sy += v;
    sxx += static_cast<double>(n) * n;
    sxy += n * v;
    ++count;
  }
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  CHECK(std::abs(slope - std::log(0.5)) <= 0.02 * std::abs(std::log(0.5)));
}

TEST_CASE("correlation_decay_bounded_by_dominant_zero") {
  // two real pole pairs: d = (5 - 4c)(3 - 2c), z* = 1/2
  const Poly d = Poly({5.0, -4.0}) * Poly({3.0, -2.0});
  const Poly q({1.0});
  const Poly r({0.5});
  const Poly p = d * d + r * r;
  const RationalCM rc = RationalCM::from_polys(p, q, r, d);
  const auto cl = correlation_length(rc);
  CHECK(std::abs(cl.z_star) == doctest::Approx(0.5).epsilon(1e-9));
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int n = 5; n <= 60; ++n) {
    const double ratio = std::abs(correlations_infinite(rc, CorrComponent::Q, n)) /
                         std::pow(std::abs(cl.z_star), n);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(hi / lo < 10.0);
}

TEST_CASE("criticality_is_refused") {
  // d = 1 - c vanishes at phi = 0: z-roots on the unit circle
  CHECK_THROWS_AS(RationalCM::from_polys(Poly({1.0, -1.0}) * Poly({1.0, -1.0}), Poly({1.0}),
                                         Poly(), Poly({1.0, -1.0})),
                  CriticalStateError);
  // build one with d(1) != 0 but a root at c = -1 (phi = pi)
  const Poly d_bad = Poly({1.0, 1.0}) * 0.5;  // zero at c = -1
  const RationalCM rc =
      RationalCM::from_polys(d_bad * d_bad * 4.0, Poly({0.25}), Poly(), d_bad);
  CHECK(rc.critical);
  CHECK_THROWS_AS(correlations_infinite(rc, CorrComponent::Q, 3), CriticalStateError);
  CHECK_THROWS_AS(correlation_length(rc), CriticalStateError);
}

TEST_CASE("dft_constant_gives_delta") {
  std::vector<std::complex<double>> hat(8, 1.0);
  const auto a = dft_inverse(hat);
  CHECK(std::abs(a[0] - 1.0) <= 1e-12);
  for (int n = 1; n < 8; ++n) CHECK(std::abs(a[n]) <= 1e-12);
}

TEST_CASE("dft_phase_gives_shift") {
  const int n = 16;
  std::vector<std::complex<double>> hat(n);
  for (int m = 0; m < n; ++m) hat[m] = std::polar(1.0, -2.0 * kPi * m / n);
  const auto a = dft_inverse(hat);
  CHECK(std::abs(a[1] - 1.0) <= 1e-12);
  for (int k = 0; k < n; ++k)
    if (k != 1) CHECK(std::abs(a[k]) <= 1e-12);
}

TEST_CASE("dft_roundtrip_identity") {
  auto rng = seeded_engine(151);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<std::complex<double>> seq(33);
  for (auto& v : seq) v = {dist(rng), dist(rng)};
  const auto back = dft_inverse(dft_forward(seq));
  for (size_t i = 0; i < seq.size(); ++i) CHECK(std::abs(back[i] - seq[i]) <= 1e-10);
}

TEST_CASE("dft_matches_circulant_diagonalization") {
  auto rng = seeded_engine(157);
  std::normal_distribution<double> dist(0.0, 1.0);
  const int n = 12;
  std::vector<std::complex<double>> row(n);
  for (auto& v : row) v = dist(rng);
  Eigen::MatrixXcd circ(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) circ(i, j) = row[(i - j + n) % n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(circ, false);
  auto key = [](const std::complex<double>& z) {
    return std::make_pair(std::round(z.real() * 1e8), std::round(z.imag() * 1e8));
  };
  std::vector<std::complex<double>> eig(n), hat = dft_forward(row);
  for (int i = 0; i < n; ++i) eig[i] = es.eigenvalues()(i);
  std::sort(eig.begin(), eig.end(), [&](auto a, auto b) { return key(a) < key(b); });
  std::sort(hat.begin(), hat.end(), [&](auto a, auto b) { return key(a) < key(b); });
  for (int i = 0; i < n; ++i) CHECK(std::abs(eig[i] - hat[i]) <= 1e-10);
}

TEST_CASE("z_expand_consistency") {
  const Poly p({0.5, -1.0, 2.0});
  const Poly zp = z_expand(p, 2);
  for (double phi : {0.3, 1.1, 2.7}) {
    const std::complex<double> z = std::polar(1.0, phi);
    const std::complex<double> expect = std::pow(z, 2) * p(std::cos(phi));
    CHECK(std::abs(zp(z) - expect) <= 1e-12);
  }
}

TEST_CASE("zpoly_minimal_expansion_has_no_trailing_zeros") {
  const Poly d({5.0, -4.0});
  const ZPoly minimal = ZPoly::expand(d);
  CHECK(minimal.k == 1);
  CHECK(minimal.trailing_zeros == 0);
  CHECK(minimal.coefficients.degree() == 2);
  // a larger common K introduces tracked origin roots
  const ZPoly padded = ZPoly::expand(d, 3);
  CHECK(padded.trailing_zeros == 2);
  // same function on the circle
  const std::complex<double> z = std::polar(1.0, 0.9);
  CHECK(std::abs(padded.coefficients(z) - std::pow(z, 2) * minimal.coefficients(z)) <= 1e-12);
}
