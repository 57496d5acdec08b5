#include "gmps/channels.hpp"
#include "gmps/random_maps.hpp"

#include <doctest.h>

#include <cmath>

using namespace gmps;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

GaussChannel teleport_channel(double s) {
  GaussChannel ch;
  ch.n_in = 1;
  ch.n_out = 1;
  ch.cm = tms_state(s);
  ch.pure = true;
  return ch;
}

GaussChannel constant_to_vacuum() {
  GaussChannel ch;
  ch.n_in = 1;
  ch.n_out = 1;
  ch.cm = CovMat::vacuum(2);
  ch.pure = true;
  return ch;
}

}  // namespace

TEST_CASE("tms_zero_squeezing_is_two_vacua") {
  CHECK(tms_state(0.0).entries == Eigen::Matrix4d::Identity());
}

TEST_CASE("tms_determinant_one") {
  for (double s : {0.5, 1.0, 3.0})
    CHECK(tms_state(s).entries.determinant() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("tms_unit_squeezing_entries") {
  const CovMat g = tms_state(1.0);
  CHECK(g.entries(0, 0) == doctest::Approx(3.7621956910836314).epsilon(1e-15));
  CHECK(g.entries(0, 2) == doctest::Approx(3.626860407847019).epsilon(1e-15));
  CHECK(purity(g).pure);
}

TEST_CASE("apply_channel_decoupled_outputs_vacuum") {
  auto rng = seeded_engine(5);
  const GaussChannel ch = constant_to_vacuum();
  for (int trial = 0; trial < 3; ++trial) {
    const CovMat out = apply_channel(ch, random_valid_cm(1, 0.8, rng));
    CHECK(max_abs(out.entries - Eigen::Matrix2d::Identity()) <= 1e-14);
  }
}

TEST_CASE("apply_channel_teleport_vacuum_identity_for_every_squeezing") {
  for (double s : {0.5, 1.0, 4.0, 12.0}) {
    const CovMat out = apply_channel(teleport_channel(s), CovMat::vacuum(1));
    CHECK(max_abs(out.entries - Eigen::Matrix2d::Identity()) <= 1e-12);
  }
}

TEST_CASE("apply_channel_teleport_limit_monotone") {
  auto rng = seeded_engine(13);
  for (int trial = 0; trial < 5; ++trial) {
    const CovMat g = random_valid_cm(1, 0.7, rng);
    double prev = std::numeric_limits<double>::infinity();
    for (double s : {2.0, 4.0, 6.0, 8.0}) {
      const double err = max_abs(apply_channel(teleport_channel(s), g).entries - g.entries);
      CHECK(err < prev);
      prev = err;
    }
  }
}

TEST_CASE("apply_symplectic_identity") {
  auto rng = seeded_engine(19);
  const CovMat g = random_valid_cm(2, 0.5, rng);
  CHECK(max_abs(apply_symplectic(SymplecticOp::identity(2), g).entries - g.entries) == 0.0);
}

TEST_CASE("apply_symplectic_squeezer_on_vacuum") {
  const double s = 0.9;
  const CovMat out =
      apply_symplectic(SymplecticOp::single_mode_squeezer(s), CovMat::vacuum(1));
  CHECK(out.entries(0, 0) == doctest::Approx(std::exp(2 * s)).epsilon(1e-14));
  CHECK(out.entries(1, 1) == doctest::Approx(std::exp(-2 * s)).epsilon(1e-14));
}

TEST_CASE("apply_symplectic_preserves_purity") {
  auto rng = seeded_engine(29);
  for (int trial = 0; trial < 5; ++trial) {
    const CovMat g = random_pure_cm(2, 0.6, rng);
    const SymplecticOp s = random_symplectic(2, 0.6, rng);
    CHECK(purity(apply_symplectic(s, g)).pure);
  }
}

TEST_CASE("apply_symplectic_rejects_nonsymplectic") {
  SymplecticOp bad{1, Eigen::Matrix2d::Identity() * 2.0};
  CHECK_THROWS_AS(apply_symplectic(bad, CovMat::vacuum(1)), std::invalid_argument);
}

TEST_CASE("compose_with_regularized_identity_is_near_identity") {
  auto rng = seeded_engine(7);
  GaussChannel one;
  one.n_in = 1;
  one.n_out = 1;
  one.cm = random_pure_cm(2, 0.5, rng);
  one.pure = true;
  const GaussChannel composed = channel_compose(teleport_channel(12.0), one);
  CHECK(max_abs(composed.cm.entries - one.cm.entries) <= 1e-6);
  CHECK(composed.pure);
}

TEST_CASE("compose_constant_to_vacuum_absorbs") {
  const GaussChannel cv = constant_to_vacuum();
  const GaussChannel composed = channel_compose(cv, cv);
  CHECK(max_abs(composed.cm.entries - Eigen::Matrix4d::Identity()) <= 1e-12);
}

TEST_CASE("compose_matches_sequential_application") {
  auto rng = seeded_engine(47);
  for (int trial = 0; trial < 5; ++trial) {
    GaussChannel ch1, ch2;
    ch1.n_in = 2;
    ch1.n_out = 1;
    ch1.cm = random_pure_cm(3, 0.5, rng);
    ch1.pure = true;
    ch2.n_in = 1;
    ch2.n_out = 2;
    ch2.cm = random_pure_cm(3, 0.5, rng);
    ch2.pure = true;
    const GaussChannel both = channel_compose(ch2, ch1);
    const CovMat in = random_valid_cm(2, 0.5, rng);
    const CovMat sequential = apply_channel(ch2, apply_channel(ch1, in));
    const CovMat at_once = apply_channel(both, in);
    CHECK(max_abs(sequential.entries - at_once.entries) <= 1e-9);
  }
}

TEST_CASE("compose_associativity") {
  auto rng = seeded_engine(53);
  for (int trial = 0; trial < 5; ++trial) {
    GaussChannel a, b, c;
    a.n_in = 1, a.n_out = 1, a.cm = random_pure_cm(2, 0.5, rng), a.pure = true;
    b.n_in = 1, b.n_out = 1, b.cm = random_pure_cm(2, 0.5, rng), b.pure = true;
    c.n_in = 1, c.n_out = 1, c.cm = random_pure_cm(2, 0.5, rng), c.pure = true;
    const GaussChannel left = channel_compose(channel_compose(c, b), a);
    const GaussChannel right = channel_compose(c, channel_compose(b, a));
    CHECK(max_abs(left.cm.entries - right.cm.entries) <= 1e-9);
  }
}

TEST_CASE("pure_channel_preserves_purity") {
  auto rng = seeded_engine(59);
  for (int trial = 0; trial < 5; ++trial) {
    GaussChannel ch;
    ch.n_in = 1 + trial % 2;
    ch.n_out = 1;
    ch.cm = random_pure_cm(ch.n_in + 1, 0.5, rng);
    ch.pure = true;
    const CovMat out = apply_channel(ch, random_pure_cm(ch.n_in, 0.5, rng));
    CHECK(std::abs(out.entries.determinant() - 1.0) <= 1e-7);
  }
}

TEST_CASE("apply_channel_equals_collapse") {
  auto rng = seeded_engine(61);
  for (int trial = 0; trial < 12; ++trial) {
    const int nin = 1 + trial % 4;
    const int nout = 1 + (trial / 4) % 3;
    GaussChannel ch;
    ch.n_in = nin;
    ch.n_out = nout;
    ch.cm = random_pure_cm(nin + nout, 0.5, rng);
    ch.pure = true;
    const CovMat gin = random_valid_cm(nin, 0.5, rng);
    const CovMat direct = apply_channel(ch, gin);
    std::vector<int> a(nin), b(nin);
    for (int i = 0; i < nin; ++i) {
      a[i] = i;
      b[i] = nin + i;
    }
    const CovMat collapsed = collapse_epr(direct_sum(gin, ch.cm), a, b);
    CHECK(max_abs(direct.entries - collapsed.entries) <= 1e-10);
  }
}

TEST_CASE("channel_from_symplectic_acts_like_the_symplectic") {
  auto rng = seeded_engine(67);
  const SymplecticOp s = random_symplectic(1, 0.5, rng);
  const CovMat in = random_valid_cm(1, 0.5, rng);
  const CovMat direct = apply_symplectic(s, in);
  // default regularization: the double representation of the cosh(24)-scale
  // Choi entries bounds the accuracy near 1e-6
  const GaussChannel ch = channel_from_symplectic(s);
  CHECK(ch.regularized);
  const double err12 = max_abs(apply_channel(ch, in).entries - direct.entries);
  CHECK(err12 <= 1e-5);
  const GaussChannel ch6 = channel_from_symplectic(s, 6.0);
  const double err6 = max_abs(apply_channel(ch6, in).entries - direct.entries);
  CHECK(err12 < err6);  // truncation dominates at mild regularization
}

TEST_CASE("make_channel_rejects_invalid_cm") {
  CovMat bad = CovMat::vacuum(2);
  bad.entries *= 0.5;
  CHECK_THROWS_AS(make_channel(1, 1, bad), std::invalid_argument);
}
