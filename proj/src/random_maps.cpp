#include "gmps/random_maps.hpp"

#include <cstdlib>

namespace gmps {

std::mt19937_64 seeded_engine(std::optional<uint64_t> seed) {
  if (seed) return std::mt19937_64(*seed);
  if (const char* env = std::getenv("GMPS_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return std::mt19937_64(v);
  }
  return std::mt19937_64(0x9e3779b97f4a7c15ull);
}

Eigen::MatrixXd random_symmetric(int dim, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, scale);
  Eigen::MatrixXd h(dim, dim);
  for (int i = 0; i < dim; ++i) {
    h(i, i) = dist(rng);
    for (int j = i + 1; j < dim; ++j) h(i, j) = h(j, i) = dist(rng);
  }
  return h;
}

SymplecticOp random_symplectic(int n_modes, double scale, std::mt19937_64& rng) {
  return SymplecticOp::from_generator(random_symmetric(2 * n_modes, scale, rng));
}

CovMat random_pure_cm(int n_modes, double scale, std::mt19937_64& rng) {
  const SymplecticOp s = random_symplectic(n_modes, scale, rng);
  CovMat g;
  g.n_modes = n_modes;
  g.ordering = Ordering::Interleaved;
  g.entries = s.s * s.s.transpose();
  g.entries = 0.5 * (g.entries + g.entries.transpose()).eval();
  return g;
}

CovMat random_valid_cm(int n_modes, double scale, std::mt19937_64& rng) {
  const SymplecticOp s = random_symplectic(n_modes, scale, rng);
  std::uniform_real_distribution<double> nu(1.0, 2.5);
  Eigen::VectorXd d(2 * n_modes);
  for (int k = 0; k < n_modes; ++k) d(2 * k) = d(2 * k + 1) = nu(rng);
  CovMat g;
  g.n_modes = n_modes;
  g.ordering = Ordering::Interleaved;
  g.entries = s.s * d.asDiagonal() * s.s.transpose();
  g.entries = 0.5 * (g.entries + g.entries.transpose()).eval();
  return g;
}

GaussChannel random_pure_map(int bonds, int d_phys, std::mt19937_64& rng, double scale) {
  const CovMat cm = random_pure_cm(2 * bonds + d_phys, scale, rng);
  GaussChannel ch;
  ch.n_in = 2 * bonds;
  ch.n_out = d_phys;
  ch.cm = cm;
  ch.pure = true;
  return ch;
}

}  // namespace gmps
