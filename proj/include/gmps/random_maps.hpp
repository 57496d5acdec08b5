#pragma once

#include "gmps/channels.hpp"

#include <optional>
#include <random>

namespace gmps {

/// Engine seeded from the explicit argument, the GMPS_SEED environment
/// variable, or a fixed default, in that order.
std::mt19937_64 seeded_engine(std::optional<uint64_t> seed = std::nullopt);

Eigen::MatrixXd random_symmetric(int dim, double scale, std::mt19937_64& rng);

SymplecticOp random_symplectic(int n_modes, double scale, std::mt19937_64& rng);

/// Pure CM gamma = S S^T from a random symplectic.
CovMat random_pure_cm(int n_modes, double scale, std::mt19937_64& rng);

/// Mixed but valid CM: S diag(nu_k I_2) S^T with nu_k >= 1.
CovMat random_valid_cm(int n_modes, double scale, std::mt19937_64& rng);

/// Random pure 2M -> d_phys Gaussian map for GMPS constructions.
GaussChannel random_pure_map(int bonds, int d_phys, std::mt19937_64& rng, double scale = 0.45);

}  // namespace gmps
