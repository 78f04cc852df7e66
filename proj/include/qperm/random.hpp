#pragma once

#include <cstdint>
#include <random>

#include "qperm/statekit.hpp"

namespace qperm::rnd {

using Engine = std::mt19937_64;

// Independent stream for item `index` of a run seeded with `base`.
Engine stream(std::uint64_t base, std::uint64_t index);

Vector gaussian_vector(Engine& rng, Eigen::Index dim);

/// Haar-random pure state.
StateVector haar_state(Engine& rng, Eigen::Index dim);

/// Haar-random unitary (QR of a complex Ginibre matrix with the R-diagonal
/// phases removed).
Matrix haar_unitary(Engine& rng, Eigen::Index dim);

}  // namespace qperm::rnd
