#pragma once

#include <array>
#include <vector>

#include "qperm/statekit.hpp"

namespace qperm {

// Qubit order: (input, Alice's half of the pair, Bob's half); the pair starts
// in Phi+. Bell outcomes are indexed Phi+ = 0, Psi+ = 1, Phi- = 2, Psi- = 3
// with corrections I, X, Z, XZ (X applied first, then Z).

enum class MeasurementBasis { Bell, Computational };

struct TeleportTrace {
    StateVector input;
    std::array<double, 4> outcome_probs{};
    std::vector<StateVector> corrected_outputs;  // one per outcome
    std::array<double, 4> fidelities{};
};

TeleportTrace teleport(const StateVector& psi);

/// Born probabilities of the four outcomes on the first two qubits.
/// MeasurementBasis::Computational is a broken protocol kept as a negative
/// control.
std::array<double, 4> outcome_distribution(const StateVector& psi,
                                           MeasurementBasis basis = MeasurementBasis::Bell);

inline constexpr double kIndependenceTol = 1e-10;

/// True iff every sample's outcome distribution is uniform within 1e-10
/// (max norm).
bool independence_check(const std::vector<StateVector>& sample,
                        MeasurementBasis basis = MeasurementBasis::Bell);

}  // namespace qperm
