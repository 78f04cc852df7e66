#include "qperm/teleport.hpp"

#include <cmath>

#include "qperm/linalg.hpp"

namespace qperm {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void require_qubit(const StateVector& psi) {
    if (psi.dim() != 2) {
        throw DimensionMismatch("teleportation input must be a qubit");
    }
}

// Two-qubit basis vectors for the measurement on (input, Alice).
std::array<Vector, 4> measurement_vectors(MeasurementBasis basis) {
    std::array<Vector, 4> out;
    for (auto& v : out) {
        v = Vector::Zero(4);
    }
    if (basis == MeasurementBasis::Computational) {
        for (int k = 0; k < 4; ++k) {
            out[static_cast<std::size_t>(k)](k) = 1.0;
        }
        return out;
    }
    // |00>,|01>,|10>,|11> -> indices 0..3
    out[0](0) = kInvSqrt2;  // Phi+
    out[0](3) = kInvSqrt2;
    out[1](1) = kInvSqrt2;  // Psi+
    out[1](2) = kInvSqrt2;
    out[2](0) = kInvSqrt2;  // Phi-
    out[2](3) = -kInvSqrt2;
    out[3](1) = kInvSqrt2;  // Psi-
    out[3](2) = -kInvSqrt2;
    return out;
}

Matrix correction(int outcome) {
    Matrix x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    Matrix z(2, 2);
    z << 1.0, 0.0, 0.0, -1.0;
    switch (outcome) {
        case 1:
            return x;
        case 2:
            return z;
        case 3:
            return z * x;
        default:
            return Matrix::Identity(2, 2);
    }
}

Vector joint_state(const StateVector& psi) {
    Vector bell = Vector::Zero(4);
    bell(0) = kInvSqrt2;
    bell(3) = kInvSqrt2;
    return linalg::kron(psi.amplitudes(), bell);
}

// Bob's unnormalized state after projecting (input, Alice) onto `m`.
Vector bob_branch(const Vector& joint, const Vector& m) {
    Vector bob = Vector::Zero(2);
    for (Eigen::Index ab = 0; ab < 4; ++ab) {
        bob += std::conj(m(ab)) * joint.segment(ab * 2, 2);
    }
    return bob;
}

}  // namespace

TeleportTrace teleport(const StateVector& psi) {
    require_qubit(psi);
    const Vector joint = joint_state(psi);
    const auto basis = measurement_vectors(MeasurementBasis::Bell);
    TeleportTrace trace{psi, {}, {}, {}};
    for (int k = 0; k < 4; ++k) {
        const Vector bob = bob_branch(joint, basis[static_cast<std::size_t>(k)]);
        const double prob = bob.squaredNorm();
        trace.outcome_probs[static_cast<std::size_t>(k)] = prob;
        const StateVector out = StateVector::normalized(correction(k) * bob);
        trace.fidelities[static_cast<std::size_t>(k)] = fidelity(psi.amplitudes(), out.amplitudes());
        trace.corrected_outputs.push_back(out);
    }
    return trace;
}

std::array<double, 4> outcome_distribution(const StateVector& psi, MeasurementBasis basis) {
    require_qubit(psi);
    const Vector joint = joint_state(psi);
    const auto vectors = measurement_vectors(basis);
    std::array<double, 4> probs{};
    for (std::size_t k = 0; k < 4; ++k) {
        probs[k] = bob_branch(joint, vectors[k]).squaredNorm();
    }
    return probs;
}

bool independence_check(const std::vector<StateVector>& sample, MeasurementBasis basis) {
    if (sample.empty()) {
        throw RangeError("independence check needs at least one state");
    }
    for (const auto& psi : sample) {
        for (double p : outcome_distribution(psi, basis)) {
            if (std::abs(p - 0.25) > kIndependenceTol) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace qperm
