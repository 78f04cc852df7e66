#pragma once

#include <vector>

#include "qperm/statekit.hpp"

namespace qperm {

/// Pure-state source: signal states with prior probabilities.
class Ensemble {
public:
    Ensemble(StateSet states, std::vector<double> probs);

    const StateSet& states() const noexcept { return states_; }
    const std::vector<double>& probs() const noexcept { return probs_; }

private:
    StateSet states_;
    std::vector<double> probs_;
};

class DensityMatrix {
public:
    explicit DensityMatrix(Matrix m, const Tolerances& tol = {});

    const Matrix& matrix() const noexcept { return m_; }
    Eigen::Index dim() const noexcept { return m_.rows(); }
    RealVector eigenvalues() const;

private:
    Matrix m_;
};

DensityMatrix density_matrix(const Ensemble& e);

/// -sum lambda log2 lambda, eigenvalues below 1e-14 count as zero.
double von_neumann_entropy(const DensityMatrix& rho);

double shannon_entropy(const std::vector<double>& p);

/// Entropy of {|a>, |b>; p, 1-p} with |<a|b>| = overlap_modulus, from the
/// closed-form 2x2 weighted-Gram spectrum.
double two_state_entropy(double overlap_modulus, double p);

bool ensembles_equivalent(const Ensemble& a, const Ensemble& b, double tol = 1e-9);

/// Sum of the keptDim largest eigenvalues of rho^(x)n for a qubit rho with
/// eigenvalues (lambda, 1 - lambda), lambda >= 1/2. keptDim is an integer
/// carried in a double (exact for powers of two up to 2^1023).
double schumacher_weight(double lambda, int n, double kept_dim);

struct CompressionPoint {
    int n = 0;
    double rate = 0.0;
    int kept_qubits = 0;     // log2 of kept_dim
    double kept_dim = 1.0;   // 2^kept_qubits
    double retained_weight = 0.0;
    double avg_fidelity_lb = 0.0;
};

inline constexpr int kMaxBlockLength = 256;

/// Projection-based Schumacher scheme for two equiprobable pure qubit signals
/// with overlap modulus `overlap`. avg_fidelity_lb = E_I[<psi_I|P|psi_I>^2],
/// evaluated by dynamic programming over eigenbasis counts.
CompressionPoint schumacher_avg_fidelity(double overlap, int n, double rate,
                                         int n_max = kMaxBlockLength);

/// Rows for every (n, rate) pair, n outer, rate inner, in input order.
std::vector<CompressionPoint> rate_scan(double overlap, const std::vector<int>& ns,
                                        const std::vector<double>& rates,
                                        int n_max = kMaxBlockLength);

}  // namespace qperm
