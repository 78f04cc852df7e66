#pragma once

#include <optional>
#include <vector>

#include "qperm/statekit.hpp"

namespace qperm {

// Register layout for every deleter: (system1, system2, environment), row-major,
// index = (s1 * d + s2) * env_dim + e.

struct DeletionTrace {
    bool valid = false;
    StateSet environment_states;          // the |A_i>
    std::vector<double> residual_fidelity;  // <psi_i 0| rho_12 |psi_i 0>
    std::vector<double> environment_purity; // Tr rho_E^2
};

/// Swaps register 2 with the first d levels of the environment (identity on
/// the remaining levels), then applies `env_unitary` to the environment.
/// Requires env_dim >= d + 1.
UnitaryMap make_swap_deleter(Eigen::Index system_dim, Eigen::Index env_dim,
                             const std::optional<Matrix>& env_unitary = std::nullopt,
                             const Tolerances& tol = {});

/// Applies U to |psi_i>|psi_i>|env_init> and inspects the outputs.
DeletionTrace is_valid_deleter(const UnitaryMap& u, const StateSet& psi, const StateVector& blank,
                               const StateVector& env_init, const Tolerances& tol = {});

/// Lemma-1 unitary W with W |A_i> = |psi_i>. Throws GramMismatch when the
/// environment record does not reproduce the Gram matrix of psi.
UnitaryMap recover_deleted(const StateSet& psi, const StateSet& env, const Tolerances& tol = {});

class GramMismatch : public Error {
public:
    GramMismatch(const std::string& what, double deviation) : Error(what), deviation_(deviation) {}
    double deviation() const noexcept { return deviation_; }

private:
    double deviation_;
};

struct CollapseBranch {
    Eigen::Index outcome = 0;
    double probability = 0.0;
    Matrix correction;  // maps the post-measurement state |outcome> to |0>
};

/// Measure-and-rotate "deletion" in the computational basis. Uses wavefunction
/// collapse, so it is not a trace-preserving unitary process on the inputs.
struct CollapseDemo {
    std::vector<CollapseBranch> branches;
    bool outside_physical_model = true;
};

CollapseDemo collapse_deleter_demo(const StateVector& psi);

}  // namespace qperm
