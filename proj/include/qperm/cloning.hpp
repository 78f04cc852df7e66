#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qperm/statekit.hpp"

namespace qperm {

/// One ancilla rho_i as a positive mixture of pure components.
struct AncillaDecomposition {
    std::vector<double> weights;
    std::vector<Vector> components;  // unit vectors
};

/// Labelled family of density matrices. Built either from density matrices
/// (decomposed by eigendecomposition) or directly from pure states, in which
/// case each ancilla keeps its given vector, phase included.
class MixedStateSet {
public:
    static MixedStateSet from_density_matrices(std::vector<Matrix> rhos,
                                               std::vector<std::string> labels,
                                               const Tolerances& tol = {});
    static MixedStateSet from_density_matrices(std::vector<Matrix> rhos, const Tolerances& tol = {});
    static MixedStateSet from_pure(const StateSet& states);

    std::size_t size() const noexcept { return rhos_.size(); }
    Eigen::Index dim() const noexcept { return dim_; }
    const Matrix& density(std::size_t i) const { return rhos_.at(i); }
    const std::vector<Matrix>& densities() const noexcept { return rhos_; }
    const AncillaDecomposition& decomposition(std::size_t i) const { return parts_.at(i); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    bool all_pure() const;

private:
    std::vector<Matrix> rhos_;
    std::vector<AncillaDecomposition> parts_;
    std::vector<std::string> labels_;
    Eigen::Index dim_ = 0;
};

/// Verdict of the Gram-cancellation criterion. Rows/columns of `h` are indexed
/// by (state index, ancilla component index) pairs listed in `index`.
struct FeasibilityReport {
    bool feasible = false;
    Matrix h;
    double min_eigenvalue = 0.0;
    std::optional<GramMatrix> witness_gram;
    std::vector<std::pair<std::size_t, std::size_t>> index;
};

/// Decides whether some CPTP map sends rho_i to |psi_i> for every i.
/// H[(i,k),(j,l)] = <a_k^(i)|a_l^(j)> / <psi_i|psi_j> must be PSD.
FeasibilityReport generation_feasible(const StateSet& psi, const MixedStateSet& ancilla,
                                      const Tolerances& tol = {});

/// Decides |psi_i>^(x)n (x) rho_i -> |psi_i>^(x)(n+1) from the joint input and
/// output Gram matrices (powers of the single-copy overlaps, no cancellation).
FeasibilityReport cloning_feasible(const StateSet& psi, const MixedStateSet& ancilla, int copies,
                                   const Tolerances& tol = {});

/// Register sizes of a constructed cloner. Input layout is
/// (system, blank, ancilla, environment); output layout is
/// (system, clone, joint ancilla+environment).
struct ClonerLayout {
    Eigen::Index system = 0;
    Eigen::Index ancilla = 0;
    Eigen::Index environment = 0;

    Eigen::Index total() const noexcept { return system * system * ancilla * environment; }
};

struct Cloner {
    UnitaryMap unitary;
    StateSet environment;  // the |C_i>, in dimension ancilla * environment
    ClonerLayout layout;
    std::vector<double> fidelities;
};

class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& what, FeasibilityReport report)
        : Error(what), report_(std::move(report)) {}
    const FeasibilityReport& report() const noexcept { return report_; }

private:
    FeasibilityReport report_;
};

/// Builds U with U |psi_i>|0>|a_i>|A> = |psi_i>|psi_i>|C_i>. Throws
/// InfeasibleError (with the report) if no such map exists.
Cloner construct_cloner(const StateSet& psi, const StateSet& ancilla, const Tolerances& tol = {});

struct ClassicalAncillaReport {
    bool commuting = false;
    bool feasible = false;
    bool supports_orthogonal = false;
};

ClassicalAncillaReport classical_ancilla_check(const StateSet& psi, const MixedStateSet& ancilla,
                                               const Tolerances& tol = {});

}  // namespace qperm
