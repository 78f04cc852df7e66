#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qperm/core.hpp"

namespace qperm {

/// A unit-norm pure state. Construction checks the norm; use `normalized` to
/// build one from an arbitrary non-zero vector.
class StateVector {
public:
    explicit StateVector(Vector amplitudes, double norm_tol = Tolerances{}.norm);

    static StateVector normalized(const Vector& v);
    static StateVector basis(Eigen::Index dim, Eigen::Index index);

    const Vector& amplitudes() const noexcept { return amps_; }
    Eigen::Index dim() const noexcept { return amps_.size(); }

private:
    Vector amps_;
};

/// Indexed family of pure states sharing one dimension. Labels are distinct.
class StateSet {
public:
    StateSet() = default;
    StateSet(std::vector<StateVector> states, std::vector<std::string> labels);
    // Labels default to "0", "1", ...
    explicit StateSet(std::vector<StateVector> states);

    static StateSet from_vectors(const std::vector<Vector>& vs);

    std::size_t size() const noexcept { return states_.size(); }
    bool empty() const noexcept { return states_.empty(); }
    Eigen::Index dim() const noexcept { return dim_; }
    const StateVector& operator[](std::size_t i) const { return states_.at(i); }
    const std::vector<StateVector>& states() const noexcept { return states_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    // Columns are the amplitude vectors, zero-padded to `dim` if larger.
    Matrix as_columns(Eigen::Index dim = -1) const;

private:
    std::vector<StateVector> states_;
    std::vector<std::string> labels_;
    Eigen::Index dim_ = 0;
};

/// Hermitian, unit-diagonal, PSD matrix of pairwise inner products.
class GramMatrix {
public:
    // Validates the invariants against `tol`; throws NotHermitian / NotPositive /
    // RangeError (diagonal) on violation.
    explicit GramMatrix(Matrix entries, const Tolerances& tol = {});

    const Matrix& entries() const noexcept { return entries_; }
    Eigen::Index size() const noexcept { return entries_.rows(); }
    Complex operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

private:
    Matrix entries_;
};

class UnitaryMap {
public:
    explicit UnitaryMap(Matrix m, double unit_tol = Tolerances{}.unit);

    const Matrix& matrix() const noexcept { return m_; }
    Eigen::Index dim() const noexcept { return m_.rows(); }
    Vector apply(const Vector& v) const;

    // Spectral-norm distance of U^*U from the identity.
    static double unitarity_defect(const Matrix& m);

private:
    Matrix m_;
};

struct PsdResult {
    bool psd = false;
    double min_eigenvalue = 0.0;
};

struct EquivalenceResult {
    std::optional<UnitaryMap> unitary;  // empty when the Grams differ
    double max_gram_deviation = 0.0;

    bool equivalent() const noexcept { return unitary.has_value(); }
};

/// Inner-product matrix, conjugate-linear in the first slot:
/// G(i, j) = <s_i|s_j>.
GramMatrix gram(const StateSet& s, const Tolerances& tol = {});

/// States (in dimension equal to the numerical rank of G) whose Gram matrix is G.
StateSet realize_from_gram(const GramMatrix& g, const Tolerances& tol = {});

/// Builds U with U a_i = b_i when the two sets have equal Gram matrices
/// within `gram_tol`; both sets are embedded in dimension max(A.dim, B.dim).
EquivalenceResult unitary_equivalence(const StateSet& a, const StateSet& b, double gram_tol,
                                      const Tolerances& tol = {});

/// True iff every pairwise overlap modulus is >= delta.
bool check_min_overlap(const StateSet& s, double delta);

/// First pair (i < j) whose overlap modulus is below delta.
std::optional<std::pair<std::size_t, std::size_t>> find_low_overlap_pair(const StateSet& s,
                                                                          double delta);

/// Throws OrthogonalPairError naming the first offending pair.
void require_min_overlap(const StateSet& s, double delta);

/// PSD test relative to the spectral norm: min eigenvalue >= -tol * |H|.
PsdResult psd_check(const Matrix& h, double tol, double herm_tol = Tolerances{}.herm);

/// Nonzero spectrum of sum_i p_i |s_i><s_i| via the weighted Gram
/// sqrt(p_i p_j) G(i, j). Returned ascending.
RealVector weighted_gram_spectrum(const Matrix& gram, const std::vector<double>& probs);

double fidelity(const Vector& a, const Vector& b);

}  // namespace qperm
