#include "qperm/statekit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "qperm/linalg.hpp"

namespace qperm {

StateVector::StateVector(Vector amplitudes, double norm_tol) : amps_(std::move(amplitudes)) {
    if (amps_.size() == 0) {
        throw DimensionMismatch("state vector must have positive dimension");
    }
    const double n = amps_.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > norm_tol) {
        std::ostringstream os;
        os << "state vector is not unit norm (norm " << n << ")";
        throw RangeError(os.str());
    }
}

StateVector StateVector::normalized(const Vector& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw RangeError("cannot normalize a zero or non-finite vector");
    }
    return StateVector(v / n);
}

StateVector StateVector::basis(Eigen::Index dim, Eigen::Index index) {
    if (index < 0 || index >= dim) {
        throw RangeError("basis index out of range");
    }
    Vector v = Vector::Zero(dim);
    v(index) = 1.0;
    return StateVector(std::move(v));
}

namespace {
std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(std::to_string(i));
    }
    return out;
}
}  // namespace

StateSet::StateSet(std::vector<StateVector> states, std::vector<std::string> labels)
    : states_(std::move(states)), labels_(std::move(labels)) {
    if (states_.size() != labels_.size()) {
        throw DimensionMismatch("label count does not match state count");
    }
    if (!states_.empty()) {
        dim_ = states_.front().dim();
        for (const auto& s : states_) {
            if (s.dim() != dim_) {
                throw DimensionMismatch("states in a set must share one dimension");
            }
        }
    }
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) {
        throw RangeError("state labels must be distinct");
    }
}

StateSet::StateSet(std::vector<StateVector> states)
    : StateSet(std::move(states), default_labels(states.size())) {}

StateSet StateSet::from_vectors(const std::vector<Vector>& vs) {
    std::vector<StateVector> states;
    states.reserve(vs.size());
    for (const auto& v : vs) {
        states.push_back(StateVector::normalized(v));
    }
    return StateSet(std::move(states));
}

Matrix StateSet::as_columns(Eigen::Index dim) const {
    const Eigen::Index d = dim < 0 ? dim_ : dim;
    if (d < dim_) {
        throw DimensionMismatch("requested dimension smaller than the state dimension");
    }
    Matrix out = Matrix::Zero(d, static_cast<Eigen::Index>(states_.size()));
    for (std::size_t i = 0; i < states_.size(); ++i) {
        out.col(static_cast<Eigen::Index>(i)).head(dim_) = states_[i].amplitudes();
    }
    return out;
}

GramMatrix::GramMatrix(Matrix entries, const Tolerances& tol) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
        throw DimensionMismatch("Gram matrix must be square and non-empty");
    }
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
        if (std::abs(entries_(i, i) - Complex(1.0, 0.0)) > tol.norm) {
            throw RangeError("Gram matrix diagonal must equal 1");
        }
    }
    const PsdResult r = psd_check(entries_, tol.psd, tol.herm);
    if (!r.psd) {
        std::ostringstream os;
        os << "Gram matrix is not positive semidefinite (min eigenvalue " << r.min_eigenvalue << ")";
        throw NotPositive(os.str());
    }
}

UnitaryMap::UnitaryMap(Matrix m, double unit_tol) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
        throw DimensionMismatch("unitary must be square and non-empty");
    }
    const double defect = unitarity_defect(m_);
    if (defect > unit_tol) {
        std::ostringstream os;
        os << "matrix is not unitary (|U*U - I| = " << defect << ")";
        throw NotUnitary(os.str());
    }
}

Vector UnitaryMap::apply(const Vector& v) const {
    if (v.size() != m_.cols()) {
        throw DimensionMismatch("vector dimension does not match the unitary");
    }
    return m_ * v;
}

double UnitaryMap::unitarity_defect(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw DimensionMismatch("unitary must be square");
    }
    return linalg::spectral_norm(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols()));
}

GramMatrix gram(const StateSet& s, const Tolerances& tol) {
    if (s.empty()) {
        throw RangeError("gram of an empty state set");
    }
    const Matrix cols = s.as_columns();
    return GramMatrix(cols.adjoint() * cols, tol);
}

namespace {

// Columns of the factor F (rank r x n) with F^* F = G, using eigenvalues above
// the relative floor.
Matrix gram_factor(const Matrix& g, const Tolerances& tol, Matrix* coeff_out = nullptr) {
    const auto eig = linalg::eigh(g, tol.herm);
    const double scale = std::max(std::abs(eig.values.minCoeff()), std::abs(eig.values.maxCoeff()));
    const double floor = tol.psd * scale;
    if (eig.values.minCoeff() < -floor) {
        std::ostringstream os;
        os << "Gram matrix is not positive semidefinite (min eigenvalue " << eig.values.minCoeff()
           << ")";
        throw NotPositive(os.str());
    }
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = eig.values.size() - 1; k >= 0; --k) {
        if (eig.values(k) > floor) {
            keep.push_back(k);
        }
    }
    const auto r = static_cast<Eigen::Index>(keep.size());
    const Eigen::Index n = g.rows();
    Matrix factor(r, n);
    Matrix coeff(n, r);
    for (Eigen::Index m = 0; m < r; ++m) {
        const double lam = eig.values(keep[m]);
        const Vector v = eig.vectors.col(keep[m]);
        factor.row(m) = std::sqrt(lam) * v.adjoint();
        coeff.col(m) = v / std::sqrt(lam);
    }
    if (coeff_out != nullptr) {
        *coeff_out = std::move(coeff);
    }
    return factor;
}

}  // namespace

StateSet realize_from_gram(const GramMatrix& g, const Tolerances& tol) {
    const Matrix factor = gram_factor(g.entries(), tol);
    std::vector<Vector> vs;
    vs.reserve(static_cast<std::size_t>(factor.cols()));
    for (Eigen::Index i = 0; i < factor.cols(); ++i) {
        vs.emplace_back(factor.col(i));
    }
    return StateSet::from_vectors(vs);
}

EquivalenceResult unitary_equivalence(const StateSet& a, const StateSet& b, double gram_tol,
                                      const Tolerances& tol) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("state sets have different cardinalities");
    }
    if (a.empty()) {
        throw RangeError("unitary equivalence of empty state sets");
    }
    const Eigen::Index dim = std::max(a.dim(), b.dim());
    const Matrix ca = a.as_columns(dim);
    const Matrix cb = b.as_columns(dim);
    const Matrix ga = ca.adjoint() * ca;
    const Matrix gb = cb.adjoint() * cb;

    EquivalenceResult result;
    result.max_gram_deviation = linalg::max_abs_entry(ga - gb);
    if (result.max_gram_deviation > gram_tol) {
        return result;
    }

    // Shared coefficients: E = A C is orthonormal, and F = B C spans span(B)
    // with the same coordinates, so F E^* sends a_i to b_i.
    Matrix coeff;
    gram_factor(ga, tol, &coeff);
    const Matrix e = ca * coeff;
    Matrix f = cb * coeff;
    // Polar-orthonormalize F so that U is unitary even when the Grams agree
    // only to within gram_tol.
    if (f.cols() > 0) {
        Eigen::JacobiSVD<Matrix> svd(f, Eigen::ComputeThinU | Eigen::ComputeThinV);
        f = svd.matrixU() * svd.matrixV().adjoint();
    }
    const Matrix e_perp = linalg::orthogonal_complement(e, dim);
    const Matrix f_perp = linalg::orthogonal_complement(f, dim);
    Matrix u = f * e.adjoint() + f_perp * e_perp.adjoint();

    UnitaryMap map(std::move(u), tol.unit);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        const double miss = (map.matrix() * ca.col(col) - cb.col(col)).norm();
        if (miss > tol.map) {
            std::ostringstream os;
            os << "constructed unitary misses state " << i << " by " << miss;
            throw Error(os.str());
        }
    }
    result.unitary = std::move(map);
    return result;
}

std::optional<std::pair<std::size_t, std::size_t>> find_low_overlap_pair(const StateSet& s,
                                                                          double delta) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            const Complex ov = s[i].amplitudes().dot(s[j].amplitudes());
            if (std::abs(ov) < delta) {
                return std::make_pair(i, j);
            }
        }
    }
    return std::nullopt;
}

bool check_min_overlap(const StateSet& s, double delta) {
    return !find_low_overlap_pair(s, delta).has_value();
}

void require_min_overlap(const StateSet& s, double delta) {
    if (const auto pair = find_low_overlap_pair(s, delta)) {
        const auto [i, j] = *pair;
        const double m = std::abs(s[i].amplitudes().dot(s[j].amplitudes()));
        throw OrthogonalPairError(i, j, m, s.labels()[i], s.labels()[j]);
    }
}

PsdResult psd_check(const Matrix& h, double tol, double herm_tol) {
    const auto eig = linalg::eigh(h, herm_tol);
    const double norm = std::max(std::abs(eig.values.minCoeff()), std::abs(eig.values.maxCoeff()));
    PsdResult r;
    r.min_eigenvalue = eig.values.minCoeff();
    r.psd = r.min_eigenvalue >= -tol * norm;
    return r;
}

RealVector weighted_gram_spectrum(const Matrix& g, const std::vector<double>& probs) {
    if (g.rows() != static_cast<Eigen::Index>(probs.size()) || g.rows() != g.cols()) {
        throw DimensionMismatch("weights do not match the Gram matrix");
    }
    Matrix w = g;
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            w(i, j) *= std::sqrt(probs[static_cast<std::size_t>(i)] * probs[static_cast<std::size_t>(j)]);
        }
    }
    return linalg::eigh(w, 1e-9).values;
}

double fidelity(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("fidelity of vectors with different dimensions");
    }
    return std::norm(a.dot(b));
}

}  // namespace qperm
