#include "qperm/linalg.hpp"

#include <cmath>
#include <sstream>

namespace qperm {

void Tolerances::validate() const {
    const double all[] = {norm, herm, psd, roundtrip, map, unit, gram, min_overlap, mix, del, trace};
    for (double t : all) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw RangeError("tolerances must be positive and finite");
        }
    }
}

namespace {
std::string orthogonal_message(std::size_t i, std::size_t j, double modulus, const std::string& li,
                               const std::string& lj) {
    std::ostringstream os;
    os << "states '" << li << "' (index " << i << ") and '" << lj << "' (index " << j
       << ") are orthogonal or nearly so: overlap modulus " << modulus
       << " is below the minimum-overlap floor";
    return os.str();
}
}  // namespace

OrthogonalPairError::OrthogonalPairError(std::size_t i, std::size_t j, double modulus,
                                         const std::string& labelI, const std::string& labelJ)
    : Error(orthogonal_message(i, j, modulus, labelI, labelJ)), first_(i), second_(j),
      modulus_(modulus) {}

}  // namespace qperm

namespace qperm::linalg {

double hermiticity_defect(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw DimensionMismatch("expected a square matrix");
    }
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

HermitianEigen eigh(const Matrix& a, double herm_tol) {
    if (a.size() == 0) {
        throw DimensionMismatch("empty matrix");
    }
    const double defect = hermiticity_defect(a);
    const double scale = std::max(1.0, max_abs_entry(a));
    if (defect > herm_tol * scale) {
        std::ostringstream os;
        os << "matrix is not Hermitian (defect " << defect << ")";
        throw NotHermitian(os.str());
    }
    const Matrix h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw Error("Hermitian eigendecomposition did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double spectral_norm(const Matrix& a) {
    if (a.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

double max_abs_entry(const Matrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Vector kron(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

Vector kron_power(const Vector& v, int power) {
    Vector out = Vector::Ones(1);
    for (int k = 0; k < power; ++k) {
        out = kron(out, v);
    }
    return out;
}

Matrix reduce_to_left(const Vector& psi, Eigen::Index left_dim, Eigen::Index right_dim) {
    if (psi.size() != left_dim * right_dim) {
        throw DimensionMismatch("bipartite split does not match vector size");
    }
    // Row-major reshape: m(l, r) = psi(l * right_dim + r).
    Matrix m(left_dim, right_dim);
    for (Eigen::Index l = 0; l < left_dim; ++l) {
        m.row(l) = psi.segment(l * right_dim, right_dim).transpose();
    }
    return m * m.adjoint();
}

Matrix reduce_to_right(const Vector& psi, Eigen::Index left_dim, Eigen::Index right_dim) {
    if (psi.size() != left_dim * right_dim) {
        throw DimensionMismatch("bipartite split does not match vector size");
    }
    Matrix m(left_dim, right_dim);
    for (Eigen::Index l = 0; l < left_dim; ++l) {
        m.row(l) = psi.segment(l * right_dim, right_dim).transpose();
    }
    return m.transpose() * m.conjugate();
}

Vector pad(const Vector& v, Eigen::Index dim) {
    if (dim < v.size()) {
        throw DimensionMismatch("cannot pad into a smaller dimension");
    }
    Vector out = Vector::Zero(dim);
    out.head(v.size()) = v;
    return out;
}

Vector canonical_phase(const Vector& v) {
    if (v.size() == 0) {
        return v;
    }
    const double top = v.cwiseAbs().maxCoeff();
    if (top == 0.0) {
        return v;
    }
    Eigen::Index pick = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) >= top * (1.0 - 1e-12)) {
            pick = i;
            break;
        }
    }
    const Complex phase = std::conj(v(pick)) / std::abs(v(pick));
    return v * phase;
}

Matrix orthogonal_complement(const Matrix& basis, Eigen::Index dim) {
    const Eigen::Index r = basis.cols();
    if (r == 0) {
        return Matrix::Identity(dim, dim);
    }
    if (basis.rows() != dim || r > dim) {
        throw DimensionMismatch("basis does not fit the ambient dimension");
    }
    Eigen::HouseholderQR<Matrix> qr(basis);
    const Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
    return q.rightCols(dim - r);
}

}  // namespace qperm::linalg
