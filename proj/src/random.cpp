#include "qperm/random.hpp"

namespace qperm::rnd {

Engine stream(std::uint64_t base, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return Engine(seq);
}

Vector gaussian_vector(Engine& rng, Eigen::Index dim) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double re = g(rng);
        const double im = g(rng);
        v(i) = Complex(re, im);
    }
    return v;
}

StateVector haar_state(Engine& rng, Eigen::Index dim) {
    return StateVector::normalized(gaussian_vector(rng, dim));
}

Matrix haar_unitary(Engine& rng, Eigen::Index dim) {
    Matrix z(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        z.col(j) = gaussian_vector(rng, dim);
    }
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0.0) {
            q.col(j) *= d / std::abs(d);
        }
    }
    return q;
}

}  // namespace qperm::rnd
