#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qperm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Numerical tolerances shared by every module. Defaults are the values the
// feasibility checks were calibrated against; callers tighten or loosen them
// when overlaps get small (the cloning criterion divides by overlaps).
struct Tolerances {
    double norm = 1e-10;        // unit-norm check on state vectors
    double herm = 1e-10;        // Hermiticity check
    double psd = 1e-9;          // relative eigenvalue floor (times spectral norm)
    double roundtrip = 1e-8;    // gram(realize(G)) vs G
    double map = 1e-8;          // |U a_i - b_i|
    double unit = 1e-9;         // |U*U - I|
    double gram = 1e-8;         // Gram-equality threshold
    double min_overlap = 1e-6;  // smallest admissible |<psi_i|psi_j>|
    double mix = 1e-12;         // relative eigenvalue cutoff for mixed ancillas
    double del = 1e-8;          // deleter fidelity / purity gate
    double trace = 1e-10;       // trace-one check on density matrices

    void validate() const;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class NotHermitian : public Error {
public:
    using Error::Error;
};

class NotPositive : public Error {
public:
    using Error::Error;
};

class NotUnitary : public Error {
public:
    using Error::Error;
};

// Raised when a state set contains a pair whose overlap modulus is below the
// configured floor. Carries the offending indices.
class OrthogonalPairError : public Error {
public:
    OrthogonalPairError(std::size_t i, std::size_t j, double modulus, const std::string& labelI,
                        const std::string& labelJ);

    std::size_t first() const noexcept { return first_; }
    std::size_t second() const noexcept { return second_; }
    double modulus() const noexcept { return modulus_; }

private:
    std::size_t first_;
    std::size_t second_;
    double modulus_;
};

}  // namespace qperm
