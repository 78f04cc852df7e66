#include "qperm/compression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qperm/linalg.hpp"

namespace qperm {

namespace {

constexpr double kZeroEigen = 1e-14;

double plogp(double x) {
    return x > kZeroEigen ? -x * std::log2(x) : 0.0;
}

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Row n of Pascal's triangle; exact while the entries stay below 2^53.
std::vector<double> binomial_row(int n) {
    std::vector<double> row(static_cast<std::size_t>(n + 1), 1.0);
    for (int k = 1; k <= n; ++k) {
        row[static_cast<std::size_t>(k)] = row[static_cast<std::size_t>(k - 1)] * (n - k + 1) / k;
    }
    return row;
}

// Number of kept eigenvectors in each class k (k factors of lambda), filling
// classes greedily by eigenvalue with smaller k first on ties.
std::vector<double> kept_per_class(double lambda, int n, double kept_dim) {
    std::vector<int> order(static_cast<std::size_t>(n + 1));
    std::iota(order.begin(), order.end(), 0);
    const double ll = std::log(lambda);
    const double lr = lambda < 1.0 ? std::log(1.0 - lambda) : -INFINITY;
    auto log_eig = [&](int k) {
        const double a = k == 0 ? 0.0 : k * ll;
        const double b = (n - k) == 0 ? 0.0 : (n - k) * lr;
        return a + b;
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return log_eig(a) > log_eig(b); });

    const std::vector<double> sizes = binomial_row(n);
    if (kept_dim >= std::ldexp(1.0, n)) {
        return sizes;
    }
    std::vector<double> kept(static_cast<std::size_t>(n + 1), 0.0);
    double remaining = kept_dim;
    for (int k : order) {
        if (remaining <= 0.0) {
            break;
        }
        const double take = std::min(sizes[static_cast<std::size_t>(k)], remaining);
        kept[static_cast<std::size_t>(k)] = take;
        remaining -= take;
    }
    return kept;
}

void check_kept_dim(int n, double kept_dim) {
    if (n < 1) {
        throw RangeError("block length must be positive");
    }
    if (!(kept_dim >= 1.0) || kept_dim > std::ldexp(1.0, n) || kept_dim != std::floor(kept_dim)) {
        throw RangeError("kept dimension must be an integer in [1, 2^n]");
    }
}

}  // namespace

Ensemble::Ensemble(StateSet states, std::vector<double> probs)
    : states_(std::move(states)), probs_(std::move(probs)) {
    if (states_.size() != probs_.size()) {
        throw DimensionMismatch("probability vector length does not match state count");
    }
    if (states_.empty()) {
        throw RangeError("ensemble is empty");
    }
    double total = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) {
            throw RangeError("probabilities must be non-negative");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw RangeError("probabilities must sum to 1");
    }
}

DensityMatrix::DensityMatrix(Matrix m, const Tolerances& tol) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
        throw DimensionMismatch("density matrix must be square and non-empty");
    }
    if (std::abs(m_.trace() - Complex(1.0, 0.0)) > tol.trace) {
        throw RangeError("density matrix must have unit trace");
    }
    const PsdResult r = psd_check(m_, tol.psd, tol.herm);
    if (!r.psd) {
        throw NotPositive("density matrix is not positive semidefinite");
    }
}

RealVector DensityMatrix::eigenvalues() const {
    return linalg::eigh(m_, Tolerances{}.herm).values;
}

DensityMatrix density_matrix(const Ensemble& e) {
    const Eigen::Index d = e.states().dim();
    Matrix rho = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < e.probs().size(); ++i) {
        const Vector& v = e.states()[i].amplitudes();
        rho += e.probs()[i] * (v * v.adjoint());
    }
    return DensityMatrix(std::move(rho));
}

double von_neumann_entropy(const DensityMatrix& rho) {
    const RealVector ev = rho.eigenvalues();
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        s += plogp(ev(i));
    }
    return s;
}

double shannon_entropy(const std::vector<double>& p) {
    double total = 0.0;
    double h = 0.0;
    for (double x : p) {
        if (!(x >= 0.0)) {
            throw RangeError("probabilities must be non-negative");
        }
        total += x;
        if (x > 0.0) {
            h -= x * std::log2(x);
        }
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw RangeError("probabilities must sum to 1");
    }
    return h;
}

double two_state_entropy(double overlap_modulus, double p) {
    if (!(overlap_modulus >= 0.0 && overlap_modulus <= 1.0)) {
        throw RangeError("overlap modulus must lie in [0, 1]");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw RangeError("probability must lie in [0, 1]");
    }
    const double disc = std::sqrt(
        std::max(0.0, 1.0 - 4.0 * p * (1.0 - p) * (1.0 - overlap_modulus * overlap_modulus)));
    const double hi = 0.5 * (1.0 + disc);
    const double lo = 0.5 * (1.0 - disc);
    return plogp(hi) + plogp(lo);
}

bool ensembles_equivalent(const Ensemble& a, const Ensemble& b, double tol) {
    if (a.states().dim() != b.states().dim()) {
        throw DimensionMismatch("ensembles live in different dimensions");
    }
    const Matrix diff = density_matrix(a).matrix() - density_matrix(b).matrix();
    return linalg::spectral_norm(diff) <= tol;
}

double schumacher_weight(double lambda, int n, double kept_dim) {
    if (!(lambda >= 0.5 && lambda <= 1.0)) {
        throw RangeError("lambda must lie in [1/2, 1]");
    }
    check_kept_dim(n, kept_dim);
    const std::vector<double> kept = kept_per_class(lambda, n, kept_dim);
    double w = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double c = kept[static_cast<std::size_t>(k)];
        if (c > 0.0) {
            w += c * std::pow(lambda, k) * std::pow(1.0 - lambda, n - k);
        }
    }
    return std::min(w, 1.0);
}

CompressionPoint schumacher_avg_fidelity(double overlap, int n, double rate, int n_max) {
    if (!(overlap > 0.0 && overlap < 1.0)) {
        throw RangeError("overlap modulus must lie strictly between 0 and 1");
    }
    if (n < 1 || n > n_max) {
        std::ostringstream os;
        os << "block length " << n << " outside [1, " << n_max << "]";
        throw RangeError(os.str());
    }
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw RangeError("rate must be non-negative");
    }

    // Signals |0> and g|0> + sqrt(1-g^2)|1>; q_s is the weight each puts on
    // the top eigenvector of rho.
    Matrix sig(2, 2);
    sig << 1.0, overlap, 0.0, std::sqrt(1.0 - overlap * overlap);
    const Matrix rho = 0.5 * (sig.col(0) * sig.col(0).adjoint() + sig.col(1) * sig.col(1).adjoint());
    const auto eig = linalg::eigh(rho, 1e-12);
    const double lambda = eig.values(1);
    const Vector top = eig.vectors.col(1);
    const double q1 = std::norm(top.dot(sig.col(0)));
    const double q2 = std::norm(top.dot(sig.col(1)));

    CompressionPoint pt;
    pt.n = n;
    pt.rate = rate;
    pt.kept_qubits = std::clamp(static_cast<int>(std::floor(rate * n + 1e-9)), 0, n);
    pt.kept_dim = std::ldexp(1.0, pt.kept_qubits);
    pt.retained_weight = schumacher_weight(lambda, n, pt.kept_dim);

    const std::vector<double> kept = kept_per_class(lambda, n, pt.kept_dim);
    const std::vector<double> sizes = binomial_row(n);
    std::vector<double> kept_fraction(static_cast<std::size_t>(n + 1));
    for (int k = 0; k <= n; ++k) {
        kept_fraction[static_cast<std::size_t>(k)] = kept[static_cast<std::size_t>(k)] / sizes[static_cast<std::size_t>(k)];
    }

    // Both signals have the same eigenbasis marginals, so every string of a
    // class is equally likely and the kept fraction of a class is exact.
    double avg = 0.0;
    std::vector<double> dist(static_cast<std::size_t>(n + 1));
    for (int s = 0; s <= n; ++s) {
        std::fill(dist.begin(), dist.end(), 0.0);
        dist[0] = 1.0;
        for (int pos = 0; pos < n; ++pos) {
            const double q = pos < n - s ? q1 : q2;
            for (int c = pos + 1; c >= 1; --c) {
                dist[static_cast<std::size_t>(c)] =
                    dist[static_cast<std::size_t>(c)] * (1.0 - q) + dist[static_cast<std::size_t>(c - 1)] * q;
            }
            dist[0] *= (1.0 - q);
        }
        double w = 0.0;
        for (int k = 0; k <= n; ++k) {
            w += dist[static_cast<std::size_t>(k)] * kept_fraction[static_cast<std::size_t>(k)];
        }
        const double mix = std::exp(log_binomial(n, s) - n * std::log(2.0));
        avg += mix * w * w;
    }
    pt.avg_fidelity_lb = std::clamp(avg, 0.0, 1.0);
    return pt;
}

std::vector<CompressionPoint> rate_scan(double overlap, const std::vector<int>& ns,
                                        const std::vector<double>& rates, int n_max) {
    if (ns.empty() || rates.empty()) {
        throw RangeError("rate scan needs at least one block length and one rate");
    }
    std::vector<CompressionPoint> rows;
    rows.reserve(ns.size() * rates.size());
    for (int n : ns) {
        for (double r : rates) {
            rows.push_back(schumacher_avg_fidelity(overlap, n, r, n_max));
        }
    }
    return rows;
}

}  // namespace qperm
