#include "qperm/deleting.hpp"

#include <cmath>
#include <sstream>

#include "qperm/linalg.hpp"

namespace qperm {

UnitaryMap make_swap_deleter(Eigen::Index system_dim, Eigen::Index env_dim,
                             const std::optional<Matrix>& env_unitary, const Tolerances& tol) {
    if (system_dim < 1) {
        throw RangeError("system dimension must be positive");
    }
    if (env_dim < system_dim + 1) {
        std::ostringstream os;
        os << "environment dimension " << env_dim << " is too small; need at least "
           << system_dim + 1;
        throw RangeError(os.str());
    }
    const Eigen::Index d = system_dim;
    const Eigen::Index total = d * d * env_dim;
    Matrix swap = Matrix::Zero(total, total);
    for (Eigen::Index s1 = 0; s1 < d; ++s1) {
        for (Eigen::Index s2 = 0; s2 < d; ++s2) {
            for (Eigen::Index e = 0; e < env_dim; ++e) {
                const Eigen::Index from = (s1 * d + s2) * env_dim + e;
                const Eigen::Index to = e < d ? (s1 * d + e) * env_dim + s2 : from;
                swap(to, from) = 1.0;
            }
        }
    }
    if (!env_unitary) {
        return UnitaryMap(std::move(swap), tol.unit);
    }
    if (env_unitary->rows() != env_dim || env_unitary->cols() != env_dim) {
        throw DimensionMismatch("environment unitary has the wrong dimension");
    }
    // Validates unitarity of V before composing.
    const UnitaryMap v(*env_unitary, tol.unit);
    const Matrix full = linalg::kron(Matrix::Identity(d * d, d * d), v.matrix()) * swap;
    return UnitaryMap(full, tol.unit);
}

DeletionTrace is_valid_deleter(const UnitaryMap& u, const StateSet& psi, const StateVector& blank,
                               const StateVector& env_init, const Tolerances& tol) {
    if (psi.empty()) {
        throw RangeError("state set is empty");
    }
    const Eigen::Index d = psi.dim();
    const Eigen::Index env_dim = env_init.dim();
    if (blank.dim() != d) {
        throw DimensionMismatch("blank state must match the system dimension");
    }
    if (u.dim() != d * d * env_dim) {
        std::ostringstream os;
        os << "unitary dimension " << u.dim() << " does not match registers " << d << "x" << d
           << "x" << env_dim;
        throw DimensionMismatch(os.str());
    }

    DeletionTrace trace;
    trace.valid = true;
    std::vector<StateVector> env_states;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const Vector& p = psi[i].amplitudes();
        const Vector in = linalg::kron(linalg::kron(p, p), env_init.amplitudes());
        const Vector out = u.apply(in);

        const Vector target = linalg::kron(p, blank.amplitudes());
        const Matrix rho_12 = linalg::reduce_to_left(out, d * d, env_dim);
        const Matrix rho_env = linalg::reduce_to_right(out, d * d, env_dim);
        const double fid = std::real(target.dot(rho_12 * target));
        const double purity = std::real((rho_env * rho_env).trace());
        trace.residual_fidelity.push_back(fid);
        trace.environment_purity.push_back(purity);
        if (fid < 1.0 - tol.del || purity < 1.0 - tol.del) {
            trace.valid = false;
        }

        // Dominant eigenvector, with its phase fixed by the projection
        // (<psi_i 0| (x) I)|out> so that Gram matrices are comparable.
        const auto eig = linalg::eigh(rho_env, tol.herm);
        Vector a = eig.vectors.col(eig.values.size() - 1);
        Vector proj = Vector::Zero(env_dim);
        for (Eigen::Index x = 0; x < d * d; ++x) {
            proj += std::conj(target(x)) * out.segment(x * env_dim, env_dim);
        }
        const Complex c = a.dot(proj);
        if (std::abs(c) > 1e-12) {
            a *= c / std::abs(c);
        }
        env_states.push_back(StateVector::normalized(a));
    }
    trace.environment_states = StateSet(std::move(env_states), psi.labels());
    return trace;
}

UnitaryMap recover_deleted(const StateSet& psi, const StateSet& env, const Tolerances& tol) {
    if (psi.size() != env.size()) {
        throw DimensionMismatch("environment record and state set have different sizes");
    }
    require_min_overlap(psi, tol.min_overlap);
    EquivalenceResult eq = unitary_equivalence(env, psi, tol.gram, tol);
    if (!eq.equivalent()) {
        std::ostringstream os;
        os << "environment Gram matrix deviates from the state Gram matrix by "
           << eq.max_gram_deviation << "; the supplied map was not a valid deleter";
        throw GramMismatch(os.str(), eq.max_gram_deviation);
    }
    return std::move(*eq.unitary);
}

CollapseDemo collapse_deleter_demo(const StateVector& psi) {
    CollapseDemo demo;
    const Eigen::Index d = psi.dim();
    for (Eigen::Index k = 0; k < d; ++k) {
        CollapseBranch b;
        b.outcome = k;
        b.probability = std::norm(psi.amplitudes()(k));
        // Transposition of |0> and |k>.
        b.correction = Matrix::Identity(d, d);
        if (k != 0) {
            b.correction(0, 0) = 0.0;
            b.correction(k, k) = 0.0;
            b.correction(0, k) = 1.0;
            b.correction(k, 0) = 1.0;
        }
        demo.branches.push_back(std::move(b));
    }
    return demo;
}

}  // namespace qperm
