#include "qperm/cloning.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qperm/linalg.hpp"

namespace qperm {

namespace {

std::vector<std::string> numbered(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(std::to_string(i));
    }
    return out;
}

constexpr double kCommuteTol = 1e-9;
constexpr double kSupportTol = 1e-9;

}  // namespace

MixedStateSet MixedStateSet::from_density_matrices(std::vector<Matrix> rhos,
                                                   std::vector<std::string> labels,
                                                   const Tolerances& tol) {
    if (rhos.size() != labels.size()) {
        throw DimensionMismatch("label count does not match ancilla count");
    }
    MixedStateSet out;
    out.labels_ = std::move(labels);
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        const Matrix& rho = rhos[i];
        if (rho.rows() != rho.cols() || rho.rows() == 0) {
            throw DimensionMismatch("density matrix must be square and non-empty");
        }
        if (i == 0) {
            out.dim_ = rho.rows();
        } else if (rho.rows() != out.dim_) {
            throw DimensionMismatch("ancilla density matrices must share one dimension");
        }
        const double tr_defect = std::abs(rho.trace() - Complex(1.0, 0.0));
        if (tr_defect > tol.trace) {
            std::ostringstream os;
            os << "ancilla " << i << " does not have unit trace (defect " << tr_defect << ")";
            throw RangeError(os.str());
        }
        const auto eig = linalg::eigh(rho, tol.herm);
        const double top = eig.values.maxCoeff();
        if (eig.values.minCoeff() < -tol.psd * std::max(top, 1.0)) {
            std::ostringstream os;
            os << "ancilla " << i << " is not positive semidefinite";
            throw NotPositive(os.str());
        }
        AncillaDecomposition part;
        for (Eigen::Index k = eig.values.size() - 1; k >= 0; --k) {
            if (eig.values(k) > tol.mix * top) {
                part.weights.push_back(eig.values(k));
                part.components.push_back(linalg::canonical_phase(eig.vectors.col(k)));
            }
        }
        out.parts_.push_back(std::move(part));
    }
    out.rhos_ = std::move(rhos);
    return out;
}

MixedStateSet MixedStateSet::from_density_matrices(std::vector<Matrix> rhos, const Tolerances& tol) {
    const std::size_t n = rhos.size();
    return from_density_matrices(std::move(rhos), numbered(n), tol);
}

MixedStateSet MixedStateSet::from_pure(const StateSet& states) {
    MixedStateSet out;
    out.labels_ = states.labels();
    out.dim_ = states.dim();
    for (const auto& s : states.states()) {
        const Vector& v = s.amplitudes();
        out.rhos_.push_back(v * v.adjoint());
        out.parts_.push_back(AncillaDecomposition{{1.0}, {v}});
    }
    return out;
}

bool MixedStateSet::all_pure() const {
    for (const auto& p : parts_) {
        if (p.components.size() != 1) {
            return false;
        }
    }
    return true;
}

namespace {

void check_alignment(const StateSet& psi, const MixedStateSet& ancilla) {
    if (psi.empty()) {
        throw RangeError("state set is empty");
    }
    if (psi.size() != ancilla.size()) {
        throw DimensionMismatch("state set and ancilla set have different sizes");
    }
    for (std::size_t i = 0; i < psi.size(); ++i) {
        if (psi.labels()[i] != ancilla.labels()[i]) {
            std::ostringstream os;
            os << "label mismatch at index " << i << ": '" << psi.labels()[i] << "' vs '"
               << ancilla.labels()[i] << "'";
            throw RangeError(os.str());
        }
    }
}

struct Components {
    std::vector<Vector> vectors;
    std::vector<std::pair<std::size_t, std::size_t>> index;
};

Components flatten(const MixedStateSet& ancilla) {
    Components c;
    for (std::size_t i = 0; i < ancilla.size(); ++i) {
        const auto& part = ancilla.decomposition(i);
        for (std::size_t k = 0; k < part.components.size(); ++k) {
            c.vectors.push_back(part.components[k]);
            c.index.emplace_back(i, k);
        }
    }
    return c;
}

FeasibilityReport finish(Matrix h, std::vector<std::pair<std::size_t, std::size_t>> index,
                         const Tolerances& tol) {
    FeasibilityReport report;
    const PsdResult psd = psd_check(h, tol.psd, tol.herm);
    report.feasible = psd.psd;
    report.min_eigenvalue = psd.min_eigenvalue;
    if (report.feasible) {
        report.witness_gram.emplace(h, tol);
    }
    report.h = std::move(h);
    report.index = std::move(index);
    return report;
}

}  // namespace

FeasibilityReport generation_feasible(const StateSet& psi, const MixedStateSet& ancilla,
                                      const Tolerances& tol) {
    check_alignment(psi, ancilla);
    require_min_overlap(psi, tol.min_overlap);

    const Components comp = flatten(ancilla);
    const auto m = static_cast<Eigen::Index>(comp.vectors.size());
    Matrix h(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        const auto [i, k] = comp.index[static_cast<std::size_t>(a)];
        for (Eigen::Index b = 0; b < m; ++b) {
            const auto [j, l] = comp.index[static_cast<std::size_t>(b)];
            const Complex overlap = psi[i].amplitudes().dot(psi[j].amplitudes());
            const Complex anc = comp.vectors[static_cast<std::size_t>(a)].dot(
                comp.vectors[static_cast<std::size_t>(b)]);
            h(a, b) = anc / overlap;
        }
    }
    return finish(std::move(h), comp.index, tol);
}

FeasibilityReport cloning_feasible(const StateSet& psi, const MixedStateSet& ancilla, int copies,
                                   const Tolerances& tol) {
    if (copies < 1) {
        throw RangeError("number of held copies must be at least 1");
    }
    check_alignment(psi, ancilla);
    require_min_overlap(psi, tol.min_overlap);

    // Joint Gram of the held and produced registers, one tensor factor at a
    // time (<a (x) b|c (x) d> = <a|c><b|d>). Dotting explicit Kronecker powers
    // instead loses all relative precision once the overlap nears delta.
    const Matrix single = gram(psi).entries();
    const double floor = std::max(std::pow(tol.min_overlap, copies + 1),
                                  std::numeric_limits<double>::min() * 1e6);
    const auto n = static_cast<Eigen::Index>(psi.size());
    Matrix in_sys = Matrix::Ones(n, n);
    for (int c = 0; c < copies; ++c) {
        in_sys = in_sys.cwiseProduct(single);
    }
    const Matrix out_sys = in_sys.cwiseProduct(single);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!(std::abs(out_sys(i, j)) >= floor)) {
                std::ostringstream os;
                os << "output overlap of states " << i << " and " << j << " underflows at "
                   << copies + 1 << " copies; use fewer copies or a larger minimum overlap";
                throw RangeError(os.str());
            }
        }
    }

    const Components comp = flatten(ancilla);
    const auto m = static_cast<Eigen::Index>(comp.vectors.size());
    Matrix h(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        const auto i = static_cast<Eigen::Index>(comp.index[static_cast<std::size_t>(a)].first);
        for (Eigen::Index b = 0; b < m; ++b) {
            const auto j = static_cast<Eigen::Index>(comp.index[static_cast<std::size_t>(b)].first);
            const Complex anc = comp.vectors[static_cast<std::size_t>(a)].dot(
                comp.vectors[static_cast<std::size_t>(b)]);
            h(a, b) = (in_sys(i, j) * anc) / out_sys(i, j);
        }
    }
    return finish(std::move(h), comp.index, tol);
}

Cloner construct_cloner(const StateSet& psi, const StateSet& ancilla, const Tolerances& tol) {
    FeasibilityReport report = generation_feasible(psi, MixedStateSet::from_pure(ancilla), tol);
    if (!report.feasible) {
        std::ostringstream os;
        os << "no cloner exists: criterion matrix has min eigenvalue " << report.min_eigenvalue;
        throw InfeasibleError(os.str(), std::move(report));
    }

    const StateSet env_core = realize_from_gram(*report.witness_gram, tol);
    ClonerLayout layout;
    layout.system = psi.dim();
    layout.ancilla = ancilla.dim();
    layout.environment = std::max<Eigen::Index>(1, (env_core.dim() + layout.ancilla - 1) / layout.ancilla);
    const Eigen::Index joint = layout.ancilla * layout.environment;

    const Vector blank = StateVector::basis(layout.system, 0).amplitudes();
    const Vector env_init = StateVector::basis(layout.environment, 0).amplitudes();

    std::vector<StateVector> inputs;
    std::vector<StateVector> outputs;
    std::vector<StateVector> env_states;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const Vector& p = psi[i].amplitudes();
        const Vector c = linalg::pad(env_core[i].amplitudes(), joint);
        env_states.emplace_back(c);
        inputs.emplace_back(
            linalg::kron(linalg::kron(p, blank), linalg::kron(ancilla[i].amplitudes(), env_init)));
        outputs.emplace_back(linalg::kron(linalg::kron(p, p), c));
    }

    EquivalenceResult eq =
        unitary_equivalence(StateSet(inputs), StateSet(outputs), tol.gram, tol);
    if (!eq.equivalent()) {
        std::ostringstream os;
        os << "input and output Gram matrices differ by " << eq.max_gram_deviation;
        throw Error(os.str());
    }

    std::vector<double> fids;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const Vector out = eq.unitary->apply(inputs[i].amplitudes());
        const Matrix rho = linalg::reduce_to_left(out, layout.system * layout.system, joint);
        const Vector target = linalg::kron(psi[i].amplitudes(), psi[i].amplitudes());
        fids.push_back(std::real(target.dot(rho * target)));
    }
    for (std::size_t i = 0; i < fids.size(); ++i) {
        if (fids[i] < 1.0 - tol.del) {
            std::ostringstream os;
            os << "constructed cloner reaches fidelity " << fids[i] << " on state " << i;
            throw Error(os.str());
        }
    }
    return Cloner{std::move(*eq.unitary),
                  StateSet(std::move(env_states), psi.labels()), layout, std::move(fids)};
}

ClassicalAncillaReport classical_ancilla_check(const StateSet& psi, const MixedStateSet& ancilla,
                                               const Tolerances& tol) {
    ClassicalAncillaReport r;
    r.commuting = true;
    r.supports_orthogonal = true;
    for (std::size_t i = 0; i < ancilla.size(); ++i) {
        for (std::size_t j = i + 1; j < ancilla.size(); ++j) {
            const Matrix& a = ancilla.density(i);
            const Matrix& b = ancilla.density(j);
            if (linalg::max_abs_entry(a * b - b * a) > kCommuteTol) {
                r.commuting = false;
            }
            const double ov = std::abs(psi[i].amplitudes().dot(psi[j].amplitudes()));
            const bool distinct = ov < 1.0 - kSupportTol;
            if (distinct && linalg::max_abs_entry(a * b) > kSupportTol) {
                r.supports_orthogonal = false;
            }
        }
    }
    r.feasible = generation_feasible(psi, ancilla, tol).feasible;
    return r;
}

}  // namespace qperm
