#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qperm/cloning.hpp"
#include "qperm/compression.hpp"
#include "qperm/deleting.hpp"
#include "qperm/geometry.hpp"
#include "qperm/teleport.hpp"

namespace py = pybind11;
using namespace qperm;

namespace {

StateSet to_states(const std::vector<Vector>& vs) {
    std::vector<StateVector> out;
    out.reserve(vs.size());
    for (const auto& v : vs) {
        out.emplace_back(v);
    }
    return StateSet(std::move(out));
}

// 1-D entries are pure ancillas, 2-D entries density matrices. Mixing the two
// is not allowed.
MixedStateSet to_ancilla(const py::list& items) {
    std::vector<Vector> pure;
    std::vector<Matrix> rhos;
    for (const auto& item : items) {
        const auto arr = py::array::ensure(item);
        if (!arr) {
            throw RangeError("ancilla entries must be array-like");
        }
        if (arr.ndim() == 1) {
            pure.push_back(item.cast<Vector>());
        } else if (arr.ndim() == 2) {
            rhos.push_back(item.cast<Matrix>());
        } else {
            throw RangeError("ancilla entries must be vectors or square matrices");
        }
    }
    if (!pure.empty() && !rhos.empty()) {
        throw RangeError("ancilla entries mix pure vectors and density matrices");
    }
    if (!pure.empty()) {
        return MixedStateSet::from_pure(to_states(pure));
    }
    return MixedStateSet::from_density_matrices(std::move(rhos));
}

py::dict report_dict(const FeasibilityReport& r) {
    py::dict d;
    d["feasible"] = r.feasible;
    d["h"] = r.h;
    d["min_eigenvalue"] = r.min_eigenvalue;
    d["index"] = r.index;
    if (r.witness_gram) {
        d["witness_gram"] = r.witness_gram->entries();
    } else {
        d["witness_gram"] = py::none();
    }
    return d;
}

py::dict invariants_dict(const TripleInvariants& t) {
    py::dict d;
    d["a12"] = t.a12;
    d["a23"] = t.a23;
    d["a31"] = t.a31;
    d["xi"] = t.xi;
    return d;
}

std::vector<Vector> amplitudes(const StateSet& s) {
    std::vector<Vector> out;
    for (const auto& v : s.states()) {
        out.push_back(v.amplitudes());
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_qperm, m) {
    m.doc() = "Feasibility checks for cloning, deleting and compressing non-orthogonal quantum states.";

    auto error = py::register_exception<Error>(m, "QpermError", PyExc_ValueError);
    py::register_exception<OrthogonalPairError>(m, "OrthogonalPairError", error.ptr());
    py::register_exception<InfeasibleError>(m, "InfeasibleError", error.ptr());
    py::register_exception<GramMismatch>(m, "GramMismatch", error.ptr());

    m.def("gram", [](const std::vector<Vector>& states) { return gram(to_states(states)).entries(); },
          py::arg("states"));

    m.def(
        "generation_feasible",
        [](const std::vector<Vector>& states, const py::list& ancilla) {
            return report_dict(generation_feasible(to_states(states), to_ancilla(ancilla)));
        },
        py::arg("states"), py::arg("ancilla"));

    m.def(
        "cloning_feasible",
        [](const std::vector<Vector>& states, const py::list& ancilla, int copies) {
            return report_dict(cloning_feasible(to_states(states), to_ancilla(ancilla), copies));
        },
        py::arg("states"), py::arg("ancilla"), py::arg("copies") = 1);

    m.def(
        "construct_cloner",
        [](const std::vector<Vector>& states, const std::vector<Vector>& ancilla) {
            const Cloner c = construct_cloner(to_states(states), to_states(ancilla));
            py::dict d;
            d["unitary"] = c.unitary.matrix();
            d["environment"] = amplitudes(c.environment);
            d["fidelities"] = c.fidelities;
            d["layout"] = py::make_tuple(c.layout.system, c.layout.ancilla, c.layout.environment);
            return d;
        },
        py::arg("states"), py::arg("ancilla"));

    m.def(
        "make_swap_deleter",
        [](Eigen::Index dim, Eigen::Index env_dim, std::optional<Matrix> env_unitary) {
            return make_swap_deleter(dim, env_dim, env_unitary).matrix();
        },
        py::arg("dim"), py::arg("env_dim"), py::arg("env_unitary") = py::none());

    m.def(
        "is_valid_deleter",
        [](const Matrix& u, const std::vector<Vector>& states, Eigen::Index env_dim) {
            const StateSet psi = to_states(states);
            const DeletionTrace t = is_valid_deleter(UnitaryMap(u), psi, StateVector::basis(psi.dim(), 0),
                                                     StateVector::basis(env_dim, 0));
            py::dict d;
            d["valid"] = t.valid;
            d["environment_states"] = t.valid ? py::cast(amplitudes(t.environment_states)) : py::none();
            d["residual_fidelity"] = t.residual_fidelity;
            d["environment_purity"] = t.environment_purity;
            return d;
        },
        py::arg("unitary"), py::arg("states"), py::arg("env_dim"));

    m.def(
        "recover_deleted",
        [](const std::vector<Vector>& states, const std::vector<Vector>& env) {
            return recover_deleted(to_states(states), to_states(env)).matrix();
        },
        py::arg("states"), py::arg("env"));

    m.def(
        "von_neumann_entropy",
        [](const std::vector<Vector>& states, const std::vector<double>& probs) {
            return von_neumann_entropy(density_matrix(Ensemble(to_states(states), probs)));
        },
        py::arg("states"), py::arg("probs"));
    m.def("shannon_entropy", &shannon_entropy, py::arg("probs"));
    m.def("two_state_entropy", &two_state_entropy, py::arg("overlap"), py::arg("p") = 0.5);
    m.def(
        "ensembles_equivalent",
        [](const std::vector<Vector>& a, const std::vector<double>& pa, const std::vector<Vector>& b,
           const std::vector<double>& pb, double tol) {
            return ensembles_equivalent(Ensemble(to_states(a), pa), Ensemble(to_states(b), pb), tol);
        },
        py::arg("states_a"), py::arg("probs_a"), py::arg("states_b"), py::arg("probs_b"), py::arg("tol") = 1e-9);

    m.def(
        "schumacher",
        [](double overlap, int n, double rate) {
            const CompressionPoint p = schumacher_avg_fidelity(overlap, n, rate);
            py::dict d;
            d["n"] = p.n;
            d["rate"] = p.rate;
            d["kept_qubits"] = p.kept_qubits;
            d["kept_dim"] = p.kept_dim;
            d["retained_weight"] = p.retained_weight;
            d["avg_fidelity_lb"] = p.avg_fidelity_lb;
            return d;
        },
        py::arg("overlap"), py::arg("n"), py::arg("rate"));

    m.def(
        "triple_determinant",
        [](double a12, double a23, double a31, double xi) { return triple_determinant({a12, a23, a31, xi}); },
        py::arg("a12"), py::arg("a23"), py::arg("a31"), py::arg("xi"));
    m.def(
        "entropy_from_invariants",
        [](double a12, double a23, double a31, double xi) { return entropy_from_invariants({a12, a23, a31, xi}); },
        py::arg("a12"), py::arg("a23"), py::arg("a31"), py::arg("xi"));
    m.def(
        "invariants_from_states",
        [](const std::vector<Vector>& states) { return invariants_dict(invariants_from_states(to_states(states))); },
        py::arg("states"));
    m.def(
        "xi_scan",
        [](double a12, double a23, double a31, int grid) {
            const XiScan s = xi_scan(a12, a23, a31, grid);
            std::vector<double> xi;
            std::vector<double> cos_xi;
            std::vector<double> entropy;
            for (const auto& r : s.rows) {
                xi.push_back(r.xi);
                cos_xi.push_back(r.cos_xi);
                entropy.push_back(r.entropy);
            }
            py::dict d;
            d["xi"] = xi;
            d["cos_xi"] = cos_xi;
            d["entropy"] = entropy;
            d["xi_max"] = s.xi_max;
            d["monotone"] = s.monotone;
            d["nondecreasing"] = s.nondecreasing;
            d["max_rise"] = s.max_rise;
            return d;
        },
        py::arg("a12"), py::arg("a23"), py::arg("a31"), py::arg("grid") = 101);

    m.def(
        "counterexample",
        [](std::uint64_t seed, long budget, const std::string& method, int states) {
            const SearchOutcome o = overlap_dominance_counterexample(seed, budget, parse_search_method(method), states);
            py::dict d;
            d["found"] = o.found();
            d["evaluations"] = o.evaluations;
            if (o.found()) {
                d["gram1"] = o.pair->gram1;
                d["gram2"] = o.pair->gram2;
                d["entropy1"] = o.pair->entropy1;
                d["entropy2"] = o.pair->entropy2;
                d["overlap_deltas"] = o.pair->overlap_deltas;
            }
            return d;
        },
        py::arg("seed"), py::arg("budget"), py::arg("method") = "random", py::arg("states") = 3);

    m.def(
        "teleport",
        [](const Vector& psi) {
            const TeleportTrace t = teleport(StateVector(psi));
            py::dict d;
            d["outcome_probs"] = t.outcome_probs;
            d["fidelities"] = t.fidelities;
            std::vector<Vector> outs;
            for (const auto& v : t.corrected_outputs) {
                outs.push_back(v.amplitudes());
            }
            d["outputs"] = outs;
            return d;
        },
        py::arg("state"));
}
