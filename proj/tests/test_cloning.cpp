#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "instances.hpp"
#include "qperm/cloning.hpp"
#include "qperm/linalg.hpp"

using namespace qperm;
using namespace qperm::fixtures;

namespace {

MixedStateSet constant_ancilla(std::size_t n, const StateVector& a) {
    return MixedStateSet::from_pure(StateSet(std::vector<StateVector>(n, a)));
}

// Fidelity of the (system, clone) part of U(input) with |psi>|psi>.
double clone_fidelity(const Cloner& c, const StateVector& psi, const StateVector& anc) {
    const Eigen::Index d = c.layout.system;
    Vector blank = Vector::Zero(d);
    blank(0) = 1.0;
    Vector env = Vector::Zero(c.layout.environment);
    env(0) = 1.0;
    const Vector in = linalg::kron(linalg::kron(linalg::kron(psi.amplitudes(), blank), anc.amplitudes()), env);
    const Vector out = c.unitary.apply(in);
    const Matrix rho = linalg::reduce_to_left(out, d * d, c.layout.ancilla * c.layout.environment);
    const Vector target = linalg::kron(psi.amplitudes(), psi.amplitudes());
    return (target.adjoint() * rho * target)(0, 0).real();
}

}  // namespace

TEST_CASE("generation_feasible examples") {
    const StateSet psi = pair45();
    SUBCASE("ancilla already holds the state") {
        const FeasibilityReport r = generation_feasible(psi, MixedStateSet::from_pure(psi));
        CHECK(r.feasible);
        CHECK(linalg::max_abs_entry(r.h - Matrix::Ones(2, 2)) < 1e-12);
        REQUIRE(r.witness_gram.has_value());
        CHECK(linalg::max_abs_entry(r.witness_gram->entries() - r.h) < 1e-15);
    }
    SUBCASE("orthonormal ancillas") {
        const FeasibilityReport r = generation_feasible(psi, MixedStateSet::from_pure(StateSet({ket0(), ket1()})));
        CHECK(r.feasible);
        CHECK(linalg::max_abs_entry(r.h - Matrix::Identity(2, 2)) < 1e-12);
    }
    SUBCASE("constant ancilla is the no-cloning instance") {
        const FeasibilityReport r = generation_feasible(psi, constant_ancilla(2, ket0()));
        CHECK_FALSE(r.feasible);
        CHECK_FALSE(r.witness_gram.has_value());
        CHECK(std::abs(r.h(0, 1) - Complex(std::sqrt(2.0), 0.0)) < 1e-12);
        CHECK(r.min_eigenvalue == doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("orthogonal pair is an error naming the pair") {
        const StateSet anc({ket0(), ket0(), ket1()});
        try {
            generation_feasible(remark_states(), MixedStateSet::from_pure(anc));
            FAIL("expected OrthogonalPairError");
        } catch (const OrthogonalPairError& e) {
            CHECK(e.first() == 0);
            CHECK(e.second() == 1);
        }
    }
    SUBCASE("size mismatch") {
        CHECK_THROWS_AS(generation_feasible(psi, constant_ancilla(3, ket0())), DimensionMismatch);
    }
}

TEST_CASE("cloning_feasible examples") {
    const StateSet psi = pair45();
    for (int n = 1; n <= 3; ++n) {
        CHECK(cloning_feasible(psi, MixedStateSet::from_pure(psi), n).feasible);
        CHECK(cloning_feasible(psi, MixedStateSet::from_pure(StateSet({ket0(), ket1()})), n).feasible);
    }
    CHECK_FALSE(cloning_feasible(psi, constant_ancilla(2, ket0()), 3).feasible);
    CHECK_THROWS_AS(cloning_feasible(psi, constant_ancilla(2, ket0()), 0), RangeError);
    CHECK_THROWS_AS(cloning_feasible(remark_states(), constant_ancilla(3, ket0()), 1), OrthogonalPairError);

    SUBCASE("underflow guard") {
        // Overlap 1e-80 passes delta = 1e-90; its fourth power is subnormal.
        Tolerances tiny;
        tiny.min_overlap = 1e-90;
        const double g = 1e-80;
        Vector v(2);
        v << g, std::sqrt(1.0 - g * g);
        const StateSet far({ket0(), StateVector(v)});
        CHECK_NOTHROW(cloning_feasible(far, constant_ancilla(2, ket0()), 1, tiny));
        CHECK_THROWS_AS(cloning_feasible(far, constant_ancilla(2, ket0()), 3, tiny), RangeError);
    }
}

TEST_CASE("Theorem 1 equivalence on random instances") {
    const Tolerances tol;
    int feasible_count = 0;
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
        auto rng = rnd::stream(21, trial);
        const auto kind = static_cast<InstanceKind>(trial % 4);
        const CloningInstance inst = random_cloning_instance(rng, kind);
        const FeasibilityReport gen = generation_feasible(inst.psi, inst.ancilla, tol);
        feasible_count += gen.feasible ? 1 : 0;
        if (kind == InstanceKind::FeasiblePure || kind == InstanceKind::FeasibleMixed) {
            CHECK(gen.feasible);
        }
        for (int n = 1; n <= 4; ++n) {
            const FeasibilityReport cl = cloning_feasible(inst.psi, inst.ancilla, n, tol);
            CHECK(cl.feasible == gen.feasible);
            REQUIRE(cl.h.rows() == gen.h.rows());
            CHECK(linalg::max_abs_entry(cl.h - gen.h) < 1e-9);
        }
    }
    // Both verdicts must actually occur.
    CHECK(feasible_count >= 100);
    CHECK(feasible_count < 200);
}

TEST_CASE("off-diagonal modulus above one forces infeasibility") {
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        auto rng = rnd::stream(22, trial);
        const StateSet psi = random_clustered_set(rng, 3, 3, 0.6);
        if (!check_min_overlap(psi, 1e-3)) {
            continue;
        }
        // Identical ancillas for states 0 and 1: |H(0,1)| = 1 / |<psi_0|psi_1>| > 1.
        const StateVector a = rnd::haar_state(rng, 2);
        const StateSet anc({a, a, rnd::haar_state(rng, 2)});
        const FeasibilityReport r = generation_feasible(psi, MixedStateSet::from_pure(anc));
        REQUIRE(std::abs(r.h(0, 1)) > 1.0);
        CHECK_FALSE(r.feasible);
    }
}

TEST_CASE("mixed ancillas") {
    SUBCASE("eigen-decomposition drops zero weights") {
        Matrix rho = Matrix::Zero(3, 3);
        rho(0, 0) = 0.75;
        rho(2, 2) = 0.25;
        const MixedStateSet m = MixedStateSet::from_density_matrices({rho, rho});
        CHECK(m.decomposition(0).components.size() == 2);
        CHECK_FALSE(m.all_pure());
    }
    SUBCASE("invalid density matrices") {
        Matrix half = Matrix::Identity(2, 2) * 0.25;
        CHECK_THROWS_AS(MixedStateSet::from_density_matrices({half}), RangeError);
        Matrix neg(2, 2);
        neg << 1.5, 0.0, 0.0, -0.5;
        CHECK_THROWS_AS(MixedStateSet::from_density_matrices({neg}), NotPositive);
        Matrix skew(2, 2);
        skew << 0.5, 0.3, 0.0, 0.5;
        CHECK_THROWS_AS(MixedStateSet::from_density_matrices({skew}), NotHermitian);
    }
    SUBCASE("mixed ancilla never beats its purest component") {
        // Each rho_i = (|i><i| + |2><2|)/2 shares a component, so H has a
        // block with 1/<psi_0|psi_1> off the diagonal.
        Matrix r0 = Matrix::Zero(3, 3);
        r0(0, 0) = 0.5;
        r0(2, 2) = 0.5;
        Matrix r1 = Matrix::Zero(3, 3);
        r1(1, 1) = 0.5;
        r1(2, 2) = 0.5;
        CHECK_FALSE(generation_feasible(pair45(), MixedStateSet::from_density_matrices({r0, r1})).feasible);
    }
}

TEST_CASE("construct_cloner") {
    const Tolerances tol;
    SUBCASE("ancillas that are the clones") {
        const StateSet psi = pair45();
        const Cloner c = construct_cloner(psi, psi, tol);
        for (double f : c.fidelities) {
            CHECK(f >= 1.0 - 1e-8);
        }
        CHECK(c.layout.total() == c.unitary.dim());
    }
    SUBCASE("orthonormal ancillas for the 45 degree pair") {
        const StateSet psi = pair45();
        const StateSet anc({ket0(), ket1()});
        const Cloner c = construct_cloner(psi, anc, tol);
        CHECK(UnitaryMap::unitarity_defect(c.unitary.matrix()) < tol.unit);
        for (std::size_t i = 0; i < psi.size(); ++i) {
            CHECK(c.fidelities[i] >= 1.0 - 1e-8);
            CHECK(clone_fidelity(c, psi[i], anc[i]) >= 1.0 - 1e-8);
        }
        CHECK(linalg::max_abs_entry(gram(c.environment).entries() - Matrix::Identity(2, 2)) < 1e-8);
    }
    SUBCASE("the orthogonal-pair set is rejected before construction") {
        const StateVector a = ket0();
        const StateVector b = ket1();
        CHECK_THROWS_AS(construct_cloner(remark_states(), StateSet({a, a, b}), tol), OrthogonalPairError);
    }
    SUBCASE("infeasible input carries the report") {
        try {
            construct_cloner(pair45(), StateSet({ket0(), ket0()}), tol);
            FAIL("expected InfeasibleError");
        } catch (const InfeasibleError& e) {
            CHECK_FALSE(e.report().feasible);
            CHECK(e.report().min_eigenvalue < 0.0);
        }
    }
    SUBCASE("random feasible pure instances") {
        for (std::uint64_t trial = 0; trial < 40; ++trial) {
            auto rng = rnd::stream(23, trial);
            const CloningInstance inst = random_cloning_instance(rng, InstanceKind::FeasiblePure);
            std::vector<StateVector> anc;
            for (std::size_t i = 0; i < inst.ancilla.size(); ++i) {
                anc.emplace_back(inst.ancilla.decomposition(i).components[0]);
            }
            const StateSet ancilla(std::move(anc));
            const Cloner c = construct_cloner(inst.psi, ancilla, tol);
            for (std::size_t i = 0; i < inst.psi.size(); ++i) {
                CHECK(clone_fidelity(c, inst.psi[i], ancilla[i]) >= 1.0 - 1e-8);
            }
        }
    }
}

TEST_CASE("classical_ancilla_check") {
    const StateSet psi = pair45();
    SUBCASE("orthonormal pure ancillas") {
        const auto r = classical_ancilla_check(psi, MixedStateSet::from_pure(StateSet({ket0(), ket1()})));
        CHECK(r.commuting);
        CHECK(r.feasible);
        CHECK(r.supports_orthogonal);
    }
    SUBCASE("equal diagonal ancillas") {
        Matrix rho = Matrix::Zero(2, 2);
        rho(0, 0) = 0.3;
        rho(1, 1) = 0.7;
        const auto r = classical_ancilla_check(psi, MixedStateSet::from_density_matrices({rho, rho}));
        CHECK(r.commuting);
        CHECK_FALSE(r.feasible);
        CHECK_FALSE(r.supports_orthogonal);
    }
    SUBCASE("non-commuting pure ancillas") {
        const auto r = classical_ancilla_check(psi, MixedStateSet::from_pure(pair45()));
        CHECK_FALSE(r.commuting);
    }
    SUBCASE("commuting and feasible implies orthogonal supports") {
        for (std::uint64_t trial = 0; trial < 200; ++trial) {
            auto rng = rnd::stream(24, trial);
            std::uniform_int_distribution<int> n_d(2, 4);
            std::uniform_int_distribution<int> level(0, 3);
            std::uniform_real_distribution<double> w(0.0, 1.0);
            const auto n = static_cast<std::size_t>(n_d(rng));
            const StateSet s = random_clustered_set(rng, n, 3, 0.5);
            if (!check_min_overlap(s, 1e-3)) {
                continue;
            }
            // Diagonal ancillas on random subsets of 4 levels always commute.
            std::vector<Matrix> rhos;
            for (std::size_t i = 0; i < n; ++i) {
                RealVector diag = RealVector::Zero(4);
                diag(level(rng)) += w(rng) + 0.1;
                diag(level(rng)) += w(rng);
                diag /= diag.sum();
                rhos.push_back(diag.cast<Complex>().asDiagonal());
            }
            const auto r = classical_ancilla_check(s, MixedStateSet::from_density_matrices(rhos));
            CHECK(r.commuting);
            if (r.commuting && r.feasible) {
                CHECK(r.supports_orthogonal);
            }
        }
    }
}

TEST_CASE("tensor-power Gram agrees with explicit Kronecker powers") {
    // With overlaps of order one the explicit vectors are accurate, so they
    // serve as an oracle for the factor-by-factor product used internally.
    for (std::uint64_t trial = 0; trial < 30; ++trial) {
        auto rng = rnd::stream(25, trial);
        const StateSet psi = random_clustered_set(rng, 3, 3, 0.3);
        const Matrix g = gram(psi).entries();
        for (int n = 1; n <= 4; ++n) {
            for (Eigen::Index i = 0; i < 3; ++i) {
                for (Eigen::Index j = 0; j < 3; ++j) {
                    const Complex explicit_dot = linalg::kron_power(psi[i].amplitudes(), n)
                                                     .dot(linalg::kron_power(psi[j].amplitudes(), n));
                    CHECK(std::abs(explicit_dot - std::pow(g(i, j), n)) < 1e-12);
                }
            }
        }
    }
}
