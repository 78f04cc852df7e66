#pragma once

#include <cmath>
#include <vector>

#include "qperm/random.hpp"
#include "qperm/statekit.hpp"

namespace qperm::fixtures {

inline const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

inline StateVector ket(std::initializer_list<Complex> amps) {
    Vector v(static_cast<Eigen::Index>(amps.size()));
    Eigen::Index i = 0;
    for (const Complex& a : amps) {
        v(i++) = a;
    }
    return StateVector::normalized(v);
}

inline StateVector ket0() { return ket({1.0, 0.0}); }
inline StateVector ket1() { return ket({0.0, 1.0}); }
inline StateVector plus() { return ket({1.0, 1.0}); }
inline StateVector minus() { return ket({1.0, -1.0}); }

/// Two qubit states at 45 degrees: |0> and (|0> + |1>)/sqrt2.
inline StateSet pair45() { return StateSet({ket0(), plus()}); }

/// The orthogonal-pair example: |0>, |1>, (|0>+|1>)/sqrt2.
inline StateSet remark_states() { return StateSet({ket0(), ket1(), plus()}); }

/// Random state set whose pairwise overlap moduli are at least `min_overlap`.
inline StateSet random_overlapping_set(rnd::Engine& rng, std::size_t count, Eigen::Index dim,
                                       double min_overlap) {
    for (;;) {
        std::vector<StateVector> states;
        for (std::size_t i = 0; i < count; ++i) {
            states.push_back(rnd::haar_state(rng, dim));
        }
        StateSet s(std::move(states));
        if (check_min_overlap(s, min_overlap)) {
            return s;
        }
    }
}

/// Random state set biased towards a common direction so overlaps stay large.
inline StateSet random_clustered_set(rnd::Engine& rng, std::size_t count, Eigen::Index dim,
                                     double spread) {
    const Vector centre = rnd::haar_state(rng, dim).amplitudes();
    std::vector<Vector> vs;
    for (std::size_t i = 0; i < count; ++i) {
        vs.push_back(centre + spread * rnd::gaussian_vector(rng, dim));
    }
    return StateSet::from_vectors(vs);
}

inline Vector embed(const Vector& v, Eigen::Index dim) {
    Vector out = Vector::Zero(dim);
    out.head(v.size()) = v;
    return out;
}

}  // namespace qperm::fixtures
