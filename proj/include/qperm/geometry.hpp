#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qperm/statekit.hpp"

namespace qperm {

/// Unitary invariants of three pure states: squared overlaps and the phase of
/// the triple product <1|2><2|3><3|1>.
struct TripleInvariants {
    double a12 = 0.0;
    double a23 = 0.0;
    double a31 = 0.0;
    double xi = 0.0;  // in (-pi, pi]
};

/// 1 - a12 - a23 - a31 + 2 sqrt(a12 a23 a31) cos(xi).
double triple_determinant(const TripleInvariants& t);

struct InvariantGram {
    std::optional<GramMatrix> gram;  // empty when infeasible
    double determinant = 0.0;

    bool feasible() const noexcept { return gram.has_value(); }
};

/// Canonical Gram with the whole phase on the (1,2) edge:
/// G12 = sqrt(a12) e^{i xi}, G23 = sqrt(a23), G31 = sqrt(a31).
InvariantGram gram_from_invariants(const TripleInvariants& t, const Tolerances& tol = {});

TripleInvariants invariants_from_states(const StateSet& s, const Tolerances& tol = {});

/// Entropy (bits) of the ensemble realizing t with priors p.
double entropy_from_invariants(const TripleInvariants& t,
                               const std::array<double, 3>& p = {1.0 / 3, 1.0 / 3, 1.0 / 3},
                               const Tolerances& tol = {});

struct XiScanRow {
    double xi = 0.0;
    double cos_xi = 0.0;
    double entropy = 0.0;
};

struct XiScan {
    std::vector<XiScanRow> rows;  // xi ascending, so cos(xi) descending
    double xi_max = 0.0;          // end of the feasible interval within [0, pi]
    bool monotone = false;        // S non-increasing in cos(xi) up to the margin
    bool boundary_tie = false;    // the scan touches det = 0 and the last step is flat
    // Diagnostics for the verdict: largest rise of S between neighbouring rows
    // as cos(xi) increases, and whether S is non-decreasing in cos(xi) instead.
    double max_rise = 0.0;
    bool nondecreasing = false;
};

inline constexpr double kMonotoneMargin = 1e-12;

XiScan xi_scan(double a12, double a23, double a31, int grid_size, const Tolerances& tol = {});

enum class SearchMethod { Grid, Random, HillClimb };

SearchMethod parse_search_method(const std::string& name);
std::string to_string(SearchMethod m);

/// Two equiprobable n-state sources (n = 2 or 3) where every squared overlap
/// grows from source 1 to source 2 and the entropy grows too.
struct CounterexamplePair {
    Matrix gram1;
    Matrix gram2;
    double entropy1 = 0.0;
    double entropy2 = 0.0;
    std::vector<double> overlap_deltas;  // squared-overlap increases, pair order (1,2),(2,3),(3,1)
    std::optional<TripleInvariants> invariants1;
    std::optional<TripleInvariants> invariants2;
};

struct SearchOutcome {
    std::optional<CounterexamplePair> pair;
    std::uint64_t seed = 0;
    SearchMethod method = SearchMethod::Random;
    int states = 3;
    long budget = 0;
    long evaluations = 0;
    long feasible_evaluations = 0;
    double best_gap = -1.0;  // largest S2 - S1 seen among dominance-satisfying pairs

    bool found() const noexcept { return pair.has_value(); }
};

inline constexpr double kSeparation = 1e-4;

/// Deterministic for a given seed. Every returned pair has passed
/// verify_counterexample.
SearchOutcome overlap_dominance_counterexample(std::uint64_t seed, long budget, SearchMethod method,
                                               int states = 3, double separation = kSeparation);

struct CounterexampleCheck {
    bool valid = false;
    double entropy1 = 0.0;
    double entropy2 = 0.0;
    std::vector<double> overlap_deltas;
};

/// Independent check: realizes both Gram matrices as state sets and
/// diagonalizes the dense density matrices.
CounterexampleCheck verify_counterexample(const CounterexamplePair& pair,
                                          double separation = kSeparation);

}  // namespace qperm
