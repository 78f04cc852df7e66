#include "qperm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qperm/compression.hpp"
#include "qperm/linalg.hpp"

namespace qperm {

namespace {

constexpr double kPi = std::numbers::pi;

void check_range(const TripleInvariants& t) {
    for (double a : {t.a12, t.a23, t.a31}) {
        if (!(a >= 0.0 && a <= 1.0)) {
            throw RangeError("squared overlaps must lie in [0, 1]");
        }
    }
    if (!(t.xi >= -kPi && t.xi <= kPi)) {
        throw RangeError("phase xi must lie in [-pi, pi]");
    }
}

Matrix raw_gram(const TripleInvariants& t) {
    Matrix g = Matrix::Identity(3, 3);
    g(0, 1) = std::polar(std::sqrt(t.a12), t.xi);
    g(1, 2) = std::sqrt(t.a23);
    g(2, 0) = std::sqrt(t.a31);
    g(1, 0) = std::conj(g(0, 1));
    g(2, 1) = std::conj(g(1, 2));
    g(0, 2) = std::conj(g(2, 0));
    return g;
}

double entropy_of_spectrum(const RealVector& ev) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) > 1e-14) {
            s -= ev(i) * std::log2(ev(i));
        }
    }
    return s;
}

// Equiprobable entropy from a Gram matrix: spectrum of G / n.
double equiprobable_entropy(const Matrix& g) {
    const std::vector<double> p(static_cast<std::size_t>(g.rows()), 1.0 / static_cast<double>(g.rows()));
    return entropy_of_spectrum(weighted_gram_spectrum(g, p));
}

}  // namespace

double triple_determinant(const TripleInvariants& t) {
    return 1.0 - t.a12 - t.a23 - t.a31 + 2.0 * std::sqrt(t.a12 * t.a23 * t.a31) * std::cos(t.xi);
}

InvariantGram gram_from_invariants(const TripleInvariants& t, const Tolerances& tol) {
    check_range(t);
    InvariantGram out;
    out.determinant = triple_determinant(t);
    Matrix g = raw_gram(t);
    if (psd_check(g, tol.psd, tol.herm).psd) {
        out.gram.emplace(std::move(g), tol);
    }
    return out;
}

TripleInvariants invariants_from_states(const StateSet& s, const Tolerances& tol) {
    if (s.size() != 3) {
        throw RangeError("triple invariants need exactly three states");
    }
    const Complex g12 = s[0].amplitudes().dot(s[1].amplitudes());
    const Complex g23 = s[1].amplitudes().dot(s[2].amplitudes());
    const Complex g31 = s[2].amplitudes().dot(s[0].amplitudes());
    for (const Complex& g : {g12, g23, g31}) {
        if (std::abs(g) < tol.min_overlap) {
            throw RangeError("a pair of states is orthogonal; the triple-product phase is undefined");
        }
    }
    TripleInvariants t;
    t.a12 = std::norm(g12);
    t.a23 = std::norm(g23);
    t.a31 = std::norm(g31);
    t.xi = std::arg(g12 * g23 * g31);
    if (t.xi <= -kPi) {
        t.xi = kPi;
    }
    return t;
}

double entropy_from_invariants(const TripleInvariants& t, const std::array<double, 3>& p,
                               const Tolerances& tol) {
    const InvariantGram ig = gram_from_invariants(t, tol);
    if (!ig.feasible()) {
        std::ostringstream os;
        os << "invariants are infeasible (determinant " << ig.determinant << ")";
        throw NotPositive(os.str());
    }
    const std::vector<double> probs(p.begin(), p.end());
    shannon_entropy(probs);  // validates the distribution
    return entropy_of_spectrum(weighted_gram_spectrum(ig.gram->entries(), probs));
}

XiScan xi_scan(double a12, double a23, double a31, int grid_size, const Tolerances& tol) {
    if (grid_size < 1) {
        throw RangeError("grid size must be positive");
    }
    for (double a : {a12, a23, a31}) {
        if (!(a > 0.0 && a <= 1.0)) {
            throw RangeError("squared overlaps must lie in (0, 1]; a zero overlap leaves xi undefined");
        }
    }
    const double prod = std::sqrt(a12 * a23 * a31);
    const double c0 = (a12 + a23 + a31 - 1.0) / (2.0 * prod);
    if (c0 > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "no feasible phase: determinant at xi = 0 is "
           << triple_determinant({a12, a23, a31, 0.0});
        throw NotPositive(os.str());
    }
    XiScan scan;
    scan.xi_max = c0 <= -1.0 ? kPi : std::acos(std::min(c0, 1.0));
    for (int k = 0; k < grid_size; ++k) {
        XiScanRow row;
        row.xi = grid_size == 1 ? 0.0 : scan.xi_max * k / (grid_size - 1);
        row.cos_xi = std::cos(row.xi);
        row.entropy = entropy_from_invariants({a12, a23, a31, row.xi}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, tol);
        scan.rows.push_back(row);
    }
    scan.monotone = true;
    scan.nondecreasing = true;
    for (std::size_t k = 1; k < scan.rows.size(); ++k) {
        // Row k has the smaller cos(xi).
        const double step = scan.rows[k].entropy - scan.rows[k - 1].entropy;
        scan.max_rise = std::max(scan.max_rise, -step);
        if (step < -kMonotoneMargin) {
            scan.monotone = false;
        }
        if (step > kMonotoneMargin) {
            scan.nondecreasing = false;
        }
    }
    if (scan.xi_max < kPi && scan.rows.size() >= 2) {
        const double last = scan.rows.back().entropy - scan.rows[scan.rows.size() - 2].entropy;
        scan.boundary_tie = std::abs(last) <= kMonotoneMargin;
    }
    return scan;
}

SearchMethod parse_search_method(const std::string& name) {
    if (name == "grid") {
        return SearchMethod::Grid;
    }
    if (name == "random") {
        return SearchMethod::Random;
    }
    if (name == "hillclimb") {
        return SearchMethod::HillClimb;
    }
    throw RangeError("unknown search method '" + name + "' (expected grid, random or hillclimb)");
}

std::string to_string(SearchMethod m) {
    switch (m) {
        case SearchMethod::Grid:
            return "grid";
        case SearchMethod::Random:
            return "random";
        case SearchMethod::HillClimb:
            return "hillclimb";
    }
    return "unknown";
}

namespace {

// A candidate source: squared overlaps plus (for three states) the phase.
struct Point {
    std::array<double, 3> a{};
    double xi = 0.0;
};

class Evaluator {
public:
    Evaluator(int states, double separation) : states_(states), sep_(separation) {}

    int pairs() const { return states_ == 2 ? 1 : 3; }

    std::optional<Matrix> gram(const Point& p) const {
        for (int k = 0; k < pairs(); ++k) {
            if (!(p.a[static_cast<std::size_t>(k)] >= 0.0 && p.a[static_cast<std::size_t>(k)] <= 1.0)) {
                return std::nullopt;
            }
        }
        if (states_ == 2) {
            Matrix g = Matrix::Identity(2, 2);
            g(0, 1) = g(1, 0) = std::sqrt(p.a[0]);
            return g;
        }
        const TripleInvariants t{p.a[0], p.a[1], p.a[2], p.xi};
        if (triple_determinant(t) < 0.0) {
            return std::nullopt;
        }
        return raw_gram(t);
    }

    double entropy(const Point& p, const Matrix& g) const {
        if (states_ == 2) {
            return two_state_entropy(std::sqrt(p.a[0]), 0.5);
        }
        return equiprobable_entropy(g);
    }

    // Minimum squared-overlap increase from p1 to p2.
    double min_delta(const Point& p1, const Point& p2) const {
        double m = INFINITY;
        for (int k = 0; k < pairs(); ++k) {
            m = std::min(m, p2.a[static_cast<std::size_t>(k)] - p1.a[static_cast<std::size_t>(k)]);
        }
        return m;
    }

    CounterexamplePair make_pair(const Point& p1, const Point& p2, const Matrix& g1, const Matrix& g2,
                                 double s1, double s2) const {
        CounterexamplePair pair;
        pair.gram1 = g1;
        pair.gram2 = g2;
        pair.entropy1 = s1;
        pair.entropy2 = s2;
        for (int k = 0; k < pairs(); ++k) {
            pair.overlap_deltas.push_back(p2.a[static_cast<std::size_t>(k)] - p1.a[static_cast<std::size_t>(k)]);
        }
        if (states_ == 3) {
            pair.invariants1 = TripleInvariants{p1.a[0], p1.a[1], p1.a[2], p1.xi};
            pair.invariants2 = TripleInvariants{p2.a[0], p2.a[1], p2.a[2], p2.xi};
        }
        return pair;
    }

    double separation() const { return sep_; }
    int states() const { return states_; }

private:
    int states_;
    double sep_;
};

struct Candidate {
    bool feasible = false;
    bool dominates = false;  // overlaps all grow by the separation
    double gap = 0.0;        // S2 - S1
    std::optional<CounterexamplePair> pair;
};

Candidate evaluate(const Evaluator& ev, const Point& p1, const Point& p2) {
    Candidate c;
    const auto g1 = ev.gram(p1);
    const auto g2 = ev.gram(p2);
    if (!g1 || !g2) {
        return c;
    }
    c.feasible = true;
    const double s1 = ev.entropy(p1, *g1);
    const double s2 = ev.entropy(p2, *g2);
    c.gap = s2 - s1;
    c.dominates = ev.min_delta(p1, p2) > ev.separation();
    if (c.dominates && c.gap > ev.separation()) {
        CounterexamplePair pair = ev.make_pair(p1, p2, *g1, *g2, s1, s2);
        if (verify_counterexample(pair, ev.separation()).valid) {
            c.pair = std::move(pair);
        }
    }
    return c;
}

void record(SearchOutcome& out, const Candidate& c) {
    ++out.evaluations;
    if (c.feasible) {
        ++out.feasible_evaluations;
        if (c.dominates) {
            out.best_gap = std::max(out.best_gap, c.gap);
        }
    }
}

Point random_point(std::mt19937_64& rng, int states) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Point p;
    for (int k = 0; k < (states == 2 ? 1 : 3); ++k) {
        p.a[static_cast<std::size_t>(k)] = unit(rng);
    }
    p.xi = states == 2 ? 0.0 : kPi * unit(rng);
    return p;
}

void search_random(const Evaluator& ev, std::mt19937_64& rng, SearchOutcome& out) {
    std::uniform_real_distribution<double> step(0.0, 0.25);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    while (out.evaluations < out.budget) {
        const Point p1 = random_point(rng, ev.states());
        Point p2 = p1;
        for (int k = 0; k < ev.pairs(); ++k) {
            p2.a[static_cast<std::size_t>(k)] += ev.separation() + step(rng);
        }
        p2.xi = ev.states() == 2 ? 0.0 : kPi * unit(rng);
        const Candidate c = evaluate(ev, p1, p2);
        record(out, c);
        if (c.pair) {
            out.pair = c.pair;
            return;
        }
    }
}

void search_grid(const Evaluator& ev, SearchOutcome& out) {
    // Symmetric overlaps: source 1 = (a, a, a, xi1), source 2 = (a + d, ..., xi2).
    const int dims = ev.states() == 2 ? 2 : 4;
    int m = std::max(2, static_cast<int>(std::floor(std::pow(static_cast<double>(out.budget), 1.0 / dims))));
    while (std::pow(m, dims) > static_cast<double>(out.budget) && m > 2) {
        --m;
    }
    auto level = [m](int i) { return (i + 0.5) / m; };
    const int xi_steps = ev.states() == 2 ? 1 : m;
    for (int ia = 0; ia < m; ++ia) {
        for (int id = 0; id < m; ++id) {
            for (int x1 = 0; x1 < xi_steps; ++x1) {
                for (int x2 = 0; x2 < xi_steps; ++x2) {
                    if (out.evaluations >= out.budget) {
                        return;
                    }
                    const double a = level(ia);
                    const double d = (1.0 - a) * level(id);
                    Point p1;
                    Point p2;
                    p1.a = {a, a, a};
                    p2.a = {a + d, a + d, a + d};
                    if (ev.states() == 3) {
                        p1.xi = kPi * x1 / std::max(1, xi_steps - 1);
                        p2.xi = kPi * x2 / std::max(1, xi_steps - 1);
                    }
                    const Candidate c = evaluate(ev, p1, p2);
                    record(out, c);
                    if (c.pair) {
                        out.pair = c.pair;
                        return;
                    }
                }
            }
        }
    }
}

void search_hillclimb(const Evaluator& ev, std::mt19937_64& rng, SearchOutcome& out) {
    constexpr double kPenalty = 10.0;
    constexpr double kInitialStep = 0.1;
    constexpr double kMinStep = 1e-6;
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double margin = 2.0 * ev.separation();

    auto objective = [&](const Point& p1, const Point& p2, const Candidate& c) {
        double violation = 0.0;
        for (int k = 0; k < ev.pairs(); ++k) {
            violation += std::max(0.0, p1.a[static_cast<std::size_t>(k)] + margin - p2.a[static_cast<std::size_t>(k)]);
        }
        return c.gap - kPenalty * violation;
    };
    auto reflect = [](double x, double lo, double hi) {
        while (x < lo || x > hi) {
            x = x < lo ? 2 * lo - x : 2 * hi - x;
        }
        return x;
    };

    std::optional<CounterexamplePair> best;
    double best_gap = -INFINITY;
    while (out.evaluations < out.budget) {
        // Restart from a random feasible pair.
        Point p1;
        Point p2;
        Candidate cur;
        do {
            p1 = random_point(rng, ev.states());
            p2 = random_point(rng, ev.states());
            cur = evaluate(ev, p1, p2);
            record(out, cur);
        } while (!cur.feasible && out.evaluations < out.budget);
        if (!cur.feasible) {
            break;
        }
        double f = objective(p1, p2, cur);
        double step = kInitialStep;
        while (step > kMinStep && out.evaluations < out.budget) {
            Point q1 = p1;
            Point q2 = p2;
            for (int k = 0; k < ev.pairs(); ++k) {
                q1.a[static_cast<std::size_t>(k)] = reflect(q1.a[static_cast<std::size_t>(k)] + step * gauss(rng), 0.0, 1.0);
                q2.a[static_cast<std::size_t>(k)] = reflect(q2.a[static_cast<std::size_t>(k)] + step * gauss(rng), 0.0, 1.0);
            }
            if (ev.states() == 3) {
                q1.xi = reflect(q1.xi + step * gauss(rng), 0.0, kPi);
                q2.xi = reflect(q2.xi + step * gauss(rng), 0.0, kPi);
            }
            const Candidate c = evaluate(ev, q1, q2);
            record(out, c);
            const double fq = c.feasible ? objective(q1, q2, c) : -INFINITY;
            if (fq > f) {
                p1 = q1;
                p2 = q2;
                f = fq;
                if (c.pair && c.gap > best_gap) {
                    best = c.pair;
                    best_gap = c.gap;
                }
            } else {
                step *= 0.5;
            }
        }
    }
    out.pair = std::move(best);
}

}  // namespace

SearchOutcome overlap_dominance_counterexample(std::uint64_t seed, long budget, SearchMethod method,
                                               int states, double separation) {
    if (budget < 1) {
        throw RangeError("search budget must be at least 1");
    }
    if (states != 2 && states != 3) {
        throw RangeError("overlap-dominance search supports 2 or 3 states");
    }
    if (!(separation > 0.0)) {
        throw RangeError("separation must be positive");
    }
    SearchOutcome out;
    out.seed = seed;
    out.method = method;
    out.states = states;
    out.budget = budget;
    const Evaluator ev(states, separation);
    std::mt19937_64 rng(seed);
    switch (method) {
        case SearchMethod::Grid:
            search_grid(ev, out);
            break;
        case SearchMethod::Random:
            search_random(ev, rng, out);
            break;
        case SearchMethod::HillClimb:
            search_hillclimb(ev, rng, out);
            break;
    }
    return out;
}

CounterexampleCheck verify_counterexample(const CounterexamplePair& pair, double separation) {
    CounterexampleCheck check;
    const Eigen::Index n = pair.gram1.rows();
    if (n != pair.gram2.rows() || n < 2) {
        return check;
    }
    Tolerances tol;
    const StateSet s1 = realize_from_gram(GramMatrix(pair.gram1, tol), tol);
    const StateSet s2 = realize_from_gram(GramMatrix(pair.gram2, tol), tol);
    const std::vector<double> probs(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
    check.entropy1 = von_neumann_entropy(density_matrix(Ensemble(s1, probs)));
    check.entropy2 = von_neumann_entropy(density_matrix(Ensemble(s2, probs)));

    bool dominates = true;
    const std::array<std::pair<int, int>, 3> edges{{{0, 1}, {1, 2}, {2, 0}}};
    const int pairs = n == 2 ? 1 : 3;
    for (int k = 0; k < pairs; ++k) {
        const auto [i, j] = edges[static_cast<std::size_t>(k)];
        const double o1 = std::norm(s1[static_cast<std::size_t>(i)].amplitudes().dot(s1[static_cast<std::size_t>(j)].amplitudes()));
        const double o2 = std::norm(s2[static_cast<std::size_t>(i)].amplitudes().dot(s2[static_cast<std::size_t>(j)].amplitudes()));
        check.overlap_deltas.push_back(o2 - o1);
        if (!(o2 - o1 > separation)) {
            dominates = false;
        }
    }
    check.valid = dominates && check.entropy2 > check.entropy1 + separation;
    return check;
}

}  // namespace qperm
