#include "qperm/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qperm::io {

ParseError::ParseError(const std::string& field, const std::string& problem)
    : Error("invalid field '" + field + "': " + problem), field_(field) {}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path, "cannot open file");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path, std::string("malformed JSON: ") + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path + "'");
    }
    out << text;
}

json to_json(Complex c) {
    return json::array({c.real(), c.imag()});
}

json to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(to_json(v(i)));
    }
    return out;
}

json to_json(const Matrix& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(to_json(m(i, j)));
        }
        out.push_back(std::move(row));
    }
    return out;
}

Complex complex_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ParseError(field, "expected a [re, im] pair of numbers");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Vector vector_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) {
        throw ParseError(field, "expected a non-empty array of [re, im] pairs");
    }
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], field + "[" + std::to_string(i) + "]");
    }
    return v;
}

Matrix matrix_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) {
        throw ParseError(field, "expected a non-empty array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    Matrix m;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string rf = field + "[" + std::to_string(i) + "]";
        const Vector row = vector_from_json(j[i], rf);
        if (i == 0) {
            m.resize(rows, row.size());
        } else if (row.size() != m.cols()) {
            throw ParseError(rf, "row length differs from the first row");
        }
        m.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    return m;
}

namespace {

const json& require(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(where.empty() ? key : where + "." + key, "missing");
    }
    return j.at(key);
}

Eigen::Index read_dim(const json& j) {
    const json& d = require(j, "dim", "");
    if (!d.is_number_integer() || d.get<long long>() < 1) {
        throw ParseError("dim", "expected a positive integer");
    }
    return static_cast<Eigen::Index>(d.get<long long>());
}

std::string read_label(const json& entry, const std::string& field, std::size_t index) {
    if (!entry.contains("label")) {
        return std::to_string(index);
    }
    if (!entry["label"].is_string()) {
        throw ParseError(field + ".label", "expected a string");
    }
    return entry["label"].get<std::string>();
}

}  // namespace

StateSet state_set_from_json(const json& j) {
    const Eigen::Index dim = read_dim(j);
    const json& states = require(j, "states", "");
    if (!states.is_array() || states.empty()) {
        throw ParseError("states", "expected a non-empty array");
    }
    std::vector<StateVector> vs;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const std::string field = "states[" + std::to_string(i) + "]";
        const json& amps = require(states[i], "amps", field);
        const Vector v = vector_from_json(amps, field + ".amps");
        if (v.size() != dim) {
            throw ParseError(field + ".amps", "length differs from dim");
        }
        try {
            vs.emplace_back(v);
        } catch (const Error& e) {
            throw ParseError(field + ".amps", e.what());
        }
        labels.push_back(read_label(states[i], field, i));
    }
    try {
        return StateSet(std::move(vs), std::move(labels));
    } catch (const Error& e) {
        throw ParseError("states", e.what());
    }
}

json to_json(const StateSet& s) {
    json states = json::array();
    for (std::size_t i = 0; i < s.size(); ++i) {
        states.push_back({{"label", s.labels()[i]}, {"amps", to_json(s[i].amplitudes())}});
    }
    return {{"dim", s.dim()}, {"states", std::move(states)}};
}

MixedStateSet ancilla_from_json(const json& j, const Tolerances& tol) {
    if (j.is_object() && j.contains("states")) {
        return MixedStateSet::from_pure(state_set_from_json(j));
    }
    const Eigen::Index dim = read_dim(j);
    const json& rhos = require(j, "rhos", "");
    if (!rhos.is_array() || rhos.empty()) {
        throw ParseError("rhos", "expected a non-empty array");
    }
    std::vector<Matrix> ms;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        const std::string field = "rhos[" + std::to_string(i) + "]";
        Matrix m = matrix_from_json(require(rhos[i], "matrix", field), field + ".matrix");
        if (m.rows() != dim || m.cols() != dim) {
            throw ParseError(field + ".matrix", "shape differs from dim x dim");
        }
        ms.push_back(std::move(m));
        labels.push_back(read_label(rhos[i], field, i));
    }
    try {
        return MixedStateSet::from_density_matrices(std::move(ms), std::move(labels), tol);
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError("rhos", e.what());
    }
}

Ensemble ensemble_from_json(const json& j) {
    StateSet states = state_set_from_json(j);
    const json& probs = require(j, "probs", "");
    if (!probs.is_array()) {
        throw ParseError("probs", "expected an array of numbers");
    }
    std::vector<double> p;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (!probs[i].is_number()) {
            throw ParseError("probs[" + std::to_string(i) + "]", "expected a number");
        }
        p.push_back(probs[i].get<double>());
    }
    try {
        return Ensemble(std::move(states), std::move(p));
    } catch (const Error& e) {
        throw ParseError("probs", e.what());
    }
}

DeleterFile unitary_from_json(const json& j) {
    const Eigen::Index dim = read_dim(j);
    DeleterFile f;
    f.matrix = matrix_from_json(require(j, "matrix", ""), "matrix");
    if (f.matrix.rows() != dim || f.matrix.cols() != dim) {
        throw ParseError("matrix", "shape differs from dim x dim");
    }
    if (j.contains("blank")) {
        f.blank = vector_from_json(j["blank"], "blank");
    }
    if (j.contains("envInit")) {
        f.env_init = vector_from_json(j["envInit"], "envInit");
    }
    return f;
}

json unitary_to_json(const Matrix& m) {
    return {{"dim", m.rows()}, {"matrix", to_json(m)}};
}

json to_json(const FeasibilityReport& r) {
    json index = json::array();
    for (const auto& [i, k] : r.index) {
        index.push_back(json::array({i, k}));
    }
    return {{"feasible", r.feasible},
            {"minEigenvalue", r.min_eigenvalue},
            {"hMatrix", to_json(r.h)},
            {"index", std::move(index)},
            {"witnessGram", r.witness_gram ? to_json(r.witness_gram->entries()) : json(nullptr)}};
}

json to_json(const DeletionTrace& t) {
    return {{"valid", t.valid},
            {"environmentStates", to_json(t.environment_states)},
            {"residualFidelity", t.residual_fidelity},
            {"environmentPurity", t.environment_purity}};
}

json to_json(const TeleportTrace& t) {
    json outs = json::array();
    for (const auto& s : t.corrected_outputs) {
        outs.push_back(to_json(s.amplitudes()));
    }
    return {{"input", to_json(t.input.amplitudes())},
            {"outcomeOrder", json::array({"Phi+", "Psi+", "Phi-", "Psi-"})},
            {"corrections", json::array({"I", "X", "Z", "XZ"})},
            {"outcomeProbs", t.outcome_probs},
            {"correctedOutputs", std::move(outs)},
            {"fidelities", t.fidelities}};
}

json to_json(const TripleInvariants& t) {
    return {{"a12", t.a12}, {"a23", t.a23}, {"a31", t.a31}, {"xi", t.xi}};
}

json to_json(const CounterexamplePair& p) {
    json out = {{"gram1", to_json(p.gram1)},
                {"gram2", to_json(p.gram2)},
                {"entropy1", p.entropy1},
                {"entropy2", p.entropy2},
                {"overlapDeltas", p.overlap_deltas}};
    if (p.invariants1) {
        out["invariants1"] = to_json(*p.invariants1);
        out["invariants2"] = to_json(*p.invariants2);
    }
    return out;
}

json to_json(const SearchOutcome& o) {
    return {{"found", o.found()},
            {"seed", o.seed},
            {"method", to_string(o.method)},
            {"states", o.states},
            {"budget", o.budget},
            {"evaluations", o.evaluations},
            {"feasibleEvaluations", o.feasible_evaluations},
            {"bestGap", o.best_gap},
            {"certificate", o.pair ? to_json(*o.pair) : json(nullptr)}};
}

json to_json(const CollapseDemo& d) {
    json branches = json::array();
    for (const auto& b : d.branches) {
        branches.push_back({{"outcome", b.outcome},
                            {"probability", b.probability},
                            {"correction", to_json(b.correction)}});
    }
    return {{"branches", std::move(branches)},
            {"outsidePhysicalModel", d.outside_physical_model},
            {"note", "uses wavefunction collapse, which a trace-preserving completely positive map excludes"}};
}

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string compression_csv(const std::vector<CompressionPoint>& rows) {
    std::ostringstream os;
    os << "n,rate,keptDim,retainedWeight,avgFidelityLB\n";
    for (const auto& r : rows) {
        char kept[400];
        std::snprintf(kept, sizeof kept, "%.0f", r.kept_dim);
        os << r.n << ',' << format_real(r.rate) << ',' << kept << ',' << format_real(r.retained_weight)
           << ',' << format_real(r.avg_fidelity_lb) << '\n';
    }
    return os.str();
}

std::string xi_scan_csv(const XiScan& scan) {
    std::ostringstream os;
    os << "xi,cos_xi,S_bits\n";
    for (const auto& r : scan.rows) {
        os << format_real(r.xi) << ',' << format_real(r.cos_xi) << ',' << format_real(r.entropy) << '\n';
    }
    return os.str();
}

}  // namespace qperm::io
