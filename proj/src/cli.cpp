#include "qperm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "qperm/io.hpp"
#include "qperm/linalg.hpp"
#include "qperm/random.hpp"

namespace qperm::cli {

namespace {

using io::json;

struct RunConfig {
    double tol_psd = Tolerances{}.psd;
    double min_overlap = Tolerances{}.min_overlap;
    std::optional<std::uint64_t> seed_flag;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string format;

    Tolerances tolerances() const {
        Tolerances t;
        t.psd = tol_psd;
        t.min_overlap = min_overlap;
        t.validate();
        return t;
    }

    json provenance(const std::string& command) const {
        return {{"command", command},
                {"seed", seed},
                {"tolPsd", tol_psd},
                {"minOverlap", min_overlap},
                {"format", format}};
    }
};

class UsageError : public Error {
public:
    using Error::Error;
};

std::uint64_t resolve_seed(const RunConfig& cfg) {
    if (cfg.seed_flag) {
        return *cfg.seed_flag;
    }
    if (const char* env = std::getenv("QPERM_SEED")) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used != std::string(env).size()) {
                throw std::invalid_argument("trailing characters");
            }
            return v;
        } catch (const std::exception&) {
            throw UsageError(std::string("QPERM_SEED is not an unsigned integer: '") + env + "'");
        }
    }
    return 0;
}

class Emitter {
public:
    Emitter(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

    void json_artifact(const std::string& command, json body) const {
        body["config"] = cfg_.provenance(command);
        emit(body.dump(2) + "\n");
    }

    // CSV keeps its exact header; provenance goes to a sidecar next to --out.
    void csv_artifact(const std::string& command, const std::string& csv, json meta) const {
        emit(csv);
        if (!cfg_.out_path.empty()) {
            meta["config"] = cfg_.provenance(command);
            io::write_text_file(cfg_.out_path + ".meta.json", meta.dump(2) + "\n");
        }
    }

private:
    void emit(const std::string& text) const {
        if (cfg_.out_path.empty()) {
            out_ << text;
        } else {
            io::write_text_file(cfg_.out_path, text);
        }
    }

    const RunConfig& cfg_;
    std::ostream& out_;
};

std::string format_or(const RunConfig& cfg, const std::string& fallback) {
    return cfg.format.empty() ? fallback : cfg.format;
}

StateVector parse_qubit_spec(const std::string& spec, std::uint64_t seed) {
    const double r = 1.0 / std::sqrt(2.0);
    Vector v(2);
    if (spec == "0") {
        v << 1.0, 0.0;
    } else if (spec == "1") {
        v << 0.0, 1.0;
    } else if (spec == "+") {
        v << r, r;
    } else if (spec == "-") {
        v << r, -r;
    } else if (spec == "+i") {
        v << r, Complex(0.0, r);
    } else if (spec == "-i") {
        v << r, Complex(0.0, -r);
    } else if (spec == "random") {
        auto rng = rnd::stream(seed, 0);
        return rnd::haar_state(rng, 2);
    } else {
        json j;
        try {
            j = json::parse(spec);
        } catch (const json::parse_error&) {
            throw io::ParseError("state", "expected 0, 1, +, -, +i, -i, random or [[re,im],[re,im]]");
        }
        v = io::vector_from_json(j, "state");
        if (v.size() != 2) {
            throw io::ParseError("state", "a qubit needs exactly two amplitudes");
        }
    }
    try {
        return StateVector(v);
    } catch (const Error& e) {
        throw io::ParseError("state", e.what());
    }
}

int cmd_clone_check(const RunConfig& cfg, const std::string& states_file,
                    const std::string& ancilla_file, int copies, std::ostream& out, std::ostream& err) {
    const Tolerances tol = cfg.tolerances();
    const StateSet psi = io::state_set_from_json(io::read_json_file(states_file));
    const MixedStateSet anc = io::ancilla_from_json(io::read_json_file(ancilla_file), tol);
    const FeasibilityReport gen = generation_feasible(psi, anc, tol);
    const FeasibilityReport clone = cloning_feasible(psi, anc, copies, tol);
    if (gen.feasible != clone.feasible) {
        err << "warning: cloning and generation verdicts disagree\n";
    }
    json body = {{"copies", copies},
                 {"generationFeasible", gen.feasible},
                 {"report", io::to_json(clone)}};
    Emitter(cfg, out).json_artifact("clone-check", std::move(body));
    return clone.feasible ? kAffirmative : kNegative;
}

int cmd_delete_verify(const RunConfig& cfg, const std::string& unitary_file,
                      const std::string& states_file, const std::string& recovery_out,
                      std::ostream& out, std::ostream& err) {
    const Tolerances tol = cfg.tolerances();
    const StateSet psi = io::state_set_from_json(io::read_json_file(states_file));
    const io::DeleterFile file = io::unitary_from_json(io::read_json_file(unitary_file));
    const Eigen::Index d = psi.dim();
    if (file.matrix.rows() % (d * d) != 0) {
        throw io::ParseError("matrix", "dimension is not a multiple of systemDim^2");
    }
    const Eigen::Index env_dim = file.matrix.rows() / (d * d);
    const StateVector blank(file.blank ? *file.blank : StateVector::basis(d, 0).amplitudes());
    const StateVector env_init(file.env_init ? *file.env_init
                                             : StateVector::basis(env_dim, 0).amplitudes());
    std::optional<UnitaryMap> u;
    try {
        u.emplace(file.matrix, tol.unit);
    } catch (const NotUnitary& e) {
        throw io::ParseError("matrix", e.what());
    }
    const DeletionTrace trace = is_valid_deleter(*u, psi, blank, env_init, tol);

    json body = {{"trace", io::to_json(trace)}, {"recovery", nullptr}};
    int code = kAffirmative;
    if (!trace.valid) {
        err << "not a valid deleter\n" << "state,residualFidelity,environmentPurity\n";
        for (std::size_t i = 0; i < psi.size(); ++i) {
            err << psi.labels()[i] << ',' << io::format_real(trace.residual_fidelity[i]) << ','
                << io::format_real(trace.environment_purity[i]) << '\n';
        }
        code = kNegative;
    } else {
        try {
            const UnitaryMap w = recover_deleted(psi, trace.environment_states, tol);
            std::vector<double> fids;
            const Eigen::Index dim = w.dim();
            for (std::size_t i = 0; i < psi.size(); ++i) {
                const Vector back = w.apply(linalg::pad(trace.environment_states[i].amplitudes(), dim));
                fids.push_back(fidelity(linalg::pad(psi[i].amplitudes(), dim), back));
            }
            body["recovery"] = {{"unitary", io::unitary_to_json(w.matrix())}, {"fidelities", fids}};
            if (!recovery_out.empty()) {
                io::write_text_file(recovery_out, io::unitary_to_json(w.matrix()).dump(2) + "\n");
            }
            for (double f : fids) {
                if (f < 1.0 - tol.del) {
                    code = kNegative;
                }
            }
        } catch (const GramMismatch& e) {
            err << e.what() << '\n';
            code = kNegative;
        }
    }
    Emitter(cfg, out).json_artifact("delete-verify", std::move(body));
    return code;
}

int cmd_swap_deleter(const RunConfig& cfg, int dim, int env_dim, bool random_env, std::ostream& out) {
    const Tolerances tol = cfg.tolerances();
    std::optional<Matrix> v;
    if (random_env) {
        auto rng = rnd::stream(cfg.seed, 0);
        v = rnd::haar_unitary(rng, env_dim);
    }
    const UnitaryMap u = make_swap_deleter(dim, env_dim, v, tol);
    json body = io::unitary_to_json(u.matrix());
    body["systemDim"] = dim;
    body["envDim"] = env_dim;
    body["randomEnvironment"] = random_env;
    Emitter(cfg, out).json_artifact("swap-deleter", std::move(body));
    return kAffirmative;
}

int cmd_collapse_demo(const RunConfig& cfg, const std::string& state, std::ostream& out) {
    const StateVector psi = parse_qubit_spec(state, cfg.seed);
    Emitter(cfg, out).json_artifact("collapse-demo", io::to_json(collapse_deleter_demo(psi)));
    return kAffirmative;
}

int cmd_entropy(const RunConfig& cfg, const std::string& ensemble_file, std::ostream& out) {
    const Ensemble e = io::ensemble_from_json(io::read_json_file(ensemble_file));
    const DensityMatrix rho = density_matrix(e);
    const double s = von_neumann_entropy(rho);
    const double h = shannon_entropy(e.probs());
    const RealVector ev = rho.eigenvalues();
    std::vector<double> eig(ev.data(), ev.data() + ev.size());
    std::reverse(eig.begin(), eig.end());
    const std::string fmt = format_or(cfg, "json");
    if (fmt == "csv") {
        const std::string csv = "S_bits,H_bits\n" + io::format_real(s) + "," + io::format_real(h) + "\n";
        Emitter(cfg, out).csv_artifact("entropy", csv, {{"eigenvalues", eig}});
    } else {
        Emitter(cfg, out).json_artifact(
            "entropy", {{"vonNeumannBits", s}, {"shannonBits", h}, {"eigenvalues", eig}});
    }
    return kAffirmative;
}

int cmd_schumacher(const RunConfig& cfg, double overlap, const std::vector<int>& ns,
                   const std::vector<double>& rates, int n_max, std::ostream& out) {
    const std::vector<CompressionPoint> rows = rate_scan(overlap, ns, rates, n_max);
    const std::string fmt = format_or(cfg, "csv");
    if (fmt == "csv") {
        Emitter(cfg, out).csv_artifact("schumacher", io::compression_csv(rows), {{"overlap", overlap}});
    } else {
        json arr = json::array();
        for (const auto& r : rows) {
            arr.push_back({{"n", r.n},
                           {"rate", r.rate},
                           {"keptQubits", r.kept_qubits},
                           {"keptDim", r.kept_dim},
                           {"retainedWeight", r.retained_weight},
                           {"avgFidelityLB", r.avg_fidelity_lb}});
        }
        Emitter(cfg, out).json_artifact("schumacher", {{"overlap", overlap}, {"rows", std::move(arr)}});
    }
    return kAffirmative;
}

int cmd_geometry_scan(const RunConfig& cfg, double a12, double a23, double a31, int grid,
                      std::ostream& out, std::ostream& err) {
    const XiScan scan = xi_scan(a12, a23, a31, grid, cfg.tolerances());
    json meta = {{"a12", a12},
                 {"a23", a23},
                 {"a31", a31},
                 {"grid", grid},
                 {"xiMax", scan.xi_max},
                 {"monotone", scan.monotone},
                 {"boundaryTie", scan.boundary_tie},
                 {"maxRiseWithCos", scan.max_rise},
                 {"nondecreasingInCos", scan.nondecreasing}};
    if (!scan.monotone && scan.nondecreasing) {
        err << "note: S rises with cos(xi) by up to " << io::format_real(scan.max_rise)
            << " bits between grid points\n";
    }
    if (scan.boundary_tie) {
        err << "note: scan ends on the det = 0 boundary with a flat final step\n";
    }
    const std::string fmt = format_or(cfg, "csv");
    if (fmt == "csv") {
        Emitter(cfg, out).csv_artifact("geometry-scan", io::xi_scan_csv(scan), std::move(meta));
    } else {
        json rows = json::array();
        for (const auto& r : scan.rows) {
            rows.push_back({{"xi", r.xi}, {"cos_xi", r.cos_xi}, {"S_bits", r.entropy}});
        }
        meta["rows"] = std::move(rows);
        Emitter(cfg, out).json_artifact("geometry-scan", std::move(meta));
    }
    return scan.monotone ? kAffirmative : kNegative;
}

int cmd_counterexample(const RunConfig& cfg, long budget, const std::string& method, int states,
                       std::ostream& out) {
    const SearchOutcome o =
        overlap_dominance_counterexample(cfg.seed, budget, parse_search_method(method), states);
    Emitter(cfg, out).json_artifact("counterexample", io::to_json(o));
    return o.found() ? kAffirmative : kNegative;
}

int cmd_teleport_demo(const RunConfig& cfg, const std::string& state, std::ostream& out) {
    const StateVector psi = parse_qubit_spec(state, cfg.seed);
    const TeleportTrace t = teleport(psi);
    bool ok = true;
    for (std::size_t k = 0; k < 4; ++k) {
        ok = ok && std::abs(t.fidelities[k] - 1.0) <= 1e-10 && std::abs(t.outcome_probs[k] - 0.25) <= 1e-12;
    }
    Emitter(cfg, out).json_artifact("teleport-demo", io::to_json(t));
    return ok ? kAffirmative : kNegative;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical checks for cloning, deleting, compression and state geometry", "qperm"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "RNG seed (falls back to $QPERM_SEED, then 0)");
    app.add_option("--tol-psd", cfg.tol_psd, "relative PSD tolerance")->check(CLI::PositiveNumber);
    app.add_option("--min-overlap", cfg.min_overlap, "minimum admissible overlap modulus")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", cfg.out_path, "output file (default: stdout)");
    app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    std::string states_file;
    std::string ancilla_file;
    int copies = 1;
    auto* clone = app.add_subcommand("clone-check", "assisted-cloning feasibility (exit 0 feasible, 1 infeasible)");
    clone->add_option("--states", states_file, "StateSet JSON")->required();
    clone->add_option("--ancilla", ancilla_file, "ancilla StateSet or density-matrix JSON")->required();
    clone->add_option("--copies", copies, "copies already held")->check(CLI::Range(1, 16));

    std::string unitary_file;
    std::string recovery_out;
    auto* del = app.add_subcommand("delete-verify", "check a deleter and build the recovery unitary");
    del->add_option("--unitary", unitary_file, "unitary JSON")->required();
    del->add_option("--states", states_file, "StateSet JSON")->required();
    del->add_option("--recovery-out", recovery_out, "also write the recovery unitary here");

    int sys_dim = 2;
    int env_dim = 3;
    bool random_env = false;
    auto* swap = app.add_subcommand("swap-deleter", "write a swap deleter unitary");
    swap->add_option("--dim", sys_dim, "system dimension")->check(CLI::Range(1, 8));
    swap->add_option("--env-dim", env_dim, "environment dimension (>= dim + 1)")->check(CLI::Range(2, 16));
    swap->add_flag("--random-env", random_env, "compose with a seeded Haar-random environment unitary");

    std::string state_spec = "0";
    auto* collapse = app.add_subcommand("collapse-demo", "measure-and-rotate deletion (uses collapse)");
    collapse->add_option("--state", state_spec, "0, 1, +, -, +i, -i, random or [[re,im],[re,im]]");

    std::string ensemble_file;
    auto* entropy = app.add_subcommand("entropy", "von Neumann and Shannon entropy of an ensemble");
    entropy->add_option("--ensemble", ensemble_file, "ensemble JSON")->required();

    double overlap = 1.0 / std::sqrt(2.0);
    std::vector<int> ns{8, 16, 32, 64};
    std::vector<double> rates{0.4, 0.8};
    int n_max = kMaxBlockLength;
    auto* schu = app.add_subcommand("schumacher", "block-compression rate scan for two equiprobable qubit signals");
    schu->add_option("--overlap", overlap, "overlap modulus of the two signals")->check(CLI::Range(0.0, 1.0));
    schu->add_option("--n", ns, "block lengths")->delimiter(',');
    schu->add_option("--rate", rates, "rates in qubits per signal")->delimiter(',');
    schu->add_option("--nmax", n_max, "largest admissible block length")->check(CLI::Range(1, 1000));

    double a12 = 0.5;
    double a23 = 0.5;
    double a31 = 0.5;
    int grid = 101;
    auto* geo = app.add_subcommand("geometry-scan", "entropy versus cos(xi) for fixed squared overlaps");
    geo->add_option("--a12", a12)->check(CLI::Range(0.0, 1.0));
    geo->add_option("--a23", a23)->check(CLI::Range(0.0, 1.0));
    geo->add_option("--a31", a31)->check(CLI::Range(0.0, 1.0));
    geo->add_option("--grid", grid)->check(CLI::Range(1, 1000000));

    long budget = 100000;
    std::string method = "random";
    int n_states = 3;
    auto* cex = app.add_subcommand("counterexample", "search for overlap dominance with growing entropy");
    cex->add_option("--budget", budget)->check(CLI::Range(1L, 100000000L));
    cex->add_option("--method", method)->check(CLI::IsMember({"grid", "random", "hillclimb"}));
    cex->add_option("--states", n_states)->check(CLI::IsMember({2, 3}));

    auto* tele = app.add_subcommand("teleport-demo", "exact teleportation trace");
    tele->add_option("--state", state_spec, "0, 1, +, -, +i, -i, random or [[re,im],[re,im]]");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kAffirmative;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kError;
    }

    try {
        if (seed_opt->count() > 0) {
            cfg.seed_flag = seed_value;
        }
        cfg.seed = resolve_seed(cfg);
        if (*clone) {
            return cmd_clone_check(cfg, states_file, ancilla_file, copies, out, err);
        }
        if (*del) {
            return cmd_delete_verify(cfg, unitary_file, states_file, recovery_out, out, err);
        }
        if (*swap) {
            return cmd_swap_deleter(cfg, sys_dim, env_dim, random_env, out);
        }
        if (*collapse) {
            return cmd_collapse_demo(cfg, state_spec, out);
        }
        if (*entropy) {
            return cmd_entropy(cfg, ensemble_file, out);
        }
        if (*schu) {
            return cmd_schumacher(cfg, overlap, ns, rates, n_max, out);
        }
        if (*geo) {
            return cmd_geometry_scan(cfg, a12, a23, a31, grid, out, err);
        }
        if (*cex) {
            return cmd_counterexample(cfg, budget, method, n_states, out);
        }
        if (*tele) {
            return cmd_teleport_demo(cfg, state_spec, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
    return kError;
}

int main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, std::cout, std::cerr);
}

}  // namespace qperm::cli
