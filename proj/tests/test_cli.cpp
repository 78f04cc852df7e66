#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "qperm/cli.hpp"
#include "qperm/deleting.hpp"
#include "qperm/io.hpp"

using namespace qperm;
using namespace qperm::fixtures;
using io::json;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path tmp_dir() {
    const fs::path p = fs::path(QPERM_TEST_TMP) / "cli";
    fs::create_directories(p);
    return p;
}

std::string write_json(const std::string& name, const json& j) {
    const fs::path p = tmp_dir() / name;
    std::ofstream(p) << j.dump();
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("clone-check exit paths") {
    const std::string states = write_json("pair45.json", io::to_json(pair45()));
    SUBCASE("ancilla = clones -> 0") {
        const Result r = run({"clone-check", "--states", states, "--ancilla", states});
        CHECK(r.code == cli::kAffirmative);
        const json j = json::parse(r.out);
        CHECK(j["report"]["feasible"] == true);
        CHECK(j["generationFeasible"] == true);
        CHECK(j["config"]["command"] == "clone-check");
    }
    SUBCASE("constant ancilla -> 1") {
        const std::string anc = write_json("const.json", io::to_json(StateSet({ket0(), ket0()})));
        const Result r = run({"clone-check", "--states", states, "--ancilla", anc, "--copies", "3"});
        CHECK(r.code == cli::kNegative);
        CHECK(json::parse(r.out)["report"]["minEigenvalue"].get<double>() < 0.0);
    }
    SUBCASE("orthogonal pair -> 2 naming the pair") {
        const std::string remark = write_json("remark.json", io::to_json(remark_states()));
        const std::string anc = write_json("remark_anc.json", io::to_json(StateSet({ket0(), ket0(), ket1()})));
        const Result r = run({"clone-check", "--states", remark, "--ancilla", anc});
        CHECK(r.code == cli::kError);
        CHECK(r.err.find("orthogonal") != std::string::npos);
        CHECK(r.err.find("'0'") != std::string::npos);
        CHECK(r.err.find("'1'") != std::string::npos);
    }
    SUBCASE("malformed input -> 2 naming the field") {
        const std::string bad = write_json("bad.json", json::parse(R"({"dim": 2, "states": [{"amps": [[1,0]]}]})"));
        const Result r = run({"clone-check", "--states", bad, "--ancilla", states});
        CHECK(r.code == cli::kError);
        CHECK(r.err.find("states[0].amps") != std::string::npos);
    }
    SUBCASE("missing file -> 2") {
        CHECK(run({"clone-check", "--states", "/nonexistent.json", "--ancilla", states}).code == cli::kError);
    }
    SUBCASE("missing required option -> 2") {
        CHECK(run({"clone-check", "--states", states}).code == cli::kError);
    }
}

TEST_CASE("delete-verify exit paths") {
    const std::string states = write_json("del_states.json", io::to_json(pair45()));
    SUBCASE("swap deleter -> 0 and recovery written") {
        const std::string u = write_json("swap.json", io::unitary_to_json(make_swap_deleter(2, 3).matrix()));
        const fs::path rec = tmp_dir() / "recovery.json";
        fs::remove(rec);
        const Result r = run({"delete-verify", "--unitary", u, "--states", states, "--recovery-out", rec.string()});
        CHECK(r.code == cli::kAffirmative);
        CHECK(fs::exists(rec));
        for (double f : json::parse(r.out)["recovery"]["fidelities"]) {
            CHECK(f >= 1.0 - 1e-8);
        }
    }
    SUBCASE("swap then random V -> 0") {
        auto rng = rnd::stream(81, 0);
        const Matrix v = rnd::haar_unitary(rng, 4);
        const std::string u = write_json("swapv.json", io::unitary_to_json(make_swap_deleter(2, 4, v).matrix()));
        const Result r = run({"delete-verify", "--unitary", u, "--states", states});
        CHECK(r.code == cli::kAffirmative);
        for (double f : json::parse(r.out)["recovery"]["fidelities"]) {
            CHECK(f >= 1.0 - 1e-8);
        }
    }
    SUBCASE("identity -> 1 with the residual table") {
        const std::string u = write_json("ident.json", io::unitary_to_json(Matrix::Identity(12, 12)));
        const Result r = run({"delete-verify", "--unitary", u, "--states", states});
        CHECK(r.code == cli::kNegative);
        CHECK(r.err.find("state,residualFidelity,environmentPurity") != std::string::npos);
        CHECK(json::parse(r.out)["trace"]["valid"] == false);
    }
    SUBCASE("non-unitary matrix -> 2") {
        Matrix m = Matrix::Identity(12, 12);
        m(0, 0) = 2.0;
        const std::string u = write_json("nonunit.json", io::unitary_to_json(m));
        const Result r = run({"delete-verify", "--unitary", u, "--states", states});
        CHECK(r.code == cli::kError);
        CHECK(r.err.find("matrix") != std::string::npos);
    }
    SUBCASE("incompatible dimension -> 2") {
        const std::string u = write_json("dim5.json", io::unitary_to_json(Matrix::Identity(5, 5)));
        CHECK(run({"delete-verify", "--unitary", u, "--states", states}).code == cli::kError);
    }
}

TEST_CASE("swap-deleter and collapse-demo") {
    const Result r = run({"swap-deleter", "--dim", "2", "--env-dim", "3", "--random-env", "--seed", "5"});
    CHECK(r.code == cli::kAffirmative);
    const json j = json::parse(r.out);
    CHECK(j["dim"] == 12);
    CHECK(j["config"]["seed"] == 5);
    CHECK(run({"swap-deleter", "--dim", "3", "--env-dim", "3"}).code == cli::kError);

    const Result c = run({"collapse-demo", "--state", "+"});
    CHECK(c.code == cli::kAffirmative);
    CHECK(json::parse(c.out)["outsidePhysicalModel"] == true);
    CHECK(run({"collapse-demo", "--state", "[[1,0],[1,0]]"}).code == cli::kError);
    CHECK(run({"collapse-demo", "--state", "sideways"}).code == cli::kError);
}

TEST_CASE("entropy") {
    json e = io::to_json(pair45());
    e["probs"] = {0.5, 0.5};
    const std::string path = write_json("ens45.json", e);
    const Result r = run({"entropy", "--ensemble", path});
    CHECK(r.code == cli::kAffirmative);
    const json j = json::parse(r.out);
    CHECK(std::abs(j["vonNeumannBits"].get<double>() - 0.601) <= 5e-4);
    CHECK(j["shannonBits"].get<double>() == 1.0);

    const Result csv = run({"--format", "csv", "entropy", "--ensemble", path});
    CHECK(csv.out.rfind("S_bits,H_bits\n", 0) == 0);

    e["probs"] = {0.5};
    const std::string bad = write_json("ens_bad.json", e);
    const Result rb = run({"entropy", "--ensemble", bad});
    CHECK(rb.code == cli::kError);
    CHECK(rb.err.find("probs") != std::string::npos);
}

TEST_CASE("schumacher") {
    const Result r = run({"schumacher", "--n", "8,16", "--rate", "0.4,0.8"});
    CHECK(r.code == cli::kAffirmative);
    CHECK(r.out.rfind("n,rate,keptDim,retainedWeight,avgFidelityLB\n8,0.4,8,", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);

    const Result j = run({"--format", "json", "schumacher", "--n", "16", "--rate", "0.8"});
    CHECK(j.code == cli::kAffirmative);
    CHECK(std::abs(json::parse(j.out)["rows"][0]["retainedWeight"].get<double>() - 0.945997378917754) < 1e-12);

    CHECK(run({"schumacher", "--n", "300"}).code == cli::kError);
    CHECK(run({"schumacher", "--n", "20", "--nmax", "10"}).code == cli::kError);
    CHECK(run({"schumacher", "--overlap", "0"}).code == cli::kError);
    CHECK(run({"schumacher", "--overlap", "1.5"}).code == cli::kError);
}

TEST_CASE("geometry-scan") {
    SUBCASE("S rising with cos xi gives the negative verdict") {
        const Result r = run({"geometry-scan", "--a12", "0.5", "--a23", "0.5", "--a31", "0.5", "--grid", "11"});
        CHECK(r.code == cli::kNegative);
        CHECK(r.out.rfind("xi,cos_xi,S_bits\n0,1,", 0) == 0);
        CHECK(r.err.find("rises with cos(xi)") != std::string::npos);
    }
    SUBCASE("a single-row scan is trivially monotone") {
        CHECK(run({"geometry-scan", "--grid", "1"}).code == cli::kAffirmative);
    }
    SUBCASE("infeasible overlaps -> 2 naming the determinant") {
        const Result r = run({"geometry-scan", "--a12", "0.9", "--a23", "0.9", "--a31", "0.1"});
        CHECK(r.code == cli::kError);
        CHECK(r.err.find("determinant") != std::string::npos);
    }
    SUBCASE("zero overlap -> 2") {
        CHECK(run({"geometry-scan", "--a12", "0"}).code == cli::kError);
    }
    SUBCASE("json and the csv sidecar") {
        const Result j = run({"--format", "json", "geometry-scan", "--grid", "3"});
        CHECK(json::parse(j.out)["rows"].size() == 3);
        const fs::path out = tmp_dir() / "scan.csv";
        fs::remove(out.string() + ".meta.json");
        const Result f = run({"--out", out.string(), "geometry-scan", "--grid", "3"});
        CHECK(f.out.empty());
        CHECK(slurp(out).rfind("xi,cos_xi,S_bits\n", 0) == 0);
        const json meta = json::parse(slurp(out.string() + ".meta.json"));
        CHECK(meta["config"]["command"] == "geometry-scan");
        CHECK(meta["grid"] == 3);
    }
}

TEST_CASE("counterexample") {
    const Result r = run({"--seed", "11", "counterexample", "--budget", "20000", "--method", "hillclimb"});
    CHECK(r.code == cli::kAffirmative);
    const json j = json::parse(r.out);
    CHECK(j["found"] == true);
    CHECK(j["certificate"]["gram1"].size() == 3);
    CHECK(j["certificate"]["overlapDeltas"].size() == 3);

    CHECK(run({"counterexample", "--budget", "2000", "--states", "2"}).code == cli::kNegative);
    CHECK(run({"counterexample", "--method", "anneal"}).code == cli::kError);
    CHECK(run({"counterexample", "--budget", "0"}).code == cli::kError);
}

TEST_CASE("teleport-demo") {
    const Result r = run({"teleport-demo", "--state", "+i"});
    CHECK(r.code == cli::kAffirmative);
    for (double f : json::parse(r.out)["fidelities"]) {
        CHECK(std::abs(f - 1.0) <= 1e-10);
    }
    CHECK(run({"teleport-demo", "--state", "random", "--seed", "3"}).code == cli::kAffirmative);
    CHECK(run({"teleport-demo", "--state", "[[1,0],[0,0],[0,0]]"}).code == cli::kError);
}

TEST_CASE("global flags and usage") {
    CHECK(run({}).code == cli::kError);
    CHECK(run({"frobnicate"}).code == cli::kError);
    CHECK(run({"--format", "xml", "teleport-demo"}).code == cli::kError);
    CHECK(run({"--tol-psd", "-1", "teleport-demo"}).code == cli::kError);
    CHECK(run({"--help"}).code == cli::kAffirmative);

    SUBCASE("seed precedence") {
        ::setenv("QPERM_SEED", "42", 1);
        CHECK(json::parse(run({"teleport-demo"}).out)["config"]["seed"] == 42);
        CHECK(json::parse(run({"--seed", "7", "teleport-demo"}).out)["config"]["seed"] == 7);
        ::setenv("QPERM_SEED", "forty-two", 1);
        const Result bad = run({"teleport-demo"});
        CHECK(bad.code == cli::kError);
        CHECK(bad.err.find("QPERM_SEED") != std::string::npos);
        ::unsetenv("QPERM_SEED");
        CHECK(json::parse(run({"teleport-demo"}).out)["config"]["seed"] == 0);
    }
    SUBCASE("tolerances are echoed") {
        const json j = json::parse(run({"--tol-psd", "1e-7", "--min-overlap", "1e-4", "teleport-demo"}).out);
        CHECK(j["config"]["tolPsd"] == 1e-7);
        CHECK(j["config"]["minOverlap"] == 1e-4);
    }
}

TEST_CASE("the binary writes identical files on repeated runs") {
    const fs::path a = tmp_dir() / "det_a.json";
    const fs::path b = tmp_dir() / "det_b.json";
    const std::string base = std::string("\"") + QPERM_CLI_PATH + "\" --seed 5 --out ";
    const std::string tail = " counterexample --budget 5000 --method random";
    CHECK(std::system((base + "\"" + a.string() + "\"" + tail).c_str()) == 0);
    CHECK(std::system((base + "\"" + b.string() + "\"" + tail).c_str()) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK_FALSE(slurp(a).empty());
}
