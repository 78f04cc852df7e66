#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "qperm/cloning.hpp"
#include "qperm/compression.hpp"
#include "qperm/deleting.hpp"
#include "qperm/geometry.hpp"
#include "qperm/statekit.hpp"
#include "qperm/teleport.hpp"

// File formats. Complex numbers are always two-element [re, im] arrays.
//
//   StateSet      { "dim": d, "states": [ { "label": s, "amps": [[re, im], ...] } ] }
//   ancillas      a StateSet (pure ancillas), or
//                 { "dim": d, "rhos": [ { "label": s, "matrix": [[[re, im], ...], ...] } ] }
//   Ensemble      a StateSet plus "probs": [p, ...]
//   Unitary       { "dim": D, "matrix": [[[re, im], ...], ...] }, optionally with
//                 "systemDim", "blank" and "envInit" for deleters
namespace qperm::io {

using json = nlohmann::json;

/// Malformed input; `field()` names the offending JSON path.
class ParseError : public Error {
public:
    ParseError(const std::string& field, const std::string& problem);
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

json to_json(Complex c);
json to_json(const Vector& v);
json to_json(const Matrix& m);
Complex complex_from_json(const json& j, const std::string& field);
Vector vector_from_json(const json& j, const std::string& field);
Matrix matrix_from_json(const json& j, const std::string& field);

StateSet state_set_from_json(const json& j);
json to_json(const StateSet& s);

MixedStateSet ancilla_from_json(const json& j, const Tolerances& tol = {});
Ensemble ensemble_from_json(const json& j);

struct DeleterFile {
    Matrix matrix;
    std::optional<Vector> blank;
    std::optional<Vector> env_init;
};
DeleterFile unitary_from_json(const json& j);
json unitary_to_json(const Matrix& m);

json to_json(const FeasibilityReport& r);
json to_json(const DeletionTrace& t);
json to_json(const TeleportTrace& t);
json to_json(const SearchOutcome& o);
json to_json(const CounterexamplePair& p);
json to_json(const TripleInvariants& t);
json to_json(const CollapseDemo& d);

/// Formats with 12 significant digits.
std::string format_real(double x);

/// Header: n,rate,keptDim,retainedWeight,avgFidelityLB
std::string compression_csv(const std::vector<CompressionPoint>& rows);
/// Header: xi,cos_xi,S_bits
std::string xi_scan_csv(const XiScan& scan);

}  // namespace qperm::io
