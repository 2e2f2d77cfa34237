#pragma once

// JSON encoding of nets, matrices, trajectories and verdicts. Rationals are
// strings in canonical form ("3", "-7/2", "inf", "-inf"); integer JSON numbers
// are accepted on input.

#include "ptime/event_graph.hpp"
#include "ptime/oracle.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace ptime::io {

using Json = nlohmann::ordered_json;

/// Malformed document; message names the offending field.
class FormatError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

ExtendedRational read_extended(const Json& v, const std::string& field);
Rational read_rational(const Json& v, const std::string& field);

PTimeEventGraph read_net(const Json& doc);
ShiftedMatrices read_matrices(const Json& doc);
/// Accepts {"x": [[...], ...]} or a bare array of rows.
Trajectory read_trajectory(const Json& doc);

/// True for documents carrying "M_zero" rather than "places".
bool is_matrix_document(const Json& doc);

Json write(const ExtendedRational& x);
Json write(const Rational& x);
Json write_net(const PTimeEventGraph& net);
Json write_matrices(const ShiftedMatrices& m);
Json write_matrix(const TropicalMatrix& a);
Json write_trajectory(const Trajectory& t);
Json write_path(const Path& p);
Json write_star(const TropicalMatrix& star, const NodeIndexMap& map);
Json write_violations(const std::vector<Violation>& violations);
Json write_feasibility(const FeasibilityReport& r);

/// Certificate object; pumpable pairs carry the pumped paths r(1..3) when
/// `graph` is given.
Json write_certificate(const InfWeightVerdict& v, const StaticGraph* graph = nullptr);

/// Matrix-mode verdict with the exhaustive pair list when requested.
Json write_analysis(const InfWeightAnalysis& a, bool exhaustive);

/// Net-mode verdict: class, certificate over the normalized net, witness.
Json write_consistency(const ConsistencyVerdict& v);

}  // namespace ptime::io
