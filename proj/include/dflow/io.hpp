#ifndef DFLOW_IO_HPP
#define DFLOW_IO_HPP

// JSON document formats for networks, flows and potentials.
//
// All rational values travel as strings ("p", "p/q", "inf", "-inf") so that
// nothing is ever rounded. Parsing is strict: unknown fields, wrong JSON
// types, missing entries and duplicate ids are rejected with messages that
// name the offending location. Emission uses a fixed key order and a fixed
// indentation so identical inputs produce byte-identical documents.

#include <string>

#include "json.hpp"

#include "dflow/alpha.hpp"
#include "dflow/network.hpp"

namespace dflow {

using Json = nlohmann::ordered_json;

/// Parses a JSON document; wraps syntax errors in ParseError, prefixed with
/// `origin` (usually a file name) for location-bearing messages.
Json parse_json_text(const std::string& text, const std::string& origin);

/// Reads and parses a file; throws ParseError when unreadable or malformed.
Json load_json_file(const std::string& path);

/// Canonical rendering: two-space indentation (or single-line when compact)
/// plus a trailing newline.
std::string dump_json(const Json& j, bool compact = false);

/// Network document:
/// {"vertices": [{"id", "p_lo", "p_hi"}], "edges": [{"id", "tail", "head",
/// "b", "f_lo", "f_hi"}]}. Vertex order and edge order follow the arrays.
Json network_to_json(const Network& net);
Network network_from_json(const Json& j);

/// Flow document: an object mapping every edge id to a rational string.
Json flow_to_json(const Network& net, const Flow& f);
Flow flow_from_json(const Network& net, const Json& j);

/// Potential document: an object mapping every vertex id to a rational string.
Json potential_to_json(const Network& net, const Potential& phi);
Potential potential_from_json(const Network& net, const Json& j);

/// Alpha-forest document: {"active_edges": [edge ids], "active_vertices":
/// [vertex ids], "orientation": {vertex id: edge id} or null}.
Json alpha_forest_to_json(const Network& net, const AlphaForest& forest);
AlphaForest alpha_forest_from_json(const Network& net, const Json& j);

}  // namespace dflow

#endif  // DFLOW_IO_HPP
