#ifndef DFLOW_NETWORK_HPP
#define DFLOW_NETWORK_HPP

// The network model: a weakly connected directed graph with positive edge
// elasticities, per-edge flow bounds and per-vertex imbalance bounds.
//
// A flow f is "differential" when it is induced by a vertex potential phi via
// f_e = b_e * (phi_head - phi_tail). The vertex imbalance of a flow is
// outflow minus inflow. Both live in exact rational arithmetic.
//
// Conventions used throughout:
//   * incidence matrix A: A[v][e] = +1 when e ends at v, -1 when it starts
//     there (so A*f is inflow minus outflow, i.e. minus the imbalance);
//   * elasticity matrix B = A * diag(b), so f = B^T phi for differential f;
//   * admittance matrix A*B^T (the weighted graph Laplacian).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dflow/matrix.hpp"
#include "dflow/rational.hpp"

namespace dflow {

using VertexId = int;
using EdgeId = int;

struct Vertex {
    std::string name;
    Interval p;  // imbalance bounds [p_lo, p_hi]
};

struct Edge {
    std::string name;
    VertexId tail = 0;
    VertexId head = 0;
    Rational b;  // elasticity, strictly positive
    Interval f;  // flow bounds [f_lo, f_hi]
};

/// Per-edge flow values, indexed by EdgeId.
using Flow = std::vector<Rational>;
/// Per-vertex potential values, indexed by VertexId.
using Potential = std::vector<Rational>;

class Network {
public:
    /// Validates and builds a network. Throws ValidationError when the input
    /// is not a weakly connected, anti-symmetric (at most one directed edge
    /// per unordered vertex pair), loop-free graph with positive elasticities,
    /// well-formed bound intervals and unique nonempty names.
    static Network create(std::vector<Vertex> vertices, std::vector<Edge> edges);

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const Vertex& vertex(VertexId v) const { return vertices_[v]; }
    const Edge& edge(EdgeId e) const { return edges_[e]; }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }

    std::optional<VertexId> vertex_id(const std::string& name) const;
    std::optional<EdgeId> edge_id(const std::string& name) const;

    /// Edges incident to v in either direction, ascending by edge id.
    const std::vector<EdgeId>& incident_edges(VertexId v) const { return incident_[v]; }
    VertexId other_end(EdgeId e, VertexId v) const {
        return edges_[e].tail == v ? edges_[e].head : edges_[e].tail;
    }
    /// Undirected degree of v.
    int degree(VertexId v) const { return static_cast<int>(incident_[v].size()); }

    Matrix incidence_matrix() const;
    Matrix elasticity_matrix() const;
    Matrix admittance_matrix() const;

    /// Coefficients of f_e as a linear function of the potential:
    /// b_e at the head, -b_e at the tail.
    std::vector<Rational> edge_row(EdgeId e) const;

    /// Coefficients of the imbalance (outflow minus inflow) of v as a linear
    /// function of the potential: +b_e at each neighbor, minus their sum at v.
    /// This is the negated admittance-matrix row; same rank, and right-hand
    /// sides can be taken directly from the p bounds.
    std::vector<Rational> vertex_row(VertexId v) const;

private:
    Network() = default;
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> incident_;
};

/// Outflow minus inflow at every vertex (the vector -A f).
std::vector<Rational> imbalance(const Network& net, const Flow& f);

}  // namespace dflow

#endif  // DFLOW_NETWORK_HPP
