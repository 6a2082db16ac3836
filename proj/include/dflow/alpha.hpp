#ifndef DFLOW_ALPHA_HPP
#define DFLOW_ALPHA_HPP

// Oriented forests of active constraints.  An "alpha forest" pairs a set of
// edges E_F with a set of vertices V_F, each vertex mapped by an injective
// orientation alpha to an incident edge outside E_F so that E_F together
// with the image of alpha stays acyclic.  Maximal such forests (size
// |V| - 1, "alpha trees") characterize the extreme points of the feasible
// flow polytope; extract_alpha_tree realizes the constructive direction:
// every extremal flow admits a conforming alpha tree.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dflow/matrix.hpp"
#include "dflow/network.hpp"

namespace dflow {

/// Vertex-to-incident-edge assignment.
using Orientation = std::map<VertexId, EdgeId>;

struct AlphaForest {
    std::vector<EdgeId> active_edges;        ///< E_F
    std::vector<VertexId> active_vertices;   ///< V_F
    std::optional<Orientation> orientation;  ///< alpha, when known

    bool operator==(const AlphaForest&) const = default;
};

struct ForestCheck {
    bool valid = false;
    std::string reason;  ///< empty when valid

    explicit operator bool() const { return valid; }
};

/// Result of contracting the components of (V, E*) and reducing the active
/// vertex rows onto one column per component.
struct ContractionResult {
    /// Partition of the vertices induced by (V, E*); components are sorted by
    /// their smallest member, members ascending.
    std::vector<std::vector<VertexId>> components;
    /// One row per active vertex, one column per component; entry (i, j) is
    /// the summed admittance coupling of vertex row_index[i] with component
    /// j.  Positive exactly on the vertex's own component, negative exactly
    /// where it has an outside neighbor, rows sum to zero.
    Matrix C;
    std::vector<VertexId> row_index;
    std::vector<int> col_index;
};

/// Edge between W-position and S-position in the bipartite link graph.
struct LinkEdge {
    int w_pos = 0;
    int s_pos = 0;

    bool operator==(const LinkEdge&) const = default;
    auto operator<=>(const LinkEdge&) const = default;
};

/// Bipartite graph on active vertices (W) versus components (S): R holds the
/// membership edges (one per W-node), U the outside-neighbor edges.
struct BipartiteLinkGraph {
    std::vector<VertexId> W;
    std::vector<int> S;
    std::vector<LinkEdge> R;
    std::vector<LinkEdge> U;
};

/// Checks the forest conditions; when no orientation is supplied, searches
/// for one and reports existence.  Throws ValidationError on ids that do not
/// exist in the network or duplicated entries.
ForestCheck validate_alpha_forest(const Network& net, const AlphaForest& forest);

/// Finds an injective orientation alpha with E_F + alpha(V_F) acyclic, or
/// nullopt when none exists.  Complete backtracking search.
std::optional<Orientation> find_orientation(const Network& net, const std::vector<EdgeId>& forest_edges,
                                            const std::vector<VertexId>& forest_vertices);

/// True iff the forest is valid and maximal: |E_F| + |V_F| = |V| - 1.
/// Throws PreconditionError when the forest is invalid.
bool is_alpha_tree(const Network& net, const AlphaForest& forest);

/// True iff every forest edge carries f at a finite flow bound and every
/// forest vertex has its imbalance at a finite bound.  Throws
/// PreconditionError when f is infeasible or the forest invalid.
bool conforms(const Network& net, const Flow& f, const AlphaForest& forest);

/// Contracts the components of (V, E*) and reduces the admittance rows of
/// the active vertices onto component representatives.  Requires
/// |E*| + |V*| = |V| - 1 with the stacked active rows reaching full rank
/// |V| - 1 (throws PreconditionError otherwise).
ContractionResult contract_active(const Network& net, const std::vector<EdgeId>& active_edges,
                                  const std::vector<VertexId>& active_vertices);

/// Reads the link graph off the contraction matrix and checks its structural
/// conditions: exactly one membership edge per W-node, |S| = |W| + 1, and
/// every nonempty W' has at least |W'| + 1 neighbours.  A violation throws
/// Error (it signals an inconsistency upstream, not bad user input).
BipartiteLinkGraph build_link_graph(const ContractionResult& cr);

/// Thins U down to exactly one edge per W-node such that R + U* forms a
/// spanning tree of the link graph, following the inductive removal
/// argument: repeatedly drop one edge of a W-node of U-degree >= 2 whose
/// removal preserves the neighbourhood condition.
std::vector<LinkEdge> select_connecting_edges(const BipartiteLinkGraph& graph);

/// Constructive direction of the characterization: from an extremal f,
/// selects |V| - 1 independent active rows (edges first), contracts, links,
/// selects connecting edges and translates them into an oriented alpha tree
/// that conforms with f.  Throws PreconditionError when f is not extremal.
AlphaForest extract_alpha_tree(const Network& net, const Flow& f);

}  // namespace dflow

#endif  // DFLOW_ALPHA_HPP
