#ifndef DFLOW_HARDNESS_HPP
#define DFLOW_HARDNESS_HPP

// Reduction from SubsetSum to flow-polytope degeneracy.  build_gadget turns
// an instance (sizes alpha_1..alpha_n, target beta) into a fixed-bounds
// network that is degenerate exactly when some subset of the sizes sums to
// the target; gadget_degenerate decides the instance both combinatorially
// and through the polytope machinery and cross-checks the two answers.

#include <optional>
#include <vector>

#include "dflow/alpha.hpp"
#include "dflow/network.hpp"
#include "dflow/rational.hpp"

namespace dflow {

/// Positive integer sizes and a positive integer target.
struct SubsetSumInstance {
    std::vector<long long> sizes;
    long long target = 0;

    bool operator==(const SubsetSumInstance&) const = default;
};

/// Where the construction placed the named vertices: the two branch vertices
/// v and w, the sources s and t, and one item vertex per size.
struct GadgetLabels {
    VertexId v = 0;
    VertexId w = 0;
    VertexId s = 0;
    VertexId t = 0;
    std::vector<VertexId> items;

    bool operator==(const GadgetLabels&) const = default;
};

struct Gadget {
    Network network;
    GadgetLabels labels;
};

/// Builds the reduction network: n + 4 vertices and 2n + 4 edges.  Edges
/// (v, item_i) carry elasticity 2 alpha_i and capacity [0, 1], (v, w) carries
/// elasticity 1 and capacity [0, 1]; the return edges (item_i, t), (w, t) and
/// the feeds (s, v), (s, w) are uncapacitated with elasticities 2 alpha_i,
/// 1, beta and 1.  Imbalance bounds: v gets [0, beta], w and every item
/// vertex get [0, +inf), s and t stay free.
/// Throws ValidationError on an empty instance or nonpositive entries.
Gadget build_gadget(const SubsetSumInstance& inst);

/// The evidence produced for a yes answer: the chosen subset (ascending
/// indices into sizes), the potential behind the degeneracy direction, the
/// non-extremal flow, and the alpha-tree it conforms to.
struct GadgetWitness {
    std::vector<int> subset;
    Potential phi;
    Flow flow;
    AlphaForest forest;
};

/// Builds the candidate witness for one subset and validates it against the
/// polytope machinery: the result is engaged iff the candidate flow is
/// feasible, conforms to the candidate alpha-tree, and is not extremal.
/// Choosing a subset whose sizes do not sum to the target yields nullopt.
/// Throws ValidationError on out-of-range or repeated subset indices.
std::optional<GadgetWitness> gadget_subset_witness(const SubsetSumInstance& inst,
                                                   const std::vector<int>& subset);

struct GadgetDecision {
    bool degenerate = false;
    std::optional<GadgetWitness> witness;
};

/// Decides the instance twice — (a) by direct subset enumeration and (b) by
/// validating candidate witnesses through the polytope machinery — and
/// requires the two answers to agree before reporting.  Subsets are scanned
/// in increasing bitmask order, so the reported subset is deterministic.
/// Throws PreconditionError when the instance has more than `cap` sizes.
GadgetDecision gadget_degenerate(const SubsetSumInstance& inst, int cap = 8);

}  // namespace dflow

#endif  // DFLOW_HARDNESS_HPP
