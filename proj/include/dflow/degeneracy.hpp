#ifndef DFLOW_DEGENERACY_HPP
#define DFLOW_DEGENERACY_HPP

// Degeneracy analysis: when can a flow conform to an alpha-tree and still
// fail to be extremal?
//
// Topologically the answer is governed by the diamond graph (K4 minus one
// edge).  Graphs without a diamond subdivision -- cacti -- never admit such
// a flow, no matter how elasticities and bounds are chosen; for every other
// graph this module constructs elasticities and bounds exhibiting one.  The
// module also provides two cheap sufficient conditions that certify
// extremality for a concrete conforming flow, the generalized differential
// flows used to prove them, and an exhaustive small-network search for
// non-extremal conforming flows.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dflow/alpha.hpp"
#include "dflow/network.hpp"
#include "dflow/polytope.hpp"
#include "dflow/rational.hpp"

namespace dflow {

/// Plain undirected graph view, so that very large inputs can be analyzed
/// without building a full Network.  Vertices are 0..vertex_count-1; edges
/// are unordered pairs and must form a simple graph (no loops, no duplicate
/// pairs).  Edge ids are positions in `edges`.
struct UndirectedGraph {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;
};

/// A diamond subdivision: three internally vertex-disjoint paths between two
/// branch vertices v and w.  Each path is a list of edge ids ordered from v
/// to w; paths are sorted by (length, edge ids).  In a simple graph at most
/// one of the paths is a single edge, so at least two have length >= 2.
struct DiamondMinor {
    VertexId v = 0;
    VertexId w = 0;
    std::array<std::vector<EdgeId>, 3> paths;
};

/// Outcome of cactus recognition.  When the graph is not a cactus,
/// violating_edge names an edge lying on two distinct simple cycles; the
/// diamond field is filled by callers that also ran find_diamond_minor.
struct CactusReport {
    bool is_cactus = false;
    std::optional<EdgeId> violating_edge;
    std::optional<DiamondMinor> diamond;
};

/// Linear-time cactus recognition: depth-first search, then each back edge
/// retraces its fundamental cycle marking tree edges; an edge marked twice
/// lies on two simple cycles and is reported.  Throws ValidationError on
/// disconnected input or out-of-range endpoints.
CactusReport is_cactus(const UndirectedGraph& g);
CactusReport is_cactus(const Network& net);

/// Finds a diamond subdivision, or nullopt exactly when the graph is a
/// cactus.  Scans branch-vertex pairs in ascending order and computes three
/// internally vertex-disjoint paths by unit-vertex-capacity augmentation.
std::optional<DiamondMinor> find_diamond_minor(const UndirectedGraph& g);
std::optional<DiamondMinor> find_diamond_minor(const Network& net);

/// Which of the three covering trees a vertex belongs to in a degeneracy
/// witness: W contains both branch vertices, S and T cover the two
/// subdivided paths.
enum class TreePart { W, S, T };

std::string to_string(TreePart part);

/// A network on the input graph together with a conforming flow that is not
/// extremal.  The flow is identically zero, every tree edge has its flow
/// fixed to zero, both branch vertices have their imbalance fixed to zero,
/// and the direction phi (0 on W, +1 on S, -1 on T) induces a nonzero
/// differential flow g with f +- g both feasible.
struct DegeneracyWitness {
    Network network;
    AlphaForest alpha_tree;
    Flow flow;
    Potential direction;
    std::vector<TreePart> partition;  ///< per vertex id
};

/// Builds elasticities and bounds under which the input graph carries a
/// conforming non-extremal flow; nullopt exactly when the graph is a cactus.
/// The input network's own elasticities and bounds are ignored -- only its
/// graph structure is used.
std::optional<DegeneracyWitness> build_degeneracy_witness(const Network& net);

/// Result of a sufficient-condition check: Certified guarantees the flow is
/// extremal; NotApplicable means the condition does not apply (it never
/// means the flow is not extremal).
enum class Sufficiency { Certified, NotApplicable };

std::string to_string(Sufficiency s);

/// Certified when every connected component of (V, E_F) contains at most one
/// active vertex.  Requires an alpha-tree conforming with f (PreconditionError
/// otherwise).
Sufficiency check_suff_one_active_per_component(const Network& net, const Flow& f,
                                                const AlphaForest& forest);

/// Certified when at most one active vertex has degree >= 3 in the network.
/// Requires an alpha-tree conforming with f (PreconditionError otherwise).
Sufficiency check_suff_small_degree(const Network& net, const Flow& f,
                                    const AlphaForest& forest);

/// Nonnegative coefficient per ordered pair of a finite ground set.  Unlike
/// network elasticities, the two directions of a pair are independent and
/// either may be zero; diagonal entries never influence anything.
class GeneralizedElasticity {
public:
    /// Validates and wraps a square nonnegative matrix of coefficients.
    static GeneralizedElasticity create(std::vector<std::vector<Rational>> entries);

    int size() const { return static_cast<int>(entries_.size()); }
    const Rational& at(int v, int w) const { return entries_[v][w]; }

    /// Ordered pairs (v, w) with v != w and a positive coefficient.
    std::vector<std::pair<int, int>> support() const;

private:
    GeneralizedElasticity() = default;
    std::vector<std::vector<Rational>> entries_;
};

/// True iff phi induces a feasible generalized differential flow:
/// sum_w b_vw (phi_w - phi_v) = 0 exactly, at every v.
bool generalized_flow_feasible(const GeneralizedElasticity& b, const std::vector<Rational>& phi);

/// Smallest vertex that every vertex can reach along directed arcs -- the
/// sink of a spanning anti-arborescence (a spanning subgraph that is
/// connected and acyclic when undirected, with out-degree <= 1 everywhere) --
/// or nullopt when no such vertex exists.
std::optional<VertexId> has_spanning_anti_arborescence(
    int vertex_count, const std::vector<std::pair<int, int>>& arcs);

/// How test_nondegeneracy treats the input bounds.
enum class DegeneracyMode {
    /// Ignore the input bounds: ask whether SOME bounds make the weighted
    /// graph degenerate, and construct them for the counterexample.
    FreeBounds,
    /// Keep the input bounds: search for a conforming non-extremal flow
    /// within them.
    FixedBounds,
};

struct NondegeneracyOptions {
    int max_vertices = 8;        ///< PreconditionError above this
    long long work_cap = 1000000;  ///< BudgetError when the search exceeds it
};

/// A concrete conforming-but-not-extremal flow.  In FreeBounds mode the
/// network carries the constructed bounds; in FixedBounds mode it is the
/// input network unchanged.
struct DegeneracyCounterexample {
    Network network;
    AlphaForest alpha_tree;
    Flow flow;
    Potential direction;
};

enum class NondegeneracyResult { CertifiedDegenerate, NoCounterexampleFound };

std::string to_string(NondegeneracyResult r);

struct NondegeneracyReport {
    NondegeneracyResult result = NondegeneracyResult::NoCounterexampleFound;
    std::optional<DegeneracyCounterexample> counterexample;
};

/// Exhaustive search for a conforming non-extremal flow on a small network.
/// Enumerates every candidate (E_F, V_F) with |E_F| + |V_F| = |V| - 1,
/// acyclic active edges and an injective acyclic orientation, keeps those
/// whose active rows have rank < |V| - 1, and then either constructs
/// pinning bounds (FreeBounds) or searches the given bounds for a conforming
/// flow whose relative interior is non-extremal (FixedBounds).  Every
/// reported counterexample is re-validated against is_extremal before being
/// returned.  Throws PreconditionError when the network exceeds max_vertices
/// and BudgetError when the search exceeds work_cap.
NondegeneracyReport test_nondegeneracy(const Network& net, DegeneracyMode mode,
                                       const NondegeneracyOptions& options = {});

}  // namespace dflow

#endif  // DFLOW_DEGENERACY_HPP
