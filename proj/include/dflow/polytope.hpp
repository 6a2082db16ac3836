#ifndef DFLOW_POLYTOPE_HPP
#define DFLOW_POLYTOPE_HPP

// Membership, active-constraint extraction, extremality testing and a
// brute-force vertex enumerator for the feasible-flow polytope of a network.
//
// A flow f is feasible when it is a potential difference (f = B^T phi for
// some vertex potential phi), every component lies within its edge bounds,
// and every per-vertex imbalance lies within its vertex bounds.  All tests
// are exact over rationals.

#include <optional>
#include <string>
#include <vector>

#include "dflow/network.hpp"

namespace dflow {

/// Which feasibility constraint a flow violates.
enum class ConstraintKind {
    Differential,  ///< f is not of the form B^T phi (cycle condition fails)
    EdgeLower,
    EdgeUpper,
    VertexLower,
    VertexUpper,
};

struct Violation {
    ConstraintKind kind = ConstraintKind::Differential;
    /// Edge id for Edge*, vertex id for Vertex*, -1 for Differential.
    int id = -1;

    bool operator==(const Violation&) const = default;
};

/// Human-readable one-line description of a violation.
std::string describe(const Violation& v, const Network& net);

struct FeasibilityReport {
    bool feasible = false;
    /// First violated constraint (differential first, then edge bounds in
    /// edge-id order, then vertex bounds in vertex-id order); absent iff
    /// feasible.
    std::optional<Violation> violation;
};

/// Constraints a feasible flow meets with equality.  A fixed edge
/// (f_lo = f_hi) at its bound appears in both edge lists; same for vertices.
struct ActiveSet {
    std::vector<EdgeId> edges_at_lower;
    std::vector<EdgeId> edges_at_upper;
    std::vector<VertexId> vertices_at_lower;
    std::vector<VertexId> vertices_at_upper;

    bool operator==(const ActiveSet&) const = default;
};

enum class Verdict { Extremal, NotExtremal };

std::string to_string(Verdict v);

struct ExtremalityCertificate {
    Verdict verdict = Verdict::Extremal;
    ActiveSet active;
    /// Rank of the matrix of distinct active rows of (B^T ; AB^T).
    int rank_active = 0;
    /// Present iff not extremal: a non-constant potential with B^T phi = 0 on
    /// active edges and AB^T phi = 0 on active vertices, gauged to 0 at the
    /// first vertex and scaled so its first nonzero entry is 1.
    std::optional<Potential> direction;
    /// Present iff not extremal: a step size such that f +- epsilon * B^T
    /// direction both stay feasible (half the minimum slack of the inactive
    /// finite constraints, or 1 when nothing constrains the movement).
    std::optional<Rational> epsilon;
};

/// Reconstructs a potential phi with B^T phi = f, gauged so that phi = 0 at
/// vertex 0.  Returns nullopt when f is not a potential difference.
std::optional<Potential> recover_potential(const Network& net, const Flow& f);

/// Exact feasibility test; reports the first violated constraint.
FeasibilityReport is_feasible(const Network& net, const Flow& f);

/// Exact equality tests against finite bounds; infinite bounds are never
/// active.  Throws PreconditionError when f is infeasible.
ActiveSet active_set(const Network& net, const Flow& f);

/// Decides whether a feasible f is an extreme point: the distinct active rows
/// of (B^T ; AB^T) must reach rank |V| - 1.  Produces a strictly validated
/// improving direction otherwise.  Throws PreconditionError when f is
/// infeasible.
ExtremalityCertificate is_extremal(const Network& net, const Flow& f);

/// Brute-force vertex enumeration: tries every independent set of |V| - 1
/// distinct finite-bound constraint rows together with every choice of bound
/// side, solves for the gauged potential, maps to flows and keeps the
/// feasible ones.  Output is deduplicated exactly and sorted
/// lexicographically.  Throws BudgetError when |V| exceeds vertex_cap.
std::vector<Flow> enumerate_vertices(const Network& net, int vertex_cap = 10);

}  // namespace dflow

#endif  // DFLOW_POLYTOPE_HPP
