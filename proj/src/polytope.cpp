#include "dflow/polytope.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "dflow/error.hpp"
#include "dflow/matrix.hpp"

namespace dflow {

namespace {

void require_flow_size(const Network& net, const Flow& f) {
    if (static_cast<int>(f.size()) != net.edge_count()) {
        throw ValidationError("flow has " + std::to_string(f.size()) + " entries but the network has " +
                              std::to_string(net.edge_count()) + " edges");
    }
}

/// Bound checks only; assumes f is already known to be a potential difference.
bool within_bounds(const Network& net, const Flow& f) {
    for (int e = 0; e < net.edge_count(); ++e) {
        if (!net.edge(e).f.contains(f[e])) return false;
    }
    const std::vector<Rational> imb = imbalance(net, f);
    for (int v = 0; v < net.vertex_count(); ++v) {
        if (!net.vertex(v).p.contains(imb[v])) return false;
    }
    return true;
}

/// Distinct coefficient rows of the active constraints, edges first.
std::vector<std::vector<Rational>> active_rows(const Network& net, const ActiveSet& act) {
    std::vector<char> edge_active(net.edge_count(), 0);
    for (EdgeId e : act.edges_at_lower) edge_active[e] = 1;
    for (EdgeId e : act.edges_at_upper) edge_active[e] = 1;
    std::vector<char> vertex_active(net.vertex_count(), 0);
    for (VertexId v : act.vertices_at_lower) vertex_active[v] = 1;
    for (VertexId v : act.vertices_at_upper) vertex_active[v] = 1;

    std::vector<std::vector<Rational>> rows;
    for (int e = 0; e < net.edge_count(); ++e) {
        if (edge_active[e]) rows.push_back(net.edge_row(e));
    }
    for (int v = 0; v < net.vertex_count(); ++v) {
        if (vertex_active[v]) rows.push_back(net.vertex_row(v));
    }
    return rows;
}

/// Largest step t such that moving a quantity x by +-t*delta keeps it inside
/// its interval; folded into `slack` as a running minimum.
void tighten_slack(std::optional<Rational>& slack, const Rational& x, const Rational& delta,
                   const Interval& bounds) {
    if (delta.is_zero()) return;
    const Rational mag = delta.abs();
    if (bounds.lo.is_finite()) {
        const Rational room = (x - bounds.lo.value()) / mag;
        if (!slack || room < *slack) slack = room;
    }
    if (bounds.hi.is_finite()) {
        const Rational room = (bounds.hi.value() - x) / mag;
        if (!slack || room < *slack) slack = room;
    }
}

}  // namespace

std::string describe(const Violation& v, const Network& net) {
    switch (v.kind) {
        case ConstraintKind::Differential:
            return "flow is not a potential difference (the cycle condition fails)";
        case ConstraintKind::EdgeLower:
            return "flow on edge '" + net.edge(v.id).name + "' is below its lower bound";
        case ConstraintKind::EdgeUpper:
            return "flow on edge '" + net.edge(v.id).name + "' exceeds its upper bound";
        case ConstraintKind::VertexLower:
            return "imbalance at vertex '" + net.vertex(v.id).name + "' is below its lower bound";
        case ConstraintKind::VertexUpper:
            return "imbalance at vertex '" + net.vertex(v.id).name + "' exceeds its upper bound";
    }
    return "unknown violation";
}

std::string to_string(Verdict v) {
    return v == Verdict::Extremal ? "extremal" : "not-extremal";
}

std::optional<Potential> recover_potential(const Network& net, const Flow& f) {
    require_flow_size(net, f);
    const int n = net.vertex_count();
    Potential phi(n, Rational(0));
    std::vector<char> seen(n, 0);
    std::vector<VertexId> queue{0};
    seen[0] = 1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const VertexId v = queue[qi];
        for (EdgeId e : net.incident_edges(v)) {
            const VertexId u = net.other_end(e, v);
            if (seen[u]) continue;
            const Edge& ed = net.edge(e);
            const Rational drop = f[e] / ed.b;  // phi_head - phi_tail
            phi[u] = (ed.head == u) ? phi[v] + drop : phi[v] - drop;
            seen[u] = 1;
            queue.push_back(u);
        }
    }
    for (int e = 0; e < net.edge_count(); ++e) {
        const Edge& ed = net.edge(e);
        if (ed.b * (phi[ed.head] - phi[ed.tail]) != f[e]) return std::nullopt;
    }
    return phi;
}

FeasibilityReport is_feasible(const Network& net, const Flow& f) {
    require_flow_size(net, f);
    if (!recover_potential(net, f)) {
        return {false, Violation{ConstraintKind::Differential, -1}};
    }
    for (int e = 0; e < net.edge_count(); ++e) {
        const Interval& b = net.edge(e).f;
        if (b.lo.is_finite() && f[e] < b.lo.value()) {
            return {false, Violation{ConstraintKind::EdgeLower, e}};
        }
        if (b.hi.is_finite() && f[e] > b.hi.value()) {
            return {false, Violation{ConstraintKind::EdgeUpper, e}};
        }
    }
    const std::vector<Rational> imb = imbalance(net, f);
    for (int v = 0; v < net.vertex_count(); ++v) {
        const Interval& b = net.vertex(v).p;
        if (b.lo.is_finite() && imb[v] < b.lo.value()) {
            return {false, Violation{ConstraintKind::VertexLower, v}};
        }
        if (b.hi.is_finite() && imb[v] > b.hi.value()) {
            return {false, Violation{ConstraintKind::VertexUpper, v}};
        }
    }
    return {true, std::nullopt};
}

ActiveSet active_set(const Network& net, const Flow& f) {
    const FeasibilityReport rep = is_feasible(net, f);
    if (!rep.feasible) {
        throw PreconditionError("active_set requires a feasible flow: " + describe(*rep.violation, net));
    }
    ActiveSet act;
    for (int e = 0; e < net.edge_count(); ++e) {
        if (net.edge(e).f.at_lower(f[e])) act.edges_at_lower.push_back(e);
        if (net.edge(e).f.at_upper(f[e])) act.edges_at_upper.push_back(e);
    }
    const std::vector<Rational> imb = imbalance(net, f);
    for (int v = 0; v < net.vertex_count(); ++v) {
        if (net.vertex(v).p.at_lower(imb[v])) act.vertices_at_lower.push_back(v);
        if (net.vertex(v).p.at_upper(imb[v])) act.vertices_at_upper.push_back(v);
    }
    return act;
}

ExtremalityCertificate is_extremal(const Network& net, const Flow& f) {
    const FeasibilityReport rep = is_feasible(net, f);
    if (!rep.feasible) {
        throw PreconditionError("is_extremal requires a feasible flow: " + describe(*rep.violation, net));
    }
    const int n = net.vertex_count();

    ExtremalityCertificate cert;
    cert.active = active_set(net, f);
    const Matrix m = Matrix::from_rows(active_rows(net, cert.active), static_cast<std::size_t>(n));
    cert.rank_active = static_cast<int>(m.rank());
    if (cert.rank_active == n - 1) {
        cert.verdict = Verdict::Extremal;
        return cert;
    }
    cert.verdict = Verdict::NotExtremal;

    // Every active row annihilates the all-ones vector, so the kernel has
    // dimension >= 2 here and contains a non-constant element.
    const std::vector<Rational> ones(static_cast<std::size_t>(n), Rational(1));
    Potential dir;
    for (const auto& candidate : m.kernel_basis()) {
        if (!parallel(candidate, ones)) {
            dir = candidate;
            break;
        }
    }
    // Gauge to 0 at vertex 0, then scale the first nonzero entry to 1.
    const Rational base = dir[0];
    for (auto& x : dir) x = x - base;
    Rational scale(0);
    for (const auto& x : dir) {
        if (!x.is_zero()) {
            scale = x;
            break;
        }
    }
    for (auto& x : dir) x = x / scale;

    // Movement induced on flows and imbalances.
    Flow delta_f(static_cast<std::size_t>(net.edge_count()));
    for (int e = 0; e < net.edge_count(); ++e) {
        const Edge& ed = net.edge(e);
        delta_f[e] = ed.b * (dir[ed.head] - dir[ed.tail]);
    }
    const std::vector<Rational> imb = imbalance(net, f);
    const std::vector<Rational> delta_imb = imbalance(net, delta_f);

    std::optional<Rational> slack;
    for (int e = 0; e < net.edge_count(); ++e) {
        tighten_slack(slack, f[e], delta_f[e], net.edge(e).f);
    }
    for (int v = 0; v < n; ++v) {
        tighten_slack(slack, imb[v], delta_imb[v], net.vertex(v).p);
    }
    cert.epsilon = slack ? *slack / Rational(2) : Rational(1);
    cert.direction = std::move(dir);
    return cert;
}

std::vector<Flow> enumerate_vertices(const Network& net, int vertex_cap) {
    const int n = net.vertex_count();
    if (n > vertex_cap) {
        throw BudgetError("enumerate_vertices handles at most " + std::to_string(vertex_cap) +
                          " vertices (got " + std::to_string(n) + ")");
    }

    // One candidate per constraint with a finite side: its coefficient row
    // plus the bound values it can be pinned to (one value for fixed bounds).
    struct Candidate {
        std::vector<Rational> row;
        std::vector<Rational> values;
    };
    auto values_of = [](const Interval& b) {
        std::vector<Rational> vals;
        if (b.lo.is_finite()) vals.push_back(b.lo.value());
        if (b.hi.is_finite() && !(b.lo.is_finite() && b.lo.value() == b.hi.value())) {
            vals.push_back(b.hi.value());
        }
        return vals;
    };
    std::vector<Candidate> cands;
    for (int e = 0; e < net.edge_count(); ++e) {
        auto vals = values_of(net.edge(e).f);
        if (!vals.empty()) cands.push_back({net.edge_row(e), std::move(vals)});
    }
    for (int v = 0; v < n; ++v) {
        auto vals = values_of(net.vertex(v).p);
        if (!vals.empty()) cands.push_back({net.vertex_row(v), std::move(vals)});
    }

    const std::size_t need = static_cast<std::size_t>(n - 1);
    std::set<Flow> found;

    std::vector<std::size_t> chosen;
    auto process_basis = [&]() {
        std::vector<std::vector<Rational>> rows;
        for (std::size_t i : chosen) rows.push_back(cands[i].row);
        const PreparedSolver solver(Matrix::from_rows(rows, static_cast<std::size_t>(n)));

        // Odometer over the bound-side choices of the chosen constraints.
        std::vector<std::size_t> pick(chosen.size(), 0);
        while (true) {
            std::vector<Rational> rhs;
            rhs.reserve(chosen.size());
            for (std::size_t j = 0; j < chosen.size(); ++j) {
                rhs.push_back(cands[chosen[j]].values[pick[j]]);
            }
            Potential phi = solver.solve(rhs);
            const Rational base = phi[0];
            for (auto& x : phi) x = x - base;

            Flow f(static_cast<std::size_t>(net.edge_count()));
            for (int e = 0; e < net.edge_count(); ++e) {
                const Edge& ed = net.edge(e);
                f[e] = ed.b * (phi[ed.head] - phi[ed.tail]);
            }
            if (within_bounds(net, f)) found.insert(std::move(f));

            std::size_t j = 0;
            for (; j < pick.size(); ++j) {
                if (++pick[j] < cands[chosen[j]].values.size()) break;
                pick[j] = 0;
            }
            if (j == pick.size()) break;
        }
    };

    // Depth-first choice of an independent subset of coefficient rows.
    auto dfs = [&](auto&& self, std::size_t idx, const RankAccumulator& acc) -> void {
        if (chosen.size() == need) {
            process_basis();
            return;
        }
        if (idx >= cands.size() || cands.size() - idx < need - chosen.size()) return;
        RankAccumulator grown = acc;
        if (grown.try_add(cands[idx].row)) {
            chosen.push_back(idx);
            self(self, idx + 1, grown);
            chosen.pop_back();
        }
        self(self, idx + 1, acc);
    };
    dfs(dfs, 0, RankAccumulator(static_cast<std::size_t>(n)));

    return {found.begin(), found.end()};
}

}  // namespace dflow
