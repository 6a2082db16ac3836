#include "dflow/alpha.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <set>
#include <utility>

#include "dflow/error.hpp"
#include "dflow/polytope.hpp"
#include "dflow/union_find.hpp"

namespace dflow {

namespace {

void require_known_ids(const Network& net, const std::vector<EdgeId>& edges,
                       const std::vector<VertexId>& vertices) {
    std::set<EdgeId> seen_e;
    for (EdgeId e : edges) {
        if (e < 0 || e >= net.edge_count()) {
            throw ValidationError("unknown edge id " + std::to_string(e));
        }
        if (!seen_e.insert(e).second) {
            throw ValidationError("edge '" + net.edge(e).name + "' listed twice");
        }
    }
    std::set<VertexId> seen_v;
    for (VertexId v : vertices) {
        if (v < 0 || v >= net.vertex_count()) {
            throw ValidationError("unknown vertex id " + std::to_string(v));
        }
        if (!seen_v.insert(v).second) {
            throw ValidationError("vertex '" + net.vertex(v).name + "' listed twice");
        }
    }
}

/// Admittance row of v (couplings of v with every vertex).
std::vector<Rational> admittance_row(const Network& net, VertexId v) {
    std::vector<Rational> row = net.vertex_row(v);
    for (auto& x : row) x = -x;
    return row;
}

/// Neighborhoods in the link graph as bitmasks over S-positions.
std::vector<std::uint64_t> neighbor_masks(std::size_t w_count, const std::vector<LinkEdge>& r,
                                          const std::vector<LinkEdge>& u) {
    std::vector<std::uint64_t> mask(w_count, 0);
    for (const auto& e : r) mask[e.w_pos] |= std::uint64_t{1} << e.s_pos;
    for (const auto& e : u) mask[e.w_pos] |= std::uint64_t{1} << e.s_pos;
    return mask;
}

bool has_saturating_matching(std::size_t w_count, std::size_t s_count,
                             const std::vector<std::vector<int>>& adj, int skip_s) {
    std::vector<int> match_of_s(s_count, -1);
    std::vector<char> visited(s_count, 0);
    auto augment = [&](auto&& self, std::size_t w) -> bool {
        for (int s : adj[w]) {
            if (s == skip_s || visited[s]) continue;
            visited[s] = 1;
            if (match_of_s[s] < 0 || self(self, static_cast<std::size_t>(match_of_s[s]))) {
                match_of_s[s] = static_cast<int>(w);
                return true;
            }
        }
        return false;
    };
    for (std::size_t w = 0; w < w_count; ++w) {
        std::fill(visited.begin(), visited.end(), 0);
        if (!augment(augment, w)) return false;
    }
    return true;
}

/// Checks |N(W')| >= |W'| + 1 for every nonempty W': directly for small W,
/// otherwise via the equivalent criterion that removing any single S-node
/// still leaves a W-saturating matching.
bool neighborhood_condition_holds(std::size_t w_count, std::size_t s_count,
                                  const std::vector<LinkEdge>& r, const std::vector<LinkEdge>& u) {
    if (w_count <= 20) {
        const auto masks = neighbor_masks(w_count, r, u);
        for (std::uint64_t sel = 1; sel < (std::uint64_t{1} << w_count); ++sel) {
            std::uint64_t nb = 0;
            for (std::size_t w = 0; w < w_count; ++w) {
                if (sel >> w & 1) nb |= masks[w];
            }
            if (std::popcount(nb) < std::popcount(sel) + 1) return false;
        }
        return true;
    }
    std::vector<std::vector<int>> adj(w_count);
    for (const auto& e : r) adj[e.w_pos].push_back(e.s_pos);
    for (const auto& e : u) adj[e.w_pos].push_back(e.s_pos);
    for (std::size_t s = 0; s < s_count; ++s) {
        if (!has_saturating_matching(w_count, s_count, adj, static_cast<int>(s))) return false;
    }
    return true;
}

}  // namespace

std::optional<Orientation> find_orientation(const Network& net, const std::vector<EdgeId>& forest_edges,
                                            const std::vector<VertexId>& forest_vertices) {
    require_known_ids(net, forest_edges, forest_vertices);

    UnionFind base(net.vertex_count());
    for (EdgeId e : forest_edges) {
        if (!base.unite(net.edge(e).tail, net.edge(e).head)) return std::nullopt;
    }

    // Most constrained vertices (highest degree) first; ties by id.
    std::vector<VertexId> order = forest_vertices;
    std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
        if (net.degree(a) != net.degree(b)) return net.degree(a) > net.degree(b);
        return a < b;
    });

    std::vector<char> in_forest(static_cast<std::size_t>(net.edge_count()), 0);
    for (EdgeId e : forest_edges) in_forest[e] = 1;
    std::vector<char> used(static_cast<std::size_t>(net.edge_count()), 0);
    Orientation alpha;

    auto search = [&](auto&& self, std::size_t i, const UnionFind& uf) -> bool {
        if (i == order.size()) return true;
        const VertexId v = order[i];
        for (EdgeId e : net.incident_edges(v)) {
            if (in_forest[e] || used[e]) continue;
            UnionFind next = uf;
            if (!next.unite(net.edge(e).tail, net.edge(e).head)) continue;
            used[e] = 1;
            alpha[v] = e;
            if (self(self, i + 1, next)) return true;
            alpha.erase(v);
            used[e] = 0;
        }
        return false;
    };
    if (!search(search, 0, base)) return std::nullopt;
    return alpha;
}

ForestCheck validate_alpha_forest(const Network& net, const AlphaForest& forest) {
    require_known_ids(net, forest.active_edges, forest.active_vertices);

    if (!forest.orientation.has_value()) {
        UnionFind uf(net.vertex_count());
        for (EdgeId e : forest.active_edges) {
            if (!uf.unite(net.edge(e).tail, net.edge(e).head)) {
                return {false, "the active edges contain a cycle"};
            }
        }
        if (!find_orientation(net, forest.active_edges, forest.active_vertices)) {
            return {false, "no injective acyclic orientation exists"};
        }
        return {true, ""};
    }

    const Orientation& alpha = *forest.orientation;
    const std::set<VertexId> vset(forest.active_vertices.begin(), forest.active_vertices.end());
    for (const auto& [v, e] : alpha) {
        if (!vset.count(v)) {
            if (v < 0 || v >= net.vertex_count()) {
                throw ValidationError("unknown vertex id " + std::to_string(v));
            }
            return {false, "orientation maps vertex '" + net.vertex(v).name +
                               "' which is not an active vertex"};
        }
        if (e < 0 || e >= net.edge_count()) {
            throw ValidationError("unknown edge id " + std::to_string(e));
        }
    }
    for (VertexId v : forest.active_vertices) {
        if (!alpha.count(v)) {
            return {false, "vertex '" + net.vertex(v).name + "' has no orientation entry"};
        }
    }
    const std::set<EdgeId> eset(forest.active_edges.begin(), forest.active_edges.end());
    std::set<EdgeId> images;
    for (const auto& [v, e] : alpha) {
        const Edge& ed = net.edge(e);
        if (ed.tail != v && ed.head != v) {
            return {false, "edge '" + ed.name + "' is not incident to vertex '" +
                               net.vertex(v).name + "'"};
        }
        if (eset.count(e)) {
            return {false,
                    "orientation maps vertex '" + net.vertex(v).name + "' into the active edge set"};
        }
        if (!images.insert(e).second) {
            return {false, "orientation is not injective: edge '" + ed.name + "' is used twice"};
        }
    }
    UnionFind uf(net.vertex_count());
    for (EdgeId e : forest.active_edges) {
        if (!uf.unite(net.edge(e).tail, net.edge(e).head)) {
            return {false, "the active edges contain a cycle"};
        }
    }
    for (const auto& [v, e] : alpha) {
        if (!uf.unite(net.edge(e).tail, net.edge(e).head)) {
            return {false, "the active edges together with the orientation edges contain a cycle"};
        }
    }
    return {true, ""};
}

bool is_alpha_tree(const Network& net, const AlphaForest& forest) {
    const ForestCheck check = validate_alpha_forest(net, forest);
    if (!check.valid) {
        throw PreconditionError("not a valid oriented forest: " + check.reason);
    }
    return static_cast<int>(forest.active_edges.size() + forest.active_vertices.size()) ==
           net.vertex_count() - 1;
}

bool conforms(const Network& net, const Flow& f, const AlphaForest& forest) {
    const FeasibilityReport rep = is_feasible(net, f);
    if (!rep.feasible) {
        throw PreconditionError("conforms requires a feasible flow: " + describe(*rep.violation, net));
    }
    const ForestCheck check = validate_alpha_forest(net, forest);
    if (!check.valid) {
        throw PreconditionError("not a valid oriented forest: " + check.reason);
    }
    for (EdgeId e : forest.active_edges) {
        const Interval& b = net.edge(e).f;
        if (!b.at_lower(f[e]) && !b.at_upper(f[e])) return false;
    }
    const std::vector<Rational> imb = imbalance(net, f);
    for (VertexId v : forest.active_vertices) {
        const Interval& b = net.vertex(v).p;
        if (!b.at_lower(imb[v]) && !b.at_upper(imb[v])) return false;
    }
    return true;
}

ContractionResult contract_active(const Network& net, const std::vector<EdgeId>& active_edges,
                                  const std::vector<VertexId>& active_vertices) {
    require_known_ids(net, active_edges, active_vertices);
    const int n = net.vertex_count();
    if (static_cast<int>(active_edges.size() + active_vertices.size()) != n - 1) {
        throw PreconditionError("contraction needs exactly |V| - 1 = " + std::to_string(n - 1) +
                                " active rows, got " +
                                std::to_string(active_edges.size() + active_vertices.size()));
    }
    std::vector<std::vector<Rational>> stacked;
    for (EdgeId e : active_edges) stacked.push_back(net.edge_row(e));
    for (VertexId v : active_vertices) stacked.push_back(admittance_row(net, v));
    const std::size_t rank = Matrix::from_rows(stacked, static_cast<std::size_t>(n)).rank();
    if (static_cast<int>(rank) != n - 1) {
        throw PreconditionError("active rows have rank " + std::to_string(rank) +
                                " but |V| - 1 = " + std::to_string(n - 1) + " is required");
    }

    // Components of (V, E*).  The rank precondition forces E* to be acyclic,
    // so each component carries a spanning tree made of E*-edges.
    UnionFind uf(n);
    for (EdgeId e : active_edges) uf.unite(net.edge(e).tail, net.edge(e).head);

    ContractionResult cr;
    std::vector<int> comp_of(static_cast<std::size_t>(n), -1);
    for (VertexId v = 0; v < n; ++v) {
        const int root = uf.find(v);
        if (comp_of[root] < 0) {
            comp_of[root] = static_cast<int>(cr.components.size());
            cr.components.emplace_back();
        }
        comp_of[v] = comp_of[root];
        cr.components[comp_of[v]].push_back(v);
    }
    const std::size_t k1 = cr.components.size();  // k + 1 components

    // Reduce each admittance row with the scaled edge rows of E*: processing
    // the component trees leaf-upward, adding r[u] times the (scaled) row of
    // u's tree edge moves the entry at u onto its parent.  Afterwards each
    // row is supported on component representatives only, carrying the
    // summed couplings.
    std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj(static_cast<std::size_t>(n));
    for (EdgeId e : active_edges) {
        adj[net.edge(e).tail].push_back({net.edge(e).head, e});
        adj[net.edge(e).head].push_back({net.edge(e).tail, e});
    }
    std::vector<VertexId> bfs_order;
    std::vector<VertexId> parent(static_cast<std::size_t>(n), -1);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (const auto& comp : cr.components) {
        const VertexId root = comp.front();
        seen[root] = 1;
        std::size_t head = bfs_order.size();
        bfs_order.push_back(root);
        while (head < bfs_order.size()) {
            const VertexId v = bfs_order[head++];
            for (const auto& [u, e] : adj[v]) {
                if (seen[u]) continue;
                seen[u] = 1;
                parent[u] = v;
                bfs_order.push_back(u);
            }
        }
    }

    cr.row_index = active_vertices;
    std::sort(cr.row_index.begin(), cr.row_index.end());
    std::vector<std::vector<Rational>> reduced;
    for (VertexId v : cr.row_index) reduced.push_back(admittance_row(net, v));
    for (auto it = bfs_order.rbegin(); it != bfs_order.rend(); ++it) {
        const VertexId u = *it;
        if (parent[u] < 0) continue;
        for (auto& row : reduced) {
            if (!row[u].is_zero()) {
                row[parent[u]] = row[parent[u]] + row[u];
                row[u] = Rational(0);
            }
        }
    }

    std::vector<std::vector<Rational>> c_rows(reduced.size());
    for (std::size_t i = 0; i < reduced.size(); ++i) {
        for (const auto& comp : cr.components) {
            c_rows[i].push_back(reduced[i][comp.front()]);
        }
    }
    cr.C = Matrix::from_rows(c_rows, k1);
    for (std::size_t j = 0; j < k1; ++j) cr.col_index.push_back(static_cast<int>(j));
    return cr;
}

BipartiteLinkGraph build_link_graph(const ContractionResult& cr) {
    BipartiteLinkGraph graph;
    graph.W = cr.row_index;
    graph.S = cr.col_index;
    if (graph.S.size() != graph.W.size() + 1) {
        throw Error("link graph is malformed: " + std::to_string(graph.S.size()) +
                    " components for " + std::to_string(graph.W.size()) + " active vertices");
    }
    for (std::size_t i = 0; i < graph.W.size(); ++i) {
        int positives = 0;
        for (std::size_t j = 0; j < graph.S.size(); ++j) {
            const int sign = cr.C.at(i, j).sign();
            if (sign > 0) {
                graph.R.push_back({static_cast<int>(i), static_cast<int>(j)});
                ++positives;
            } else if (sign < 0) {
                graph.U.push_back({static_cast<int>(i), static_cast<int>(j)});
            }
        }
        if (positives != 1) {
            throw Error("link graph is malformed: active vertex row " + std::to_string(i) + " has " +
                        std::to_string(positives) + " positive entries instead of one");
        }
    }
    if (!neighborhood_condition_holds(graph.W.size(), graph.S.size(), graph.R, graph.U)) {
        throw Error("link graph violates the neighborhood condition |N(W')| >= |W'| + 1");
    }
    return graph;
}

std::vector<LinkEdge> select_connecting_edges(const BipartiteLinkGraph& graph) {
    if (!neighborhood_condition_holds(graph.W.size(), graph.S.size(), graph.R, graph.U)) {
        throw PreconditionError("link graph violates the neighborhood condition |N(W')| >= |W'| + 1");
    }
    std::vector<LinkEdge> u = graph.U;
    std::sort(u.begin(), u.end());

    while (true) {
        // Smallest W-position still holding two or more U-edges.
        std::vector<int> degree(graph.W.size(), 0);
        for (const auto& e : u) ++degree[e.w_pos];
        int w = -1;
        for (std::size_t i = 0; i < degree.size(); ++i) {
            if (degree[i] >= 2) {
                w = static_cast<int>(i);
                break;
            }
        }
        if (w < 0) break;

        // Its two lexicographically smallest U-edges; at least one of them is
        // removable without breaking the neighborhood condition.
        std::vector<std::size_t> pos;
        for (std::size_t i = 0; i < u.size() && pos.size() < 2; ++i) {
            if (u[i].w_pos == w) pos.push_back(i);
        }
        bool removed = false;
        for (std::size_t attempt = 0; attempt < 2 && !removed; ++attempt) {
            std::vector<LinkEdge> trimmed = u;
            trimmed.erase(trimmed.begin() + static_cast<std::ptrdiff_t>(pos[attempt]));
            if (neighborhood_condition_holds(graph.W.size(), graph.S.size(), graph.R, trimmed)) {
                u = std::move(trimmed);
                removed = true;
            }
        }
        if (!removed) {
            throw Error("no single-edge removal preserves the neighborhood condition");
        }
    }
    return u;
}

AlphaForest extract_alpha_tree(const Network& net, const Flow& f) {
    const ExtremalityCertificate cert = is_extremal(net, f);
    if (cert.verdict != Verdict::Extremal) {
        throw PreconditionError("extract_alpha_tree requires an extremal flow");
    }
    const int n = net.vertex_count();

    // Greedy independent selection of |V| - 1 active rows, edges first.
    std::set<EdgeId> act_edges(cert.active.edges_at_lower.begin(), cert.active.edges_at_lower.end());
    act_edges.insert(cert.active.edges_at_upper.begin(), cert.active.edges_at_upper.end());
    std::set<VertexId> act_vertices(cert.active.vertices_at_lower.begin(),
                                    cert.active.vertices_at_lower.end());
    act_vertices.insert(cert.active.vertices_at_upper.begin(), cert.active.vertices_at_upper.end());

    AlphaForest forest;
    RankAccumulator acc(static_cast<std::size_t>(n));
    for (EdgeId e : act_edges) {
        if (acc.try_add(net.edge_row(e))) forest.active_edges.push_back(e);
    }
    for (VertexId v : act_vertices) {
        if (acc.try_add(admittance_row(net, v))) forest.active_vertices.push_back(v);
    }
    if (static_cast<int>(acc.rank()) != n - 1) {
        throw Error("active rows of an extremal flow failed to reach rank |V| - 1");
    }

    const ContractionResult cr = contract_active(net, forest.active_edges, forest.active_vertices);
    const BipartiteLinkGraph graph = build_link_graph(cr);
    const std::vector<LinkEdge> selected = select_connecting_edges(graph);

    std::vector<int> comp_of(static_cast<std::size_t>(n), -1);
    for (std::size_t j = 0; j < cr.components.size(); ++j) {
        for (VertexId v : cr.components[j]) comp_of[v] = static_cast<int>(j);
    }

    Orientation alpha;
    for (const auto& link : selected) {
        const VertexId v = graph.W[link.w_pos];
        const int target = graph.S[link.s_pos];
        EdgeId choice = -1;
        for (EdgeId e : net.incident_edges(v)) {
            if (comp_of[net.other_end(e, v)] == target) {
                choice = e;
                break;
            }
        }
        if (choice < 0) {
            throw Error("no network edge realizes the selected link for vertex '" +
                        net.vertex(v).name + "'");
        }
        alpha[v] = choice;
    }
    forest.orientation = std::move(alpha);
    return forest;
}

}  // namespace dflow
