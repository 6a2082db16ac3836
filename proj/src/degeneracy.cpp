#include "dflow/degeneracy.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dflow/error.hpp"
#include "dflow/fourier_motzkin.hpp"
#include "dflow/matrix.hpp"
#include "dflow/union_find.hpp"

namespace dflow {

namespace {

// Adjacency lists (neighbor, edge id) in ascending edge-id order, shared by
// the recognizer and the disjoint-path search.
std::vector<std::vector<std::pair<int, EdgeId>>> adjacency(const UndirectedGraph& g) {
    std::vector<std::vector<std::pair<int, EdgeId>>> adj(
        static_cast<std::size_t>(g.vertex_count));
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto [a, b] = g.edges[e];
        if (a < 0 || b < 0 || a >= g.vertex_count || b >= g.vertex_count) {
            throw ValidationError("edge " + std::to_string(e) + " has an endpoint outside 0.." +
                                  std::to_string(g.vertex_count - 1));
        }
        if (a == b) {
            throw ValidationError("edge " + std::to_string(e) + " is a self-loop");
        }
        adj[a].emplace_back(b, static_cast<EdgeId>(e));
        adj[b].emplace_back(a, static_cast<EdgeId>(e));
    }
    return adj;
}

UndirectedGraph as_undirected(const Network& net) {
    UndirectedGraph g;
    g.vertex_count = net.vertex_count();
    g.edges.reserve(static_cast<std::size_t>(net.edge_count()));
    for (const Edge& e : net.edges()) g.edges.emplace_back(e.tail, e.head);
    return g;
}

}  // namespace

CactusReport is_cactus(const UndirectedGraph& g) {
    if (g.vertex_count <= 0) throw ValidationError("graph must have at least one vertex");
    const auto adj = adjacency(g);
    const int n = g.vertex_count;

    // Iterative depth-first search from vertex 0, recording each non-tree
    // edge once, at its deeper endpoint.
    std::vector<int> parent_vertex(n, -1), depth(n, -1);
    std::vector<EdgeId> parent_edge(n, -1);
    struct BackEdge {
        int descendant;
        int ancestor;
        EdgeId edge;
    };
    std::vector<BackEdge> back_edges;

    std::vector<std::pair<int, std::size_t>> stack;  // (vertex, next adjacency index)
    depth[0] = 0;
    stack.emplace_back(0, 0);
    int visited = 1;
    while (!stack.empty()) {
        auto& [u, idx] = stack.back();
        if (idx == adj[u].size()) {
            stack.pop_back();
            continue;
        }
        const auto [to, e] = adj[u][idx++];
        if (depth[to] < 0) {
            depth[to] = depth[u] + 1;
            parent_vertex[to] = u;
            parent_edge[to] = e;
            ++visited;
            stack.emplace_back(to, 0);
        } else if (e != parent_edge[u] && depth[to] < depth[u]) {
            back_edges.push_back({u, to, e});
        }
    }
    if (visited != n) throw ValidationError("graph is disconnected");

    // Retrace every back edge's fundamental cycle.  The cycles of a cactus
    // are pairwise edge-disjoint, so a tree edge reached twice lies on two
    // distinct simple cycles and the retrace stops immediately; total work
    // stays linear either way.
    std::vector<char> marked(g.edges.size(), 0);
    for (const BackEdge& be : back_edges) {
        marked[be.edge] = 1;
        for (int cur = be.descendant; cur != be.ancestor; cur = parent_vertex[cur]) {
            const EdgeId te = parent_edge[cur];
            if (marked[te]) return {false, te, std::nullopt};
            marked[te] = 1;
        }
    }
    return {true, std::nullopt, std::nullopt};
}

CactusReport is_cactus(const Network& net) { return is_cactus(as_undirected(net)); }

namespace {

// Unit-capacity flow network used to find internally vertex-disjoint paths.
// Every vertex x becomes a capacity-1 arc in(x) -> out(x) (uncapacitated for
// the two terminals), every undirected edge two opposed unit arcs labeled
// with its edge id.
class DisjointPathSearch {
public:
    DisjointPathSearch(const UndirectedGraph& g, int v, int w) : v_(v), w_(w) {
        const int n = g.vertex_count;
        arcs_.resize(2 * static_cast<std::size_t>(n));
        for (int x = 0; x < n; ++x) {
            add_arc(in(x), out(x), (x == v || x == w) ? 3 : 1, -1);
        }
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            const auto [a, b] = g.edges[e];
            add_arc(out(a), in(b), 1, static_cast<EdgeId>(e));
            add_arc(out(b), in(a), 1, static_cast<EdgeId>(e));
        }
    }

    // At most three breadth-first augmentations; true when three paths exist.
    bool saturate() {
        int flow = 0;
        while (flow < 3 && augment()) ++flow;
        return flow == 3;
    }

    // Removes opposite unit flows on the same undirected edge, then peels off
    // the three paths as edge-id lists ordered from v to w.
    std::array<std::vector<EdgeId>, 3> extract_paths() {
        // A labeled arc runs out(a) -> in(b); its opposite-direction twin is
        // the arc with the same label in the list of out(b) = in(b) + 1.
        for (auto& list : arcs_) {
            for (Arc& a : list) {
                if (a.label < 0 || a.cap != 0) continue;
                for (Arc& twin : arcs_[a.to + 1]) {
                    if (twin.label != a.label) continue;
                    if (twin.cap == 0) {
                        a.cap = 1;
                        arcs_[a.to][a.rev].cap = 0;
                        twin.cap = 1;
                        arcs_[twin.to][twin.rev].cap = 0;
                    }
                    break;
                }
            }
        }
        std::array<std::vector<EdgeId>, 3> paths;
        for (auto& path : paths) {
            int cur = out(v_);
            while (cur != in(w_)) {
                bool stepped = false;
                for (Arc& a : arcs_[cur]) {
                    if (a.initial_cap > 0 && a.cap < a.initial_cap) {
                        ++a.cap;
                        if (a.label >= 0) path.push_back(a.label);
                        cur = a.to;
                        stepped = true;
                        break;
                    }
                }
                if (!stepped) throw Error("internal error: flow decomposition lost a path");
            }
        }
        return paths;
    }

private:
    struct Arc {
        int to;
        int cap;
        int initial_cap;
        int rev;
        EdgeId label;
    };

    static int in(int x) { return 2 * x; }
    static int out(int x) { return 2 * x + 1; }

    void add_arc(int from, int to, int cap, EdgeId label) {
        arcs_[from].push_back({to, cap, cap, static_cast<int>(arcs_[to].size()), label});
        arcs_[to].push_back({from, 0, 0, static_cast<int>(arcs_[from].size()) - 1, -1});
    }

    bool augment() {
        const int source = out(v_), sink = in(w_);
        std::vector<std::pair<int, int>> via(arcs_.size(), {-1, -1});  // (node, arc index)
        std::vector<int> queue{source};
        via[source] = {source, -1};
        for (std::size_t qi = 0; qi < queue.size() && via[sink].first < 0; ++qi) {
            const int u = queue[qi];
            for (std::size_t i = 0; i < arcs_[u].size(); ++i) {
                const Arc& a = arcs_[u][i];
                if (a.cap <= 0 || via[a.to].first >= 0) continue;
                via[a.to] = {u, static_cast<int>(i)};
                queue.push_back(a.to);
            }
        }
        if (via[sink].first < 0) return false;
        for (int cur = sink; cur != source;) {
            const auto [prev, ai] = via[cur];
            Arc& a = arcs_[prev][ai];
            a.cap -= 1;
            arcs_[a.to][a.rev].cap += 1;
            cur = prev;
        }
        return true;
    }

    int v_;
    int w_;
    std::vector<std::vector<Arc>> arcs_;
};

}  // namespace

std::optional<DiamondMinor> find_diamond_minor(const UndirectedGraph& g) {
    if (g.vertex_count <= 0) throw ValidationError("graph must have at least one vertex");
    const auto adj = adjacency(g);  // also validates the endpoints
    std::vector<int> degree(static_cast<std::size_t>(g.vertex_count), 0);
    for (int x = 0; x < g.vertex_count; ++x) degree[x] = static_cast<int>(adj[x].size());
    for (int v = 0; v < g.vertex_count; ++v) {
        if (degree[v] < 3) continue;
        for (int w = v + 1; w < g.vertex_count; ++w) {
            if (degree[w] < 3) continue;
            DisjointPathSearch search(g, v, w);
            if (!search.saturate()) continue;
            DiamondMinor minor;
            minor.v = v;
            minor.w = w;
            minor.paths = search.extract_paths();
            std::sort(minor.paths.begin(), minor.paths.end(),
                      [](const std::vector<EdgeId>& x, const std::vector<EdgeId>& y) {
                          return x.size() != y.size() ? x.size() < y.size() : x < y;
                      });
            return minor;
        }
    }
    return std::nullopt;
}

std::optional<DiamondMinor> find_diamond_minor(const Network& net) {
    return find_diamond_minor(as_undirected(net));
}

std::string to_string(TreePart part) {
    switch (part) {
        case TreePart::W: return "W";
        case TreePart::S: return "S";
        default: return "T";
    }
}

namespace {

// Vertex sequence of a path given as edge ids, starting from `from`.
std::vector<VertexId> path_vertices(const Network& net, VertexId from,
                                    const std::vector<EdgeId>& edges) {
    std::vector<VertexId> seq{from};
    for (EdgeId e : edges) seq.push_back(net.other_end(e, seq.back()));
    return seq;
}

Flow induced_flow(const Network& net, const Potential& phi) {
    Flow g(static_cast<std::size_t>(net.edge_count()));
    for (int e = 0; e < net.edge_count(); ++e) {
        const Edge& ed = net.edge(e);
        g[e] = ed.b * (phi[ed.head] - phi[ed.tail]);
    }
    return g;
}

}  // namespace

std::optional<DegeneracyWitness> build_degeneracy_witness(const Network& net) {
    const auto minor = find_diamond_minor(net);
    if (!minor) return std::nullopt;

    const int n = net.vertex_count();
    const int m = net.edge_count();
    const VertexId v = minor->v;
    const VertexId w = minor->w;

    // The two longer paths feed the side trees; their interiors are fixed
    // before any growing starts, so the direct path's tree can never absorb
    // them.  (paths[0] is the shortest, possibly the single direct edge.)
    std::vector<std::optional<TreePart>> label(static_cast<std::size_t>(n));
    std::array<std::vector<EdgeId>, 3> tree_edges;  // indexed by TreePart

    const auto seed = [&](TreePart part, const std::vector<VertexId>& vertices,
                          const std::vector<EdgeId>& edges) {
        for (VertexId x : vertices) label[x] = part;
        auto& target = tree_edges[static_cast<std::size_t>(part)];
        target.insert(target.end(), edges.begin(), edges.end());
    };

    seed(TreePart::W, path_vertices(net, v, minor->paths[0]), minor->paths[0]);
    for (int side = 1; side <= 2; ++side) {
        const auto& path = minor->paths[side];
        if (path.size() < 2) throw Error("internal error: side path has no interior");
        const auto vertices = path_vertices(net, v, path);
        const std::vector<VertexId> interior(vertices.begin() + 1, vertices.end() - 1);
        const std::vector<EdgeId> interior_edges(path.begin() + 1, path.end() - 1);
        seed(side == 1 ? TreePart::S : TreePart::T, interior, interior_edges);
    }

    // Grow each tree maximal in turn, always taking the smallest usable edge
    // id, until no edge leads from the tree to an unclaimed vertex.
    const auto grow = [&](TreePart part) {
        auto& edges = tree_edges[static_cast<std::size_t>(part)];
        for (;;) {
            bool grown = false;
            for (EdgeId e = 0; e < m && !grown; ++e) {
                const Edge& ed = net.edge(e);
                const bool tail_in = label[ed.tail] == part;
                const bool head_in = label[ed.head] == part;
                if (tail_in == head_in) continue;
                const VertexId other = tail_in ? ed.head : ed.tail;
                if (label[other].has_value()) continue;
                label[other] = part;
                edges.push_back(e);
                grown = true;
            }
            if (!grown) return;
        }
    };
    grow(TreePart::W);
    grow(TreePart::S);
    grow(TreePart::T);

    for (int x = 0; x < n; ++x) {
        if (!label[x].has_value()) {
            throw Error("internal error: witness trees left vertex '" + net.vertex(x).name +
                        "' uncovered");
        }
    }

    // Edges joining a branch vertex to a side tree, per (branch, side).
    std::vector<EdgeId> to_s_from_v, to_s_from_w, to_t_from_v, to_t_from_w;
    std::vector<char> in_tree(static_cast<std::size_t>(m), 0);
    for (const auto& edges : tree_edges) {
        for (EdgeId e : edges) in_tree[e] = 1;
    }
    const auto collect = [&](VertexId branch, std::vector<EdgeId>& to_s,
                             std::vector<EdgeId>& to_t) {
        for (EdgeId e = 0; e < m; ++e) {
            const Edge& ed = net.edge(e);
            if (ed.tail != branch && ed.head != branch) continue;
            const VertexId other = net.other_end(e, branch);
            if (label[other] == TreePart::S) to_s.push_back(e);
            if (label[other] == TreePart::T) to_t.push_back(e);
        }
    };
    collect(v, to_s_from_v, to_t_from_v);
    collect(w, to_s_from_w, to_t_from_w);
    for (const auto* list : {&to_s_from_v, &to_s_from_w, &to_t_from_v, &to_t_from_w}) {
        if (list->empty()) {
            throw Error("internal error: a branch vertex lost contact with a side tree");
        }
    }

    // Start from unit elasticities and enlarge one edge on the smaller side
    // of each branch vertex until its S-sum and T-sum agree.
    std::vector<Rational> b(static_cast<std::size_t>(m), Rational(1));
    const auto balance = [&](const std::vector<EdgeId>& to_s, const std::vector<EdgeId>& to_t) {
        const long long s = static_cast<long long>(to_s.size());
        const long long t = static_cast<long long>(to_t.size());
        if (s < t) b[to_s.front()] = Rational(t - s + 1);
        if (t < s) b[to_t.front()] = Rational(s - t + 1);
    };
    balance(to_s_from_v, to_t_from_v);
    balance(to_s_from_w, to_t_from_w);

    std::vector<Vertex> vertices;
    for (int x = 0; x < n; ++x) {
        vertices.push_back({net.vertex(x).name,
                            (x == v || x == w) ? Interval::fixed(Rational(0)) : Interval::free()});
    }
    std::vector<Edge> edges;
    for (EdgeId e = 0; e < m; ++e) {
        const Edge& ed = net.edge(e);
        edges.push_back({ed.name, ed.tail, ed.head, b[e],
                         in_tree[e] ? Interval::fixed(Rational(0)) : Interval::free()});
    }

    AlphaForest forest;
    for (EdgeId e = 0; e < m; ++e) {
        if (in_tree[e]) forest.active_edges.push_back(e);
    }
    forest.active_vertices = {v, w};
    forest.orientation = Orientation{{v, to_s_from_v.front()}, {w, to_t_from_w.front()}};
    Potential direction(static_cast<std::size_t>(n));
    std::vector<TreePart> partition(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) {
        partition[x] = *label[x];
        switch (*label[x]) {
            case TreePart::W: direction[x] = Rational(0); break;
            case TreePart::S: direction[x] = Rational(1); break;
            case TreePart::T: direction[x] = Rational(-1); break;
        }
    }
    DegeneracyWitness witness{Network::create(std::move(vertices), std::move(edges)),
                              std::move(forest),
                              Flow(static_cast<std::size_t>(m), Rational(0)),
                              std::move(direction),
                              std::move(partition)};

    // The construction is only returned once its promises have been checked
    // against the polytope machinery itself.
    if (!is_alpha_tree(witness.network, witness.alpha_tree)) {
        throw Error("internal error: witness forest is not an alpha-tree");
    }
    if (!conforms(witness.network, witness.flow, witness.alpha_tree)) {
        throw Error("internal error: witness flow does not conform to its alpha-tree");
    }
    const Flow g = induced_flow(witness.network, witness.direction);
    if (std::all_of(g.begin(), g.end(), [](const Rational& x) { return x.sign() == 0; })) {
        throw Error("internal error: witness direction induces the zero flow");
    }
    Flow minus = g;
    for (Rational& x : minus) x = -x;
    if (!is_feasible(witness.network, g).feasible ||
        !is_feasible(witness.network, minus).feasible) {
        throw Error("internal error: witness direction leaves the polytope");
    }
    if (is_extremal(witness.network, witness.flow).verdict != Verdict::NotExtremal) {
        throw Error("internal error: witness flow is extremal after all");
    }
    return witness;
}

std::string to_string(Sufficiency s) {
    return s == Sufficiency::Certified ? "certified" : "not-applicable";
}

namespace {

void require_conforming_tree(const char* op, const Network& net, const Flow& f,
                             const AlphaForest& forest) {
    if (!is_alpha_tree(net, forest)) {
        throw PreconditionError(std::string(op) +
                                " requires an alpha-tree (|E_F| + |V_F| = |V| - 1)");
    }
    if (!conforms(net, f, forest)) {
        throw PreconditionError(std::string(op) + " requires a flow conforming to the alpha-tree");
    }
}

}  // namespace

Sufficiency check_suff_one_active_per_component(const Network& net, const Flow& f,
                                                const AlphaForest& forest) {
    require_conforming_tree("check_suff_one_active_per_component", net, f, forest);
    UnionFind components(net.vertex_count());
    for (EdgeId e : forest.active_edges) {
        components.unite(net.edge(e).tail, net.edge(e).head);
    }
    std::map<int, int> active_per_root;
    for (VertexId v : forest.active_vertices) {
        if (++active_per_root[components.find(v)] > 1) return Sufficiency::NotApplicable;
    }
    return Sufficiency::Certified;
}

Sufficiency check_suff_small_degree(const Network& net, const Flow& f,
                                    const AlphaForest& forest) {
    require_conforming_tree("check_suff_small_degree", net, f, forest);
    int high_degree = 0;
    for (VertexId v : forest.active_vertices) {
        if (net.degree(v) >= 3 && ++high_degree > 1) return Sufficiency::NotApplicable;
    }
    return Sufficiency::Certified;
}

GeneralizedElasticity GeneralizedElasticity::create(std::vector<std::vector<Rational>> entries) {
    if (entries.empty()) {
        throw ValidationError("generalized elasticity needs a nonempty ground set");
    }
    for (const auto& row : entries) {
        if (row.size() != entries.size()) {
            throw ValidationError("generalized elasticity must be a square matrix");
        }
        for (const Rational& x : row) {
            if (x.sign() < 0) {
                throw ValidationError("generalized elasticity entries must be nonnegative");
            }
        }
    }
    GeneralizedElasticity out;
    out.entries_ = std::move(entries);
    return out;
}

std::vector<std::pair<int, int>> GeneralizedElasticity::support() const {
    std::vector<std::pair<int, int>> arcs;
    for (int v = 0; v < size(); ++v) {
        for (int w = 0; w < size(); ++w) {
            if (v != w && entries_[v][w].sign() > 0) arcs.emplace_back(v, w);
        }
    }
    return arcs;
}

bool generalized_flow_feasible(const GeneralizedElasticity& b, const std::vector<Rational>& phi) {
    if (static_cast<int>(phi.size()) != b.size()) {
        throw ValidationError("potential has " + std::to_string(phi.size()) +
                              " entries but the ground set has " + std::to_string(b.size()));
    }
    for (int v = 0; v < b.size(); ++v) {
        Rational sum(0);
        for (int w = 0; w < b.size(); ++w) {
            if (w != v) sum += b.at(v, w) * (phi[w] - phi[v]);
        }
        if (sum.sign() != 0) return false;
    }
    return true;
}

std::optional<VertexId> has_spanning_anti_arborescence(
    int vertex_count, const std::vector<std::pair<int, int>>& arcs) {
    if (vertex_count <= 0) throw ValidationError("digraph must have at least one vertex");
    std::vector<std::vector<int>> reverse(static_cast<std::size_t>(vertex_count));
    for (const auto& [from, to] : arcs) {
        if (from < 0 || to < 0 || from >= vertex_count || to >= vertex_count) {
            throw ValidationError("arc endpoint outside 0.." + std::to_string(vertex_count - 1));
        }
        reverse[to].push_back(from);
    }
    // A sink works exactly when every vertex reaches it; each non-sink vertex
    // can then keep only its first arc on a shortest path to the sink, which
    // yields out-degree one, connectivity and acyclicity at once.
    for (int sink = 0; sink < vertex_count; ++sink) {
        std::vector<char> seen(static_cast<std::size_t>(vertex_count), 0);
        std::vector<int> queue{sink};
        seen[sink] = 1;
        int reached = 1;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            for (int from : reverse[queue[qi]]) {
                if (seen[from]) continue;
                seen[from] = 1;
                ++reached;
                queue.push_back(from);
            }
        }
        if (reached == vertex_count) return sink;
    }
    return std::nullopt;
}

std::string to_string(NondegeneracyResult r) {
    return r == NondegeneracyResult::CertifiedDegenerate ? "certified-degenerate"
                                                         : "no-counterexample-found";
}

namespace {

// The input graph with flow bounds pinned to zero on the candidate edges,
// imbalance bounds pinned to zero on the candidate vertices, and everything
// else free: the zero flow then conforms to the candidate and its active
// rows are exactly the candidate's rows.
Network pin_candidate(const Network& net, const std::vector<EdgeId>& forest_edges,
                      const std::vector<VertexId>& forest_vertices) {
    std::vector<char> pin_edge(static_cast<std::size_t>(net.edge_count()), 0);
    std::vector<char> pin_vertex(static_cast<std::size_t>(net.vertex_count()), 0);
    for (EdgeId e : forest_edges) pin_edge[e] = 1;
    for (VertexId v : forest_vertices) pin_vertex[v] = 1;
    std::vector<Vertex> vertices;
    for (int v = 0; v < net.vertex_count(); ++v) {
        vertices.push_back(
            {net.vertex(v).name, pin_vertex[v] ? Interval::fixed(Rational(0)) : Interval::free()});
    }
    std::vector<Edge> edges;
    for (int e = 0; e < net.edge_count(); ++e) {
        const Edge& ed = net.edge(e);
        edges.push_back({ed.name, ed.tail, ed.head, ed.b,
                         pin_edge[e] ? Interval::fixed(Rational(0)) : Interval::free()});
    }
    return Network::create(std::move(vertices), std::move(edges));
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    Rational sum(0);
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

// Searches the given bounds for a conforming flow of the candidate that is
// not extremal.  Every bound-side pattern of the candidate yields a linear
// equality system; its solution set, intersected with the remaining bound
// inequalities, is probed at a relative-interior point.  A point there has
// the fewest active constraints of any conforming flow of the pattern, so if
// it is extremal the whole pattern is.
std::optional<DegeneracyCounterexample> search_within_bounds(
    const Network& net, const AlphaForest& forest,
    const std::function<void(long long)>& charge) {
    const int n = net.vertex_count();

    // Finite bound values each active edge/vertex can be pinned to.
    std::vector<std::vector<Rational>> choices;
    std::vector<std::vector<Rational>> rows;
    const auto add_sides = [&](const Interval& itv, std::vector<Rational> row) {
        std::vector<Rational> values;
        if (itv.lo.is_finite()) values.push_back(itv.lo.value());
        if (itv.hi.is_finite() && !(itv.lo.is_finite() && itv.hi == itv.lo)) {
            values.push_back(itv.hi.value());
        }
        choices.push_back(std::move(values));
        rows.push_back(std::move(row));
    };
    for (EdgeId e : forest.active_edges) add_sides(net.edge(e).f, net.edge_row(e));
    for (VertexId v : forest.active_vertices) add_sides(net.vertex(v).p, net.vertex_row(v));

    std::vector<char> is_active_edge(static_cast<std::size_t>(net.edge_count()), 0);
    std::vector<char> is_active_vertex(static_cast<std::size_t>(n), 0);
    for (EdgeId e : forest.active_edges) is_active_edge[e] = 1;
    for (VertexId v : forest.active_vertices) is_active_vertex[v] = 1;

    std::vector<std::size_t> pick(choices.size(), 0);
    for (;;) {
        charge(1);

        // Equality system over the gauged potential: phi_0 = 0 plus one row
        // per pinned constraint.
        std::vector<std::vector<Rational>> eq_rows;
        std::vector<Rational> eq_rhs;
        std::vector<Rational> gauge(static_cast<std::size_t>(n), Rational(0));
        gauge[0] = Rational(1);
        eq_rows.push_back(std::move(gauge));
        eq_rhs.push_back(Rational(0));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            eq_rows.push_back(rows[i]);
            eq_rhs.push_back(choices[i][pick[i]]);
        }
        const Matrix system = Matrix::from_rows(eq_rows, static_cast<std::size_t>(n));
        const auto particular = system.solve(eq_rhs);
        if (particular) {
            const auto kernel = system.kernel_basis();
            const std::size_t dim = kernel.size();

            // Remaining finite bounds as inequalities over the kernel
            // coordinates y, where phi = particular + sum_j y_j kernel[j].
            std::vector<LinearConstraint> cons;
            const auto add_bounds = [&](const std::vector<Rational>& row, const Interval& itv) {
                if (!itv.has_finite_side()) return;
                const Rational base = dot(row, *particular);
                std::vector<Rational> coef(dim);
                for (std::size_t j = 0; j < dim; ++j) coef[j] = dot(row, kernel[j]);
                if (itv.hi.is_finite()) cons.push_back({coef, itv.hi.value() - base, false});
                if (itv.lo.is_finite()) {
                    for (Rational& c : coef) c = -c;
                    cons.push_back({std::move(coef), base - itv.lo.value(), false});
                }
            };
            for (int e = 0; e < net.edge_count(); ++e) {
                if (!is_active_edge[e]) add_bounds(net.edge_row(e), net.edge(e).f);
            }
            for (int v = 0; v < n; ++v) {
                if (!is_active_vertex[v]) add_bounds(net.vertex_row(v), net.vertex(v).p);
            }

            charge(static_cast<long long>(cons.size()) + 1);
            const auto base_point = find_point(cons, dim);
            if (base_point) {
                // Strict probes find, for each inequality, a point satisfying
                // it strictly (when possible); their average is strict in
                // every non-implied inequality, i.e. relative-interior.
                std::vector<std::vector<Rational>> strict_points;
                for (std::size_t i = 0; i < cons.size(); ++i) {
                    auto probe = cons;
                    probe[i].strict = true;
                    if (const auto p = find_point(probe, dim)) strict_points.push_back(*p);
                }
                std::vector<Rational> y = *base_point;
                if (!strict_points.empty()) {
                    const Rational count(static_cast<long long>(strict_points.size()));
                    for (std::size_t j = 0; j < dim; ++j) {
                        Rational sum(0);
                        for (const auto& p : strict_points) sum += p[j];
                        y[j] = sum / count;
                    }
                }

                Potential phi = *particular;
                for (std::size_t j = 0; j < dim; ++j) {
                    for (int x = 0; x < n; ++x) phi[x] += kernel[j][x] * y[j];
                }
                const Flow f = induced_flow(net, phi);
                if (!is_feasible(net, f).feasible || !conforms(net, f, forest)) {
                    throw Error("internal error: relative-interior candidate left the polytope");
                }
                auto cert = is_extremal(net, f);
                if (cert.verdict == Verdict::NotExtremal) {
                    return DegeneracyCounterexample{net, forest, f, std::move(*cert.direction)};
                }
            }
        }

        // Next bound-side pattern.
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
        if (i == pick.size()) return std::nullopt;
    }
}

}  // namespace

NondegeneracyReport test_nondegeneracy(const Network& net, DegeneracyMode mode,
                                       const NondegeneracyOptions& options) {
    const int n = net.vertex_count();
    if (n > options.max_vertices) {
        throw PreconditionError("test_nondegeneracy searches exhaustively and handles at most " +
                                std::to_string(options.max_vertices) + " vertices (got " +
                                std::to_string(n) + ")");
    }
    long long work = 0;
    const auto charge = [&](long long cost) {
        work += cost;
        if (work > options.work_cap) {
            throw BudgetError("test_nondegeneracy exceeded its work budget of " +
                              std::to_string(options.work_cap));
        }
    };

    // Candidate pool: with fixed bounds only finite-bounded edges/vertices
    // can ever be active, so only they may enter a conforming candidate.
    struct Item {
        bool is_edge;
        int id;
    };
    std::vector<Item> items;
    for (int e = 0; e < net.edge_count(); ++e) {
        if (mode == DegeneracyMode::FreeBounds || net.edge(e).f.has_finite_side()) {
            items.push_back({true, e});
        }
    }
    for (int v = 0; v < n; ++v) {
        if (mode == DegeneracyMode::FreeBounds || net.vertex(v).p.has_finite_side()) {
            items.push_back({false, v});
        }
    }

    const std::size_t target = static_cast<std::size_t>(n - 1);
    std::vector<EdgeId> chosen_edges;
    std::vector<VertexId> chosen_vertices;
    std::optional<DegeneracyCounterexample> found;

    const auto process_candidate = [&](const RankAccumulator& acc) {
        if (acc.rank() == target) return false;  // full rank: conforming implies extremal
        const auto orientation = find_orientation(net, chosen_edges, chosen_vertices);
        if (!orientation) return false;
        AlphaForest forest{chosen_edges, chosen_vertices, *orientation};

        if (mode == DegeneracyMode::FreeBounds) {
            Network pinned = pin_candidate(net, chosen_edges, chosen_vertices);
            const Flow zero(static_cast<std::size_t>(net.edge_count()), Rational(0));
            if (!is_alpha_tree(pinned, forest) || !conforms(pinned, zero, forest)) {
                throw Error("internal error: pinned candidate stopped conforming");
            }
            auto cert = is_extremal(pinned, zero);
            if (cert.verdict != Verdict::NotExtremal) {
                throw Error("internal error: rank-deficient candidate came out extremal");
            }
            found = DegeneracyCounterexample{std::move(pinned), std::move(forest), zero,
                                             std::move(*cert.direction)};
            return true;
        }
        found = search_within_bounds(net, forest, charge);
        return found.has_value();
    };

    // Depth-first enumeration of every candidate in lexicographic item
    // order; cyclic edge sets are pruned as they appear.
    const std::function<bool(std::size_t, const UnionFind&, const RankAccumulator&)> dfs =
        [&](std::size_t idx, const UnionFind& uf, const RankAccumulator& acc) {
            if (chosen_edges.size() + chosen_vertices.size() == target) {
                charge(1);
                return process_candidate(acc);
            }
            if (idx == items.size()) return false;
            if (chosen_edges.size() + chosen_vertices.size() + (items.size() - idx) < target) {
                return false;
            }
            const Item item = items[idx];
            if (item.is_edge) {
                UnionFind next_uf = uf;
                if (next_uf.unite(net.edge(item.id).tail, net.edge(item.id).head)) {
                    RankAccumulator next_acc = acc;
                    next_acc.try_add(net.edge_row(item.id));
                    chosen_edges.push_back(item.id);
                    if (dfs(idx + 1, next_uf, next_acc)) return true;
                    chosen_edges.pop_back();
                }
            } else {
                RankAccumulator next_acc = acc;
                next_acc.try_add(net.vertex_row(item.id));
                chosen_vertices.push_back(item.id);
                if (dfs(idx + 1, uf, next_acc)) return true;
                chosen_vertices.pop_back();
            }
            return dfs(idx + 1, uf, acc);
        };

    const bool degenerate =
        dfs(0, UnionFind(n), RankAccumulator(static_cast<std::size_t>(n)));
    if (degenerate) {
        return {NondegeneracyResult::CertifiedDegenerate, std::move(found)};
    }
    return {NondegeneracyResult::NoCounterexampleFound, std::nullopt};
}

}  // namespace dflow
