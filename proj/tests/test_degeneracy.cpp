#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "builders.hpp"
#include "dflow/alpha.hpp"
#include "dflow/degeneracy.hpp"
#include "dflow/error.hpp"
#include "dflow/matrix.hpp"
#include "dflow/polytope.hpp"
#include "dflow/union_find.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "random_nets.hpp"

using dflow::AlphaForest;
using dflow::BudgetError;
using dflow::DegeneracyMode;
using dflow::DegeneracyWitness;
using dflow::DiamondMinor;
using dflow::EdgeId;
using dflow::Flow;
using dflow::GeneralizedElasticity;
using dflow::Interval;
using dflow::Network;
using dflow::NondegeneracyOptions;
using dflow::NondegeneracyResult;
using dflow::Orientation;
using dflow::Potential;
using dflow::PreconditionError;
using dflow::Rational;
using dflow::Sufficiency;
using dflow::TreePart;
using dflow::UndirectedGraph;
using dflow::ValidationError;
using dflow::Verdict;
using dflow::VertexId;
using dflow::testing::make_bridge_circuit;
using dflow::testing::make_random_cactus;
using dflow::testing::NetBuilder;
using dflow::testing::random_network;
using dflow::testing::rationals;

namespace {

dflow::oracles::SimpleGraph to_simple(const UndirectedGraph& g) {
    return {g.vertex_count, g.edges};
}

UndirectedGraph bridge_graph() {
    // Same shape as make_bridge_circuit: v=0, w=1, s=2, t=3.
    return {4, {{0, 1}, {2, 0}, {2, 1}, {0, 3}, {1, 3}}};
}

UndirectedGraph complete_graph(int n) {
    UndirectedGraph g{n, {}};
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) g.edges.push_back({a, b});
    }
    return g;
}

// Random connected simple graph: attachment tree plus deduplicated chords.
UndirectedGraph random_connected_graph(std::mt19937_64& rng, int n, int extra) {
    UndirectedGraph g{n, {}};
    std::set<std::pair<int, int>> seen;
    auto add = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        if (a == b || seen.count({a, b})) return;
        seen.insert({a, b});
        g.edges.push_back({a, b});
    };
    for (int i = 1; i < n; ++i) add(static_cast<int>(rng() % i), i);
    for (int k = 0; k < extra; ++k) {
        add(static_cast<int>(rng() % n), static_cast<int>(rng() % n));
    }
    return g;
}

int walk_path(const UndirectedGraph& g, int from, const std::vector<EdgeId>& path,
              std::vector<int>* interior = nullptr) {
    int at = from;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const auto [a, b] = g.edges[static_cast<std::size_t>(path[i])];
        REQUIRE((a == at || b == at));
        at = (a == at) ? b : a;
        if (interior && i + 1 < path.size()) interior->push_back(at);
    }
    return at;
}

void check_minor_invariants(const UndirectedGraph& g, const DiamondMinor& m) {
    std::vector<int> degree(static_cast<std::size_t>(g.vertex_count), 0);
    for (const auto& [a, b] : g.edges) {
        ++degree[static_cast<std::size_t>(a)];
        ++degree[static_cast<std::size_t>(b)];
    }
    CHECK(degree[static_cast<std::size_t>(m.v)] >= 3);
    CHECK(degree[static_cast<std::size_t>(m.w)] >= 3);
    CHECK(m.v != m.w);

    std::set<EdgeId> all_edges;
    std::set<int> all_interior;
    int long_paths = 0;
    for (const auto& path : m.paths) {
        REQUIRE(!path.empty());
        if (path.size() >= 2) ++long_paths;
        std::vector<int> interior;
        CHECK(walk_path(g, m.v, path, &interior) == m.w);
        for (EdgeId e : path) {
            CHECK(!all_edges.count(e));
            all_edges.insert(e);
        }
        for (int x : interior) {
            CHECK(x != m.v);
            CHECK(x != m.w);
            CHECK(!all_interior.count(x));
            all_interior.insert(x);
        }
    }
    CHECK(long_paths >= 2);
    CHECK(m.paths[0].size() <= m.paths[1].size());
    CHECK(m.paths[1].size() <= m.paths[2].size());
}

// Every promise the witness makes, checked against the flow machinery.
void check_witness_invariants(const DegeneracyWitness& wit) {
    const Network& net = wit.network;
    const int n = net.vertex_count();
    REQUIRE(static_cast<int>(wit.direction.size()) == n);
    REQUIRE(static_cast<int>(wit.partition.size()) == n);
    REQUIRE(static_cast<int>(wit.flow.size()) == net.edge_count());

    CHECK(dflow::is_alpha_tree(net, wit.alpha_tree));
    CHECK(dflow::conforms(net, wit.flow, wit.alpha_tree));
    CHECK(dflow::is_extremal(net, wit.flow).verdict == Verdict::NotExtremal);

    // The direction is the tree-part indicator and moves feasibly both ways.
    Flow plus(static_cast<std::size_t>(net.edge_count()));
    bool nonzero = false;
    for (int e = 0; e < net.edge_count(); ++e) {
        const auto& ed = net.edge(e);
        plus[e] = ed.b * (wit.direction[ed.head] - wit.direction[ed.tail]);
        if (plus[e].sign() != 0) nonzero = true;
    }
    CHECK(nonzero);
    Flow minus = plus;
    for (Rational& x : minus) x = -x;
    CHECK(dflow::is_feasible(net, plus).feasible);
    CHECK(dflow::is_feasible(net, minus).feasible);

    for (int v = 0; v < n; ++v) {
        const Rational expect = wit.partition[v] == TreePart::W   ? Rational(0)
                                : wit.partition[v] == TreePart::S ? Rational(1)
                                                                  : Rational(-1);
        CHECK(wit.direction[v] == expect);
    }

    // Tree edges never cross parts; bounds are pinned exactly on the tree.
    std::set<EdgeId> tree(wit.alpha_tree.active_edges.begin(), wit.alpha_tree.active_edges.end());
    for (int e = 0; e < net.edge_count(); ++e) {
        const auto& ed = net.edge(e);
        if (tree.count(e)) {
            CHECK(wit.partition[ed.tail] == wit.partition[ed.head]);
            CHECK(ed.f == Interval::fixed(Rational(0)));
        } else {
            CHECK(ed.f == Interval::free());
        }
        CHECK(ed.b.sign() > 0);
    }
    std::set<VertexId> branch(wit.alpha_tree.active_vertices.begin(),
                              wit.alpha_tree.active_vertices.end());
    CHECK(branch.size() == 2);
    for (int v = 0; v < n; ++v) {
        if (branch.count(v)) {
            CHECK(wit.partition[v] == TreePart::W);
            CHECK(net.vertex(v).p == Interval::fixed(Rational(0)));
        } else {
            CHECK(net.vertex(v).p == Interval::free());
        }
    }
}

void check_same_network(const Network& a, const Network& b) {
    REQUIRE(a.vertex_count() == b.vertex_count());
    REQUIRE(a.edge_count() == b.edge_count());
    for (int v = 0; v < a.vertex_count(); ++v) {
        CHECK(a.vertex(v).name == b.vertex(v).name);
        CHECK(a.vertex(v).p == b.vertex(v).p);
    }
    for (int e = 0; e < a.edge_count(); ++e) {
        CHECK(a.edge(e).name == b.edge(e).name);
        CHECK(a.edge(e).tail == b.edge(e).tail);
        CHECK(a.edge(e).head == b.edge(e).head);
        CHECK(a.edge(e).b == b.edge(e).b);
        CHECK(a.edge(e).f == b.edge(e).f);
    }
}

// Copy of a network with every interval replaced.
Network with_bounds(const Network& net, const std::vector<Interval>& edge_itv,
                    const std::vector<Interval>& vertex_itv) {
    std::vector<dflow::Vertex> vs;
    for (int v = 0; v < net.vertex_count(); ++v) {
        vs.push_back({net.vertex(v).name, vertex_itv[static_cast<std::size_t>(v)]});
    }
    std::vector<dflow::Edge> es;
    for (int e = 0; e < net.edge_count(); ++e) {
        const auto& ed = net.edge(e);
        es.push_back({ed.name, ed.tail, ed.head, ed.b, edge_itv[static_cast<std::size_t>(e)]});
    }
    return Network::create(std::move(vs), std::move(es));
}

}  // namespace

// ---------------------------------------------------------------------------
// Cactus recognition
// ---------------------------------------------------------------------------

TEST_CASE("trees and single cycles are cacti") {
    const UndirectedGraph path{4, {{0, 1}, {1, 2}, {2, 3}}};
    auto r = dflow::is_cactus(path);
    CHECK(r.is_cactus);
    CHECK(!r.violating_edge.has_value());
    CHECK(!dflow::find_diamond_minor(path).has_value());

    const UndirectedGraph cycle{5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}};
    CHECK(dflow::is_cactus(cycle).is_cactus);
    CHECK(!dflow::find_diamond_minor(cycle).has_value());

    const UndirectedGraph k1{1, {}};
    CHECK(dflow::is_cactus(k1).is_cactus);
}

TEST_CASE("the bridge graph is not a cactus and names a shared edge") {
    const auto r = dflow::is_cactus(bridge_graph());
    CHECK(!r.is_cactus);
    REQUIRE(r.violating_edge.has_value());
    // Depth-first retracing from vertex 0 re-marks the (v,w) edge.
    CHECK(*r.violating_edge == 0);
}

TEST_CASE("two triangles sharing a vertex form a cactus, sharing an edge does not") {
    const UndirectedGraph shared_vertex{5, {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 4}, {4, 0}}};
    CHECK(dflow::is_cactus(shared_vertex).is_cactus);

    const UndirectedGraph shared_edge{4, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}}};
    const auto r = dflow::is_cactus(shared_edge);
    CHECK(!r.is_cactus);
    REQUIRE(r.violating_edge.has_value());
    CHECK(*r.violating_edge == 0);
}

TEST_CASE("complete graphs beyond the triangle are not cacti") {
    CHECK(dflow::is_cactus(complete_graph(3)).is_cactus);
    CHECK(!dflow::is_cactus(complete_graph(4)).is_cactus);
    CHECK(!dflow::is_cactus(complete_graph(5)).is_cactus);
}

TEST_CASE("cactus recognition rejects malformed graphs") {
    CHECK_THROWS_AS(dflow::is_cactus(UndirectedGraph{0, {}}), ValidationError);
    CHECK_THROWS_AS(dflow::is_cactus(UndirectedGraph{4, {{0, 1}, {2, 3}}}), ValidationError);
    CHECK_THROWS_AS(dflow::is_cactus(UndirectedGraph{2, {{0, 0}}}), ValidationError);
    CHECK_THROWS_AS(dflow::is_cactus(UndirectedGraph{2, {{0, 5}}}), ValidationError);
}

TEST_CASE("cactus recognition accepts networks directly") {
    CHECK(!dflow::is_cactus(make_bridge_circuit()).is_cactus);
    const Network tri = NetBuilder(3).edge(0, 1).edge(1, 2).edge(2, 0).build();
    CHECK(dflow::is_cactus(tri).is_cactus);
    CHECK(!dflow::find_diamond_minor(tri).has_value());
}

TEST_CASE("cactus recognition agrees with cycle enumeration on random graphs") {
    std::mt19937_64 rng(20240822);
    for (int iter = 0; iter < 140; ++iter) {
        const int n = 2 + static_cast<int>(rng() % 6);
        const auto g = random_connected_graph(rng, n, static_cast<int>(rng() % 5));
        const bool expect = dflow::oracles::cactus_by_cycle_enumeration(to_simple(g));
        const auto report = dflow::is_cactus(g);
        CHECK(report.is_cactus == expect);

        const auto minor = dflow::find_diamond_minor(g);
        CHECK(minor.has_value() == !expect);

        if (!report.is_cactus) {
            REQUIRE(report.violating_edge.has_value());
            // The named edge really lies on two distinct simple cycles.
            int on = 0;
            for (const auto& cyc : dflow::oracles::simple_cycles(to_simple(g))) {
                if (cyc.count(*report.violating_edge)) ++on;
            }
            CHECK(on >= 2);
            check_minor_invariants(g, *minor);
        }
    }
}

// ---------------------------------------------------------------------------
// Diamond minors
// ---------------------------------------------------------------------------

TEST_CASE("the bridge graph's diamond minor is found with deterministic paths") {
    const auto m = dflow::find_diamond_minor(bridge_graph());
    REQUIRE(m.has_value());
    CHECK(m->v == 0);
    CHECK(m->w == 1);
    CHECK(m->paths[0] == std::vector<EdgeId>{0});
    CHECK(m->paths[1] == std::vector<EdgeId>{1, 2});
    CHECK(m->paths[2] == std::vector<EdgeId>{3, 4});
}

TEST_CASE("the complete graph on four vertices yields the lexicographic minor") {
    const auto g = complete_graph(4);
    const auto m = dflow::find_diamond_minor(g);
    REQUIRE(m.has_value());
    CHECK(m->v == 0);
    CHECK(m->w == 1);
    CHECK(m->paths[0] == std::vector<EdgeId>{0});
    CHECK(m->paths[1] == std::vector<EdgeId>{1, 3});
    CHECK(m->paths[2] == std::vector<EdgeId>{2, 4});
    check_minor_invariants(g, *m);
}

TEST_CASE("diamond minors on denser graphs satisfy the path contract") {
    check_minor_invariants(complete_graph(5), *dflow::find_diamond_minor(complete_graph(5)));
    check_minor_invariants(complete_graph(6), *dflow::find_diamond_minor(complete_graph(6)));

    // Two branch vertices joined by three long disjoint paths.
    const UndirectedGraph theta{8, {{0, 2}, {2, 1}, {0, 3}, {3, 4}, {4, 1},
                                    {0, 5}, {5, 6}, {6, 7}, {7, 1}}};
    const auto m = dflow::find_diamond_minor(theta);
    REQUIRE(m.has_value());
    CHECK(m->v == 0);
    CHECK(m->w == 1);
    CHECK(m->paths[0] == std::vector<EdgeId>{0, 1});
    CHECK(m->paths[1] == std::vector<EdgeId>{2, 3, 4});
    CHECK(m->paths[2] == std::vector<EdgeId>{5, 6, 7, 8});
    check_minor_invariants(theta, *m);
}

// ---------------------------------------------------------------------------
// Degeneracy witnesses
// ---------------------------------------------------------------------------

TEST_CASE("the witness on the bridge graph reproduces the reference instance") {
    const auto wit = dflow::build_degeneracy_witness(make_bridge_circuit("3", "1/2", "2", "5"));
    REQUIRE(wit.has_value());

    // Names and structure survive; elasticities and bounds are rebuilt.
    check_same_network(wit->network, make_bridge_circuit());

    CHECK(wit->alpha_tree.active_edges == std::vector<EdgeId>{0});
    CHECK(wit->alpha_tree.active_vertices == std::vector<VertexId>{0, 1});
    REQUIRE(wit->alpha_tree.orientation.has_value());
    CHECK(*wit->alpha_tree.orientation == Orientation{{0, 1}, {1, 4}});
    CHECK(wit->flow == Flow(5, Rational(0)));
    CHECK(wit->direction == rationals({"0", "0", "1", "-1"}));
    CHECK(wit->partition ==
          std::vector<TreePart>{TreePart::W, TreePart::W, TreePart::S, TreePart::T});
    check_witness_invariants(*wit);
}

TEST_CASE("the witness on the complete graph pins both branch vertices") {
    const Network k4 =
        NetBuilder(4).edge(0, 1).edge(0, 2).edge(0, 3).edge(1, 2).edge(1, 3).edge(2, 3).build();
    const auto wit = dflow::build_degeneracy_witness(k4);
    REQUIRE(wit.has_value());
    CHECK(wit->alpha_tree.active_edges == std::vector<EdgeId>{0});
    CHECK(wit->alpha_tree.active_vertices == std::vector<VertexId>{0, 1});
    CHECK(*wit->alpha_tree.orientation == Orientation{{0, 1}, {1, 4}});
    CHECK(wit->direction == rationals({"0", "0", "1", "-1"}));
    CHECK(wit->partition ==
          std::vector<TreePart>{TreePart::W, TreePart::W, TreePart::S, TreePart::T});
    check_witness_invariants(*wit);
}

TEST_CASE("cacti admit no degeneracy witness") {
    std::mt19937_64 rng(20240823);
    const Network tri = NetBuilder(3).edge(0, 1).edge(1, 2).edge(2, 0).build();
    CHECK(!dflow::build_degeneracy_witness(tri).has_value());
    for (int iter = 0; iter < 10; ++iter) {
        const Network net = make_random_cactus(rng, 3 + static_cast<int>(rng() % 5));
        CHECK(!dflow::build_degeneracy_witness(net).has_value());
    }
}

TEST_CASE("witnesses on longer side paths cover every vertex with the three trees") {
    // Subdivided bridge: v=0, w=1, side paths of lengths 3 and 2, a chord
    // vertex 6 hanging off the long side, all anchored by the direct edge.
    const Network net = NetBuilder(7)
                            .edge(0, 1)
                            .edge(0, 2)
                            .edge(2, 3)
                            .edge(3, 1)
                            .edge(0, 4)
                            .edge(4, 1)
                            .edge(2, 6)
                            .edge(6, 5)
                            .edge(5, 0)
                            .build();
    const auto wit = dflow::build_degeneracy_witness(net);
    REQUIRE(wit.has_value());
    check_witness_invariants(*wit);
}

TEST_CASE("witnesses on random non-cacti always validate") {
    std::mt19937_64 rng(20240824);
    int built = 0;
    for (int iter = 0; iter < 200 && built < 60; ++iter) {
        const int n = 4 + static_cast<int>(rng() % 4);
        const Network net = random_network(rng, n, 2 + static_cast<int>(rng() % 4));
        const auto wit = dflow::build_degeneracy_witness(net);
        CHECK(wit.has_value() == !dflow::is_cactus(net).is_cactus);
        if (!wit) continue;
        ++built;
        check_witness_invariants(*wit);
        // Input names survive into the witness network.
        for (int v = 0; v < net.vertex_count(); ++v) {
            CHECK(wit->network.vertex(v).name == net.vertex(v).name);
        }
    }
    CHECK(built >= 60);
}

// ---------------------------------------------------------------------------
// Sufficient conditions
// ---------------------------------------------------------------------------

TEST_CASE("a fixed spanning path certifies extremality with no active vertices") {
    const Network net = NetBuilder(3).edge(0, 1, "1", "0", "0").edge(1, 2, "1", "0", "0").build();
    const Flow f = rationals({"0", "0"});
    const AlphaForest forest{{0, 1}, {}, std::nullopt};
    CHECK(dflow::check_suff_one_active_per_component(net, f, forest) == Sufficiency::Certified);
    CHECK(dflow::check_suff_small_degree(net, f, forest) == Sufficiency::Certified);
    CHECK(dflow::is_extremal(net, f).verdict == Verdict::Extremal);
}

TEST_CASE("an isolated active vertex beside a fixed edge is certified") {
    const Network net =
        NetBuilder(3).edge(0, 1, "1", "0", "0").edge(1, 2).edge(2, 0).vertex_bounds(2, "0", "0").build();
    const Flow f = rationals({"0", "0", "0"});
    const AlphaForest forest{{0}, {2}, std::nullopt};
    CHECK(dflow::check_suff_one_active_per_component(net, f, forest) == Sufficiency::Certified);
    CHECK(dflow::check_suff_small_degree(net, f, forest) == Sufficiency::Certified);
    CHECK(dflow::is_extremal(net, f).verdict == Verdict::Extremal);
}

TEST_CASE("two active vertices on one fixed edge defeat the component condition only") {
    // Path on four vertices; the middle edge is fixed and both its endpoints
    // are active, but neither has degree three.
    const Network net = NetBuilder(4)
                            .edge(0, 1)
                            .edge(1, 2, "1", "0", "0")
                            .edge(2, 3)
                            .vertex_bounds(1, "0", "0")
                            .vertex_bounds(2, "0", "0")
                            .build();
    const Flow f = rationals({"0", "0", "0"});
    const AlphaForest forest{{1}, {1, 2}, std::nullopt};
    CHECK(dflow::check_suff_one_active_per_component(net, f, forest) ==
          Sufficiency::NotApplicable);
    CHECK(dflow::check_suff_small_degree(net, f, forest) == Sufficiency::Certified);
    CHECK(dflow::is_extremal(net, f).verdict == Verdict::Extremal);
}

TEST_CASE("two separated hubs defeat the degree condition only") {
    // Two degree-three hubs 0 and 4 in different fixed components.
    const Network net = NetBuilder(7)
                            .edge(0, 1, "1", "0", "0")
                            .edge(0, 2, "1", "0", "0")
                            .edge(0, 3)
                            .edge(3, 4)
                            .edge(4, 5, "1", "0", "0")
                            .edge(4, 6, "1", "0", "0")
                            .vertex_bounds(0, "0", "0")
                            .vertex_bounds(4, "0", "0")
                            .build();
    const Flow f(6, Rational(0));
    const AlphaForest forest{{0, 1, 4, 5}, {0, 4}, std::nullopt};
    CHECK(dflow::check_suff_one_active_per_component(net, f, forest) == Sufficiency::Certified);
    CHECK(dflow::check_suff_small_degree(net, f, forest) == Sufficiency::NotApplicable);
    CHECK(dflow::is_extremal(net, f).verdict == Verdict::Extremal);
}

TEST_CASE("the reference degenerate instance satisfies neither sufficient condition") {
    const Network net = make_bridge_circuit();
    const Flow f(5, Rational(0));
    const AlphaForest forest{{0}, {0, 1}, Orientation{{0, 1}, {1, 4}}};
    CHECK(dflow::check_suff_one_active_per_component(net, f, forest) ==
          Sufficiency::NotApplicable);
    CHECK(dflow::check_suff_small_degree(net, f, forest) == Sufficiency::NotApplicable);
    CHECK(dflow::is_extremal(net, f).verdict == Verdict::NotExtremal);
}

TEST_CASE("sufficiency checks insist on a conforming alpha-tree") {
    const Network net = make_bridge_circuit();
    const Flow f(5, Rational(0));
    const AlphaForest too_small{{0}, {0}, std::nullopt};
    CHECK_THROWS_AS(dflow::check_suff_one_active_per_component(net, f, too_small),
                    PreconditionError);
    CHECK_THROWS_AS(dflow::check_suff_small_degree(net, f, too_small), PreconditionError);

    const AlphaForest forest{{0}, {0, 1}, std::nullopt};
    const Flow off = rationals({"0", "1", "0", "0", "0"});
    CHECK_THROWS_AS(dflow::check_suff_one_active_per_component(net, off, forest),
                    PreconditionError);
    CHECK_THROWS_AS(dflow::check_suff_small_degree(net, off, forest), PreconditionError);
}

TEST_CASE("sufficient conditions never certify a constructed witness") {
    std::mt19937_64 rng(20240825);
    int built = 0;
    for (int iter = 0; iter < 120 && built < 40; ++iter) {
        const int n = 4 + static_cast<int>(rng() % 4);
        const Network net = random_network(rng, n, 2 + static_cast<int>(rng() % 4));
        const auto wit = dflow::build_degeneracy_witness(net);
        if (!wit) continue;
        ++built;
        CHECK(dflow::check_suff_one_active_per_component(wit->network, wit->flow,
                                                         wit->alpha_tree) ==
              Sufficiency::NotApplicable);
        CHECK(dflow::check_suff_small_degree(wit->network, wit->flow, wit->alpha_tree) ==
              Sufficiency::NotApplicable);
    }
    CHECK(built >= 40);
}

// ---------------------------------------------------------------------------
// Generalized flows and anti-arborescences
// ---------------------------------------------------------------------------

TEST_CASE("generalized elasticities validate their entries") {
    CHECK_THROWS_AS(GeneralizedElasticity::create({}), ValidationError);
    CHECK_THROWS_AS(GeneralizedElasticity::create({{Rational(0)}, {Rational(0)}}),
                    ValidationError);
    CHECK_THROWS_AS(
        GeneralizedElasticity::create({{Rational(0), Rational(-1)}, {Rational(0), Rational(0)}}),
        ValidationError);

    const auto b = GeneralizedElasticity::create(
        {{Rational(7), Rational(2)}, {Rational(0), Rational(0)}});
    CHECK(b.size() == 2);
    CHECK(b.at(0, 1) == Rational(2));
    CHECK(b.support() == std::vector<std::pair<int, int>>{{0, 1}});
}

TEST_CASE("constant potentials are always feasible, one-sided pairs force equality") {
    const auto b = GeneralizedElasticity::create(
        {{Rational(0), Rational(1)}, {Rational(0), Rational(0)}});
    CHECK(dflow::generalized_flow_feasible(b, rationals({"5", "5"})));
    CHECK(!dflow::generalized_flow_feasible(b, rationals({"0", "1"})));
    CHECK(!dflow::generalized_flow_feasible(b, rationals({"1", "0"})));
    CHECK_THROWS_AS(dflow::generalized_flow_feasible(b, rationals({"1"})), ValidationError);
}

TEST_CASE("spanning anti-arborescence detection on small digraphs") {
    using Arcs = std::vector<std::pair<int, int>>;
    CHECK(dflow::has_spanning_anti_arborescence(1, Arcs{}) == 0);
    CHECK(dflow::has_spanning_anti_arborescence(3, Arcs{{0, 1}, {1, 2}}) == 2);
    CHECK(!dflow::has_spanning_anti_arborescence(2, Arcs{}).has_value());
    CHECK(!dflow::has_spanning_anti_arborescence(4, Arcs{{0, 1}, {0, 2}, {0, 3}}).has_value());
    CHECK(dflow::has_spanning_anti_arborescence(4, Arcs{{1, 0}, {2, 0}, {3, 0}}) == 0);
    CHECK(dflow::has_spanning_anti_arborescence(3, Arcs{{0, 1}, {1, 2}, {2, 0}}) == 0);
    CHECK_THROWS_AS(dflow::has_spanning_anti_arborescence(0, Arcs{}), ValidationError);
    CHECK_THROWS_AS(dflow::has_spanning_anti_arborescence(2, Arcs{{0, 3}}), ValidationError);
}

TEST_CASE("supports containing a spanning anti-arborescence admit only constant potentials") {
    std::mt19937_64 rng(20240826);
    for (int iter = 0; iter < 60; ++iter) {
        const int n = 2 + static_cast<int>(rng() % 5);
        // Random anti-arborescence: vertex perm[i] points at an earlier vertex.
        std::vector<int> perm(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) perm[i] = i;
        for (int i = n - 1; i > 0; --i) {
            std::swap(perm[i], perm[static_cast<std::size_t>(rng() % (i + 1))]);
        }
        std::vector<std::vector<Rational>> entries(
            static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
        std::vector<std::pair<int, int>> arcs;
        for (int i = 1; i < n; ++i) {
            const int from = perm[i];
            const int to = perm[static_cast<std::size_t>(rng() % i)];
            entries[from][to] = Rational(static_cast<long long>(1 + rng() % 5));
            arcs.push_back({from, to});
        }
        // A few extra arcs must not break the conclusion.
        for (int k = 0; k < 2; ++k) {
            const int a = static_cast<int>(rng() % n);
            const int c = static_cast<int>(rng() % n);
            if (a != c && entries[a][c].sign() == 0) {
                entries[a][c] = Rational(static_cast<long long>(1 + rng() % 3));
                arcs.push_back({a, c});
            }
        }
        const auto sink = dflow::has_spanning_anti_arborescence(n, arcs);
        REQUIRE(sink.has_value());

        const auto b = GeneralizedElasticity::create(entries);

        // The feasibility system's kernel is exactly the constants.
        std::vector<std::vector<Rational>> rows(
            static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
        for (int v = 0; v < n; ++v) {
            for (int w = 0; w < n; ++w) {
                if (v == w) continue;
                rows[v][w] = b.at(v, w);
                rows[v][v] = rows[v][v] - b.at(v, w);
            }
        }
        const auto kernel =
            dflow::Matrix::from_rows(rows, static_cast<std::size_t>(n)).kernel_basis();
        REQUIRE(kernel.size() == 1);
        for (int v = 1; v < n; ++v) CHECK(kernel[0][v] == kernel[0][0]);

        std::vector<Rational> constant(static_cast<std::size_t>(n),
                                       Rational(static_cast<long long>(rng() % 7)));
        CHECK(dflow::generalized_flow_feasible(b, constant));
        if (n >= 2) {
            auto phi = constant;
            phi[static_cast<std::size_t>(rng() % n)] += Rational(1);
            CHECK(!dflow::generalized_flow_feasible(b, phi));
        }
    }
}

// ---------------------------------------------------------------------------
// The nondegeneracy search
// ---------------------------------------------------------------------------

TEST_CASE("a single free edge admits no counterexample in either mode") {
    const Network k2 = NetBuilder(2).edge(0, 1).build();
    CHECK(dflow::test_nondegeneracy(k2, DegeneracyMode::FreeBounds).result ==
          NondegeneracyResult::NoCounterexampleFound);
    CHECK(dflow::test_nondegeneracy(k2, DegeneracyMode::FixedBounds).result ==
          NondegeneracyResult::NoCounterexampleFound);
}

TEST_CASE("the balanced bridge circuit is certified degenerate with free bounds") {
    const auto report =
        dflow::test_nondegeneracy(make_bridge_circuit(), DegeneracyMode::FreeBounds);
    REQUIRE(report.result == NondegeneracyResult::CertifiedDegenerate);
    REQUIRE(report.counterexample.has_value());
    const auto& ce = *report.counterexample;
    check_same_network(ce.network, make_bridge_circuit());
    CHECK(ce.alpha_tree.active_edges == std::vector<EdgeId>{0});
    CHECK(ce.alpha_tree.active_vertices == std::vector<VertexId>{0, 1});
    REQUIRE(ce.alpha_tree.orientation.has_value());
    CHECK(*ce.alpha_tree.orientation == Orientation{{0, 1}, {1, 4}});
    CHECK(ce.flow == Flow(5, Rational(0)));
    CHECK(ce.direction == rationals({"0", "0", "1", "-1"}));

    // The counterexample replays against the public machinery.
    CHECK(dflow::is_alpha_tree(ce.network, ce.alpha_tree));
    CHECK(dflow::conforms(ce.network, ce.flow, ce.alpha_tree));
    CHECK(dflow::is_extremal(ce.network, ce.flow).verdict == Verdict::NotExtremal);
}

TEST_CASE("the balanced bridge circuit is certified degenerate within its own bounds") {
    const Network net = make_bridge_circuit();
    const auto report = dflow::test_nondegeneracy(net, DegeneracyMode::FixedBounds);
    REQUIRE(report.result == NondegeneracyResult::CertifiedDegenerate);
    REQUIRE(report.counterexample.has_value());
    const auto& ce = *report.counterexample;
    check_same_network(ce.network, net);
    CHECK(ce.alpha_tree.active_edges == std::vector<EdgeId>{0});
    CHECK(ce.alpha_tree.active_vertices == std::vector<VertexId>{0, 1});
    CHECK(ce.flow == Flow(5, Rational(0)));
    CHECK(ce.direction == rationals({"0", "0", "1", "-1"}));
}

TEST_CASE("detuning one elasticity removes the degeneracy") {
    const Network net = make_bridge_circuit("1", "1", "1", "2");
    CHECK(dflow::test_nondegeneracy(net, DegeneracyMode::FreeBounds).result ==
          NondegeneracyResult::NoCounterexampleFound);
    CHECK(dflow::test_nondegeneracy(net, DegeneracyMode::FixedBounds).result ==
          NondegeneracyResult::NoCounterexampleFound);
}

TEST_CASE("an extra fixed imbalance can rescue extremality in fixed mode only") {
    // Fixing s's imbalance to zero forces the candidate pattern's only
    // direction to collapse; with free bounds the same graph stays degenerate.
    Network net = NetBuilder(4)
                      .edge(0, 1, "1", "0", "0")
                      .edge(2, 0)
                      .edge(2, 1)
                      .edge(0, 3)
                      .edge(1, 3)
                      .vertex_bounds(0, "0", "0")
                      .vertex_bounds(1, "0", "0")
                      .vertex_bounds(2, "0", "0")
                      .build();
    CHECK(dflow::test_nondegeneracy(net, DegeneracyMode::FixedBounds).result ==
          NondegeneracyResult::NoCounterexampleFound);
    CHECK(dflow::test_nondegeneracy(net, DegeneracyMode::FreeBounds).result ==
          NondegeneracyResult::CertifiedDegenerate);
}

TEST_CASE("contradictory fixed values rescue extremality in fixed mode only") {
    Network net = NetBuilder(4)
                      .edge(0, 1, "1", "1", "1")
                      .edge(2, 0)
                      .edge(2, 1)
                      .edge(0, 3)
                      .edge(1, 3)
                      .vertex_bounds(0, "0", "0")
                      .vertex_bounds(1, "0", "0")
                      .build();
    CHECK(dflow::test_nondegeneracy(net, DegeneracyMode::FixedBounds).result ==
          NondegeneracyResult::NoCounterexampleFound);
    CHECK(dflow::test_nondegeneracy(net, DegeneracyMode::FreeBounds).result ==
          NondegeneracyResult::CertifiedDegenerate);
}

TEST_CASE("cacti are never certified degenerate") {
    std::mt19937_64 rng(20240827);
    for (int iter = 0; iter < 12; ++iter) {
        const Network net = make_random_cactus(rng, 3 + static_cast<int>(rng() % 4));
        CHECK(dflow::test_nondegeneracy(net, DegeneracyMode::FreeBounds).result ==
              NondegeneracyResult::NoCounterexampleFound);
    }
    for (int iter = 0; iter < 10; ++iter) {
        const Network net =
            make_random_cactus(rng, 3 + static_cast<int>(rng() % 4), /*random_bounds=*/true);
        CHECK(dflow::test_nondegeneracy(net, DegeneracyMode::FixedBounds).result ==
              NondegeneracyResult::NoCounterexampleFound);
    }
}

TEST_CASE("joining two cacti at a vertex preserves both recognition and nondegeneracy") {
    // Triangle 0-1-2 and square 0-3-4-5 sharing vertex 0, plus a pendant.
    const Network net = NetBuilder(7)
                            .edge(0, 1)
                            .edge(1, 2)
                            .edge(2, 0)
                            .edge(0, 3)
                            .edge(3, 4)
                            .edge(4, 5)
                            .edge(5, 0)
                            .edge(3, 6)
                            .build();
    CHECK(dflow::is_cactus(net).is_cactus);
    CHECK(dflow::test_nondegeneracy(net, DegeneracyMode::FreeBounds).result ==
          NondegeneracyResult::NoCounterexampleFound);
}

TEST_CASE("the nondegeneracy search respects its work budget and size cap") {
    NondegeneracyOptions tiny;
    tiny.work_cap = 1;
    CHECK_THROWS_AS(
        dflow::test_nondegeneracy(make_bridge_circuit(), DegeneracyMode::FreeBounds, tiny),
        BudgetError);

    NetBuilder big(9);
    for (int i = 1; i < 9; ++i) big.edge(i - 1, i);
    CHECK_THROWS_AS(dflow::test_nondegeneracy(big.build(), DegeneracyMode::FreeBounds),
                    PreconditionError);
}

TEST_CASE("active-row rank equals the largest conforming forest on cacti") {
    std::mt19937_64 rng(20240828);
    for (int iter = 0; iter < 30; ++iter) {
        const int n = 3 + static_cast<int>(rng() % 4);
        const Network base = make_random_cactus(rng, n);

        // A potential-induced flow with a random subset of bounds pinned at
        // the values it attains.
        Potential phi(static_cast<std::size_t>(n));
        for (auto& x : phi) {
            x = Rational(static_cast<long long>(rng() % 5), static_cast<long long>(1 + rng() % 2));
        }
        Flow f(static_cast<std::size_t>(base.edge_count()));
        std::vector<Interval> edge_itv;
        for (int e = 0; e < base.edge_count(); ++e) {
            const auto& ed = base.edge(e);
            f[e] = ed.b * (phi[ed.head] - phi[ed.tail]);
            switch (rng() % 3) {
                case 0: edge_itv.push_back(Interval::fixed(f[e])); break;
                case 1: edge_itv.push_back({dflow::Bound::finite(f[e] - Rational(1)),
                                            dflow::Bound::finite(f[e] + Rational(1))});
                    break;
                default: edge_itv.push_back(Interval::free()); break;
            }
        }
        const auto imb = dflow::imbalance(base, f);
        std::vector<Interval> vertex_itv;
        for (int v = 0; v < n; ++v) {
            if (rng() % 3 == 0) {
                vertex_itv.push_back(Interval::fixed(imb[v]));
            } else {
                vertex_itv.push_back(Interval::free());
            }
        }
        const Network net = with_bounds(base, edge_itv, vertex_itv);
        REQUIRE(dflow::is_feasible(net, f).feasible);

        const auto active = dflow::active_set(net, f);
        std::set<EdgeId> active_edges(active.edges_at_lower.begin(), active.edges_at_lower.end());
        active_edges.insert(active.edges_at_upper.begin(), active.edges_at_upper.end());
        std::set<VertexId> active_vertices(active.vertices_at_lower.begin(),
                                           active.vertices_at_lower.end());
        active_vertices.insert(active.vertices_at_upper.begin(), active.vertices_at_upper.end());

        // Rank of the distinct active rows.
        std::vector<std::vector<Rational>> rows;
        for (EdgeId e : active_edges) rows.push_back(net.edge_row(e));
        for (VertexId v : active_vertices) rows.push_back(net.vertex_row(v));
        const std::size_t rank =
            dflow::Matrix::from_rows(rows, static_cast<std::size_t>(n)).rank();

        // Largest conforming forest by brute force over active subsets.
        std::vector<EdgeId> ae(active_edges.begin(), active_edges.end());
        std::vector<VertexId> av(active_vertices.begin(), active_vertices.end());
        std::vector<std::pair<int, int>> endpoints;
        for (int e = 0; e < net.edge_count(); ++e) {
            endpoints.push_back({net.edge(e).tail, net.edge(e).head});
        }
        std::size_t best = 0;
        for (std::size_t em = 0; em < (std::size_t{1} << ae.size()); ++em) {
            std::vector<int> chosen_edges;
            dflow::UnionFind uf(n);
            bool acyclic = true;
            for (std::size_t i = 0; i < ae.size() && acyclic; ++i) {
                if (em >> i & 1) {
                    chosen_edges.push_back(ae[i]);
                    acyclic = uf.unite(endpoints[ae[i]].first, endpoints[ae[i]].second);
                }
            }
            if (!acyclic) continue;
            for (std::size_t vm = 0; vm < (std::size_t{1} << av.size()); ++vm) {
                std::vector<int> chosen_vertices;
                for (std::size_t i = 0; i < av.size(); ++i) {
                    if (vm >> i & 1) chosen_vertices.push_back(av[i]);
                }
                if (chosen_edges.size() + chosen_vertices.size() <= best) continue;
                if (dflow::oracles::exhaustive_orientation(n, endpoints, chosen_edges,
                                                           chosen_vertices)) {
                    best = chosen_edges.size() + chosen_vertices.size();
                }
            }
        }
        CHECK(rank == best);
    }
}
