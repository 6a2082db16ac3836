#include "dflow/generate.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dflow/error.hpp"

namespace dflow {

namespace {

// uniform_int_distribution is not pinned down by the standard, so identical
// seeds could diverge across standard libraries; plain modulo reduction is.
// The slight bias is irrelevant for instance generation.
std::uint64_t rand_below(std::mt19937_64& rng, std::uint64_t k) { return rng() % k; }

class Builder {
public:
    Builder(std::mt19937_64& rng, const GeneratorConfig& config) : rng_(rng), config_(config) {}

    int add_vertex() {
        vertices_.push_back({"v" + std::to_string(vertices_.size()), imbalance_interval()});
        return static_cast<int>(vertices_.size()) - 1;
    }

    /// Joins a and b in a random direction; no-op on loops and on pairs that
    /// are already joined (returns whether an edge was added).
    bool add_edge(int a, int b) {
        if (a == b) return false;
        const std::pair<int, int> key = std::minmax(a, b);
        if (!joined_.insert(key).second) return false;
        if (rand_below(rng_, 2) == 1) std::swap(a, b);
        Edge e;
        e.name = "e" + std::to_string(edges_.size());
        e.tail = a;
        e.head = b;
        e.b = positive_rational();
        e.f = flow_interval();
        edges_.push_back(std::move(e));
        return true;
    }

    int vertex_count() const { return static_cast<int>(vertices_.size()); }

    Network build() && { return Network::create(std::move(vertices_), std::move(edges_)); }

    std::uint64_t roll(std::uint64_t k) { return rand_below(rng_, k); }

private:
    Rational positive_rational() {
        const auto m = static_cast<std::uint64_t>(config_.magnitude);
        return Rational(static_cast<long long>(1 + rand_below(rng_, m)),
                        static_cast<long long>(1 + rand_below(rng_, m)));
    }

    /// Any sign, magnitude at most the cap, zero included.
    Rational signed_rational() {
        const auto m = static_cast<std::uint64_t>(config_.magnitude);
        Rational r(static_cast<long long>(rand_below(rng_, m + 1)),
                   static_cast<long long>(1 + rand_below(rng_, m)));
        if (rand_below(rng_, 2) == 1) r = -r;
        return r;
    }

    Interval bounded_interval() {
        switch (config_.bounds) {
            case BoundStyle::Free:
                return Interval::free();
            case BoundStyle::Symmetric: {
                const Rational c = positive_rational();
                return Interval::closed(-c, c);
            }
            case BoundStyle::RandomFinite: {
                const Rational lo = signed_rational();
                const Rational width = signed_rational();
                return Interval::closed(lo, width < Rational(0) ? lo - width : lo + width);
            }
        }
        throw Error("unreachable: unknown bound style");
    }

    Interval flow_interval() { return bounded_interval(); }
    Interval imbalance_interval() { return bounded_interval(); }

    std::mt19937_64& rng_;
    const GeneratorConfig& config_;
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::set<std::pair<int, int>> joined_;
};

void grow_tree(Builder& b, int n) {
    b.add_vertex();
    while (b.vertex_count() < n) {
        const int anchor = static_cast<int>(b.roll(static_cast<std::uint64_t>(b.vertex_count())));
        b.add_edge(anchor, b.add_vertex());
    }
}

void grow_cycle(Builder& b, int n) {
    for (int i = 0; i < n; ++i) b.add_vertex();
    for (int i = 0; i < n; ++i) b.add_edge(i, (i + 1) % n);
}

// Pendant-or-cycle growth: every cycle is built from brand-new vertices, so
// no edge ever lies on two cycles.
void grow_cactus(Builder& b, int n) {
    b.add_vertex();
    while (b.vertex_count() < n) {
        const int anchor = static_cast<int>(b.roll(static_cast<std::uint64_t>(b.vertex_count())));
        const int room = n - b.vertex_count();
        if (room >= 2 && b.roll(2) == 0) {
            const int len = 3 + static_cast<int>(b.roll(3));
            const int body = std::min(len - 1, room);
            int prev = anchor;
            for (int k = 0; k < body; ++k) {
                const int nv = b.add_vertex();
                b.add_edge(prev, nv);
                prev = nv;
            }
            b.add_edge(prev, anchor);
        } else {
            b.add_edge(anchor, b.add_vertex());
        }
    }
}

void add_random_chords(Builder& b, int n, std::uint64_t attempts) {
    for (std::uint64_t k = 0; k < attempts; ++k) {
        b.add_edge(static_cast<int>(b.roll(static_cast<std::uint64_t>(n))),
                   static_cast<int>(b.roll(static_cast<std::uint64_t>(n))));
    }
}

void grow_random(Builder& b, int n) {
    grow_tree(b, n);
    add_random_chords(b, n, b.roll(static_cast<std::uint64_t>(2 * n)));
}

// Theta subgraph first (two degree-3 vertices joined by three internally
// disjoint paths), then random growth; later additions cannot remove it.
void grow_non_cactus(Builder& b, int n) {
    for (int i = 0; i < 4; ++i) b.add_vertex();
    b.add_edge(0, 1);
    b.add_edge(0, 2);
    b.add_edge(2, 1);
    b.add_edge(0, 3);
    b.add_edge(3, 1);
    while (b.vertex_count() < n) {
        const int anchor = static_cast<int>(b.roll(static_cast<std::uint64_t>(b.vertex_count())));
        b.add_edge(anchor, b.add_vertex());
    }
    add_random_chords(b, n, b.roll(static_cast<std::uint64_t>(n)));
}

int topology_minimum(Topology t) {
    switch (t) {
        case Topology::Cycle: return 3;
        case Topology::NonCactus: return 4;
        default: return 1;
    }
}

}  // namespace

Network generate(const GeneratorConfig& config) {
    if (config.min_vertices > config.max_vertices) {
        throw ValidationError("generator config: empty vertex range [" +
                              std::to_string(config.min_vertices) + ", " +
                              std::to_string(config.max_vertices) + "]");
    }
    const int minimum = topology_minimum(config.topology);
    if (config.min_vertices < minimum) {
        throw ValidationError("generator config: this topology needs at least " +
                              std::to_string(minimum) + " vertices (range starts at " +
                              std::to_string(config.min_vertices) + ")");
    }
    if (config.magnitude < 1) {
        throw ValidationError("generator config: magnitude must be at least 1 (got " +
                              std::to_string(config.magnitude) + ")");
    }

    std::mt19937_64 rng(config.seed);
    const int span = config.max_vertices - config.min_vertices + 1;
    const int n = config.min_vertices +
                  static_cast<int>(rand_below(rng, static_cast<std::uint64_t>(span)));

    Builder b(rng, config);
    switch (config.topology) {
        case Topology::Tree: grow_tree(b, n); break;
        case Topology::Cycle: grow_cycle(b, n); break;
        case Topology::Cactus: grow_cactus(b, n); break;
        case Topology::Random: grow_random(b, n); break;
        case Topology::NonCactus: grow_non_cactus(b, n); break;
    }
    return std::move(b).build();
}

}  // namespace dflow
