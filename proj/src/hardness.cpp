#include "dflow/hardness.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "dflow/error.hpp"
#include "dflow/polytope.hpp"

namespace dflow {

namespace {

void validate_instance(const SubsetSumInstance& inst) {
    if (inst.sizes.empty()) {
        throw ValidationError("subset-sum instance needs at least one size");
    }
    for (long long a : inst.sizes) {
        if (a < 1) throw ValidationError("subset-sum sizes must be positive");
    }
    if (inst.target < 1) throw ValidationError("subset-sum target must be positive");
}

}  // namespace

Gadget build_gadget(const SubsetSumInstance& inst) {
    validate_instance(inst);
    const int n = static_cast<int>(inst.sizes.size());
    const Rational beta(inst.target);

    GadgetLabels labels;
    labels.v = 0;
    labels.w = 1;
    labels.s = 2;
    labels.t = 3;

    std::vector<Vertex> vertices;
    vertices.push_back({"v", {Bound::finite(Rational(0)), Bound::finite(beta)}});
    vertices.push_back({"w", {Bound::finite(Rational(0)), Bound::pos_inf()}});
    vertices.push_back({"s", Interval::free()});
    vertices.push_back({"t", Interval::free()});
    for (int i = 0; i < n; ++i) {
        labels.items.push_back(4 + i);
        vertices.push_back({"v" + std::to_string(i + 1),
                            {Bound::finite(Rational(0)), Bound::pos_inf()}});
    }

    const Interval unit{Bound::finite(Rational(0)), Bound::finite(Rational(1))};
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        const Rational two_alpha(2 * inst.sizes[i]);
        edges.push_back({"vv" + std::to_string(i + 1), labels.v, labels.items[i], two_alpha, unit});
    }
    edges.push_back({"vw", labels.v, labels.w, Rational(1), unit});
    for (int i = 0; i < n; ++i) {
        const Rational two_alpha(2 * inst.sizes[i]);
        edges.push_back({"v" + std::to_string(i + 1) + "t", labels.items[i], labels.t, two_alpha,
                         Interval::free()});
    }
    edges.push_back({"wt", labels.w, labels.t, Rational(1), Interval::free()});
    edges.push_back({"sv", labels.s, labels.v, beta, Interval::free()});
    edges.push_back({"sw", labels.s, labels.w, Rational(1), Interval::free()});

    return {Network::create(std::move(vertices), std::move(edges)), std::move(labels)};
}

namespace {

std::optional<GadgetWitness> witness_for_chosen(const Gadget& gadget,
                                                const SubsetSumInstance& inst,
                                                const std::vector<char>& chosen) {
    const int n = static_cast<int>(inst.sizes.size());
    const Network& net = gadget.network;

    // The degeneracy direction: split s and t apart, lift the chosen items
    // halfway, and keep both branch vertices at ground.
    Potential phi(static_cast<std::size_t>(net.vertex_count()), Rational(0));
    phi[gadget.labels.s] = Rational(-2);
    phi[gadget.labels.t] = Rational(2);
    for (int i = 0; i < n; ++i) {
        if (chosen[static_cast<std::size_t>(i)]) phi[gadget.labels.items[i]] = Rational(1);
    }

    // Scale the induced flow so every capacitated edge stays strictly under
    // its cap; edges off the chosen items then sit exactly at zero.
    const long long max_size = *std::max_element(inst.sizes.begin(), inst.sizes.end());
    const Rational lambda(1, 4 * max_size);
    Flow f(static_cast<std::size_t>(net.edge_count()));
    for (int e = 0; e < net.edge_count(); ++e) {
        const auto& ed = net.edge(e);
        f[e] = lambda * ed.b * (phi[ed.head] - phi[ed.tail]);
    }

    // Imbalance screen before the full membership test: the branch vertex's
    // interval alone rules out almost every subset, at the cost of a few
    // additions.  Any rejection here would also be one from is_feasible.
    const std::vector<Rational> surplus = imbalance(net, f);
    for (int v = 0; v < net.vertex_count(); ++v) {
        if (!net.vertex(v).p.contains(surplus[v])) return std::nullopt;
    }
    if (!is_feasible(net, f).feasible) return std::nullopt;

    AlphaForest forest;
    Orientation alpha;
    for (int i = 0; i < n; ++i) {
        if (!chosen[static_cast<std::size_t>(i)]) forest.active_edges.push_back(i);
    }
    forest.active_edges.push_back(n);  // the (v, w) edge
    forest.active_vertices = {gadget.labels.v, gadget.labels.w};
    alpha[gadget.labels.v] = 2 * n + 2;  // (s, v)
    alpha[gadget.labels.w] = 2 * n + 1;  // (w, t)
    for (int i = 0; i < n; ++i) {
        if (chosen[static_cast<std::size_t>(i)]) {
            forest.active_vertices.push_back(gadget.labels.items[i]);
            alpha[gadget.labels.items[i]] = n + 1 + i;  // (item_i, t)
        }
    }
    forest.orientation = std::move(alpha);

    if (!is_alpha_tree(net, forest)) return std::nullopt;
    if (!conforms(net, f, forest)) return std::nullopt;
    if (is_extremal(net, f).verdict != Verdict::NotExtremal) return std::nullopt;

    std::vector<int> normalized;
    for (int i = 0; i < n; ++i) {
        if (chosen[static_cast<std::size_t>(i)]) normalized.push_back(i);
    }
    return GadgetWitness{std::move(normalized), std::move(phi), std::move(f), std::move(forest)};
}

}  // namespace

std::optional<GadgetWitness> gadget_subset_witness(const SubsetSumInstance& inst,
                                                   const std::vector<int>& subset) {
    validate_instance(inst);
    const int n = static_cast<int>(inst.sizes.size());
    std::vector<char> chosen(static_cast<std::size_t>(n), 0);
    for (int i : subset) {
        if (i < 0 || i >= n) throw ValidationError("subset index out of range");
        if (chosen[static_cast<std::size_t>(i)]) {
            throw ValidationError("subset index repeated");
        }
        chosen[static_cast<std::size_t>(i)] = 1;
    }
    return witness_for_chosen(build_gadget(inst), inst, chosen);
}

GadgetDecision gadget_degenerate(const SubsetSumInstance& inst, int cap) {
    validate_instance(inst);
    const int n = static_cast<int>(inst.sizes.size());
    if (n > cap || n > 30) {
        throw PreconditionError("gadget_degenerate enumerates subsets and handles at most " +
                                std::to_string(std::min(cap, 30)) + " sizes (got " +
                                std::to_string(n) + ")");
    }

    // Path (a): arithmetic only.
    std::optional<unsigned long long> sum_mask;
    for (unsigned long long mask = 0; mask < (1ull << n); ++mask) {
        long long sum = 0;
        for (int i = 0; i < n; ++i) {
            if (mask >> i & 1) sum += inst.sizes[i];
        }
        if (sum == inst.target) {
            sum_mask = mask;
            break;
        }
    }

    // Path (b): polytope machinery only — build each candidate witness and
    // keep the first that survives validation.  The gadget network does not
    // depend on the subset, so it is built once.
    const Gadget gadget = build_gadget(inst);
    std::optional<unsigned long long> flow_mask;
    std::optional<GadgetWitness> witness;
    for (unsigned long long mask = 0; mask < (1ull << n); ++mask) {
        std::vector<char> chosen(static_cast<std::size_t>(n), 0);
        for (int i = 0; i < n; ++i) {
            if (mask >> i & 1) chosen[static_cast<std::size_t>(i)] = 1;
        }
        auto wit = witness_for_chosen(gadget, inst, chosen);
        if (wit) {
            flow_mask = mask;
            witness = std::move(wit);
            break;
        }
    }

    if (sum_mask != flow_mask) {
        throw Error("internal error: subset enumeration and polytope validation disagree");
    }
    return {witness.has_value(), std::move(witness)};
}

}  // namespace dflow
