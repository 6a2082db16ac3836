#include "dflow/network.hpp"

#include <map>
#include <set>
#include <utility>

#include "dflow/error.hpp"

namespace dflow {

Network Network::create(std::vector<Vertex> vertices, std::vector<Edge> edges) {
    if (vertices.empty()) {
        throw ValidationError("network must have at least one vertex");
    }
    const int n = static_cast<int>(vertices.size());

    std::set<std::string> vertex_names;
    for (const auto& v : vertices) {
        if (v.name.empty()) {
            throw ValidationError("vertex with empty name");
        }
        if (!vertex_names.insert(v.name).second) {
            throw ValidationError("duplicate vertex name '" + v.name + "'");
        }
        if (!v.p.valid()) {
            throw ValidationError("vertex '" + v.name + "' has invalid imbalance bounds " +
                                  v.p.str());
        }
    }

    std::set<std::string> edge_names;
    std::set<std::pair<VertexId, VertexId>> unordered_pairs;
    for (const auto& e : edges) {
        if (e.name.empty()) {
            throw ValidationError("edge with empty name");
        }
        if (!edge_names.insert(e.name).second) {
            throw ValidationError("duplicate edge name '" + e.name + "'");
        }
        if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n) {
            throw ValidationError("edge '" + e.name + "' references an unknown vertex");
        }
        if (e.tail == e.head) {
            throw ValidationError("edge '" + e.name + "' is a self-loop");
        }
        const auto pair = std::minmax(e.tail, e.head);
        if (!unordered_pairs.insert({pair.first, pair.second}).second) {
            throw ValidationError("edge '" + e.name +
                                  "' duplicates a vertex pair (parallel or anti-parallel "
                                  "edges are not supported)");
        }
        if (e.b.sign() <= 0) {
            throw ValidationError("edge '" + e.name + "' has non-positive elasticity " +
                                  e.b.str());
        }
        if (!e.f.valid()) {
            throw ValidationError("edge '" + e.name + "' has invalid flow bounds " + e.f.str());
        }
    }

    Network net;
    net.vertices_ = std::move(vertices);
    net.edges_ = std::move(edges);
    net.incident_.assign(n, {});
    for (EdgeId e = 0; e < net.edge_count(); ++e) {
        net.incident_[net.edges_[e].tail].push_back(e);
        net.incident_[net.edges_[e].head].push_back(e);
    }

    // Weak connectivity by traversal from vertex 0.
    std::vector<bool> seen(n, false);
    std::vector<VertexId> stack = {0};
    seen[0] = true;
    int reached = 1;
    while (!stack.empty()) {
        const VertexId v = stack.back();
        stack.pop_back();
        for (EdgeId e : net.incident_[v]) {
            const VertexId u = net.other_end(e, v);
            if (!seen[u]) {
                seen[u] = true;
                ++reached;
                stack.push_back(u);
            }
        }
    }
    if (reached != n) {
        throw ValidationError("network is not weakly connected");
    }
    return net;
}

std::optional<VertexId> Network::vertex_id(const std::string& name) const {
    for (VertexId v = 0; v < vertex_count(); ++v) {
        if (vertices_[v].name == name) return v;
    }
    return std::nullopt;
}

std::optional<EdgeId> Network::edge_id(const std::string& name) const {
    for (EdgeId e = 0; e < edge_count(); ++e) {
        if (edges_[e].name == name) return e;
    }
    return std::nullopt;
}

Matrix Network::incidence_matrix() const {
    Matrix a(vertex_count(), edge_count());
    for (EdgeId e = 0; e < edge_count(); ++e) {
        a.at(edges_[e].head, e) = Rational(1);
        a.at(edges_[e].tail, e) = Rational(-1);
    }
    return a;
}

Matrix Network::elasticity_matrix() const {
    Matrix b(vertex_count(), edge_count());
    for (EdgeId e = 0; e < edge_count(); ++e) {
        b.at(edges_[e].head, e) = edges_[e].b;
        b.at(edges_[e].tail, e) = -edges_[e].b;
    }
    return b;
}

Matrix Network::admittance_matrix() const {
    return incidence_matrix() * elasticity_matrix().transpose();
}

std::vector<Rational> Network::edge_row(EdgeId e) const {
    std::vector<Rational> row(vertex_count());
    row[edges_[e].head] += edges_[e].b;
    row[edges_[e].tail] -= edges_[e].b;
    return row;
}

std::vector<Rational> Network::vertex_row(VertexId v) const {
    std::vector<Rational> row(vertex_count());
    for (EdgeId e : incident_[v]) {
        row[other_end(e, v)] += edges_[e].b;
        row[v] -= edges_[e].b;
    }
    return row;
}

std::vector<Rational> imbalance(const Network& net, const Flow& f) {
    if (static_cast<int>(f.size()) != net.edge_count()) {
        throw ValidationError("flow vector does not match the network's edge count");
    }
    std::vector<Rational> out(net.vertex_count());
    for (EdgeId e = 0; e < net.edge_count(); ++e) {
        out[net.edge(e).tail] += f[e];
        out[net.edge(e).head] -= f[e];
    }
    return out;
}

}  // namespace dflow
