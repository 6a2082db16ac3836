#include "dflow/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "dflow/error.hpp"

namespace dflow {

namespace {

const Json& require_object(const Json& j, const std::string& where) {
    if (!j.is_object()) {
        throw ParseError(where + ": expected an object");
    }
    return j;
}

const Json& require_array(const Json& j, const std::string& where) {
    if (!j.is_array()) {
        throw ParseError(where + ": expected an array");
    }
    return j;
}

std::string require_string(const Json& j, const std::string& where) {
    if (!j.is_string()) {
        throw ParseError(where + ": expected a string");
    }
    return j.get<std::string>();
}

Rational parse_rational_field(const Json& j, const std::string& where) {
    try {
        return Rational::parse(require_string(j, where));
    } catch (const ParseError& e) {
        throw ParseError(where + ": " + e.what());
    }
}

Bound parse_bound_field(const Json& j, const std::string& where) {
    try {
        return Bound::parse(require_string(j, where));
    } catch (const ParseError& e) {
        throw ParseError(where + ": " + e.what());
    }
}

// Rejects keys other than the listed ones — the formats have no extensions.
void reject_unknown_keys(const Json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ParseError(where + ": unknown field '" + item.key() + "'");
        }
    }
}

const Json& require_field(const Json& obj, const char* key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(where + ": missing field '" + key + "'");
    }
    return *it;
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot read file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_json_text(buffer.str(), path);
}

std::string dump_json(const Json& j, bool compact) {
    return (compact ? j.dump() : j.dump(2)) + "\n";
}

Json network_to_json(const Network& net) {
    Json vertices = Json::array();
    for (const auto& v : net.vertices()) {
        Json obj;
        obj["id"] = v.name;
        obj["p_lo"] = v.p.lo.str();
        obj["p_hi"] = v.p.hi.str();
        vertices.push_back(std::move(obj));
    }
    Json edges = Json::array();
    for (const auto& e : net.edges()) {
        Json obj;
        obj["id"] = e.name;
        obj["tail"] = net.vertex(e.tail).name;
        obj["head"] = net.vertex(e.head).name;
        obj["b"] = e.b.str();
        obj["f_lo"] = e.f.lo.str();
        obj["f_hi"] = e.f.hi.str();
        edges.push_back(std::move(obj));
    }
    Json doc;
    doc["vertices"] = std::move(vertices);
    doc["edges"] = std::move(edges);
    return doc;
}

Network network_from_json(const Json& j) {
    require_object(j, "network");
    reject_unknown_keys(j, {"vertices", "edges"}, "network");

    std::vector<Vertex> vertices;
    std::map<std::string, VertexId> ids;
    const Json& vs = require_array(require_field(j, "vertices", "network"), "network.vertices");
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const std::string where = "network.vertices[" + std::to_string(i) + "]";
        const Json& obj = require_object(vs[i], where);
        reject_unknown_keys(obj, {"id", "p_lo", "p_hi"}, where);
        Vertex v;
        v.name = require_string(require_field(obj, "id", where), where + ".id");
        v.p.lo = parse_bound_field(require_field(obj, "p_lo", where), where + ".p_lo");
        v.p.hi = parse_bound_field(require_field(obj, "p_hi", where), where + ".p_hi");
        ids.emplace(v.name, static_cast<VertexId>(vertices.size()));
        vertices.push_back(std::move(v));
    }

    std::vector<Edge> edges;
    const Json& es = require_array(require_field(j, "edges", "network"), "network.edges");
    for (std::size_t i = 0; i < es.size(); ++i) {
        const std::string where = "network.edges[" + std::to_string(i) + "]";
        const Json& obj = require_object(es[i], where);
        reject_unknown_keys(obj, {"id", "tail", "head", "b", "f_lo", "f_hi"}, where);
        Edge e;
        e.name = require_string(require_field(obj, "id", where), where + ".id");
        const std::string tail = require_string(require_field(obj, "tail", where), where + ".tail");
        const std::string head = require_string(require_field(obj, "head", where), where + ".head");
        const auto tail_it = ids.find(tail);
        if (tail_it == ids.end()) {
            throw ParseError(where + ".tail: unknown vertex '" + tail + "'");
        }
        const auto head_it = ids.find(head);
        if (head_it == ids.end()) {
            throw ParseError(where + ".head: unknown vertex '" + head + "'");
        }
        e.tail = tail_it->second;
        e.head = head_it->second;
        e.b = parse_rational_field(require_field(obj, "b", where), where + ".b");
        e.f.lo = parse_bound_field(require_field(obj, "f_lo", where), where + ".f_lo");
        e.f.hi = parse_bound_field(require_field(obj, "f_hi", where), where + ".f_hi");
        edges.push_back(std::move(e));
    }

    return Network::create(std::move(vertices), std::move(edges));
}

namespace {

// Shared shape of flow and potential documents: a flat object with exactly
// one rational per name.
std::vector<Rational> values_from_json(const Json& j, const std::vector<std::string>& names,
                                       const std::string& what) {
    require_object(j, what);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], i);

    std::vector<Rational> out(names.size());
    std::vector<bool> seen(names.size(), false);
    for (const auto& item : j.items()) {
        const auto it = index.find(item.key());
        if (it == index.end()) {
            throw ParseError(what + ": unknown id '" + item.key() + "'");
        }
        seen[it->second] = true;
        out[it->second] = parse_rational_field(item.value(), what + "." + item.key());
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!seen[i]) {
            throw ParseError(what + ": missing entry for '" + names[i] + "'");
        }
    }
    return out;
}

}  // namespace

Json flow_to_json(const Network& net, const Flow& f) {
    if (static_cast<int>(f.size()) != net.edge_count()) {
        throw ValidationError("flow vector does not match the network's edge count");
    }
    Json doc;
    for (EdgeId e = 0; e < net.edge_count(); ++e) doc[net.edge(e).name] = f[e].str();
    return doc;
}

Flow flow_from_json(const Network& net, const Json& j) {
    std::vector<std::string> names;
    for (const auto& e : net.edges()) names.push_back(e.name);
    return values_from_json(j, names, "flow");
}

Json potential_to_json(const Network& net, const Potential& phi) {
    if (static_cast<int>(phi.size()) != net.vertex_count()) {
        throw ValidationError("potential vector does not match the network's vertex count");
    }
    Json doc;
    for (VertexId v = 0; v < net.vertex_count(); ++v) doc[net.vertex(v).name] = phi[v].str();
    return doc;
}

Potential potential_from_json(const Network& net, const Json& j) {
    std::vector<std::string> names;
    for (const auto& v : net.vertices()) names.push_back(v.name);
    return values_from_json(j, names, "potential");
}

namespace {

VertexId resolve_vertex(const Network& net, const std::string& name, const std::string& where) {
    const auto id = net.vertex_id(name);
    if (!id) throw ParseError(where + ": unknown vertex '" + name + "'");
    return *id;
}

EdgeId resolve_edge(const Network& net, const std::string& name, const std::string& where) {
    const auto id = net.edge_id(name);
    if (!id) throw ParseError(where + ": unknown edge '" + name + "'");
    return *id;
}

}  // namespace

Json alpha_forest_to_json(const Network& net, const AlphaForest& forest) {
    Json doc;
    Json edges = Json::array();
    for (const EdgeId e : forest.active_edges) edges.push_back(net.edge(e).name);
    doc["active_edges"] = std::move(edges);
    Json vertices = Json::array();
    for (const VertexId v : forest.active_vertices) vertices.push_back(net.vertex(v).name);
    doc["active_vertices"] = std::move(vertices);
    if (forest.orientation) {
        Json alpha;
        for (const auto& [v, e] : *forest.orientation) {
            alpha[net.vertex(v).name] = net.edge(e).name;
        }
        doc["orientation"] = std::move(alpha);
    } else {
        doc["orientation"] = nullptr;
    }
    return doc;
}

AlphaForest alpha_forest_from_json(const Network& net, const Json& j) {
    require_object(j, "alpha forest");
    reject_unknown_keys(j, {"active_edges", "active_vertices", "orientation"}, "alpha forest");

    AlphaForest forest;
    const Json& es =
        require_array(require_field(j, "active_edges", "alpha forest"), "alpha forest.active_edges");
    for (std::size_t i = 0; i < es.size(); ++i) {
        const std::string where = "alpha forest.active_edges[" + std::to_string(i) + "]";
        forest.active_edges.push_back(resolve_edge(net, require_string(es[i], where), where));
    }
    const Json& vs = require_array(require_field(j, "active_vertices", "alpha forest"),
                                   "alpha forest.active_vertices");
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const std::string where = "alpha forest.active_vertices[" + std::to_string(i) + "]";
        forest.active_vertices.push_back(resolve_vertex(net, require_string(vs[i], where), where));
    }

    const auto it = j.find("orientation");
    if (it != j.end() && !it->is_null()) {
        const Json& obj = require_object(*it, "alpha forest.orientation");
        Orientation alpha;
        for (const auto& item : obj.items()) {
            const std::string where = "alpha forest.orientation." + item.key();
            const VertexId v = resolve_vertex(net, item.key(), where);
            if (!alpha.emplace(v, resolve_edge(net, require_string(item.value(), where), where))
                     .second) {
                throw ParseError(where + ": duplicate vertex");
            }
        }
        forest.orientation = std::move(alpha);
    }
    return forest;
}

}  // namespace dflow
