#include "dflow/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "dflow/alpha.hpp"
#include "dflow/degeneracy.hpp"
#include "dflow/error.hpp"
#include "dflow/generate.hpp"
#include "dflow/hardness.hpp"
#include "dflow/io.hpp"
#include "dflow/network.hpp"
#include "dflow/polytope.hpp"

namespace dflow {

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;

Network load_network(const std::string& path) { return network_from_json(load_json_file(path)); }

Json active_set_to_json(const Network& net, const ActiveSet& active) {
    Json doc;
    auto edge_names = [&](const std::vector<EdgeId>& ids) {
        Json arr = Json::array();
        for (const EdgeId e : ids) arr.push_back(net.edge(e).name);
        return arr;
    };
    auto vertex_names = [&](const std::vector<VertexId>& ids) {
        Json arr = Json::array();
        for (const VertexId v : ids) arr.push_back(net.vertex(v).name);
        return arr;
    };
    doc["edges_at_lower"] = edge_names(active.edges_at_lower);
    doc["edges_at_upper"] = edge_names(active.edges_at_upper);
    doc["vertices_at_lower"] = vertex_names(active.vertices_at_lower);
    doc["vertices_at_upper"] = vertex_names(active.vertices_at_upper);
    return doc;
}

Json diamond_to_json(const Network& net, const DiamondMinor& d) {
    Json doc;
    doc["v"] = net.vertex(d.v).name;
    doc["w"] = net.vertex(d.w).name;
    Json paths = Json::array();
    for (const auto& path : d.paths) {
        Json arr = Json::array();
        for (const EdgeId e : path) arr.push_back(net.edge(e).name);
        paths.push_back(std::move(arr));
    }
    doc["paths"] = std::move(paths);
    return doc;
}

Json witness_to_json(const DegeneracyWitness& w) {
    Json doc;
    doc["network"] = network_to_json(w.network);
    doc["alpha_tree"] = alpha_forest_to_json(w.network, w.alpha_tree);
    doc["flow"] = flow_to_json(w.network, w.flow);
    doc["direction"] = potential_to_json(w.network, w.direction);
    Json partition;
    for (VertexId v = 0; v < w.network.vertex_count(); ++v) {
        partition[w.network.vertex(v).name] = to_string(w.partition[v]);
    }
    doc["partition"] = std::move(partition);
    return doc;
}

Json counterexample_to_json(const DegeneracyCounterexample& ce) {
    Json doc;
    doc["network"] = network_to_json(ce.network);
    doc["alpha_tree"] = alpha_forest_to_json(ce.network, ce.alpha_tree);
    doc["flow"] = flow_to_json(ce.network, ce.flow);
    doc["direction"] = potential_to_json(ce.network, ce.direction);
    return doc;
}

Json gadget_to_json(const Gadget& gadget) {
    Json doc;
    doc["network"] = network_to_json(gadget.network);
    Json labels;
    labels["v"] = gadget.network.vertex(gadget.labels.v).name;
    labels["w"] = gadget.network.vertex(gadget.labels.w).name;
    labels["s"] = gadget.network.vertex(gadget.labels.s).name;
    labels["t"] = gadget.network.vertex(gadget.labels.t).name;
    Json items = Json::array();
    for (const VertexId v : gadget.labels.items) items.push_back(gadget.network.vertex(v).name);
    labels["items"] = std::move(items);
    doc["labels"] = std::move(labels);
    return doc;
}

/// Holds the streams, the shared --format flag and the verdict-driven exit
/// code while CLI11 callbacks execute.
struct Driver {
    std::ostream& out;
    bool compact = false;
    int rc = kOk;

    void emit(const Json& doc) { out << dump_json(doc, compact); }
};

void add_check_feasible(CLI::App& app, Driver& driver) {
    auto* cmd = app.add_subcommand("check-feasible", "Test whether a flow lies in the polytope");
    auto net_path = std::make_shared<std::string>();
    auto flow_path = std::make_shared<std::string>();
    cmd->add_option("network", *net_path, "network document")->required();
    cmd->add_option("flow", *flow_path, "flow document")->required();
    cmd->callback([&driver, net_path, flow_path] {
        const Network net = load_network(*net_path);
        const Flow f = flow_from_json(net, load_json_file(*flow_path));
        const FeasibilityReport report = is_feasible(net, f);
        Json doc;
        doc["feasible"] = report.feasible;
        if (report.violation) doc["violation"] = describe(*report.violation, net);
        driver.emit(doc);
        driver.rc = report.feasible ? kOk : kNegative;
    });
}

void add_check_extremal(CLI::App& app, Driver& driver) {
    auto* cmd = app.add_subcommand("check-extremal",
                                   "Decide whether a feasible flow is an extreme point");
    auto net_path = std::make_shared<std::string>();
    auto flow_path = std::make_shared<std::string>();
    cmd->add_option("network", *net_path, "network document")->required();
    cmd->add_option("flow", *flow_path, "flow document")->required();
    cmd->callback([&driver, net_path, flow_path] {
        const Network net = load_network(*net_path);
        const Flow f = flow_from_json(net, load_json_file(*flow_path));
        const ExtremalityCertificate cert = is_extremal(net, f);
        Json doc;
        doc["verdict"] = to_string(cert.verdict);
        doc["rank_active"] = cert.rank_active;
        doc["active"] = active_set_to_json(net, cert.active);
        if (cert.direction) doc["direction"] = potential_to_json(net, *cert.direction);
        if (cert.epsilon) doc["epsilon"] = cert.epsilon->str();
        driver.emit(doc);
        driver.rc = cert.verdict == Verdict::Extremal ? kOk : kNegative;
    });
}

void add_enumerate_vertices(CLI::App& app, Driver& driver) {
    auto* cmd =
        app.add_subcommand("enumerate-vertices", "List every extreme point of the polytope");
    auto net_path = std::make_shared<std::string>();
    auto cap = std::make_shared<int>(10);
    cmd->add_option("network", *net_path, "network document")->required();
    cmd->add_option("--cap", *cap, "largest vertex count accepted");
    cmd->callback([&driver, net_path, cap] {
        const Network net = load_network(*net_path);
        const std::vector<Flow> vertices = enumerate_vertices(net, *cap);
        Json list = Json::array();
        for (const Flow& f : vertices) list.push_back(flow_to_json(net, f));
        Json doc;
        doc["count"] = vertices.size();
        doc["vertices"] = std::move(list);
        driver.emit(doc);
    });
}

void add_alpha(CLI::App& app, Driver& driver) {
    auto* cmd = app.add_subcommand("alpha", "Alpha-forest validation and extraction");
    cmd->require_subcommand(1);

    auto* validate = cmd->add_subcommand("validate", "Check the alpha-forest conditions");
    auto v_net = std::make_shared<std::string>();
    auto v_forest = std::make_shared<std::string>();
    auto v_flow = std::make_shared<std::string>();
    validate->add_option("network", *v_net, "network document")->required();
    validate->add_option("forest", *v_forest, "alpha-forest document")->required();
    validate->add_option("--flow", *v_flow, "also test conformity with this flow");
    validate->callback([&driver, v_net, v_forest, v_flow] {
        const Network net = load_network(*v_net);
        const AlphaForest forest = alpha_forest_from_json(net, load_json_file(*v_forest));
        const ForestCheck check = validate_alpha_forest(net, forest);
        Json doc;
        doc["valid"] = check.valid;
        if (!check.valid) doc["reason"] = check.reason;
        bool good = check.valid;
        if (check.valid) {
            doc["maximal"] = is_alpha_tree(net, forest);
            if (!v_flow->empty()) {
                const Flow f = flow_from_json(net, load_json_file(*v_flow));
                const bool fits = conforms(net, f, forest);
                doc["conforms"] = fits;
                good = good && fits;
            }
        }
        driver.emit(doc);
        driver.rc = good ? kOk : kNegative;
    });

    auto* extract = cmd->add_subcommand(
        "extract", "Derive a conforming alpha tree from an extremal flow");
    auto e_net = std::make_shared<std::string>();
    auto e_flow = std::make_shared<std::string>();
    extract->add_option("network", *e_net, "network document")->required();
    extract->add_option("flow", *e_flow, "flow document (must be extremal)")->required();
    extract->callback([&driver, e_net, e_flow] {
        const Network net = load_network(*e_net);
        const Flow f = flow_from_json(net, load_json_file(*e_flow));
        driver.emit(alpha_forest_to_json(net, extract_alpha_tree(net, f)));
    });
}

void add_cactus(CLI::App& app, Driver& driver) {
    auto* cmd = app.add_subcommand("cactus", "Cactus recognition");
    cmd->require_subcommand(1);
    auto* check = cmd->add_subcommand("check", "Decide whether the graph is a cactus");
    auto net_path = std::make_shared<std::string>();
    check->add_option("network", *net_path, "network document")->required();
    check->callback([&driver, net_path] {
        const Network net = load_network(*net_path);
        const CactusReport report = is_cactus(net);
        Json doc;
        doc["is_cactus"] = report.is_cactus;
        if (report.violating_edge) {
            doc["violating_edge"] = net.edge(*report.violating_edge).name;
        }
        if (!report.is_cactus) {
            if (const auto minor = find_diamond_minor(net)) {
                doc["diamond"] = diamond_to_json(net, *minor);
            }
        }
        driver.emit(doc);
        driver.rc = report.is_cactus ? kOk : kNegative;
    });
}

void add_degeneracy(CLI::App& app, Driver& driver) {
    auto* cmd = app.add_subcommand("degeneracy", "Degeneracy witnesses and exhaustive search");
    cmd->require_subcommand(1);

    auto* witness = cmd->add_subcommand(
        "witness", "Construct bounds that make the graph carry a conforming non-extremal flow");
    auto w_net = std::make_shared<std::string>();
    witness->add_option("network", *w_net, "network document")->required();
    witness->callback([&driver, w_net] {
        const Network net = load_network(*w_net);
        const auto result = build_degeneracy_witness(net);
        Json doc;
        doc["found"] = result.has_value();
        if (result) {
            doc["witness"] = witness_to_json(*result);
        } else {
            doc["reason"] = "the graph is a cactus; no bounds admit a conforming "
                            "non-extremal flow";
        }
        driver.emit(doc);
        driver.rc = result ? kOk : kNegative;
    });

    auto* test = cmd->add_subcommand(
        "test", "Exhaustively search a small network for a conforming non-extremal flow");
    auto t_net = std::make_shared<std::string>();
    auto mode = std::make_shared<std::string>("auto");
    auto budget = std::make_shared<long long>(NondegeneracyOptions{}.work_cap);
    auto cap = std::make_shared<int>(NondegeneracyOptions{}.max_vertices);
    test->add_option("network", *t_net, "network document")->required();
    test->add_option("--mode", *mode, "free | fixed | auto (fixed when any bound is finite)")
        ->check(CLI::IsMember({"free", "fixed", "auto"}));
    test->add_option("--budget", *budget, "work cap for the search");
    test->add_option("--cap", *cap, "largest vertex count accepted");
    test->callback([&driver, t_net, mode, budget, cap] {
        const Network net = load_network(*t_net);
        DegeneracyMode m = DegeneracyMode::FreeBounds;
        if (*mode == "fixed") {
            m = DegeneracyMode::FixedBounds;
        } else if (*mode == "auto") {
            const bool any_finite =
                std::any_of(net.edges().begin(), net.edges().end(),
                            [](const Edge& e) { return e.f.has_finite_side(); }) ||
                std::any_of(net.vertices().begin(), net.vertices().end(),
                            [](const Vertex& v) { return v.p.has_finite_side(); });
            if (any_finite) m = DegeneracyMode::FixedBounds;
        }
        NondegeneracyOptions options;
        options.work_cap = *budget;
        options.max_vertices = *cap;
        const NondegeneracyReport report = test_nondegeneracy(net, m, options);
        Json doc;
        doc["mode"] = m == DegeneracyMode::FixedBounds ? "fixed" : "free";
        doc["result"] = to_string(report.result);
        if (report.counterexample) {
            doc["counterexample"] = counterexample_to_json(*report.counterexample);
        }
        driver.emit(doc);
        driver.rc =
            report.result == NondegeneracyResult::CertifiedDegenerate ? kOk : kNegative;
    });
}

void add_suffcond(CLI::App& app, Driver& driver) {
    auto* cmd = app.add_subcommand("suffcond", "Sufficient conditions for extremality");
    cmd->require_subcommand(1);
    auto* check = cmd->add_subcommand(
        "check", "Run both sufficient conditions on a conforming alpha tree");
    auto net_path = std::make_shared<std::string>();
    auto flow_path = std::make_shared<std::string>();
    auto forest_path = std::make_shared<std::string>();
    check->add_option("network", *net_path, "network document")->required();
    check->add_option("flow", *flow_path, "flow document")->required();
    check->add_option("forest", *forest_path, "alpha-tree document conforming with the flow")
        ->required();
    check->callback([&driver, net_path, flow_path, forest_path] {
        const Network net = load_network(*net_path);
        const Flow f = flow_from_json(net, load_json_file(*flow_path));
        const AlphaForest forest = alpha_forest_from_json(net, load_json_file(*forest_path));
        const Sufficiency per_component = check_suff_one_active_per_component(net, f, forest);
        const Sufficiency small_degree = check_suff_small_degree(net, f, forest);
        const bool certified =
            per_component == Sufficiency::Certified || small_degree == Sufficiency::Certified;
        Json doc;
        doc["one_active_per_component"] = to_string(per_component);
        doc["small_degree"] = to_string(small_degree);
        doc["certified"] = certified;
        driver.emit(doc);
        driver.rc = certified ? kOk : kNegative;
    });
}

void add_gadget(CLI::App& app, Driver& driver) {
    auto* cmd = app.add_subcommand("gadget", "Subset-sum reduction gadget");
    cmd->require_subcommand(1);

    auto sizes = std::make_shared<std::vector<long long>>();
    auto target = std::make_shared<long long>(0);
    auto add_instance_options = [&](CLI::App* sub) {
        sub->add_option("--sizes", *sizes, "comma-separated item sizes")
            ->required()
            ->delimiter(',');
        sub->add_option("--target", *target, "target sum")->required();
    };

    auto* build = cmd->add_subcommand("build", "Emit the gadget network for an instance");
    add_instance_options(build);
    build->callback([&driver, sizes, target] {
        driver.emit(gadget_to_json(build_gadget({*sizes, *target})));
    });

    auto* decide = cmd->add_subcommand(
        "decide", "Decide the instance through the gadget's polytope");
    add_instance_options(decide);
    auto cap = std::make_shared<int>(8);
    decide->add_option("--cap", *cap, "largest item count accepted");
    decide->callback([&driver, sizes, target, cap] {
        const SubsetSumInstance inst{*sizes, *target};
        const GadgetDecision decision = gadget_degenerate(inst, *cap);
        Json doc;
        doc["degenerate"] = decision.degenerate;
        if (decision.witness) {
            const Gadget gadget = build_gadget(inst);
            Json wit;
            Json subset = Json::array();
            for (const int i : decision.witness->subset) subset.push_back(inst.sizes[i]);
            wit["subset_indices"] = decision.witness->subset;
            wit["subset_sizes"] = std::move(subset);
            wit["phi"] = potential_to_json(gadget.network, decision.witness->phi);
            wit["flow"] = flow_to_json(gadget.network, decision.witness->flow);
            wit["alpha_tree"] = alpha_forest_to_json(gadget.network, decision.witness->forest);
            doc["witness"] = std::move(wit);
        }
        driver.emit(doc);
        driver.rc = decision.degenerate ? kOk : kNegative;
    });
}

void add_generate(CLI::App& app, Driver& driver) {
    auto* cmd = app.add_subcommand("generate", "Emit a reproducible random network");
    auto config = std::make_shared<GeneratorConfig>();
    cmd->add_option("--seed", config->seed, "generator seed");
    cmd->add_option("--min-vertices", config->min_vertices, "smallest vertex count");
    cmd->add_option("--max-vertices", config->max_vertices, "largest vertex count");
    cmd->add_option("--topology", config->topology, "graph shape")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Topology>{{"tree", Topology::Tree},
                                            {"cycle", Topology::Cycle},
                                            {"cactus", Topology::Cactus},
                                            {"random", Topology::Random},
                                            {"non-cactus", Topology::NonCactus}}));
    cmd->add_option("--bounds", config->bounds, "bound style")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, BoundStyle>{{"free", BoundStyle::Free},
                                              {"symmetric", BoundStyle::Symmetric},
                                              {"random-finite", BoundStyle::RandomFinite}}));
    cmd->add_option("--magnitude", config->magnitude, "cap on numerators and denominators");
    cmd->callback([&driver, config] { driver.emit(network_to_json(generate(*config))); });
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact-rational toolkit for differential flow polytopes"};
    app.name("dflow");
    app.require_subcommand(1);
    app.fallthrough();

    Driver driver{out};
    app.add_flag("--compact", driver.compact, "single-line JSON output");
    add_check_feasible(app, driver);
    add_check_extremal(app, driver);
    add_enumerate_vertices(app, driver);
    add_alpha(app, driver);
    add_cactus(app, driver);
    add_degeneracy(app, driver);
    add_suffcond(app, driver);
    add_gadget(app, driver);
    add_generate(app, driver);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        // Covers --help (exit 0) as well as genuine argument errors.
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return driver.rc;
}

}  // namespace dflow
