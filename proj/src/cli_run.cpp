#include "baleq/cli.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "baleq/bilinear.hpp"
#include "baleq/classify.hpp"
#include "baleq/decompose.hpp"
#include "baleq/groups.hpp"
#include "baleq/io.hpp"
#include "baleq/label.hpp"
#include "baleq/oracle.hpp"

namespace baleq {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kDecided = 0;
constexpr int kInputError = 1;
constexpr int kUnknown = 2;

std::string fnv_digest(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOError(path + ":1:1: cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::uint64_t> parse_vector(const std::string& s) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoull(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw IOError("bad vector entry '" + tok + "' in '" + s + "'");
        }
    }
    if (out.empty()) throw IOError("empty vector '" + s + "'");
    return out;
}

struct Pin {
    int v;
    std::uint64_t a, b;
};

Pin parse_pin(const std::string& s) {
    auto eq = s.find('=');
    auto comma = s.find(',', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || comma == std::string::npos)
        throw IOError("bad --pin '" + s + "', expected v=a,b");
    try {
        return {std::stoi(s.substr(0, eq)), std::stoull(s.substr(eq + 1, comma - eq - 1)),
                std::stoull(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw IOError("bad --pin '" + s + "', expected v=a,b");
    }
}

ordered_json cycle_json(const Cycle& c) { return ordered_json(c.vertices); }

ordered_json edge_json(const Edge& e) { return ordered_json::array({e.first, e.second}); }

ordered_json proximity_json(const ProximityReport& pr) {
    ordered_json j;
    j["cycle"] = cycle_json(pr.cycle);
    j["low_degree_pair"] = ordered_json::array({pr.low_degree_pair.first, pr.low_degree_pair.second});
    j["attachments"] = ordered_json::object();
    for (const auto& [v, w] : pr.attachments) j["attachments"][std::to_string(v)] = w;
    return j;
}

ordered_json labeling_json(const Labeling& lab) {
    ordered_json j = ordered_json::object();
    for (const auto& [v, ab] : lab.pairs)
        j[std::to_string(v)] = ordered_json::array({ab.first.value(), ab.second.value()});
    return j;
}

ordered_json presentation_json(const Class2Presentation& pres) {
    ordered_json j;
    j["p"] = pres.p;
    j["r"] = pres.r;
    GraphFile gf;
    gf.graph = pres.graph;
    j["graph"] = ordered_json::parse(write_graph_json(gf));
    j["orders"] = ordered_json::object();
    j["orders"]["generators"] =
        std::vector<std::uint64_t>(pres.gen_orders.begin() + 1, pres.gen_orders.end());
    j["orders"]["central"] = pres.basis_orders;
    return j;
}

struct Report {
    ordered_json outcome;
    int exit_code = kDecided;
};

Report run_classify(const GraphFile& gf, std::size_t budget) {
    const Graph& g = gf.graph;
    ordered_json o;
    o["connected"] = g.is_connected();
    auto bl = is_borderless(g, budget);
    o["borderless"] = bl.borderless;
    bool net = g.is_connected() && is_net(g, budget);
    o["net"] = net;
    if (net) o["eta"] = eta(g, budget);
    o["bad_cycles"] = ordered_json::array();
    for (const auto& bc : find_bad_cycles(g, budget)) {
        ordered_json jb;
        jb["cycle"] = cycle_json(bc.cycle);
        jb["low_degree_pair"] =
            ordered_json::array({bc.low_degree_pair.first, bc.low_degree_pair.second});
        o["bad_cycles"].push_back(jb);
    }
    if (g.is_connected()) {
        auto a = anchors(g, budget);
        o["anchors"] = ordered_json::object();
        o["anchors"]["canonical"] = a.vertices;
        if (net && !a.vertices.empty()) {
            auto sf = sign_function(g, a, a.vertices.front(), budget);
            o["sign_function"] = ordered_json::object();
            o["sign_function"]["sigma"] =
                std::vector<int>(sf.sigma.begin() + 1, sf.sigma.end());
        }
    }
    if (gf.weighted()) {
        o["unfavorable_proximities"] = ordered_json::array();
        for (const auto& pr : find_unfavorable_proximities(gf.weighted_graph(), budget))
            o["unfavorable_proximities"].push_back(proximity_json(pr));
    }
    return {o, kDecided};
}

Report run_decompose(const GraphFile& gf, const std::string& mode, std::size_t budget) {
    const Graph& g = gf.graph;
    ordered_json o;
    bool try_borderless = mode == "borderless" || (mode == "auto" && is_borderless(g, budget).borderless);
    if (try_borderless) {
        auto dec = decompose_borderless(g, budget);
        o["kind"] = "borderless";
        o["steps"] = ordered_json::array();
        for (const auto& st : dec.steps) {
            ordered_json js;
            js["piece"] = st.is_cycle ? "cycle" : "tree";
            js["vertices"] = st.vertices;
            js["edges"] = ordered_json::array();
            for (const auto& e : st.edges) js["edges"].push_back(edge_json(e));
            if (st.glue_host != 0) js["glue_host"] = st.glue_host;
            o["steps"].push_back(js);
        }
        o["verified"] = verify_borderless(g, dec);
        return {o, kDecided};
    }
    bool try_net = mode == "net" || (mode == "auto" && g.is_connected() && is_net(g, budget));
    if (try_net) {
        auto dec = decompose_net(g, std::nullopt, budget);
        o["kind"] = "net";
        o["base_cycle"] = cycle_json(dec.base);
        o["steps"] = ordered_json::array();
        for (const auto& st : dec.steps) {
            ordered_json js;
            js["segment"] = st.segment.vertices;
            js["attach"] = ordered_json::array({st.attach.first, st.attach.second});
            o["steps"].push_back(js);
        }
        o["verified"] = verify_net(g, dec);
        return {o, kDecided};
    }
    o["kind"] = "none";
    o["decomposable"] = false;
    return {o, kDecided};
}

Report run_label(const GraphFile& gf, const std::optional<Pin>& pin, bool oracle_fallback,
                 std::uint64_t budget) {
    WeightedGraph wg = gf.weighted_graph();
    ordered_json o;

    if (pin) {
        const Graph& g = wg.base();
        const RingSpec& R = wg.ring();
        RingElem a(R, pin->a), b(R, pin->b);
        auto answer = [&](const Labeling& lab) -> Report {
            o["outcome"] = "Labeled";
            o["labeling"] = labeling_json(lab);
            o["verified"] = verify_labeling(wg, lab);
            return {o, kDecided};
        };
        bool is_tree = g.is_connected() && g.edge_count() + 1 == static_cast<std::size_t>(g.n());
        bool is_cycle_graph = g.is_connected() && g.edge_count() == static_cast<std::size_t>(g.n());
        if (is_cycle_graph)
            for (int v = 1; v <= g.n(); ++v) is_cycle_graph = is_cycle_graph && g.degree(v) == 2;
        try {
            if (is_tree) {
                std::map<int, RingElem> xs;
                for (int v = 1; v <= g.n(); ++v) xs.emplace(v, a);
                return answer(label_tree(wg, xs, std::make_pair(pin->v, b)));
            }
            if (is_cycle_graph && g.n() > 3 && R.has_big_residue_field()) {
                for (int r = 1; r <= g.n(); ++r) {
                    if (r == pin->v) continue;
                    try {
                        return answer(label_cycle(wg, pin->v, r, a, b, RingElem(R, 1)));
                    } catch (const GraphError&) {
                    } catch (const RingError&) {
                    }
                }
                o["outcome"] = "Unknown";
                o["reason"] = "no pinned cycle enumeration succeeded";
                return {o, kUnknown};
            }
            auto anc = anchors(g);
            if (is_net(g)) {
                auto sf = sign_function(g, anc, pin->v);
                return answer(label_net(wg, anc, sf, pin->v, a, b));
            }
            if (is_borderless(g).borderless && find_bad_cycles(g).empty())
                return answer(label_borderless(wg, anc, pin->v, a, b));
        } catch (const GraphError& e) {
            o["outcome"] = "Unknown";
            o["reason"] = e.what();
            return {o, kUnknown};
        } catch (const RingError& e) {
            o["outcome"] = "Unknown";
            o["reason"] = e.what();
            return {o, kUnknown};
        }
        o["outcome"] = "Unknown";
        o["reason"] = "--pin is supported for trees, cycles, borderless graphs and nets only";
        return {o, kUnknown};
    }

    auto out = label_general(wg, oracle_fallback ? budget : 0);
    switch (out.kind) {
        case LabelOutcome::Kind::Labeled:
            o["outcome"] = "Labeled";
            o["labeling"] = labeling_json(*out.labeling);
            o["verified"] = verify_labeling(wg, *out.labeling);
            return {o, kDecided};
        case LabelOutcome::Kind::NoSolution:
            o["outcome"] = "NoSolution";
            if (out.certificate) o["certificate"] = proximity_json(*out.certificate);
            o["oracle_verified"] = out.oracle_verified;
            return {o, kDecided};
        default:
            o["outcome"] = "Unknown";
            o["reason"] = out.reason;
            return {o, kUnknown};
    }
}

Report run_oracle(const GraphFile& gf, bool count, std::uint64_t budget) {
    WeightedGraph wg = gf.weighted_graph();
    ordered_json o;
    if (count) {
        auto r = oracle_count(wg, {budget});
        if (r.exceeded) {
            o["outcome"] = "BudgetExceeded";
            o["nodes"] = r.nodes;
            return {o, kUnknown};
        }
        o["outcome"] = "Counted";
        o["count"] = r.count;
        o["nodes"] = r.nodes;
        return {o, kDecided};
    }
    auto r = oracle_solve(wg, {budget});
    switch (r.status) {
        case OracleStatus::Labeled:
            o["outcome"] = "Labeled";
            o["labeling"] = labeling_json(*r.labeling);
            o["verified"] = verify_labeling(wg, *r.labeling);
            break;
        case OracleStatus::Unsolvable:
            o["outcome"] = "NoSolution";
            o["oracle_verified"] = true;
            break;
        default:
            o["outcome"] = "BudgetExceeded";
            o["nodes"] = r.nodes;
            return {o, kUnknown};
    }
    o["nodes"] = r.nodes;
    return {o, kDecided};
}

Report run_group_build(const GraphFile& gf, std::uint64_t p, unsigned r) {
    auto pres = group_from_graph(gf.graph, p, r);
    auto sizes = group_sizes(pres);
    ordered_json o = presentation_json(pres);
    o["sizes"] = ordered_json::object();
    o["sizes"]["order_exp"] = sizes.order_exp;
    o["sizes"]["derived_exp"] = sizes.derived_exp;
    o["sizes"]["quotient_exp"] = sizes.quotient_exp;
    o["sizes"]["exponent"] = sizes.exponent;
    return {o, kDecided};
}

Report run_group_kcheck(const GraphFile& gf, std::uint64_t p, unsigned r, std::uint64_t budget) {
    auto pres = group_from_graph(gf.graph, p, r);
    auto img = commutator_image(pres, budget);
    ordered_json o;
    if (img.exceeded) {
        o["outcome"] = "BudgetExceeded";
        return {o, kUnknown};
    }
    o["kg_equals_derived"] = img.full;
    o["image_size"] = img.image.size();
    o["derived_size"] = img.box_size;
    if (img.missing) o["missing"] = *img.missing;
    return {o, kDecided};
}

Report run_group_decide(const GraphFile& gf, std::uint64_t p, unsigned r,
                        const std::vector<std::uint64_t>& target, std::uint64_t budget) {
    auto pres = group_from_graph(gf.graph, p, r);
    if (target.size() != pres.basis_orders.size())
        throw IOError("--target must have one coordinate per edge (sorted edge order)");
    GroupElement t = identity(pres);
    for (std::size_t b = 0; b < target.size(); ++b)
        t.central[b] = target[b] % pres.basis_orders[b];
    auto dec = decide_commutator(pres, t, budget);
    ordered_json o;
    switch (dec.kind) {
        case CommutatorDecision::Kind::Witness: {
            o["outcome"] = "Witness";
            ordered_json w;
            w["x"] = ordered_json::object();
            w["y"] = ordered_json::object();
            w["x"]["gen"] = std::vector<std::uint64_t>(dec.witness->first.gen.begin() + 1,
                                                       dec.witness->first.gen.end());
            w["x"]["central"] = dec.witness->first.central;
            w["y"]["gen"] = std::vector<std::uint64_t>(dec.witness->second.gen.begin() + 1,
                                                       dec.witness->second.gen.end());
            w["y"]["central"] = dec.witness->second.central;
            o["witness"] = w;
            o["verified"] = commutator(pres, dec.witness->first, dec.witness->second) == t;
            return {o, kDecided};
        }
        case CommutatorDecision::Kind::NotACommutator:
            o["outcome"] = "NotACommutator";
            if (dec.certificate) o["certificate"] = proximity_json(*dec.certificate);
            o["oracle_verified"] = dec.oracle_verified;
            return {o, kDecided};
        default:
            o["outcome"] = "Unknown";
            o["reason"] = dec.reason;
            return {o, kUnknown};
    }
}

Report run_bilinear_decide(const AlternatingMap& map, const std::vector<std::uint64_t>& target,
                           std::uint64_t budget) {
    if (target.size() != map.m) throw IOError("--target must have m coordinates");
    auto dec = image_membership(map, target, budget);
    ordered_json o;
    switch (dec.kind) {
        case ImageDecision::Kind::Witness:
            o["outcome"] = "Witness";
            o["u"] = dec.witness->first;
            o["v"] = dec.witness->second;
            o["verified"] = evaluate(map, dec.witness->first, dec.witness->second) == target;
            return {o, kDecided};
        case ImageDecision::Kind::NotInImage:
            o["outcome"] = "NotInImage";
            o["oracle_verified"] = dec.oracle_verified;
            return {o, kDecided};
        default:
            o["outcome"] = "Unknown";
            o["reason"] = dec.reason;
            return {o, kUnknown};
    }
}

Report run_bilinear_full(const AlternatingMap& map, std::uint64_t budget) {
    auto out = full_image_check(map, budget);
    ordered_json o;
    o["full"] = out.full;
    if (out.missing) o["missing"] = *out.missing;
    return {o, kDecided};
}

Report run_fixtures(const std::string& dir) {
    auto names = write_fixtures(dir);
    ordered_json o;
    o["directory"] = dir;
    o["written"] = names;
    bool ok = true;
    for (const auto& fn : names) {
        auto base = fn.substr(0, fn.find('.'));
        auto back = read_graph_file(dir + "/" + fn);
        auto orig = fixture(base);
        ok = ok && back.graph.n() == orig.graph.n() && back.graph.edges() == orig.graph.edges() &&
             back.weights == orig.weights;
    }
    o["round_trip"] = ok;
    return {o, ok ? kDecided : kInputError};
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"balance-equation labeling toolkit"};
    app.require_subcommand(1);

    std::string file, mode = "auto", ring_override, pin_str, target_str, structure_file, dir;
    std::uint64_t budget = 100000000;
    std::uint64_t seed = 0;
    std::uint64_t p = 3;
    unsigned r = 1;
    bool oracle_fallback = false, count = false;
    app.add_option("--seed", seed, "seed for pseudorandom schedules (reserved)");

    auto* c_classify = app.add_subcommand("classify", "structural classification report");
    c_classify->add_option("file", file, "graph file")->required();
    c_classify->add_option("--budget", budget, "cycle enumeration budget");

    auto* c_decompose = app.add_subcommand("decompose", "gluing decomposition");
    c_decompose->add_option("file", file, "graph file")->required();
    c_decompose->add_option("--mode", mode, "auto|borderless|net")
        ->check(CLI::IsMember({"auto", "borderless", "net"}));
    c_decompose->add_option("--budget", budget, "cycle enumeration budget");

    auto* c_label = app.add_subcommand("label", "solve the balance equations");
    c_label->add_option("file", file, "weighted graph file")->required();
    c_label->add_option("--ring", ring_override, "ring designator override, e.g. Z/3^2");
    c_label->add_option("--pin", pin_str, "pin one vertex label, v=a,b");
    c_label->add_flag("--oracle-fallback", oracle_fallback, "allow exhaustive fallback");
    c_label->add_option("--budget", budget, "fallback search budget (nodes)");

    auto* c_oracle = app.add_subcommand("oracle", "exhaustive balance-equation search");
    c_oracle->add_option("file", file, "weighted graph file")->required();
    c_oracle->add_flag("--count", count, "count all solutions");
    c_oracle->add_option("--budget", budget, "search budget (nodes)");

    auto* c_group = app.add_subcommand("group", "class-2 p-group operations");
    c_group->require_subcommand(1);
    auto add_group_opts = [&](CLI::App* sc) {
        sc->add_option("--graph", file, "graph file")->required();
        sc->add_option("--p", p, "prime")->required();
        sc->add_option("--r", r, "exponent parameter r >= 1");
        sc->add_option("--budget", budget, "enumeration budget");
    };
    auto* g_build = c_group->add_subcommand("build", "emit the presentation");
    add_group_opts(g_build);
    auto* g_kcheck = c_group->add_subcommand("kcheck", "does K(G) equal G'?");
    add_group_opts(g_kcheck);
    auto* g_decide = c_group->add_subcommand("decide", "is the target a commutator?");
    add_group_opts(g_decide);
    g_decide->add_option("--target", target_str, "central coordinates, comma separated")
        ->required();

    auto* c_bilinear = app.add_subcommand("bilinear", "alternating bilinear map image");
    c_bilinear->require_subcommand(1);
    auto* b_decide = c_bilinear->add_subcommand("decide", "is the target in the image?");
    b_decide->add_option("--structure", structure_file, "structure JSON file")->required();
    b_decide->add_option("--target", target_str, "target coordinates, comma separated")
        ->required();
    b_decide->add_option("--budget", budget, "search budget");
    auto* b_full = c_bilinear->add_subcommand("full", "is the image all of W?");
    b_full->add_option("--structure", structure_file, "structure JSON file")->required();
    b_full->add_option("--budget", budget, "search budget");

    auto* c_fixtures = app.add_subcommand("fixtures", "write the figure fixture files");
    c_fixtures->add_option("dir", dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            std::cout << app.help();
            return kDecided;
        }
        std::cerr << e.what() << "\n";
        return kInputError;
    }

    std::string digest_src;
    Report rep;
    try {
        if (*c_classify || *c_decompose || *c_label || *c_oracle) {
            digest_src = slurp(file);
            GraphFile gf = read_graph_file(file);
            if (!ring_override.empty()) {
                gf.ring = RingSpec::parse(ring_override);
                std::map<Edge, std::uint64_t> ws;
                for (const auto& e : gf.graph.edges())
                    ws[e] = (gf.weights.count(e) ? gf.weights.at(e) : 0) % gf.ring->modulus();
                gf.weights = std::move(ws);
            }
            if (*c_classify) rep = run_classify(gf, budget);
            if (*c_decompose) rep = run_decompose(gf, mode, budget);
            if (*c_label) {
                std::optional<Pin> pin;
                if (!pin_str.empty()) pin = parse_pin(pin_str);
                rep = run_label(gf, pin, oracle_fallback, budget);
            }
            if (*c_oracle) rep = run_oracle(gf, count, budget);
        } else if (*c_group) {
            digest_src = slurp(file);
            GraphFile gf = read_graph_file(file);
            if (*g_build) rep = run_group_build(gf, p, r);
            if (*g_kcheck) rep = run_group_kcheck(gf, p, r, budget);
            if (*g_decide) rep = run_group_decide(gf, p, r, parse_vector(target_str), budget);
        } else if (*c_bilinear) {
            digest_src = slurp(structure_file);
            AlternatingMap map = parse_structure_json(digest_src, structure_file);
            if (*b_decide) rep = run_bilinear_decide(map, parse_vector(target_str), budget);
            if (*b_full) rep = run_bilinear_full(map, budget);
        } else if (*c_fixtures) {
            digest_src = dir;
            rep = run_fixtures(dir);
        }
    } catch (const IOError& e) {
        std::cerr << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kInputError;
    }

    ordered_json report;
    std::vector<std::string> args(argv + 1, argv + argc);
    report["command"] = args;
    report["input_digest"] = fnv_digest(digest_src);
    report["outcome"] = rep.outcome;
    std::cout << report.dump(2) << "\n";
    return rep.exit_code;
}

}  // namespace baleq
