#include "baleq/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace baleq {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& source, std::size_t line, std::size_t col,
                       const std::string& msg) {
    throw IOError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
}

}  // namespace

WeightedGraph GraphFile::weighted_graph() const {
    if (!ring) throw IOError("graph file has no ring header; cannot build a weighted graph");
    std::map<Edge, RingElem> ws;
    for (const auto& e : graph.edges()) {
        auto it = weights.find(e);
        ws.emplace(e, RingElem(*ring, it == weights.end() ? 0 : it->second));
    }
    return WeightedGraph(*ring, graph, std::move(ws));
}

GraphFile parse_graph_text(std::istream& in, const std::string& source) {
    GraphFile gf;
    std::optional<int> n;
    std::vector<Edge> edges;
    std::map<Edge, std::uint64_t> weights;
    bool any_weight = false;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "graph") {
            if (n) fail(source, lineno, 1, "duplicate graph header");
            int v;
            if (!(ls >> v) || v < 0) fail(source, lineno, 7, "expected vertex count");
            n = v;
        } else if (kw == "ring") {
            std::string des;
            if (!(ls >> des)) fail(source, lineno, 6, "expected ring designator Z/p^k");
            try {
                gf.ring = RingSpec::parse(des);
            } catch (const RingError& e) {
                fail(source, lineno, 6, e.what());
            }
        } else if (kw == "e") {
            if (!n) fail(source, lineno, 1, "edge before graph header");
            int i, j;
            if (!(ls >> i >> j)) fail(source, lineno, 3, "expected two vertex numbers");
            if (i < 1 || j < 1 || i > *n || j > *n || i == j)
                fail(source, lineno, 3, "edge endpoints out of range");
            Edge e = make_edge(i, j);
            std::uint64_t w;
            if (ls >> w) {
                weights[e] = w;
                any_weight = true;
            }
            edges.push_back(e);
        } else {
            fail(source, lineno, 1, "unknown record '" + kw + "'");
        }
        std::string extra;
        if (ls >> extra) fail(source, lineno, line.size(), "trailing tokens: '" + extra + "'");
    }
    if (!n) fail(source, lineno + 1, 1, "missing graph header");
    if (any_weight && !gf.ring) fail(source, lineno + 1, 1, "weights present but no ring header");
    try {
        gf.graph = Graph(*n, std::move(edges));
    } catch (const GraphError& e) {
        fail(source, lineno + 1, 1, e.what());
    }
    if (gf.ring)
        for (const auto& e : gf.graph.edges())
            gf.weights[e] = weights.count(e) ? weights[e] % gf.ring->modulus() : 0;
    return gf;
}

GraphFile read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOError(path + ":1:1: cannot open file");
    // Sniff JSON vs text by the first non-space byte.
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    auto pos = text.find_first_not_of(" \t\r\n");
    if (pos != std::string::npos && text[pos] == '{') return parse_graph_json(text, path);
    std::istringstream ss(text);
    return parse_graph_text(ss, path);
}

std::string write_graph_text(const GraphFile& gf) {
    std::ostringstream out;
    out << "graph " << gf.graph.n() << "\n";
    if (gf.ring) out << "ring " << gf.ring->designator() << "\n";
    for (const auto& e : gf.graph.edges()) {
        out << "e " << e.first << " " << e.second;
        if (gf.ring) out << " " << (gf.weights.count(e) ? gf.weights.at(e) : 0);
        out << "\n";
    }
    return out.str();
}

GraphFile parse_graph_json(const std::string& text, const std::string& source) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        fail(source, 1, e.byte, e.what());
    }
    try {
        GraphFile gf;
        int n = j.at("n").get<int>();
        if (j.contains("ring")) gf.ring = RingSpec::parse(j.at("ring").get<std::string>());
        std::vector<Edge> edges;
        for (const auto& je : j.at("edges")) {
            Edge e = make_edge(je.at("i").get<int>(), je.at("j").get<int>());
            edges.push_back(e);
            if (je.contains("w")) {
                if (!gf.ring) throw IOError("weights present but no ring field");
                gf.weights[e] = je.at("w").get<std::uint64_t>() % gf.ring->modulus();
            }
        }
        gf.graph = Graph(n, std::move(edges));
        if (gf.ring)
            for (const auto& e : gf.graph.edges())
                if (!gf.weights.count(e)) gf.weights[e] = 0;
        return gf;
    } catch (const ordered_json::exception& e) {
        fail(source, 1, 1, e.what());
    } catch (const GraphError& e) {
        fail(source, 1, 1, e.what());
    } catch (const RingError& e) {
        fail(source, 1, 1, e.what());
    }
}

std::string write_graph_json(const GraphFile& gf) {
    ordered_json j;
    j["n"] = gf.graph.n();
    if (gf.ring) j["ring"] = gf.ring->designator();
    j["edges"] = ordered_json::array();
    for (const auto& e : gf.graph.edges()) {
        ordered_json je;
        je["i"] = e.first;
        je["j"] = e.second;
        if (gf.ring) je["w"] = gf.weights.count(e) ? gf.weights.at(e) : 0;
        j["edges"].push_back(je);
    }
    return j.dump(2) + "\n";
}

AlternatingMap parse_structure_json(const std::string& text, const std::string& source) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        fail(source, 1, e.byte, e.what());
    }
    try {
        AlternatingMap m;
        m.p = j.at("p").get<std::uint64_t>();
        m.n = j.at("n").get<int>();
        m.m = j.at("m").get<std::size_t>();
        for (const auto& je : j.at("entries")) {
            Edge e = make_edge(je.at("i").get<int>(), je.at("j").get<int>());
            m.structure[e] = je.at("vec").get<std::vector<std::uint64_t>>();
        }
        support_graph(m);  // validates
        return m;
    } catch (const ordered_json::exception& e) {
        fail(source, 1, 1, e.what());
    } catch (const BilinearError& e) {
        fail(source, 1, 1, e.what());
    }
}

std::string write_structure_json(const AlternatingMap& map) {
    ordered_json j;
    j["p"] = map.p;
    j["n"] = map.n;
    j["m"] = map.m;
    j["entries"] = ordered_json::array();
    for (const auto& [e, vec] : map.structure) {
        ordered_json je;
        je["i"] = e.first;
        je["j"] = e.second;
        je["vec"] = vec;
        j["entries"].push_back(je);
    }
    return j.dump(2) + "\n";
}

GraphFile fixture(const std::string& name) {
    GraphFile gf;
    if (name == "fig1") {
        gf.graph = Graph(6, {{1, 2}, {2, 3}, {3, 4}, {1, 4}, {3, 5}, {3, 6}});
    } else if (name == "fig2") {
        gf.graph = Graph(8, {{1, 2}, {2, 3}, {3, 4}, {1, 5}, {4, 5}, {4, 6}, {4, 8}, {6, 7}, {7, 8}});
    } else if (name == "fig3") {
        gf.graph = Graph(5, {{1, 2}, {2, 3}, {3, 4}, {1, 4}, {2, 5}, {4, 5}});
    } else if (name == "fig4") {
        gf.graph = Graph(4, {{1, 2}, {2, 3}, {1, 3}, {1, 4}});
    } else if (name == "fig5") {
        gf.graph = Graph(8, {{1, 2}, {2, 3}, {3, 4}, {1, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {5, 8}});
    } else if (name == "fig6") {
        gf.graph = Graph(17, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {1, 8},
                              {1, 9}, {3, 10}, {5, 11}, {7, 12}, {2, 13}, {13, 14}, {13, 15},
                              {15, 16}, {6, 16}, {16, 17}});
    } else if (name == "fig7") {
        gf.graph = Graph(6, {{1, 2}, {2, 3}, {3, 4}, {1, 4}, {2, 5}, {4, 5}, {5, 6}});
    } else if (name == "c4") {
        gf.graph = Graph(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}});
    } else if (name == "fig4_unfavorable") {
        gf.graph = Graph(4, {{1, 2}, {2, 3}, {1, 3}, {1, 4}});
        gf.ring = RingSpec(3, 1);
        gf.weights = {{{1, 2}, 0}, {{1, 3}, 0}, {{2, 3}, 1}, {{1, 4}, 1}};
    } else {
        throw IOError("unknown fixture '" + name + "'");
    }
    return gf;
}

std::vector<std::string> write_fixtures(const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> names;
    for (const char* base : {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "c4"}) {
        std::string fn = std::string(base) + ".graph";
        std::ofstream(std::filesystem::path(dir) / fn) << write_graph_text(fixture(base));
        names.push_back(fn);
    }
    std::ofstream(std::filesystem::path(dir) / "fig4_unfavorable.wgraph")
        << write_graph_text(fixture("fig4_unfavorable"));
    names.push_back("fig4_unfavorable.wgraph");
    return names;
}

}  // namespace baleq
