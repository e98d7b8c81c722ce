#include "graft/io.hpp"

#include <fstream>
#include <sstream>

namespace graft {

namespace {

template <class F>
auto guarded(const char* what, F f) -> decltype(f()) {
    try {
        return f();
    } catch (const Json::exception& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

}  // namespace

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), static_cast<long>(e.byte));
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json sort_to_json(const Sort& s) {
    Json j;
    j["relations"] = Json::object();
    for (auto& [r, k] : s.relations) j["relations"][r] = k;
    j["constants"] = Json::array();
    for (auto& c : s.constants) j["constants"].push_back(c);
    return j;
}

Sort sort_from_json(const Json& j) {
    return guarded("sort", [&] {
        Sort s;
        if (j.contains("relations"))
            for (auto& [r, k] : j.at("relations").items()) {
                int a = k.get<int>();
                if (a < 1) throw SortError("relation " + r + " needs positive arity");
                s.relations[r] = a;
            }
        if (j.contains("constants"))
            for (auto& c : j.at("constants")) s.constants.insert(c.get<std::string>());
        return s;
    });
}

Json structure_to_json(const Structure& s) {
    Json j = sort_to_json(s.sort);
    j["domain"] = s.size;
    j["tuples"] = Json::object();
    for (auto& [r, ts] : s.tuples) {
        Json arr = Json::array();
        for (auto& t : ts) arr.push_back(t);
        j["tuples"][r] = arr;
    }
    j["sources"] = Json::object();
    for (auto& [c, v] : s.sources) j["sources"][c] = v;
    return j;
}

Structure structure_from_json(const Json& j) {
    return guarded("structure", [&] {
        Structure s(sort_from_json(j), j.at("domain").get<int>());
        if (s.size < 0) throw SortError("negative domain size");
        if (j.contains("tuples"))
            for (auto& [r, ts] : j.at("tuples").items()) {
                if (!s.sort.has_relation(r)) throw SortError("tuples for undeclared relation " + r);
                for (auto& t : ts) {
                    auto tup = t.get<Tuple>();
                    if (static_cast<int>(tup.size()) != s.sort.arity(r))
                        throw SortError("tuple of wrong arity for " + r);
                    for (int x : tup)
                        if (x < 0 || x >= s.size) throw SortError("element out of range in " + r);
                    s.add(r, tup);
                }
            }
        if (j.contains("sources"))
            for (auto& [c, v] : j.at("sources").items()) {
                if (!s.sort.has_constant(c)) throw SortError("source for undeclared constant " + c);
                s.set_source(c, v.get<int>());
            }
        s.check();
        return s;
    });
}

Json multigraph_to_json(const MultiGraph& g) {
    Json j = structure_to_json(simplify_u(g));
    j["edges"] = Json::object();
    for (size_t i = 0; i < g.edges.size(); ++i)
        j["edges"]["e" + std::to_string(i)] = Json::array({g.edges[i].first, g.edges[i].second});
    return j;
}

MultiGraph multigraph_from_json(const Json& j) {
    return guarded("multigraph", [&] {
        MultiGraph g;
        g.nv = j.at("domain").get<int>();
        if (j.contains("constants"))
            for (auto& c : j.at("constants")) g.constants.insert(c.get<std::string>());
        if (j.contains("sources"))
            for (auto& [c, v] : j.at("sources").items()) g.sources[c] = v.get<int>();
        // edge ids keep their numeric order when they have the e<k> form
        std::vector<std::pair<long, std::pair<int, int>>> es;
        long fallback = 1L << 40;
        for (auto& [id, e] : j.at("edges").items()) {
            long k = fallback++;
            if (id.size() > 1 && id[0] == 'e' && id.find_first_not_of("0123456789", 1) == std::string::npos)
                k = std::stol(id.substr(1));
            es.push_back({k, {e.at(0).get<int>(), e.at(1).get<int>()}});
        }
        std::stable_sort(es.begin(), es.end(), [](auto& a, auto& b) { return a.first < b.first; });
        for (auto& [k, e] : es) g.edges.push_back(e);
        g.check();
        return g;
    });
}

Json scheme_to_json(const QfdScheme& g) {
    Json j;
    if (!g.name.empty()) j["name"] = g.name;
    j["in"] = sort_to_json(g.in);
    j["out"] = sort_to_json(g.out);
    j["delta"] = print_formula(g.delta);
    j["phi"] = Json::object();
    for (auto& [r, f] : g.phi) j["phi"][r] = print_formula(f);
    j["kappa"] = Json::object();
    for (auto& [d, row] : g.kappa) {
        j["kappa"][d] = Json::object();
        for (auto& [c, f] : row) j["kappa"][d][c] = print_formula(f);
    }
    return j;
}

QfdScheme scheme_from_json(const Json& j) {
    return guarded("scheme", [&] {
        QfdScheme g;
        if (j.contains("name")) g.name = j.at("name").get<std::string>();
        g.in = sort_from_json(j.at("in"));
        g.out = sort_from_json(j.at("out"));
        g.delta = parse_formula(j.at("delta").get<std::string>());
        if (j.contains("phi"))
            for (auto& [r, f] : j.at("phi").items()) g.phi[r] = parse_formula(f.get<std::string>());
        if (j.contains("kappa"))
            for (auto& [d, row] : j.at("kappa").items())
                for (auto& [c, f] : row.items()) g.kappa[d][c] = parse_formula(f.get<std::string>());
        check_scheme_syntax(g);
        return g;
    });
}

namespace {

void collect_nodes(const HType& t, Json& nodes) {
    if (nodes.contains(t->digest)) return;
    Json n;
    n["depth"] = t->depth;
    n["params"] = t->nparams;
    n["atoms"] = t->atoms;
    n["kids"] = Json::array();
    for (auto& k : t->kids) n["kids"].push_back(k->digest);
    nodes[t->digest] = n;
    for (auto& k : t->kids) collect_nodes(k, nodes);
}

}  // namespace

Json type_to_json(const HType& t) {
    Json j;
    j["sort"] = sort_to_json(t->sort);
    j["depth"] = t->depth;
    j["root"] = t->digest;
    Json nodes = Json::object();
    collect_nodes(t, nodes);
    j["nodes"] = nodes;
    return j;
}

HType type_from_json(const Json& j) {
    return guarded("type", [&] {
        Sort sort = sort_from_json(j.at("sort"));
        const Json& nodes = j.at("nodes");
        std::map<std::string, HType> built;
        std::function<HType(const std::string&, int)> build = [&](const std::string& d, int budget) -> HType {
            if (auto it = built.find(d); it != built.end()) return it->second;
            if (budget < 0) throw ParseError("type: node cycle at " + d);
            const Json& n = nodes.at(d);
            std::vector<HType> kids;
            for (auto& k : n.at("kids")) kids.push_back(build(k.get<std::string>(), budget - 1));
            auto t = make_hnode(sort, n.at("depth").get<int>(), n.at("params").get<int>(),
                                n.at("atoms").get<std::string>(), std::move(kids));
            if (t->digest != d) throw ParseError("type: digest mismatch at node " + d);
            return built[d] = t;
        };
        return build(j.at("root").get<std::string>(), j.at("depth").get<int>());
    });
}

Json tree_to_json(const ModularTree& t) {
    Json j;
    j["kind"] = kind_name(t.kind);
    Json vs = Json::array();
    for (int v = 0; v < 32; ++v)
        if (t.module >> v & 1) vs.push_back(v);
    j["module"] = vs;
    if (t.kind == ModularTree::Leaf) {
        j["vertex"] = t.vertex;
        j["loop"] = t.loop;
        return j;
    }
    j["quotient"] = structure_to_json(t.quotient);
    j["kids"] = Json::array();
    for (auto& k : t.kids) j["kids"].push_back(tree_to_json(k));
    return j;
}

Json automaton_to_json(const TreeAutomaton& a) {
    Json j;
    j["name"] = a.name();
    j["sig"] = sig_name(a.sig());
    std::set<State> states;
    Json tr = Json::object();
    for (auto& t : a.transitions()) {
        tr[transition_key(t.op, t.args)] = t.to;
        states.insert(t.to);
        states.insert(t.args.begin(), t.args.end());
    }
    j["states"] = Json::array();
    j["accepting"] = Json::array();
    for (auto& s : states) {
        j["states"].push_back(s);
        if (a.accepting(s)) j["accepting"].push_back(s);
    }
    j["transitions"] = tr;
    return j;
}

TreeAutomaton automaton_from_json(const Json& j) {
    return guarded("automaton", [&] {
        std::map<std::string, State> table;
        for (auto& [k, v] : j.at("transitions").items()) table[k] = v.get<std::string>();
        std::set<State> acc;
        for (auto& s : j.at("accepting")) acc.insert(s.get<std::string>());
        std::string name = j.contains("name") ? j.at("name").get<std::string>() : "table";
        return table_automaton(name, parse_sig(j.at("sig").get<std::string>()), table, acc);
    });
}

}  // namespace graft
