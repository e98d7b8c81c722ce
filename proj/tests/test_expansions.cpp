#include "doctest.h"
#include "graft/expansions.hpp"
#include "graft/hintikka.hpp"
#include "graft/random.hpp"

using namespace graft;

namespace {

Structure port_graph(std::set<Label> ports, int n, std::vector<std::pair<int, int>> edges,
                     std::map<Label, std::vector<int>> at) {
    Structure g(Sort::ports(ports), n);
    for (auto& [a, b] : edges) g.add(kEdge, {a, b});
    for (auto& [p, vs] : at)
        for (int v : vs) g.add(p, {v});
    return g;
}

// m = 2: four p-ports, two q-ports, one r-port, and x seeing every p-port
Structure figure_graph() {
    return port_graph({"p", "q", "r"}, 8, {{7, 0}, {7, 1}, {7, 2}, {7, 3}},
                      {{"p", {0, 1, 2, 3}}, {"q", {4, 5}}, {"r", {6}}});
}

}  // namespace

TEST_SUITE("expansions") {

TEST_CASE("port classes") {
    auto st = classify_ports(figure_graph(), 2);
    CHECK(st["p"].kind == PortClass::Large);
    CHECK(st["p"].count == 4);
    CHECK(st["q"].kind == PortClass::Small);  // count == m
    CHECK(st["r"].kind == PortClass::Small);
    auto v = classify_ports(port_graph({"p"}, 2, {}, {}), 1);
    CHECK(v["p"].kind == PortClass::Void);
    CHECK_THROWS_AS(classify_ports(figure_graph(), 0), SortError);
}

TEST_CASE("port-free graphs expand to themselves") {
    Rng rng(1);
    for (int i = 0; i < 30; ++i) {
        auto g = random_structure(Sort::graph(), uniform_int(rng, 1, 5), 0.3, rng);
        auto es = enumerate_expansions(g, 1);
        if (es.contains_bicomplete) {
            CHECK(has_bicomplete(g, 2));
            CHECK(es.expansions.empty());
            continue;
        }
        REQUIRE(es.expansions.size() == 1);
        CHECK(isomorphic(es.expansions[0].graph, g));
    }
}

TEST_CASE("figure scenario") {
    auto g = figure_graph();
    auto es = enumerate_expansions(g, 2);
    CHECK(!es.contains_bicomplete);
    for (auto& e : es.expansions) {
        CHECK(is_source_separated(e.graph));
        CHECK(!has_bicomplete(e.graph, 3));
        CHECK(!(e.graph.sort.has_constant(out_label("p", 1)) && e.graph.sort.has_constant(out_label("p", 2))));
        CHECK(!e.graph.sort.has_constant(s_label("p", 1)));
        // the base graph sits on the first vertices unchanged
        for (auto& t : g.tuples.at(kEdge)) CHECK(e.graph.has(kEdge, t));
    }
    // q's two ports are interchangeable, r takes either index, p takes (ins 0..2) x (outs 0..1)
    CHECK(es.expansions.size() == 1 * 2 * 6);
    CHECK(es.keys == expansion_keys_by_filter(g, 2));
    // without x, two out-auxiliaries are allowed
    auto h = port_graph({"p"}, 4, {}, {{"p", {0, 1, 2, 3}}});
    bool two_out = false;
    for (auto& e : enumerate_expansions(h, 2).expansions)
        two_out |= e.graph.sort.has_constant(out_label("p", 2));
    CHECK(two_out);
}

TEST_CASE("double small port has no expansion") {
    auto g = port_graph({"p", "q"}, 2, {}, {{"p", {0}}, {"q", {0}}});
    auto es = enumerate_expansions(g, 1);
    CHECK(es.expansions.empty());
    CHECK(expansion_keys_by_filter(g, 1).empty());
}

TEST_CASE("enumerator agrees with the filter") {
    Rng rng(2);
    for (int i = 0; i < 12; ++i) {
        int m = uniform_int(rng, 1, 2);
        auto g = random_structure(Sort::ports({"p", "q"}), uniform_int(rng, 1, 5), 0.3, rng);
        auto es = enumerate_expansions(g, m);
        CHECK(es.keys == expansion_keys_by_filter(g, m));
        std::set<std::string> uniq(es.keys.begin(), es.keys.end());
        CHECK(uniq.size() == es.keys.size());
    }
}

TEST_CASE("sim") {
    auto ev = zeta_evaluator(Sig::HR_SEP);
    auto g = figure_graph();
    CHECK(decide_sim(g, g, 1, ev, 1));
    // both contain K2,2 at m = 1
    auto k1 = port_graph({"p"}, 4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}, {});
    auto k2 = port_graph({"p"}, 5, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {4, 4}}, {{"p", {4}}});
    auto r = decide_sim_explained(k1, k2, 1, ev);
    CHECK(r.equivalent);
    CHECK(r.condition == 'a');

    // x -> both p-ports forbids out(p,1); both p-ports -> x forbids in(p,1)
    auto a = port_graph({"p"}, 3, {{2, 0}, {2, 1}}, {{"p", {0, 1}}});
    auto b = port_graph({"p"}, 3, {{0, 2}, {1, 2}}, {{"p", {0, 1}}});
    auto ea = enumerate_expansions(a, 1), eb = enumerate_expansions(b, 1);
    REQUIRE(ea.expansions.size() == 2);
    REQUIRE(eb.expansions.size() == 2);
    std::set<std::set<Label>> ca, cb;
    for (auto& e : ea.expansions) ca.insert(e.graph.sort.constants);
    for (auto& e : eb.expansions) cb.insert(e.graph.sort.constants);
    CHECK(ca == std::set<std::set<Label>>{{}, {in_label("p", 1)}});
    CHECK(cb == std::set<std::set<Label>>{{}, {out_label("p", 1)}});
    CHECK(same_type(fo_theory(a, 1), fo_theory(b, 1)));
    r = decide_sim_explained(a, b, 1, ev, 1);
    CHECK(!r.equivalent);
    CHECK(r.condition == 'c');
    CHECK(decide_sim_explained(a, b, 1, ev).condition == 'b');

    // swapping the port names: p large and q small against the reverse
    auto s1 = port_graph({"p", "q"}, 3, {}, {{"p", {0, 1}}, {"q", {2}}});
    auto s2 = port_graph({"p", "q"}, 3, {}, {{"q", {0, 1}}, {"p", {2}}});
    CHECK(same_type(fo_theory(s1, 1), fo_theory(s2, 1)));
    r = decide_sim_explained(s1, s2, 1, ev, 1);
    CHECK(!r.equivalent);
    CHECK(r.condition == 'c');
    CHECK_THROWS_AS(decide_sim(s1, a, 1, ev), SortError);
}

TEST_CASE("sim on port-free graphs is label and theory equality") {
    auto ev = zeta_evaluator(Sig::HR_SEP);
    auto gs = all_structures(Sort::graph(), 3, true);
    for (auto& g : gs)
        for (auto& h : gs) {
            bool want = ev.label(Value{g}) == ev.label(Value{h}) && same_type(fo_theory(g, 2), fo_theory(h, 2));
            CHECK(decide_sim(g, h, 1, ev, 2) == want);
        }
}

TEST_CASE("sim is an equivalence on a sample; equal theories give equal port classes") {
    auto ev = zeta_evaluator(Sig::HR_SEP);
    Rng rng(4);
    std::vector<Structure> gs;
    for (int i = 0; i < 10; ++i) gs.push_back(random_structure(Sort::ports({"p"}), uniform_int(rng, 1, 3), 0.4, rng));
    std::vector<std::vector<bool>> rel(gs.size(), std::vector<bool>(gs.size()));
    for (size_t i = 0; i < gs.size(); ++i)
        for (size_t j = 0; j < gs.size(); ++j) rel[i][j] = decide_sim(gs[i], gs[j], 1, ev, 3);
    for (size_t i = 0; i < gs.size(); ++i) {
        CHECK(rel[i][i]);
        for (size_t j = 0; j < gs.size(); ++j) {
            CHECK(rel[i][j] == rel[j][i]);
            for (size_t k = 0; k < gs.size(); ++k)
                if (rel[i][j] && rel[j][k]) CHECK(rel[i][k]);
        }
    }
    for (auto& g : gs)
        for (auto& h : gs)
            if (same_type(fo_theory(g, 4), fo_theory(h, 4))) {
                auto a = classify_ports(g, 1), b = classify_ports(h, 1);
                for (auto& [p, c] : a) CHECK(c.kind == b[p].kind);
            }
}

}
