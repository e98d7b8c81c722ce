#include "doctest.h"
#include "graft/modular.hpp"
#include "graft/random.hpp"

using namespace graft;

namespace {

// Strong modules by brute force: modules that overlap no module.
std::set<VertexSet> brute_strong(const Structure& g) {
    std::vector<VertexSet> mods;
    for (VertexSet m = 1; m < (1u << g.size); ++m)
        if (is_module(g, m)) mods.push_back(m);
    std::set<VertexSet> out;
    for (VertexSet m : mods) {
        bool ok = true;
        for (VertexSet x : mods)
            if ((m & x) && (m & ~x) && (x & ~m)) ok = false;
        if (ok) out.insert(m);
    }
    return out;
}

bool brute_prime(const Structure& g) {
    if (g.size < 2) return false;
    for (VertexSet m = 1; m < (1u << g.size); ++m)
        if (std::popcount(m) >= 2 && std::popcount(m) < g.size && is_module(g, m)) return false;
    return true;
}

Structure grid(int r, int c) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) {
            int v = i * c + j;
            if (j + 1 < c) e.push_back({v, v + 1}), e.push_back({v + 1, v});
            if (i + 1 < r) e.push_back({v, v + c}), e.push_back({v + c, v});
        }
    return make_graph(r * c, e);
}

}  // namespace

TEST_SUITE("modular") {

TEST_CASE("strong modules") {
    auto k2 = complete_graph(2);
    CHECK(find_strong_modules(k2) == std::vector<VertexSet>{1, 2});
    CHECK(find_strong_modules(path_graph(4)) == std::vector<VertexSet>{1, 2, 4, 8});
    auto two = oplus(complete_graph(3), complete_graph(3));
    CHECK(find_strong_modules(two) == std::vector<VertexSet>{7, 56});
    Rng rng(1);
    for (int i = 0; i < 300; ++i) {
        auto g = random_structure(Sort::graph(), uniform_int(rng, 1, 6), uniform_int(rng, 1, 9) / 10.0, rng);
        auto s = strong_modules(g);
        CHECK(std::set<VertexSet>(s.begin(), s.end()) == brute_strong(g));
        CHECK(is_prime(g) == brute_prime(g));
    }
}

TEST_CASE("decomposition re-evaluates to the graph") {
    Rng rng(2);
    for (int i = 0; i < 300; ++i) {
        auto g = random_structure(Sort::graph(), uniform_int(rng, 1, 8), uniform_int(rng, 0, 10) / 10.0, rng);
        auto t = modular_decomposition(g);
        CHECK(isomorphic(evaluate_tree(t), g));
        CHECK(isomorphic(eval_structure(tree_term(t), Sig::MODULAR), g));
    }
    auto t = modular_decomposition(path_graph(4));
    CHECK(t.kind == ModularTree::Prime);
    CHECK(t.kids.size() == 4);
    CHECK(modular_decomposition(single_vertex(false)).kind == ModularTree::Leaf);
    auto k4 = modular_decomposition(complete_graph(4));
    CHECK(k4.kind == ModularTree::Complete);
    CHECK(k4.kids.size() == 4);
    CHECK(modular_decomposition(directed_path(2)).kind == ModularTree::Linear);
    auto order = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(modular_decomposition(order).kind == ModularTree::Linear);
}

TEST_CASE("primality") {
    CHECK(is_prime(path_graph(4)));
    CHECK(!is_prime(complete_graph(3)));
    CHECK(!is_prime(single_vertex(false)));
    CHECK(is_prime(complete_graph(2)));
    CHECK(is_prime(grid(3, 3)));
    CHECK(!is_prime(grid(2, 2)));  // the 4-cycle is K_{2,2}
    for (int n = 0; n <= 5; ++n) CHECK(is_prime(directed_path(n + 2)));
}

TEST_CASE("F-graphs") {
    std::vector<Structure> cographs{complete_graph(2), Structure(Sort::graph(), 2)};
    CHECK(is_F_graph(complete_graph(4), cographs));
    CHECK(!is_F_graph(path_graph(4), cographs));
    CHECK(is_F_graph(single_vertex(true), cographs));
    CHECK(is_F_graph(oplus(complete_graph(3), path_graph(1)), cographs));
    CHECK(is_F_graph(path_graph(4), {path_graph(4)}));
    CHECK_THROWS_AS(is_F_graph(path_graph(4), {complete_graph(3)}), SortError);
}

}
