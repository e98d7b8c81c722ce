#include <set>

#include "doctest.h"
#include "graft/logic.hpp"
#include "graft/random.hpp"

using namespace graft;

namespace {

// Truth table as a bitmask over props p1..pn.
unsigned long long table(const Formula& f, int n) {
    unsigned long long out = 0;
    for (int row = 0; row < 1 << n; ++row) {
        std::map<std::string, bool> val;
        for (int i = 0; i < n; ++i) val["p" + std::to_string(i + 1)] = row >> i & 1;
        if (eval_bool(f, val)) out |= 1ull << row;
    }
    return out;
}

Formula minterm_dnf(unsigned long long tt, int n) {
    std::vector<Formula> ds;
    for (int row = 0; row < 1 << n; ++row) {
        if (!(tt >> row & 1)) continue;
        std::vector<Formula> lits;
        for (int i = 0; i < n; ++i) {
            auto p = f_prop("p" + std::to_string(i + 1));
            lits.push_back(row >> i & 1 ? p : f_not(p));
        }
        ds.push_back(f_and(lits));
    }
    return f_or(ds);
}

// Evaluation over every structure of the sort up to `size` and every assignment.
bool semantically_equal(const Formula& f, const Formula& g, const Sort& sort, const std::vector<std::string>& vars,
                        int size) {
    bool same = true;
    enumerate_structures(sort, size, false, [&](const Structure& s) {
        if (s.size == 0) return true;
        std::vector<int> val(vars.size(), 0);
        while (same) {
            Assignment a;
            for (size_t i = 0; i < vars.size(); ++i) a[vars[i]] = val[i];
            same = eval(s, f, a) == eval(s, g, a);
            int i = static_cast<int>(vars.size()) - 1;
            while (i >= 0 && ++val[i] == s.size) val[i--] = 0;
            if (i < 0) break;
        }
        return same;
    });
    return same;
}

Sort edge_sort(std::set<Label> cs = {}) { return Sort::graph(cs); }

}  // namespace

TEST_SUITE("logic") {

TEST_CASE("formula parsing round trip") {
    auto f = parse_formula("(exists x1 (and (rel edge x1 x2) (not (eq x2 (const a)))))");
    CHECK(qdepth(f) == 1);
    CHECK(free_vars(f) == std::set<std::string>{"x2"});
    CHECK(constants_of(f) == std::set<std::string>{"a"});
    CHECK(equal(parse_formula(print_formula(f)), f));
    CHECK_THROWS_AS(parse_formula("(and p1"), ParseError);
    CHECK_THROWS_AS(check_formula(parse_formula("(rel edge x1)"), edge_sort()), SortError);
}

TEST_CASE("evaluation") {
    auto g = make_graph(3, {{0, 1}, {1, 2}}, {{"a", 0}});
    CHECK(eval(g, parse_formula("(exists x1 (rel edge (const a) x1))")));
    CHECK(!eval(g, parse_formula("(forall x1 (exists x2 (rel edge x1 x2)))")));
    CHECK(eval(g, parse_formula("(rel edge x1 x2)"), {{"x1", 1}, {"x2", 2}}));
    CHECK_THROWS_AS(eval(g, parse_formula("(rel edge x1 x2)"), {{"x1", 1}}), SortError);
}

TEST_CASE("boolean normalization") {
    CHECK(print_formula(normalize_bool(parse_formula("(or p1 (not p1))"))) == "true");
    CHECK(print_formula(normalize_bool(parse_formula("(and p1 (not p1))"))) == "false");
    CHECK(print_formula(normalize_bool(parse_formula("(or (and p1 p2) (and p1 (not p2)))"))) == "p1");
    // exactly 2^(2^n) forms, and each is a fixpoint with the right truth table
    for (int n = 1; n <= 4; ++n) {
        std::set<std::string> forms;
        for (unsigned long long tt = 0; tt < 1ull << (1 << n); ++tt) {
            auto c = normalize_bool(minterm_dnf(tt, n));
            CHECK(table(c, n) == tt);
            forms.insert(print_formula(c));
        }
        CHECK(forms.size() == 1ull << (1 << n));
    }
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        auto f = map_atoms(random_qf(Sort::graph(), {"x1", "x2", "x3"}, 8, rng), [](const Formula& a) {
            if (a->kind != FKind::Rel && a->kind != FKind::Eq) return a;
            return f_prop("p" + std::to_string(a->args[0].name.back() - '0'));
        });
        auto g = normalize_bool(f);
        CHECK(equal(normalize_bool(g), g));
    }
}

TEST_CASE("qf normalization") {
    CHECK(print_formula(normalize_qf(parse_formula("(eq (const a) (const a))"))) == "true");
    auto f = normalize_qf(parse_formula("(or (rel edge x1 x2) (rel edge x1 x2))"));
    CHECK(equal(f, parse_formula("(rel edge x1 x2)")));
    CHECK(equal(normalize_qf(parse_formula("(eq x2 x1)")), normalize_qf(parse_formula("(eq x1 x2)"))));
    Rng rng(13);
    Sort sort = edge_sort({"a"});
    std::vector<std::string> vars{"x1", "x2"};
    for (int i = 0; i < 150; ++i) {
        auto g = random_qf(sort, vars, 6, rng);
        auto n = normalize_qf(g);
        CHECK(semantically_equal(g, n, sort, vars, 2));
        CHECK(equal(normalize_qf(n), n));
    }
}

TEST_CASE("fo normalization preserves meaning") {
    auto a = normalize_fo(parse_formula("(exists x5 (rel edge x5 x5))"), 1);
    auto b = normalize_fo(parse_formula("(exists x1 (rel edge x1 x1))"), 1);
    CHECK(equal(a, b));
    auto c = normalize_fo(parse_formula("(and (exists x1 (rel edge x1 x1)) (exists x2 (rel edge x2 x2)))"), 1);
    CHECK(equal(c, b));
    CHECK_THROWS_AS(normalize_fo(parse_formula("(exists x1 (exists x2 (rel edge x1 x2)))"), 1), SortError);
    Rng rng(17);
    Sort sort = edge_sort();
    for (int i = 0; i < 150; ++i) {
        auto f = random_fo(sort, {"x1"}, 2, 6, rng);
        auto n = normalize_fo(f, 2);
        CHECK(semantically_equal(f, n, sort, {"x1"}, 3));
    }
}

TEST_CASE("atom counts") {
    CHECK(count_atoms(edge_sort(), 2, false) == 8);
    CHECK(count_atoms(edge_sort({"a"}), 1, false) == 4 + 4);
    Sort s;
    s.relations = {{"r", 3}, {"p", 1}};
    s.constants = {"a", "b"};
    for (int n = 0; n <= 3; ++n) {
        auto atoms = generate_atoms(s, n);
        CHECK(BigInt(atoms.size()) == count_atoms(s, n, false));
        std::set<std::string> reduced;
        for (auto& a : atoms) reduced.insert(print_formula(orient_atom(a)));
        CHECK(BigInt(reduced.size()) == count_atoms(s, n, true));
    }
}

TEST_CASE("count bounds") {
    Sort s;
    s.relations = {{"r", 1}};
    auto lit = reduced_count_bounds(s, 2, 0, false), cor = reduced_count_bounds(s, 2, 0, true);
    CHECK(lit.g == Tower::exact(64));
    CHECK(cor.g == Tower::exact(64).pow2());
    // the stated g(0) undercounts: 3 atoms x1=x2, r(x1), r(x2) give 2^8 distinct reduced forms
    std::set<std::string> forms;
    std::vector<Formula> atoms{parse_formula("(eq x1 x2)"), parse_formula("(rel r x1)"), parse_formula("(rel r x2)")};
    for (int tt = 0; tt < 256; ++tt) {
        std::vector<Formula> ds;
        for (int row = 0; row < 8; ++row) {
            if (!(tt >> row & 1)) continue;
            std::vector<Formula> lits;
            for (int i = 0; i < 3; ++i) lits.push_back(row >> i & 1 ? atoms[i] : f_not(atoms[i]));
            ds.push_back(f_and(lits));
        }
        forms.insert(print_formula(normalize_qf(f_or(ds))));
    }
    CHECK(forms.size() == 256);
    CHECK(Tower::exact(forms.size()) > lit.g);
    CHECK(Tower::exact(forms.size()) <= cor.g);
    CHECK(reduced_count_bounds(s, 0, 1, true).g < reduced_count_bounds(s, 0, 2, true).g);
    CHECK(Tower::exact(5).pow2() == Tower::exact(32));
}

TEST_CASE("qf validity") {
    Sort sort = edge_sort({"a", "b"});
    CHECK(qf_valid(parse_formula("(or (eq x1 x2) (not (eq x2 x1)))"), sort, {"x1", "x2"}).valid);
    auto r = qf_valid(parse_formula("(implies (rel edge x1 x2) (rel edge x2 x1))"), sort, {"x1", "x2"});
    CHECK(!r.valid);
    REQUIRE(r.witness);
    CHECK(!eval(*r.witness, parse_formula("(implies (rel edge x1 x2) (rel edge x2 x1))"), r.assignment));
    CHECK(qf_valid(parse_formula("(implies (and (eq x1 (const a)) (rel edge x1 x1)) (rel edge (const a) x1))"), sort,
                   {"x1"})
              .valid);
    // random pairs against brute force evaluation on small structures
    Rng rng(23);
    Sort small = edge_sort({"a"});
    for (int i = 0; i < 150; ++i) {
        auto f = random_qf(small, {"x1", "x2"}, 4, rng), g = random_qf(small, {"x1", "x2"}, 4, rng);
        if (coin(rng)) g = f_not(f_not(f));
        CHECK(qf_equivalent(f, g, small, {"x1", "x2"}) == semantically_equal(f, g, small, {"x1", "x2"}, 3));
    }
}

}
