#include "doctest.h"
#include "graft/modular.hpp"
#include "graft/recognizers.hpp"

using namespace graft;

namespace {

std::vector<TermPtr> random_terms(Sig sig, int count, int max_leaves, uint64_t seed) {
    Rng rng(seed);
    std::vector<TermPtr> out;
    for (int i = 0; i < count; ++i) {
        RandomTermSpec spec;
        spec.sig = sig;
        spec.leaves = uniform_int(rng, 1, max_leaves);
        out.push_back(random_term(spec, rng));
    }
    return out;
}

}  // namespace

TEST_SUITE("recognizers") {

TEST_CASE("zeta automaton tracks the type") {
    auto a = zeta_automaton(Sig::S);
    for (auto& t : random_terms(Sig::S, 200, 6, 1))
        CHECK(a.run(t) == canonical_key(canonical(compute_type(eval_structure(t, Sig::S)))));
    CHECK(a.accepts(parse_term("(v)")));
}

TEST_CASE("boolean closure") {
    auto z = zeta_automaton(Sig::HR);
    auto has_a = z.with_accept([](const State& s) { return s.find("a") != std::string::npos; }, "has-a");
    auto simple = simplicity_automaton();
    auto edge = compile_fo_recognizer(parse_formula("(exists x1 (exists x2 (rel edge x1 x2)))"), 2, Sig::HR);
    auto loop = compile_fo_recognizer(parse_formula("(exists x1 (rel edge x1 x1))"), 1, Sig::HR);
    auto both = product(edge, loop), either = automaton_union(edge, loop), neither = complement(either);
    auto empty = product(edge, complement(edge));
    for (auto& t : random_terms(Sig::HR, 300, 6, 2)) {
        bool e = edge.accepts(t), l = loop.accepts(t);
        auto g = eval_structure(t, Sig::HR);
        CHECK(e == !g.tuples.at(kEdge).empty());
        CHECK(both.accepts(t) == (e && l));
        CHECK(either.accepts(t) == (e || l));
        CHECK(neither.accepts(t) == !(e || l));
        CHECK(!empty.accepts(t));
        auto [x, y] = unpair_state(both.run(t));
        CHECK(x == edge.run(t));
        CHECK(y == loop.run(t));
    }
    CHECK_THROWS_AS(product(edge, simple), SortError);
    CHECK(has_a.accepts(parse_term("(src a)")));
}

TEST_CASE("preimage") {
    auto edge = compile_fo_recognizer(parse_formula("(exists x1 (rel edge (const a) x1))"), 1, Sig::HR);
    auto ctx = parse_term("(fus a b (oplus (edge b c) hole))");
    TypeContext tc;
    auto pre = preimage(edge, ctx);
    for (auto& t : random_terms(Sig::HR, 300, 5, 3)) {
        auto s = typecheck_term(t, Sig::HR).sort;
        if (!s.has_constant("a") || s.has_constant("b") || s.has_constant("c")) continue;
        CHECK(pre.accepts(t) == edge.accepts(plug(ctx, {t})));
    }
    auto id = preimage(edge, t_hole());
    auto twice = preimage(preimage(edge, parse_term("(srcren b a hole)")), parse_term("(srcren c b hole)"));
    auto composed = preimage(edge, parse_term("(srcren b a (srcren c b hole))"));
    for (auto& t : random_terms(Sig::HR, 200, 5, 4)) {
        auto s = typecheck_term(t, Sig::HR).sort;
        if (s.has_constant("a")) CHECK(id.accepts(t) == edge.accepts(t));
        if (!s.has_constant("c") || s.has_constant("a") || s.has_constant("b")) continue;
        CHECK(twice.accepts(t) == composed.accepts(t));
    }
}

TEST_CASE("restriction") {
    auto a = compile_fo_recognizer(parse_formula("(exists x1 (rel edge x1 x1))"), 1, Sig::VRPLUS);
    auto r = restrict_to(a, Sig::VR);
    for (auto& t : random_terms(Sig::VR, 100, 5, 5)) CHECK(r.accepts(t) == a.accepts(t));
    auto pi = restrict_to(r, Sig::VRPI);
    CHECK_THROWS_AS(pi.run(parse_term("(fg p (port p))")), SortError);
    CHECK(restrict_to(pi, Sig::VRPI).heads() == restrict_to(a, Sig::VRPI).heads());
    CHECK_THROWS_AS(restrict_to(a, Sig::HR), SortError);
    auto s = compile_fo_recognizer(parse_formula("(exists x1 (rel edge x1 x1))"), 1, Sig::S);
    auto nlc = restrict_to(s, Sig::NLC);
    for (auto& t : random_terms(Sig::NLC, 100, 5, 6)) CHECK(nlc.accepts(t) == eval(eval_structure(t, Sig::NLC), parse_formula("(exists x1 (rel edge x1 x1))")));
}

TEST_CASE("table automata") {
    auto a = simplicity_automaton();
    auto terms = random_terms(Sig::HRM, 50, 4, 7);
    for (auto& t : terms) a.run(t);
    std::map<std::string, State> table;
    std::set<State> acc;
    for (auto& tr : a.transitions()) {
        table[transition_key(tr.op, tr.args)] = tr.to;
        if (a.accepting(tr.to)) acc.insert(tr.to);
    }
    auto b = table_automaton("copy", Sig::HRM, table, acc);
    for (auto& t : terms) CHECK(b.accepts(t) == a.accepts(t));
    CHECK_THROWS_AS(b.run(parse_term("(srcren a zz (srcren b yy (src-loop b)))")), SortError);
}

TEST_CASE("simplicity") {
    auto a = simplicity_automaton();
    CHECK(!a.accepts(parse_term("(mfus c d (mfus a b (oplus (edge a c) (edge b d))))")));
    CHECK(a.accepts(parse_term("(mfus a b (oplus (edge a c) (edge b d)))")));
    CHECK(!a.accepts(parse_term("(parallel (edge a b) (edge a b))")));
    for (auto& t : random_terms(Sig::HRM, 1000, 12, 8)) {
        auto m = eval_multigraph(t);
        CHECK_MESSAGE(a.accepts(t) == !has_multiedges(m), print_term(t));
    }
}

TEST_CASE("congruence checks") {
    CongruenceDomain d;
    d.max_size = 2;
    auto z = check_congruence(zeta_evaluator(Sig::HR), d);
    CHECK(z.ok);
    CHECK(z.checks > 0);
    auto p = check_congruence(parity_evaluator(Sig::HR), d);
    CHECK(!p.ok);
    CHECK(!p.args.empty());
    auto s = check_congruence(simplicity_evaluator(), d);
    CHECK_MESSAGE(s.ok, s.message);
    auto e = check_congruence(eta_only_evaluator(), d);
    CHECK(!e.ok);
    CHECK(e.op.starts_with("mfus"));
    CongruenceDomain m;
    m.max_size = 3;
    m.loops = false;
    auto pr = check_congruence(prime_evaluator([](const Structure& g) { return g.size == 4; }), m);
    CHECK_MESSAGE(pr.ok, pr.message);
    CHECK(check_congruence(zeta_evaluator(Sig::HR_PAR), d).ok);
    CHECK(check_congruence(zeta_evaluator(Sig::CS), d).ok);
}

TEST_CASE("prime classes") {
    auto in_L = [](const Structure& g) { return g.size == 4; };
    auto a = prime_automaton(in_L);
    auto ev = prime_evaluator(in_L);
    CHECK(a.run(parse_term("(modular 2 ((1 2)) (v) (v))")) == "prime-not-in-L");
    CHECK(a.run(parse_term("(modular 2 ((1 2)) (v) (modular 2 () (v) (v)))")) == "nonprime");
    Rng rng(9);
    for (int i = 0; i < 300; ++i) {
        auto g = random_structure(Sort::graph(), uniform_int(rng, 1, 6), 0.5, rng);
        Structure h(Sort::graph(), g.size);
        for (auto& e : g.tuples.at(kEdge))
            if (e[0] != e[1]) h.add(kEdge, e);
        auto t = tree_term(modular_decomposition(h));
        CHECK(a.run(t) == ev.label(h));
    }
    for (int n = 0; n <= 5; ++n) {
        auto path = eval_structure(path_term(n), Sig::VR);
        CHECK(ev.label(path) == (n == 2 ? "prime-in-L" : "prime-not-in-L"));
    }
}

TEST_CASE("compiled first-order recognizers") {
    auto f = parse_formula("(exists x1 (exists x2 (rel edge x1 x2)))");
    auto a = compile_fo_recognizer(f, 2, Sig::S);
    auto no = compile_fo_recognizer(parse_formula("false"), 0, Sig::S);
    for (auto& t : random_terms(Sig::S, 300, 6, 10)) {
        auto g = eval_structure(t, Sig::S);
        CHECK(a.accepts(t) == eval(g, f));
        CHECK(same_type(fo_state_type(a.run(t)), fo_theory(g, 2)));
        CHECK(!no.accepts(t));
    }
    CHECK_THROWS_AS(compile_fo_recognizer(parse_formula("(rel edge x1 x1)"), 1, Sig::S), SortError);
    CHECK_THROWS_AS(compile_fo_recognizer(f, 1, Sig::S), SortError);
    CHECK_THROWS_AS(compile_fo_recognizer(f, 2, Sig::HRM), SortError);
    auto m = compile_fo_recognizer(parse_formula("(forall x1 (exists x2 (rel edge x1 x2)))"), 2, Sig::MODULAR);
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        RandomTermSpec spec;
        spec.sig = Sig::MODULAR;
        spec.leaves = uniform_int(rng, 1, 6);
        auto t = random_term(spec, rng);
        CHECK(m.accepts(t) == eval(eval_structure(t, Sig::MODULAR), parse_formula("(forall x1 (exists x2 (rel edge x1 x2)))")));
    }
}

}
