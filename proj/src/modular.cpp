#include "graft/modular.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace graft {

namespace {

struct Adj {
    int n = 0;
    std::vector<VertexSet> out, in;  // loops dropped

    explicit Adj(const Structure& g) {
        if (g.sort != Sort::graph()) throw SortError("modules need a plain graph, got " + g.sort.str());
        if (g.size > 31) throw CapacityError("modules: more than 31 vertices");
        n = g.size;
        out.assign(n, 0);
        in.assign(n, 0);
        for (auto& e : g.tuples.at(kEdge))
            if (e[0] != e[1]) {
                out[e[0]] |= 1u << e[1];
                in[e[1]] |= 1u << e[0];
            }
    }

    VertexSet all() const { return n == 0 ? 0 : (n == 32 ? ~0u : (1u << n) - 1); }

    // x sees m uniformly in both directions
    bool uniform(int x, VertexSet m) const {
        VertexSet o = out[x] & m, i = in[x] & m;
        return (o == 0 || o == m) && (i == 0 || i == m);
    }

    bool module(VertexSet m) const {
        for (int x = 0; x < n; ++x)
            if (!(m >> x & 1) && !uniform(x, m)) return false;
        return true;
    }

    VertexSet closure(VertexSet s) const {
        for (bool grew = true; grew;) {
            grew = false;
            for (int x = 0; x < n; ++x)
                if (!(s >> x & 1) && !uniform(x, s)) {
                    s |= 1u << x;
                    grew = true;
                }
        }
        return s;
    }
};

bool overlap(VertexSet a, VertexSet b) { return (a & b) && (a & ~b) && (b & ~a); }

int lowest(VertexSet s) { return std::countr_zero(s); }

}  // namespace

bool is_module(const Structure& g, VertexSet m) { return Adj(g).module(m); }

VertexSet minimal_module(const Structure& g, int u, int v) {
    Adj a(g);
    return a.closure(1u << u | 1u << v);
}

std::vector<VertexSet> strong_modules(const Structure& g) {
    Adj a(g);
    if (a.n == 0) return {};
    std::vector<VertexSet> f;
    for (int u = 0; u < a.n; ++u)
        for (int v = u + 1; v < a.n; ++v) f.push_back(a.closure(1u << u | 1u << v));
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    // group the pairwise minimal modules into overlap components; a strong module with
    // at least two vertices is the union of one component
    std::vector<size_t> parent(f.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (size_t i = 0; i < f.size(); ++i)
        for (size_t j = i + 1; j < f.size(); ++j)
            if (overlap(f[i], f[j])) parent[find(i)] = find(j);
    std::map<size_t, VertexSet> unions;
    for (size_t i = 0; i < f.size(); ++i) unions[find(i)] |= f[i];
    std::set<VertexSet> cand;
    for (auto& [r, s] : unions) cand.insert(s);
    for (int u = 0; u < a.n; ++u) cand.insert(1u << u);
    cand.insert(a.all());
    std::vector<VertexSet> out;
    for (VertexSet s : cand) {
        if (!a.module(s)) continue;
        bool strong = std::none_of(f.begin(), f.end(), [&](VertexSet m) { return overlap(m, s); });
        if (strong) out.push_back(s);
    }
    return out;
}

namespace {

std::vector<VertexSet> maximal_inside(VertexSet s, const std::vector<VertexSet>& strong) {
    std::vector<VertexSet> inside;
    for (VertexSet t : strong)
        if (t != s && (t & ~s) == 0) inside.push_back(t);
    std::sort(inside.begin(), inside.end(), [](VertexSet x, VertexSet y) { return std::popcount(x) > std::popcount(y); });
    std::vector<VertexSet> kids;
    VertexSet covered = 0;
    for (VertexSet t : inside)
        if (!(t & covered)) {
            kids.push_back(t);
            covered |= t;
        }
    std::sort(kids.begin(), kids.end(), [](VertexSet x, VertexSet y) { return lowest(x) < lowest(y); });
    return kids;
}

ModularTree::Kind quotient_kind(const Structure& q) {
    int k = q.size;
    size_t e = q.tuples.at(kEdge).size();
    if (e == 0) return ModularTree::Edgeless;
    if (e == static_cast<size_t>(k * (k - 1))) return ModularTree::Complete;
    if (e == static_cast<size_t>(k * (k - 1) / 2)) {
        std::vector<int> outdeg(k, 0);
        for (auto& t : q.tuples.at(kEdge)) {
            if (q.has(kEdge, {t[1], t[0]})) return ModularTree::Prime;
            ++outdeg[t[0]];
        }
        std::sort(outdeg.begin(), outdeg.end());
        for (int i = 0; i < k; ++i)
            if (outdeg[i] != i) return ModularTree::Prime;
        return ModularTree::Linear;
    }
    return ModularTree::Prime;
}

ModularTree build(const Structure& g, VertexSet s, const std::vector<VertexSet>& strong) {
    ModularTree t;
    t.module = s;
    if (std::popcount(s) == 1) {
        t.vertex = lowest(s);
        t.loop = g.has(kEdge, {t.vertex, t.vertex});
        return t;
    }
    auto kids = maximal_inside(s, strong);
    std::vector<int> reps;
    for (VertexSet k : kids) {
        reps.push_back(lowest(k));
        t.kids.push_back(build(g, k, strong));
    }
    t.quotient = Structure(Sort::graph(), static_cast<int>(reps.size()));
    for (size_t i = 0; i < reps.size(); ++i)
        for (size_t j = 0; j < reps.size(); ++j)
            if (i != j && g.has(kEdge, {reps[i], reps[j]})) t.quotient.add(kEdge, {static_cast<int>(i), static_cast<int>(j)});
    t.kind = quotient_kind(t.quotient);
    return t;
}

}  // namespace

std::vector<VertexSet> find_strong_modules(const Structure& g) {
    auto strong = strong_modules(g);
    if (g.size < 2) return strong;
    return maximal_inside(Adj(g).all(), strong);
}

std::string kind_name(ModularTree::Kind k) {
    switch (k) {
        case ModularTree::Leaf: return "leaf";
        case ModularTree::Prime: return "prime";
        case ModularTree::Complete: return "complete";
        case ModularTree::Edgeless: return "edgeless";
        case ModularTree::Linear: return "linear";
    }
    return "?";
}

ModularTree modular_decomposition(const Structure& g) {
    if (g.size < 1) throw SortError("modular decomposition needs at least one vertex");
    auto strong = strong_modules(g);
    return build(g, Adj(g).all(), strong);
}

Structure evaluate_tree(const ModularTree& t) {
    if (t.kind == ModularTree::Leaf) return single_vertex(t.loop);
    std::vector<Structure> parts;
    for (auto& k : t.kids) parts.push_back(evaluate_tree(k));
    return modular_compose(t.quotient, parts);
}

TermPtr tree_term(const ModularTree& t) {
    if (t.kind == ModularTree::Leaf) return t_op(t.loop ? "v-loop" : "v", {}, {});
    OpSym op;
    op.head = "modular";
    op.labels = {std::to_string(t.kids.size())};
    op.has_pairs = true;
    for (auto& e : t.quotient.tuples.at(kEdge)) op.pairs.push_back({std::to_string(e[0] + 1), std::to_string(e[1] + 1)});
    std::vector<TermPtr> kids;
    for (auto& k : t.kids) kids.push_back(tree_term(k));
    return make_term(op, kids);
}

bool is_prime(const Structure& g) {
    Adj a(g);
    if (a.n < 2) return false;
    for (int u = 0; u < a.n; ++u)
        for (int v = u + 1; v < a.n; ++v)
            if (a.closure(1u << u | 1u << v) != a.all()) return false;
    return true;
}

namespace {

Structure strip_loops(const Structure& g) {
    Structure out(g.sort, g.size);
    for (auto& e : g.tuples.at(kEdge))
        if (e[0] != e[1]) out.add(kEdge, e);
    return out;
}

bool all_in_F(const ModularTree& t, const std::vector<Structure>& F) {
    if (t.kind == ModularTree::Leaf) return true;
    Structure q = t.quotient;
    switch (t.kind) {
        case ModularTree::Complete: q = complete_graph(2); break;
        case ModularTree::Edgeless: q = Structure(Sort::graph(), 2); break;
        case ModularTree::Linear: q = make_graph(2, {{0, 1}}); break;
        default: break;
    }
    if (std::none_of(F.begin(), F.end(), [&](const Structure& h) { return isomorphic(h, q); })) return false;
    return std::all_of(t.kids.begin(), t.kids.end(), [&](const ModularTree& k) { return all_in_F(k, F); });
}

}  // namespace

bool is_F_graph(const Structure& g, const std::vector<Structure>& F) {
    std::vector<Structure> fs;
    for (auto& h : F) {
        if (!is_prime(h)) throw SortError("is_F_graph: member of F is not prime");
        fs.push_back(strip_loops(h));
    }
    return all_in_F(modular_decomposition(g), fs);
}

}  // namespace graft
