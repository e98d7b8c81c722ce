#include <algorithm>
#include <deque>
#include <unordered_set>

#include "graft/error.hpp"
#include "graft/terms.hpp"

namespace graft {

TermPtr clique_term(int n) {
    if (n < 1) throw SortError("clique_term needs n >= 1");
    TermPtr k = t_op("port", {"p"}, {});
    for (int i = 1; i < n; ++i) {
        TermPtr u = t_op("oplus", {}, {k, t_op("port", {"q"}, {})});
        u = t_op("add", {"q", "p"}, {t_op("add", {"p", "q"}, {u})});
        k = t_op("ren", {"q", "p"}, {u});
    }
    return k;
}

TermPtr path_term(int n) {
    if (n < 0) throw SortError("path_term needs n >= 0");
    TermPtr t = t_op("add", {"a", "b"}, {t_op("oplus", {}, {t_op("port", {"a"}, {}), t_op("port", {"b"}, {})})});
    for (int i = 0; i < n; ++i) {
        TermPtr u = t_op("add", {"b", "c"}, {t_op("oplus", {}, {t, t_op("port", {"c"}, {})})});
        t = t_op("ren", {"c", "b"}, {t_op("ren", {"b", "a"}, {u})});
    }
    return t_pairs("mdf", {}, {t});
}

// ---------------------------------------------------------------------------------------
// ECON

namespace {

void need_plain(const Structure& g) {
    if (g.sort != Sort::graph()) throw SortError("ECON works on plain graphs, got " + g.sort.str());
}

}  // namespace

Structure econ_vertex(const Structure& g) {
    need_plain(g);
    std::vector<int> perm(g.size);
    for (int i = 0; i < g.size; ++i) perm[i] = i + 1;
    Structure out(g.sort, g.size + 1);
    for (auto& e : g.tuples.at(kEdge)) out.add(kEdge, {perm[e[0]], perm[e[1]]});
    return out;
}

Structure econ_edge(const Structure& g) {
    need_plain(g);
    if (g.size < 2) return g;
    Structure out = g;
    out.add(kEdge, {0, 1});
    out.add(kEdge, {1, 0});
    return out;
}

Structure econ_shift(const Structure& g) {
    need_plain(g);
    if (g.size < 2) return g;
    std::vector<int> perm(g.size);
    for (int i = 0; i < g.size; ++i) perm[i] = (i + g.size - 1) % g.size;
    return relabel(g, perm);
}

Structure econ_swap(const Structure& g) {
    need_plain(g);
    if (g.size < 2) return g;
    std::vector<int> perm(g.size);
    for (int i = 0; i < g.size; ++i) perm[i] = i;
    std::swap(perm[0], perm[1]);
    return relabel(g, perm);
}

EconSearch econ_search(int max_vertices) {
    if (max_vertices < 0) throw SortError("econ_search needs max_vertices >= 0");
    if (max_vertices > cap_or(6)) throw CapacityError("econ_search: " + std::to_string(max_vertices) + " vertices exceeds cap");
    EconSearch res;
    auto exact_key = [](const Structure& g) {
        std::string k = std::to_string(g.size) + ":";
        for (auto& e : g.tuples.at(kEdge)) k += std::to_string(e[0]) + "," + std::to_string(e[1]) + ";";
        return k;
    };
    std::unordered_set<std::string> seen;
    std::deque<std::pair<Structure, TermPtr>> queue;
    Structure zero(Sort::graph(), 0);
    queue.push_back({zero, t_op("econ-0", {}, {})});
    seen.insert(exact_key(zero));
    while (!queue.empty()) {
        auto [g, t] = queue.front();
        queue.pop_front();
        ++res.states;
        auto key = canonical_key(g);
        if (!res.reached.count(key)) res.reached[key] = t_op("econ-forget", {}, {t});
        std::vector<std::pair<std::string, Structure>> next;
        if (g.size < max_vertices) next.push_back({"econ-vertex", econ_vertex(g)});
        next.push_back({"econ-edge", econ_edge(g)});
        next.push_back({"econ-shift", econ_shift(g)});
        next.push_back({"econ-swap", econ_swap(g)});
        for (auto& [op, h] : next)
            if (seen.insert(exact_key(h)).second) queue.push_back({h, t_op(op, {}, {t})});
    }
    return res;
}

// ---------------------------------------------------------------------------------------
// exact clique-width over VR^π
//
// A state is a vertex set X with a partition of X into at most k blocks (the port
// classes). Edges are added as soon as they are allowed, so the graph of a state is
// always g[X]. Two disjoint states combine by oplus, with some blocks sharing labels.

namespace {

using Mask = unsigned;
using Partition = std::vector<Mask>;  // sorted block masks

struct CwdSearch {
    int n;
    int k;
    std::vector<Mask> out;  // out[u]: successors of u
    std::vector<std::set<Partition>> states;

    bool all_edges(Mask a, Mask b) const {
        for (int u = 0; u < n; ++u)
            if (a >> u & 1)
                if ((out[u] & b) != b) return false;
        return true;
    }
    bool any_edge(Mask a, Mask b) const {
        for (int u = 0; u < n; ++u)
            if (a >> u & 1)
                if (out[u] & b) return true;
        return false;
    }

    // g[X1 ∪ X2] is produced from the partition iff every cross edge lies between two
    // distinct blocks that are completely joined in that direction.
    bool valid(const Partition& p, Mask x1, Mask x2) const {
        for (Mask b : p) {
            Mask l = b & x1, r = b & x2;
            if (l && r && (any_edge(l, r) || any_edge(r, l))) return false;
        }
        for (Mask b1 : p)
            for (Mask b2 : p) {
                if (b1 == b2) continue;
                if ((any_edge(b1 & x1, b2 & x2) || any_edge(b1 & x2, b2 & x1)) && !all_edges(b1, b2)) return false;
            }
        return true;
    }

    void close_and_insert(Partition p, std::set<Partition>& into) {
        std::sort(p.begin(), p.end());
        if (!into.insert(p).second) return;
        for (size_t i = 0; i < p.size(); ++i)
            for (size_t j = i + 1; j < p.size(); ++j) {
                Partition q;
                for (size_t m = 0; m < p.size(); ++m)
                    if (m != i && m != j) q.push_back(p[m]);
                q.push_back(p[i] | p[j]);
                close_and_insert(q, into);
            }
    }

    // All partial matchings between blocks of p1 and p2.
    void matchings(const Partition& p1, const Partition& p2, size_t i, Mask used, Partition& cur, Mask x1, Mask x2,
                   std::set<Partition>& into) {
        if (i == p1.size()) {
            Partition q = cur;
            for (size_t j = 0; j < p2.size(); ++j)
                if (!(used >> j & 1)) q.push_back(p2[j]);
            if (static_cast<int>(q.size()) <= k && valid(q, x1, x2)) close_and_insert(q, into);
            return;
        }
        cur.push_back(p1[i]);
        matchings(p1, p2, i + 1, used, cur, x1, x2, into);
        cur.pop_back();
        for (size_t j = 0; j < p2.size(); ++j) {
            if (used >> j & 1) continue;
            cur.push_back(p1[i] | p2[j]);
            matchings(p1, p2, i + 1, used | 1u << j, cur, x1, x2, into);
            cur.pop_back();
        }
    }

    bool run() {
        Mask full = (1u << n) - 1;
        states.assign(full + 1, {});
        std::vector<Mask> order;
        for (Mask x = 1; x <= full; ++x) order.push_back(x);
        std::sort(order.begin(), order.end(),
                  [](Mask a, Mask b) { return std::popcount(a) != std::popcount(b) ? std::popcount(a) < std::popcount(b) : a < b; });
        for (Mask x : order) {
            if (std::popcount(x) == 1) {
                states[x].insert({x});
                continue;
            }
            Mask low = x & -x;
            // x1 holds the least vertex of x, so each split is seen once
            for (Mask x1 = (x - 1) & x; x1; x1 = (x1 - 1) & x) {
                if (!(x1 & low)) continue;
                Mask x2 = x & ~x1;
                for (auto& p1 : states[x1])
                    for (auto& p2 : states[x2]) {
                        Partition cur;
                        matchings(p1, p2, 0, 0, cur, x1, x2, states[x]);
                    }
            }
            if (x == full) return !states[x].empty();
        }
        return !states[full].empty();
    }
};

}  // namespace

std::optional<int> cwd_exact(const Structure& g, int max_k, int cap) {
    if (g.sort != Sort::graph()) throw SortError("cwd_exact needs a graph without ports or sources, got " + g.sort.str());
    int limit = cap < 0 ? cap_or(7) : cap;
    if (g.size > limit) throw CapacityError("cwd_exact: " + std::to_string(g.size) + " vertices exceeds cap " + std::to_string(limit));
    if (g.size == 0) return 0;
    CwdSearch s;
    s.n = g.size;
    s.out.assign(g.size, 0);
    for (auto& e : g.tuples.at(kEdge))
        if (e[0] != e[1]) s.out[e[0]] |= 1u << e[1];
    for (int k = 1; k <= max_k; ++k) {
        s.k = k;
        if (s.run()) return k;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------------------
// random terms

namespace {

struct Gen {
    const RandomTermSpec& spec;
    Rng& rng;
    std::vector<std::string> leaves, unary, binary;

    const Label& pick(const std::vector<Label>& xs) { return xs[uniform_int(rng, 0, static_cast<int>(xs.size()) - 1)]; }

    std::vector<std::pair<Label, Label>> pick_pairs(const std::vector<Label>& xs, int max) {
        std::vector<std::pair<Label, Label>> out;
        int m = uniform_int(rng, 0, max);
        for (int i = 0; i < m; ++i) out.push_back({pick(xs), pick(xs)});
        return out;
    }

    OpSym payload(const std::string& head) {
        OpSym op;
        op.head = head;
        const auto& L = spec.labels;
        const auto& P = spec.ports;
        if (head == "src" || head == "src-loop" || head == "srcfg") op.labels = {pick(L)};
        else if (head == "edge" || head == "srcren" || head == "fus" || head == "fus-to" || head == "mfus")
            op.labels = {pick(L), pick(L)};
        else if (head == "port" || head == "port-loop" || head == "fg" || head == "mark") op.labels = {pick(P)};
        else if (head == "add" || head == "ren") op.labels = {pick(P), pick(P)};
        else if (head == "mdf") {
            op.has_pairs = true;
            op.pairs = pick_pairs(P, 2);
        } else if (head == "otimes") {
            op.has_pairs = true;
            op.pairs = pick_pairs(P, 2);
        } else if (head == "del" || head == "fusrel") {
            op.has_pairs = true;
            op.pairs = pick_pairs(L, 1);
        }
        return op;
    }

    bool typed(const TermPtr& t, Sig sig) {
        try {
            typecheck_term(t, sig);
            return true;
        } catch (const SortError&) {
            return false;
        }
    }

    TermPtr leaf() {
        for (;;) {
            auto t = make_term(payload(leaves[uniform_int(rng, 0, static_cast<int>(leaves.size()) - 1)]));
            if (typed(t, spec.sig)) return t;
        }
    }

    TermPtr decorate(TermPtr t) {
        while (!unary.empty() && coin(rng, spec.unary_p)) {
            bool done = false;
            for (int i = 0; i < 10 && !done; ++i) {
                auto u = make_term(payload(pick(unary)), {t});
                if (typed(u, spec.sig)) {
                    t = u;
                    done = true;
                }
            }
            if (!done) break;
        }
        return t;
    }

    TermPtr gen(int n) {
        if (n <= 1 || binary.empty()) return decorate(leaf());
        for (int round = 0; round < 8; ++round) {
            int n1 = uniform_int(rng, 1, n - 1);
            auto l = gen(n1), r = gen(n - n1);
            for (int i = 0; i < 12; ++i) {
                auto t = make_term(payload(pick(binary)), {l, r});
                if (typed(t, spec.sig)) return decorate(t);
            }
        }
        return decorate(leaf());
    }

    TermPtr gen_modular(int n) {
        if (n <= 1) return make_term(payload(coin(rng, 0.8) ? "v" : "v-loop"));
        int parts = uniform_int(rng, 2, std::min(n, 3));
        std::vector<int> sizes(parts, 1);
        for (int i = parts; i < n; ++i) ++sizes[uniform_int(rng, 0, parts - 1)];
        OpSym op;
        op.head = "modular";
        op.labels = {std::to_string(parts)};
        op.has_pairs = true;
        for (int i = 1; i <= parts; ++i)
            for (int j = 1; j <= parts; ++j)
                if (i != j && coin(rng)) op.pairs.push_back({std::to_string(i), std::to_string(j)});
        std::vector<TermPtr> kids;
        for (int s : sizes) kids.push_back(gen_modular(s));
        return make_term(op, kids);
    }

    TermPtr gen_econ(int n) {
        TermPtr t = t_op("econ-0", {}, {});
        static const std::vector<std::string> ops{"econ-vertex", "econ-edge", "econ-shift", "econ-swap"};
        for (int i = 0; i < n; ++i) t = t_op(pick(ops), {}, {t});
        return t_op("econ-forget", {}, {t});
    }
};

const std::set<std::string> kPortWorld{"oplus", "add", "ren", "fg", "mdf", "mark", "otimes", "port", "port-loop", "v", "v-loop"};

}  // namespace

TermPtr random_term(const RandomTermSpec& spec, Rng& rng) {
    if (spec.labels.empty() || spec.ports.empty()) throw SortError("random_term needs labels and ports");
    Gen g{spec, rng, {}, {}, {}};
    if (spec.sig == Sig::MODULAR) return g.gen_modular(std::max(1, spec.leaves));
    if (spec.sig == Sig::ECON) return g.gen_econ(std::max(0, spec.leaves));
    // S mixes two kinds of terms; pick one per term
    int world = spec.sig == Sig::S ? uniform_int(rng, 0, 1) : -1;
    for (auto& h : sig_heads(spec.sig)) {
        if (h == "hole" || h == "apply-scheme" || h == "modular") continue;
        if (world == 0 && !kPortWorld.count(h)) continue;
        if (world == 1 && kPortWorld.count(h) && h != "oplus" && h != "v" && h != "v-loop") continue;
        OpSym op;
        op.head = h;
        int a = op.arity();
        if (a == 0) g.leaves.push_back(h);
        else if (a == 1) g.unary.push_back(h);
        else g.binary.push_back(h);
    }
    return g.gen(std::max(1, spec.leaves));
}

}  // namespace graft
