#include "graft/hintikka.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>

#include "graft/error.hpp"

namespace graft {

namespace {

uint64_t mix(uint64_t h) {
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebULL;
    h ^= h >> 31;
    return h;
}

std::string digest_of(const std::string& key) {
    uint64_t a = 0xcbf29ce484222325ULL, b = 0x84222325cbf29ce4ULL;
    for (unsigned char ch : key) {
        a = (a ^ ch) * 0x100000001b3ULL;
        b = mix(b ^ ch) + 0x9e3779b97f4a7c15ULL;
    }
    a = mix(a ^ key.size());
    b = mix(b + key.size());
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (uint64_t v : {a, b})
        for (int i = 60; i >= 0; i -= 4) out += hex[(v >> i) & 15];
    return out;
}

// Positions of atoms in the bit string for a sort and a number of parameters.
struct Layout {
    int p = 0, t = 0;
    std::vector<Label> consts;
    std::map<std::string, std::pair<int, int>> rel;  // relation -> (offset, arity)
    int eq_count = 0, total = 0;

    Layout(const Sort& s, int params) : p(params) {
        consts.assign(s.constants.begin(), s.constants.end());
        t = p + static_cast<int>(consts.size());
        eq_count = t * (t - 1) / 2;
        int off = eq_count;
        for (auto& [r, k] : s.relations) {
            rel[r] = {off, k};
            int n = 1;
            for (int i = 0; i < k; ++i) n *= t;
            off += n;
        }
        total = off;
    }
    int eq(int i, int j) const {
        if (i > j) std::swap(i, j);
        // pairs (i,j), i<j, in lexicographic order
        return i * t - i * (i + 1) / 2 + (j - i - 1);
    }
    int relation(const std::string& r, const std::vector<int>& args) const {
        auto it = rel.find(r);
        if (it == rel.end()) return -1;
        int idx = 0;
        for (int a : args) idx = idx * t + a;
        return it->second.first + idx;
    }
    int const_index(const Label& c) const {
        auto it = std::lower_bound(consts.begin(), consts.end(), c);
        if (it == consts.end() || *it != c) throw SortError("unknown constant '" + c + "'");
        return p + static_cast<int>(it - consts.begin());
    }
};

void sort_kids(std::vector<HType>& kids) {
    std::sort(kids.begin(), kids.end(), [](const HType& a, const HType& b) { return a->digest < b->digest; });
    kids.erase(std::unique(kids.begin(), kids.end(), [](const HType& a, const HType& b) { return a->digest == b->digest; }),
               kids.end());
}

// Evaluation inside a type; env maps variables to parameter indices.
bool eval_on(const HNode& n, const Formula& f, std::map<std::string, int>& env) {
    auto term = [&](const LTerm& x) -> int {
        if (x.is_const) return Layout(n.sort, n.nparams).const_index(x.name);
        auto it = env.find(x.name);
        if (it == env.end()) throw SortError("unbound variable '" + x.name + "'");
        return it->second;
    };
    switch (f->kind) {
        case FKind::True: return true;
        case FKind::False: return false;
        case FKind::Prop: throw SortError("proposition in a first-order formula");
        case FKind::Eq: {
            int i = term(f->args[0]), j = term(f->args[1]);
            if (i == j) return true;
            return n.atoms[Layout(n.sort, n.nparams).eq(i, j)] == '1';
        }
        case FKind::Rel: {
            if (!n.sort.has_relation(f->name)) throw SortError("unknown relation '" + f->name + "'");
            std::vector<int> args;
            for (auto& x : f->args) args.push_back(term(x));
            return n.atoms[Layout(n.sort, n.nparams).relation(f->name, args)] == '1';
        }
        case FKind::Not: return !eval_on(n, f->kids[0], env);
        case FKind::And:
            for (auto& k : f->kids)
                if (!eval_on(n, k, env)) return false;
            return true;
        case FKind::Or:
            for (auto& k : f->kids)
                if (eval_on(n, k, env)) return true;
            return false;
        case FKind::Exists:
        case FKind::Forall: {
            if (n.depth == 0) throw SortError("formula deeper than the type");
            bool want = f->kind == FKind::Exists;
            auto saved = env.count(f->name) ? std::optional<int>(env[f->name]) : std::nullopt;
            env[f->name] = n.nparams;
            bool result = !want;
            for (auto& k : n.kids)
                if (eval_on(*k, f->kids[0], env) == want) {
                    result = want;
                    break;
                }
            if (saved)
                env[f->name] = *saved;
            else
                env.erase(f->name);
            return result;
        }
    }
    return false;
}

}  // namespace

HType make_hnode(const Sort& sort, int depth, int nparams, std::string atoms, std::vector<HType> kids) {
    sort_kids(kids);
    std::string key = sort.str() + "|" + std::to_string(depth) + "|" + std::to_string(nparams) + "|" + atoms + "|";
    for (auto& k : kids) key += k->digest;
    auto n = std::make_shared<HNode>();
    n->sort = sort;
    n->depth = depth;
    n->nparams = nparams;
    n->atoms = std::move(atoms);
    n->kids = std::move(kids);
    n->digest = digest_of(key);
    return n;
}

bool same_type(const HType& a, const HType& b) { return a->digest == b->digest; }

HType fo_theory(const Structure& s, int d, const std::vector<int>& params) {
    if (d < 0) throw SortError("fo_theory: negative depth");
    std::vector<Layout> layouts;
    for (int i = 0; i <= d; ++i) layouts.emplace_back(s.sort, static_cast<int>(params.size()) + i);
    std::vector<int> vals = params;
    std::function<HType(int)> rec = [&](int depth) -> HType {
        const Layout& L = layouts[vals.size() - params.size()];
        std::vector<int> tv = vals;
        for (auto& c : L.consts) tv.push_back(s.source(c));
        std::string atoms(L.total, '0');
        for (int i = 0; i < L.t; ++i)
            for (int j = i + 1; j < L.t; ++j)
                if (tv[i] == tv[j]) atoms[L.eq(i, j)] = '1';
        for (auto& [r, ts] : s.tuples) {
            auto [off, k] = L.rel.at(r);
            std::vector<int> idx(k, 0);
            if (L.t == 0) continue;
            while (true) {
                Tuple tup;
                for (int x : idx) tup.push_back(tv[x]);
                if (ts.count(tup)) atoms[L.relation(r, idx)] = '1';
                int pp = k - 1;
                while (pp >= 0 && ++idx[pp] == L.t) idx[pp--] = 0;
                if (pp < 0) break;
            }
        }
        std::vector<HType> kids;
        if (depth > 0)
            for (int v = 0; v < s.size; ++v) {
                vals.push_back(v);
                kids.push_back(rec(depth - 1));
                vals.pop_back();
            }
        return make_hnode(s.sort, depth, L.p, std::move(atoms), std::move(kids));
    };
    return rec(d);
}

HType project(const HType& t, int d) {
    if (d > t->depth) throw SortError("project: depth exceeds the type");
    if (d == t->depth) return t;
    std::vector<HType> kids;
    if (d > 0)
        for (auto& k : t->kids) kids.push_back(project(k, d - 1));
    return make_hnode(t->sort, d, t->nparams, t->atoms, std::move(kids));
}

HType theory_oplus(const HType& a, const HType& b) {
    if (a->depth != b->depth) throw SortError("theory_oplus: depth mismatch");
    if (a->nparams || b->nparams) throw SortError("theory_oplus: types of sentences expected");
    for (auto& c : a->sort.constants)
        if (b->sort.has_constant(c)) throw SortError("theory_oplus: constant '" + c + "' on both sides");
    Sort joint;
    joint.relations = merge_relations(a->sort.relations, b->sort.relations);
    joint.constants = a->sort.constants;
    joint.constants.insert(b->sort.constants.begin(), b->sort.constants.end());

    std::map<std::string, HType> memo;
    std::map<std::string, HType> proj_memo;
    auto proj = [&](const HType& t) {
        auto key = t->digest;
        auto it = proj_memo.find(key);
        if (it == proj_memo.end()) it = proj_memo.emplace(key, project(t, t->depth - 1)).first;
        return it->second;
    };
    std::function<HType(const HType&, const HType&, const std::string&)> combine =
        [&](const HType& x, const HType& y, const std::string& sides) -> HType {
        std::string key = x->digest + y->digest + sides;
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        int p = static_cast<int>(sides.size());
        Layout L(joint, p), LA(x->sort, x->nparams), LB(y->sort, y->nparams);
        // side and local index of each joint term
        std::vector<std::pair<int, int>> loc;
        int na = 0, nb = 0;
        for (char ch : sides) loc.push_back(ch == '0' ? std::make_pair(0, na++) : std::make_pair(1, nb++));
        for (auto& c : L.consts)
            loc.push_back(x->sort.has_constant(c) ? std::make_pair(0, LA.const_index(c))
                                                   : std::make_pair(1, LB.const_index(c)));
        std::string atoms(L.total, '0');
        for (int i = 0; i < L.t; ++i)
            for (int j = i + 1; j < L.t; ++j) {
                if (loc[i].first != loc[j].first) continue;
                const HNode& side = loc[i].first == 0 ? *x : *y;
                const Layout& SL = loc[i].first == 0 ? LA : LB;
                atoms[L.eq(i, j)] = side.atoms[SL.eq(loc[i].second, loc[j].second)];
            }
        for (auto& [r, ok] : L.rel) {
            int k = ok.second;
            if (L.t == 0) continue;
            std::vector<int> idx(k, 0);
            while (true) {
                int s = loc[idx[0]].first;
                bool same = true;
                for (int v : idx) same = same && loc[v].first == s;
                if (same) {
                    const HNode& side = s == 0 ? *x : *y;
                    const Layout& SL = s == 0 ? LA : LB;
                    if (side.sort.has_relation(r)) {
                        std::vector<int> local;
                        for (int v : idx) local.push_back(loc[v].second);
                        atoms[L.relation(r, idx)] = side.atoms[SL.relation(r, local)];
                    }
                }
                int pp = k - 1;
                while (pp >= 0 && ++idx[pp] == L.t) idx[pp--] = 0;
                if (pp < 0) break;
            }
        }
        std::vector<HType> kids;
        if (x->depth > 0) {
            if (!x->kids.empty()) {
                HType py = proj(y);
                for (auto& k : x->kids) kids.push_back(combine(k, py, sides + "0"));
            }
            if (!y->kids.empty()) {
                HType px = proj(x);
                for (auto& k : y->kids) kids.push_back(combine(px, k, sides + "1"));
            }
        }
        HType out = make_hnode(joint, x->depth, p, std::move(atoms), std::move(kids));
        memo.emplace(key, out);
        return out;
    };
    return combine(a, b, "");
}

HType theory_qfd(const QfdScheme& g, const HType& t, int d) {
    if (t->sort != g.in) throw SortError("theory_qfd: type of sort " + t->sort.str() + ", scheme expects " + g.in.str());
    if (t->nparams) throw SortError("theory_qfd: type of a sentence expected");
    if (d > t->depth) throw SortError("theory_qfd: requested depth exceeds the type");
    HType root = project(t, d);
    std::vector<Label> outc(g.out.constants.begin(), g.out.constants.end());
    std::vector<Label> inc(g.in.constants.begin(), g.in.constants.end());

    std::function<HType(const HType&)> rec = [&](const HType& n) -> HType {
        int p = n->nparams;
        std::map<std::string, int> env0;
        // output term -> input term (param index, or constant name)
        std::vector<LTerm> terms;
        std::map<std::string, int> env;
        for (int i = 0; i < p; ++i) {
            std::string v = "#" + std::to_string(i);
            terms.push_back(LTerm::var(v));
            env[v] = i;
        }
        for (auto& dname : outc) {
            const Label* found = nullptr;
            for (auto& c : inc)
                if (eval_on(*n, g.kap(c, dname), env0)) {
                    found = &c;
                    break;
                }
            if (!found) throw SortError("theory_qfd: no kappa holds for '" + dname + "'");
            terms.push_back(LTerm::cst(*found));
        }
        Layout L(g.out, p);
        std::string atoms(L.total, '0');
        for (int i = 0; i < L.t; ++i)
            for (int j = i + 1; j < L.t; ++j)
                if (eval_on(*n, f_eq(terms[i], terms[j]), env)) atoms[L.eq(i, j)] = '1';
        for (auto& [r, ok] : L.rel) {
            int k = ok.second;
            if (L.t == 0) continue;
            const Formula& phi = g.phi_of(r);
            std::vector<int> idx(k, 0);
            while (true) {
                std::map<std::string, LTerm> sub;
                for (int i = 0; i < k; ++i) sub[var_name(i + 1)] = terms[idx[i]];
                if (eval_on(*n, substitute(phi, sub), env)) atoms[L.relation(r, idx)] = '1';
                int pp = k - 1;
                while (pp >= 0 && ++idx[pp] == L.t) idx[pp--] = 0;
                if (pp < 0) break;
            }
        }
        std::vector<HType> kids;
        if (n->depth > 0) {
            std::map<std::string, int> kenv{{kDeltaVar, p}};
            for (auto& k : n->kids)
                if (eval_on(*k, g.delta, kenv)) kids.push_back(rec(k));
        }
        return make_hnode(g.out, n->depth, p, std::move(atoms), std::move(kids));
    };
    return rec(root);
}

bool type_satisfies(const HType& t, const Formula& f, const std::map<std::string, int>& env) {
    if (qdepth(f) > t->depth) throw SortError("type_satisfies: formula deeper than the type");
    auto work = env;
    return eval_on(*t, f, work);
}

Formula backward_translate(const QfdScheme& g, const Formula& f) {
    switch (f->kind) {
        case FKind::True:
        case FKind::False: return f;
        case FKind::Eq:
        case FKind::Rel: return translate_qf(g, f);
        case FKind::Prop: throw SortError("backward_translate: proposition in formula");
        case FKind::Not: return f_not(backward_translate(g, f->kids[0]));
        case FKind::And:
        case FKind::Or: {
            std::vector<Formula> ks;
            for (auto& k : f->kids) ks.push_back(backward_translate(g, k));
            return f->kind == FKind::And ? f_and(std::move(ks)) : f_or(std::move(ks));
        }
        case FKind::Exists:
        case FKind::Forall: {
            Formula dx = substitute(g.delta, {{kDeltaVar, LTerm::var(f->name)}});
            Formula body = backward_translate(g, f->kids[0]);
            return f->kind == FKind::Exists ? f_exists(f->name, f_and(dx, body))
                                            : f_forall(f->name, f_or(f_not(dx), body));
        }
    }
    return f;
}

std::string type_text(const HType& t) {
    std::string s = "(" + std::to_string(t->depth) + " " + std::to_string(t->nparams) + " " +
                    (t->atoms.empty() ? "-" : t->atoms);
    for (auto& k : t->kids) s += " " + type_text(k);
    return s + ")";
}

size_t type_count_nodes(const HType& t) {
    size_t n = 1;
    for (auto& k : t->kids) n += type_count_nodes(k);
    return n;
}

}  // namespace graft
