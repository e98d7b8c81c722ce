#include "graft/logic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "graft/error.hpp"

namespace graft {

// ---------------------------------------------------------------- evaluation

namespace {

int term_value(const Structure& s, const LTerm& t, const Assignment& a) {
    if (t.is_const) return s.source(t.name);
    auto it = a.find(t.name);
    if (it == a.end()) throw SortError("unassigned variable '" + t.name + "'");
    return it->second;
}

bool eval_rec(const Structure& s, const Formula& f, Assignment& a) {
    switch (f->kind) {
        case FKind::True: return true;
        case FKind::False: return false;
        case FKind::Prop: throw SortError("proposition '" + f->name + "' in a first-order formula");
        case FKind::Eq: return term_value(s, f->args[0], a) == term_value(s, f->args[1], a);
        case FKind::Rel: {
            if (s.sort.arity(f->name) != static_cast<int>(f->args.size()))
                throw SortError("arity mismatch for '" + f->name + "'");
            Tuple t;
            for (auto& x : f->args) t.push_back(term_value(s, x, a));
            return s.has(f->name, t);
        }
        case FKind::Not: return !eval_rec(s, f->kids[0], a);
        case FKind::And:
            for (auto& k : f->kids)
                if (!eval_rec(s, k, a)) return false;
            return true;
        case FKind::Or:
            for (auto& k : f->kids)
                if (eval_rec(s, k, a)) return true;
            return false;
        case FKind::Exists:
        case FKind::Forall: {
            bool want = f->kind == FKind::Exists;
            auto saved = a.find(f->name) != a.end() ? std::optional<int>(a[f->name]) : std::nullopt;
            bool result = !want;
            for (int v = 0; v < s.size; ++v) {
                a[f->name] = v;
                if (eval_rec(s, f->kids[0], a) == want) {
                    result = want;
                    break;
                }
            }
            if (saved)
                a[f->name] = *saved;
            else
                a.erase(f->name);
            return result;
        }
    }
    return false;
}

}  // namespace

bool eval(const Structure& s, const Formula& f, const Assignment& a) {
    Assignment work = a;
    return eval_rec(s, f, work);
}

bool eval_bool(const Formula& f, const std::map<std::string, bool>& val) {
    switch (f->kind) {
        case FKind::True: return true;
        case FKind::False: return false;
        case FKind::Prop: {
            auto it = val.find(f->name);
            if (it == val.end()) throw SortError("unvalued proposition '" + f->name + "'");
            return it->second;
        }
        case FKind::Not: return !eval_bool(f->kids[0], val);
        case FKind::And:
            for (auto& k : f->kids)
                if (!eval_bool(k, val)) return false;
            return true;
        case FKind::Or:
            for (auto& k : f->kids)
                if (eval_bool(k, val)) return true;
            return false;
        default: throw SortError("not a propositional formula: " + print_formula(f));
    }
}

// ---------------------------------------------------------------- propositional core

namespace {

// Compact propositional formula: leaves are indexed variables.
struct PNode {
    enum Kind { T, F, Var, Not, And, Or } kind;
    int var = -1;
    std::vector<PNode> kids;
};

PNode to_pnode(const Formula& f, const std::function<PNode(const Formula&)>& leaf) {
    switch (f->kind) {
        case FKind::True: return {PNode::T};
        case FKind::False: return {PNode::F};
        case FKind::Not: return {PNode::Not, -1, {to_pnode(f->kids[0], leaf)}};
        case FKind::And:
        case FKind::Or: {
            PNode n{f->kind == FKind::And ? PNode::And : PNode::Or};
            for (auto& k : f->kids) n.kids.push_back(to_pnode(k, leaf));
            return n;
        }
        case FKind::Exists:
        case FKind::Forall: throw SortError("quantifier in a quantifier-free position");
        default: return leaf(f);
    }
}

bool peval(const PNode& n, uint32_t bits) {
    switch (n.kind) {
        case PNode::T: return true;
        case PNode::F: return false;
        case PNode::Var: return (bits >> n.var) & 1u;
        case PNode::Not: return !peval(n.kids[0], bits);
        case PNode::And:
            for (auto& k : n.kids)
                if (!peval(k, bits)) return false;
            return true;
        case PNode::Or:
            for (auto& k : n.kids)
                if (peval(k, bits)) return true;
            return false;
    }
    return false;
}

// Three-valued evaluation: 0 false, 1 true, 2 unknown.
int peval3(const PNode& n, const std::vector<int8_t>& val) {
    switch (n.kind) {
        case PNode::T: return 1;
        case PNode::F: return 0;
        case PNode::Var: return val[n.var] < 0 ? 2 : val[n.var];
        case PNode::Not: {
            int v = peval3(n.kids[0], val);
            return v == 2 ? 2 : 1 - v;
        }
        case PNode::And:
        case PNode::Or: {
            int absorb = n.kind == PNode::And ? 0 : 1;
            bool unknown = false;
            for (auto& k : n.kids) {
                int v = peval3(k, val);
                if (v == absorb) return absorb;
                if (v == 2) unknown = true;
            }
            return unknown ? 2 : 1 - absorb;
        }
    }
    return 2;
}

// Depth-first search for a falsifying valuation; val holds it on success.
bool find_falsifier(const PNode& n, std::vector<int8_t>& val, size_t next) {
    int v = peval3(n, val);
    if (v == 1) return false;
    if (v == 0) return true;
    while (next < val.size() && val[next] >= 0) ++next;
    if (next == val.size()) return false;  // cannot happen: all valued means not unknown
    for (int8_t b : {int8_t(0), int8_t(1)}) {
        val[next] = b;
        if (find_falsifier(n, val, next + 1)) return true;
    }
    val[next] = -1;
    return false;
}

// Orders names like p1 < p2 < p10 and falls back to plain string order.
bool natural_less(const std::string& a, const std::string& b) {
    auto split = [](const std::string& s) {
        size_t i = s.size();
        while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
        return std::pair<std::string, std::string>(s.substr(0, i), s.substr(i));
    };
    auto [pa, na] = split(a);
    auto [pb, nb] = split(b);
    if (pa != pb || na.empty() || nb.empty()) return a < b;
    if (na.size() != nb.size()) return na.size() < nb.size();
    return na < nb;
}

constexpr int kBoolCap = 14;

// Blake canonical form over props[0..n-1] for the given truth table.
Formula blake(const std::vector<char>& truth, const std::vector<Formula>& props) {
    int n = static_cast<int>(props.size());
    std::vector<int> pow3(n + 1, 1);
    for (int i = 1; i <= n; ++i) pow3[i] = pow3[i - 1] * 3;
    int total = pow3[n];
    std::vector<char> imp(total, 0);
    for (int c = 0; c < total; ++c) {
        int dash = -1, bits = 0;
        for (int i = 0, x = c; i < n; ++i, x /= 3) {
            int d = x % 3;
            if (d == 2) {
                dash = i;
                break;
            }
            bits |= d << i;
        }
        if (dash < 0)
            imp[c] = truth[bits];
        else
            imp[c] = imp[c - 2 * pow3[dash]] && imp[c - pow3[dash]];
    }
    std::vector<std::vector<std::pair<int, int>>> cubes;
    for (int c = 0; c < total; ++c) {
        if (!imp[c]) continue;
        bool prime = true;
        std::vector<std::pair<int, int>> lits;
        for (int i = 0, x = c; i < n; ++i, x /= 3) {
            int d = x % 3;
            if (d == 2) continue;
            lits.push_back({i, d});
            if (imp[c + (2 - d) * pow3[i]]) {
                prime = false;
                break;
            }
        }
        if (prime) cubes.push_back(std::move(lits));
    }
    std::sort(cubes.begin(), cubes.end());
    std::vector<Formula> disj;
    for (auto& cube : cubes) {
        if (cube.empty()) return f_true();
        std::vector<Formula> lits;
        for (auto [i, d] : cube) lits.push_back(d ? props[i] : f_not(props[i]));
        disj.push_back(f_and(std::move(lits)));
    }
    return f_or(std::move(disj));
}

}  // namespace

Formula normalize_bool(const Formula& f) {
    auto names = props_of(f);
    std::vector<std::string> order(names.begin(), names.end());
    std::sort(order.begin(), order.end(), natural_less);
    int n = static_cast<int>(order.size());
    if (n > kBoolCap) throw CapacityError("normalize_bool: more than " + std::to_string(kBoolCap) + " propositions");
    std::map<std::string, int> index;
    std::vector<Formula> props;
    for (int i = 0; i < n; ++i) {
        index[order[i]] = i;
        props.push_back(f_prop(order[i]));
    }
    PNode p = to_pnode(f, [&](const Formula& leaf) -> PNode {
        if (leaf->kind != FKind::Prop) throw SortError("normalize_bool: non-propositional atom " + print_formula(leaf));
        return {PNode::Var, index.at(leaf->name)};
    });
    std::vector<char> truth(size_t(1) << n);
    for (uint32_t b = 0; b < truth.size(); ++b) truth[b] = peval(p, b);
    return blake(truth, props);
}

// ---------------------------------------------------------------- reduced forms

namespace {

int cmp_terms(const std::vector<LTerm>& a, const std::vector<LTerm>& b) {
    for (size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (a[i] == b[i]) continue;
        return term_less(a[i], b[i]) ? -1 : 1;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

int atom_rank(const Formula& a) {
    switch (a->kind) {
        case FKind::Prop: return 0;
        case FKind::Eq: return 1;
        case FKind::Rel: return 2;
        default: return 3;
    }
}

// Replaces atoms by fresh propositions, normalizes, and substitutes back.
Formula normalize_components(const Formula& skeleton, const std::vector<Formula>& comps) {
    std::map<std::string, Formula> back;
    for (size_t i = 0; i < comps.size(); ++i) back["p" + std::to_string(i + 1)] = comps[i];
    Formula nb = normalize_bool(skeleton);
    return map_atoms(nb, [&](const Formula& leaf) {
        return leaf->kind == FKind::Prop ? back.at(leaf->name) : leaf;
    });
}

}  // namespace

bool atom_less(const Formula& a, const Formula& b) {
    int ra = atom_rank(a), rb = atom_rank(b);
    if (ra != rb) return ra < rb;
    if (a->name != b->name) return ra == 0 ? natural_less(a->name, b->name) : a->name < b->name;
    return cmp_terms(a->args, b->args) < 0;
}

Formula orient_atom(const Formula& a) {
    if (a->kind != FKind::Eq) return a;
    if (a->args[0] == a->args[1]) return f_true();
    if (term_less(a->args[1], a->args[0])) return f_eq(a->args[1], a->args[0]);
    return a;
}

namespace {

// Shared Boolean-layer reduction: `component` maps every maximal non-Boolean subformula to
// its reduced form (True/False allowed); atoms come first in atom order, the rest by print.
Formula reduce_layer(const Formula& f, const std::function<Formula(const Formula&)>& component) {
    std::vector<Formula> atoms, quants;
    std::map<std::string, std::string> name_of;
    std::map<std::string, Formula> reduced;  // print -> component
    std::map<const FNode*, Formula> memo;
    auto comp = [&](const Formula& g) {
        auto it = memo.find(g.get());
        if (it == memo.end()) it = memo.emplace(g.get(), component(g)).first;
        return it->second;
    };
    std::function<void(const Formula&)> collect = [&](const Formula& g) {
        switch (g->kind) {
            case FKind::True:
            case FKind::False: return;
            case FKind::Not:
            case FKind::And:
            case FKind::Or:
                for (auto& k : g->kids) collect(k);
                return;
            default: {
                Formula c = comp(g);
                if (c->kind == FKind::True || c->kind == FKind::False) return;
                auto key = print_formula(c);
                if (reduced.emplace(key, c).second) (is_atom(c) ? atoms : quants).push_back(c);
            }
        }
    };
    collect(f);
    std::sort(atoms.begin(), atoms.end(), atom_less);
    std::sort(quants.begin(), quants.end(),
              [](const Formula& a, const Formula& b) { return print_formula(a) < print_formula(b); });
    std::vector<Formula> comps = atoms;
    comps.insert(comps.end(), quants.begin(), quants.end());
    for (size_t i = 0; i < comps.size(); ++i) name_of[print_formula(comps[i])] = "p" + std::to_string(i + 1);
    std::function<Formula(const Formula&)> to_skel = [&](const Formula& g) -> Formula {
        switch (g->kind) {
            case FKind::True:
            case FKind::False: return g;
            case FKind::Not: return f_not(to_skel(g->kids[0]));
            case FKind::And:
            case FKind::Or: {
                std::vector<Formula> ks;
                for (auto& k : g->kids) ks.push_back(to_skel(k));
                return g->kind == FKind::And ? f_and(std::move(ks)) : f_or(std::move(ks));
            }
            default: {
                Formula c = comp(g);
                if (c->kind == FKind::True || c->kind == FKind::False) return c;
                return f_prop(name_of.at(print_formula(c)));
            }
        }
    };
    // Empty And/Or nodes from parsing are already True/False; f_and/f_or keep arity >= 2.
    return normalize_components(to_skel(f), comps);
}

Formula rename_terms(const Formula& atom, const std::map<std::string, std::string>& env) {
    if (atom->args.empty()) return atom;
    std::map<std::string, LTerm> vars;
    for (auto& a : atom->args)
        if (!a.is_const) {
            auto it = env.find(a.name);
            vars[a.name] = LTerm::var(it == env.end() ? a.name : it->second);
        }
    return substitute(atom, vars);
}

Formula elim_forall(const Formula& f) {
    if (f->kids.empty()) return f;
    if (f->kind == FKind::Forall) return f_not(f_exists(f->name, f_not(elim_forall(f->kids[0]))));
    std::vector<Formula> kids;
    for (auto& k : f->kids) kids.push_back(elim_forall(k));
    switch (f->kind) {
        case FKind::Not: return f_not(kids[0]);
        case FKind::And: return f_and(std::move(kids));
        case FKind::Or: return f_or(std::move(kids));
        case FKind::Exists: return f_exists(f->name, kids[0]);
        default: return f;
    }
}

Formula norm_fo(const Formula& f, const std::map<std::string, std::string>& env) {
    return reduce_layer(f, [&](const Formula& g) -> Formula {
        if (g->kind == FKind::Exists) {
            std::set<std::string> images;
            for (auto& v : free_vars(g)) {
                auto it = env.find(v);
                images.insert(it == env.end() ? v : it->second);
            }
            int j = 1;
            while (images.count(var_name(j))) ++j;
            auto inner = env;
            inner[g->name] = var_name(j);
            return f_exists(var_name(j), norm_fo(g->kids[0], inner));
        }
        return orient_atom(rename_terms(g, env));
    });
}

}  // namespace

Formula normalize_qf(const Formula& f) {
    if (!is_qf(f)) throw SortError("normalize_qf: quantifier found");
    return reduce_layer(f, [](const Formula& g) { return orient_atom(g); });
}

Formula normalize_qf(const Formula& f, const Sort& sort, const std::set<std::string>& vars) {
    if (!is_qf(f)) throw SortError("normalize_qf: quantifier found");
    check_formula(f, sort, &vars);
    return normalize_qf(f);
}

Formula normalize_fo(const Formula& f, int k) {
    if (qdepth(f) > k) throw SortError("normalize_fo: quantifier depth exceeds " + std::to_string(k));
    return norm_fo(elim_forall(f), {});
}

// ---------------------------------------------------------------- counting

BigInt count_atoms(const Sort& sort, int n, bool reduced) {
    BigInt t = n + static_cast<int>(sort.constants.size());
    BigInt sum = 0;
    for (auto& [r, k] : sort.relations) sum += boost::multiprecision::pow(t, k);
    if (reduced) return 1 + t * (t - 1) / 2 + sum;
    return t * t + sum;
}

std::vector<Formula> generate_atoms(const Sort& sort, int n) {
    std::vector<LTerm> terms;
    for (int i = 1; i <= n; ++i) terms.push_back(LTerm::var(var_name(i)));
    for (auto& c : sort.constants) terms.push_back(LTerm::cst(c));
    std::vector<Formula> out;
    for (auto& a : terms)
        for (auto& b : terms) out.push_back(f_eq(a, b));
    for (auto& [r, k] : sort.relations) {
        if (terms.empty()) break;
        std::vector<size_t> idx(k, 0);
        while (true) {
            std::vector<LTerm> args;
            for (size_t i : idx) args.push_back(terms[i]);
            out.push_back(f_rel(r, std::move(args)));
            int p = k - 1;
            while (p >= 0 && ++idx[p] == terms.size()) idx[p--] = 0;
            if (p < 0) break;
        }
    }
    return out;
}

namespace {

constexpr unsigned kTowerBits = 4096;

unsigned bits_of(const BigInt& v) { return v == 0 ? 0 : static_cast<unsigned>(boost::multiprecision::msb(v)) + 1; }

Tower normalized(Tower t) {
    while (t.height > 0 && t.m < kTowerBits) {
        t.m = BigInt(1) << static_cast<unsigned>(t.m);
        --t.height;
    }
    if (t.height == 0 && bits_of(t.m) > kTowerBits) {
        // Round up to 2^bits so that height-0 values stay below every height-1 value.
        t.m = bits_of(t.m);
        t.height = 1;
    }
    return t;
}

}  // namespace

Tower Tower::pow2() const { return normalized({height + 1, m}); }

Tower Tower::times3() const {
    if (height == 0) return normalized({0, m * 3});
    return normalized({height, m + (height == 1 ? 2 : 1)});
}

std::string Tower::str() const {
    std::string s;
    for (int i = 0; i < height; ++i) s += "2^";
    return s + m.str();
}

CountBounds reduced_count_bounds(const Sort& sort, int n, int k, bool corrected) {
    if (k < 0 || n < 0) throw SortError("reduced_count_bounds: negative argument");
    if (k == 0) {
        Tower g = Tower::exact(count_atoms(sort, n)).pow2();
        if (corrected) g = g.pow2();
        return {g, Tower{}};
    }
    Tower h = reduced_count_bounds(sort, n + 1, k - 1, corrected).g.times3();
    return {h.pow2().pow2(), h};
}

// ---------------------------------------------------------------- small-model validity

QfCheck qf_valid(const Formula& f, const Sort& sort, const std::set<std::string>& vars) {
    if (!is_qf(f)) throw SortError("qf_valid: quantified input");
    check_formula(f, sort, &vars);
    std::vector<LTerm> terms;
    std::vector<std::string> var_list(vars.begin(), vars.end());
    std::sort(var_list.begin(), var_list.end(), var_less);
    for (auto& v : var_list) terms.push_back(LTerm::var(v));
    for (auto& c : sort.constants) terms.push_back(LTerm::cst(c));
    size_t m = terms.size();
    auto index_of = [&](const LTerm& t) {
        for (size_t i = 0; i < m; ++i)
            if (terms[i] == t) return i;
        throw SortError("qf_valid: free variable outside the declared set");
    };

    // Restricted growth strings enumerate set partitions of the terms.
    std::vector<int> block(m, 0);
    while (true) {
        int nblocks = m ? *std::max_element(block.begin(), block.end()) + 1 : 0;
        std::map<std::pair<std::string, Tuple>, int> prop_index;
        std::vector<std::pair<std::string, Tuple>> props;
        PNode p = to_pnode(f, [&](const Formula& leaf) -> PNode {
            if (leaf->kind == FKind::Eq)
                return {block[index_of(leaf->args[0])] == block[index_of(leaf->args[1])] ? PNode::T : PNode::F};
            if (leaf->kind != FKind::Rel) throw SortError("qf_valid: unexpected atom");
            Tuple t;
            for (auto& a : leaf->args) t.push_back(block[index_of(a)]);
            auto key = std::make_pair(leaf->name, t);
            auto [it, fresh] = prop_index.emplace(key, static_cast<int>(props.size()));
            if (fresh) props.push_back(key);
            return {PNode::Var, it->second};
        });
        std::vector<int8_t> val(props.size(), -1);
        if (find_falsifier(p, val, 0)) {
            QfCheck out;
            out.valid = false;
            Structure w(sort, nblocks);
            for (size_t i = 0; i < props.size(); ++i)
                if (val[i] == 1) w.add(props[i].first, props[i].second);
            for (size_t i = 0; i < m; ++i) {
                if (terms[i].is_const)
                    w.set_source(terms[i].name, block[i]);
                else
                    out.assignment[terms[i].name] = block[i];
            }
            out.witness = std::move(w);
            return out;
        }
        // Next restricted growth string.
        int i = static_cast<int>(m) - 1;
        for (; i > 0; --i) {
            int mx = *std::max_element(block.begin(), block.begin() + i);
            if (block[i] <= mx) {
                ++block[i];
                std::fill(block.begin() + i + 1, block.end(), 0);
                break;
            }
        }
        if (i <= 0) break;
    }
    return {};
}

bool qf_equivalent(const Formula& f, const Formula& g, const Sort& sort, const std::set<std::string>& vars,
                   QfCheck* detail) {
    QfCheck r = qf_valid(f_iff(f, g), sort, vars);
    if (detail) *detail = r;
    return r.valid;
}

}  // namespace graft
