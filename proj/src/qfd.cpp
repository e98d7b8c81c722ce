#include "graft/qfd.hpp"

#include <algorithm>
#include <functional>

#include "graft/error.hpp"

namespace graft {

Formula QfdScheme::kap(const Label& c, const Label& d) const {
    auto it = kappa.find(d);
    if (it == kappa.end()) return f_false();
    auto jt = it->second.find(c);
    return jt == it->second.end() ? f_false() : jt->second;
}

const Formula& QfdScheme::phi_of(const std::string& r) const {
    auto it = phi.find(r);
    if (it == phi.end()) throw SortError("scheme '" + name + "' has no formula for relation '" + r + "'");
    return it->second;
}

namespace {

std::set<std::string> arg_vars(int k) {
    std::set<std::string> out;
    for (int i = 1; i <= k; ++i) out.insert(var_name(i));
    return out;
}

std::vector<LTerm> arg_terms(int k) {
    std::vector<LTerm> out;
    for (int i = 1; i <= k; ++i) out.push_back(LTerm::var(var_name(i)));
    return out;
}

Formula delta_at(const QfdScheme& s, const LTerm& t) { return substitute(s.delta, {{kDeltaVar, t}}); }

}  // namespace

void check_scheme_syntax(const QfdScheme& sch) {
    if (!sch.delta) throw SortError("scheme without delta");
    const std::set<std::string> xv{kDeltaVar};
    auto qf = [](const Formula& f, const std::string& what) {
        if (!is_qf(f)) throw SortError(what + " must be quantifier-free");
    };
    qf(sch.delta, "delta");
    check_formula(sch.delta, sch.in, &xv);
    for (auto& [r, f] : sch.phi) {
        if (!sch.out.has_relation(r)) throw SortError("phi for relation '" + r + "' outside the output sort");
        qf(f, "phi_" + r);
        auto vs = arg_vars(sch.out.arity(r));
        check_formula(f, sch.in, &vs);
    }
    for (auto& [r, k] : sch.out.relations)
        if (!sch.phi.count(r)) throw SortError("no formula for output relation '" + r + "'");
    const std::set<std::string> none;
    for (auto& [d, row] : sch.kappa) {
        if (!sch.out.has_constant(d)) throw SortError("kappa for '" + d + "' outside the output sort");
        for (auto& [c, f] : row) {
            if (!sch.in.has_constant(c)) throw SortError("kappa source '" + c + "' outside the input sort");
            qf(f, "kappa");
            check_formula(f, sch.in, &none);
        }
    }
}

SchemeReport validate_scheme(const QfdScheme& sch) {
    check_scheme_syntax(sch);
    SchemeReport rep;
    auto test = [&](const Formula& f, const std::set<std::string>& vars, const std::string& cond) {
        if (!rep.ok) return;
        QfCheck r = qf_valid(f, sch.in, vars);
        if (r.valid) return;
        rep.ok = false;
        rep.condition = cond;
        rep.message = "condition '" + cond + "' fails";
        rep.witness = r.witness;
        rep.assignment = r.assignment;
    };
    const std::set<std::string> none;
    for (auto& d : sch.out.constants) {
        std::vector<Formula> any;
        for (auto& c : sch.in.constants) {
            any.push_back(sch.kap(c, d));
            for (auto& c2 : sch.in.constants)
                if (c < c2)
                    test(f_implies(f_and(sch.kap(c, d), sch.kap(c2, d)), f_eq(LTerm::cst(c), LTerm::cst(c2))), none,
                         "unique:" + d + ":" + c + "," + c2);
            test(f_implies(sch.kap(c, d), delta_at(sch, LTerm::cst(c))), none, "in-domain:" + d + ":" + c);
        }
        test(f_or(any), none, "exists:" + d);
    }
    for (auto& [r, k] : sch.out.relations) {
        std::vector<Formula> guard;
        for (auto& t : arg_terms(k)) guard.push_back(delta_at(sch, t));
        test(f_implies(sch.phi_of(r), f_and(guard)), arg_vars(k), "guarded:" + r);
    }
    return rep;
}

const QfdScheme& require_valid(const QfdScheme& sch) {
    auto rep = validate_scheme(sch);
    if (!rep.ok) throw SortError("invalid scheme '" + sch.name + "': " + rep.message);
    return sch;
}

Structure apply_scheme(const QfdScheme& sch, const Structure& s) {
    if (s.sort != sch.in) throw SortError("apply_scheme: structure of sort " + s.sort.str() + ", scheme expects " + sch.in.str());
    std::vector<int> keep, idx(s.size, -1);
    for (int v = 0; v < s.size; ++v)
        if (eval(s, sch.delta, {{kDeltaVar, v}})) {
            idx[v] = static_cast<int>(keep.size());
            keep.push_back(v);
        }
    Structure out(sch.out, static_cast<int>(keep.size()));
    for (auto& [r, k] : sch.out.relations) {
        const Formula& f = sch.phi_of(r);
        if (keep.empty()) continue;
        std::vector<size_t> pos(k, 0);
        Assignment a;
        while (true) {
            for (int i = 0; i < k; ++i) a[var_name(i + 1)] = keep[pos[i]];
            if (eval(s, f, a)) {
                Tuple t;
                for (int i = 0; i < k; ++i) t.push_back(static_cast<int>(pos[i]));
                out.tuples[r].insert(std::move(t));
            }
            int p = k - 1;
            while (p >= 0 && ++pos[p] == keep.size()) pos[p--] = 0;
            if (p < 0) break;
        }
    }
    for (auto& d : sch.out.constants) {
        int v = -1;
        for (auto& c : sch.in.constants)
            if (eval(s, sch.kap(c, d), {})) {
                int w = s.source(c);
                if (v >= 0 && v != w) throw SortError("apply_scheme: kappa not unique for '" + d + "'");
                v = w;
            }
        if (v < 0) throw SortError("apply_scheme: no kappa holds for '" + d + "'");
        if (idx[v] < 0) throw SortError("apply_scheme: source '" + d + "' outside the new domain");
        out.sources[d] = idx[v];
    }
    return out;
}

// ---------------------------------------------------------------- translation and composition

namespace {

// One atom over g.out, with output constants already replaced by input constants.
Formula translate_atom(const QfdScheme& g, const Formula& atom) {
    if (atom->kind == FKind::Eq) return atom;
    if (atom->kind != FKind::Rel) return atom;
    std::map<std::string, LTerm> sub;
    for (size_t i = 0; i < atom->args.size(); ++i) sub[var_name(static_cast<int>(i) + 1)] = atom->args[i];
    return substitute(g.phi_of(atom->name), sub);
}

}  // namespace

Formula translate_qf(const QfdScheme& g, const Formula& f) {
    if (!is_qf(f)) throw SortError("translate_qf: quantifier found");
    Formula out = map_atoms(f, [&](const Formula& atom) -> Formula {
        if (atom->kind != FKind::Eq && atom->kind != FKind::Rel) {
            if (atom->kind == FKind::Prop) throw SortError("translate_qf: proposition in formula");
            return atom;
        }
        std::vector<Label> ds;
        for (auto& t : atom->args)
            if (t.is_const && std::find(ds.begin(), ds.end(), t.name) == ds.end()) ds.push_back(t.name);
        for (auto& d : ds)
            if (!g.out.has_constant(d)) throw SortError("translate_qf: unknown constant '" + d + "'");
        std::vector<Label> cs(g.in.constants.begin(), g.in.constants.end());
        std::vector<Formula> disj;
        std::vector<size_t> pick(ds.size(), 0);
        if (!ds.empty() && cs.empty()) return f_false();
        while (true) {
            std::vector<Formula> conj;
            std::map<std::string, LTerm> csub;
            bool dead = false;
            for (size_t i = 0; i < ds.size(); ++i) {
                Formula k = g.kap(cs[pick[i]], ds[i]);
                if (k->kind == FKind::False) dead = true;
                conj.push_back(k);
                csub[ds[i]] = LTerm::cst(cs[pick[i]]);
            }
            if (!dead) {
                conj.push_back(translate_atom(g, substitute(atom, {}, csub)));
                disj.push_back(f_and(conj));
            }
            int p = static_cast<int>(ds.size()) - 1;
            while (p >= 0 && ++pick[p] == cs.size()) pick[p--] = 0;
            if (p < 0) break;
        }
        return f_or(disj);
    });
    return simplify(out);
}

QfdScheme compose_schemes(const QfdScheme& g2, const QfdScheme& g1) {
    if (g1.out != g2.in)
        throw SortError("compose_schemes: output sort " + g1.out.str() + " does not match input " + g2.in.str());
    QfdScheme g;
    g.name = g2.name + "." + g1.name;
    g.in = g1.in;
    g.out = g2.out;
    g.delta = simplify(f_and(g1.delta, translate_qf(g1, g2.delta)));
    for (auto& [r, k] : g2.out.relations) {
        std::vector<Formula> conj;
        for (auto& t : arg_terms(k)) conj.push_back(delta_at(g1, t));
        conj.push_back(translate_qf(g1, g2.phi_of(r)));
        g.phi[r] = simplify(f_and(conj));
    }
    for (auto& e : g2.out.constants)
        for (auto& a : g1.in.constants) {
            std::vector<Formula> disj;
            for (auto& b : g1.out.constants) {
                Formula k1 = g1.kap(a, b), k2 = g2.kap(b, e);
                if (k1->kind == FKind::False || k2->kind == FKind::False) continue;
                disj.push_back(f_and(k1, translate_qf(g1, k2)));
            }
            Formula k = simplify(f_or(disj));
            if (k->kind != FKind::False) g.kappa[e][a] = k;
        }
    return g;
}

// ---------------------------------------------------------------- builtins

namespace {

LTerm C(const Label& c) { return LTerm::cst(c); }
LTerm X(int i) { return LTerm::var(var_name(i)); }

QfdScheme copy_base(const Sort& in, const Sort& out, const std::string& name) {
    QfdScheme s;
    s.name = name;
    s.in = in;
    s.out = out;
    s.delta = f_true();
    for (auto& [r, k] : out.relations)
        s.phi[r] = in.has_relation(r) && in.arity(r) == k ? f_rel(r, arg_terms(k)) : f_false();
    for (auto& d : out.constants)
        if (in.has_constant(d)) s.kappa[d][d] = f_true();
    return s;
}

void need_const(const Sort& s, const Label& a, const char* op) {
    if (!s.has_constant(a)) throw SortError(std::string(op) + ": no constant '" + a + "' in " + s.str());
}

void need_ports(const Sort& s, const char* op) {
    if (!is_port_sort(s)) throw SortError(std::string(op) + ": needs a graph-with-ports sort, got " + s.str());
}

void need_port(const Sort& s, const Label& p, const char* op) {
    need_ports(s, op);
    if (!port_labels(s).count(p)) throw SortError(std::string(op) + ": no port label '" + p + "'");
}

}  // namespace

QfdScheme scheme_identity(const Sort& s) { return copy_base(s, s, "identity"); }

QfdScheme scheme_srcren(const Sort& s, const Label& a, const Label& b) {
    need_const(s, a, "srcren");
    if (a != b && s.has_constant(b)) throw SortError("srcren: target '" + b + "' already present");
    Sort out = s;
    out.constants.erase(a);
    out.constants.insert(b);
    QfdScheme g = copy_base(s, out, "srcren_" + a + "_" + b);
    g.kappa[b].clear();
    g.kappa[b][a] = f_true();
    return g;
}

QfdScheme scheme_srcfg(const Sort& s, const Label& a) {
    need_const(s, a, "srcfg");
    Sort out = s;
    out.constants.erase(a);
    return copy_base(s, out, "srcfg_" + a);
}

QfdScheme scheme_fus(const Sort& s, const Label& a, const Label& b) {
    need_const(s, a, "fus");
    need_const(s, b, "fus");
    if (a == b) throw SortError("fus: labels must differ");
    QfdScheme g = copy_base(s, s, "fus_" + a + "_" + b);
    Formula same = f_eq(C(a), C(b));
    g.delta = f_or(same, f_not(f_eq(LTerm::var(kDeltaVar), C(a))));
    for (auto& [r, k] : s.relations) {
        std::vector<Formula> guard;
        for (int i = 1; i <= k; ++i) guard.push_back(substitute(g.delta, {{kDeltaVar, X(i)}}));
        // A result tuple comes from an input tuple where some of its b-positions held a.
        std::vector<Formula> disj;
        for (unsigned J = 0; J < (1u << k); ++J) {
            std::vector<Formula> conj;
            std::vector<LTerm> ys;
            for (int i = 0; i < k; ++i) {
                if (J >> i & 1) {
                    conj.push_back(f_eq(X(i + 1), C(b)));
                    ys.push_back(C(a));
                } else {
                    ys.push_back(X(i + 1));
                }
            }
            conj.push_back(f_rel(r, ys));
            disj.push_back(f_and(conj));
        }
        guard.push_back(f_or(disj));
        g.phi[r] = f_and(guard);
    }
    g.kappa.clear();
    for (auto& d : s.constants) {
        if (d == a || d == b) {
            g.kappa[d][b] = f_true();
            continue;
        }
        g.kappa[d][d] = f_or(same, f_not(f_eq(C(d), C(a))));
        g.kappa[d][b] = f_and(f_eq(C(d), C(a)), f_not(same));
    }
    return g;
}

QfdScheme scheme_fus_as_written(const Sort& s, const Label& a, const Label& b) {
    need_const(s, a, "fus");
    need_const(s, b, "fus");
    if (a == b) throw SortError("fus: labels must differ");
    QfdScheme g = copy_base(s, s, "fus-as-written_" + a + "_" + b);
    Formula same = f_eq(C(a), C(b));
    g.delta = f_or(same, f_and(f_not(same), f_not(f_eq(LTerm::var(kDeltaVar), C(a)))));
    for (auto& [r, k] : s.relations) {
        std::vector<Formula> disj;
        for (unsigned I = 0; I < (1u << k); ++I) {
            std::vector<Formula> conj;
            std::vector<LTerm> ys;
            for (int i = 0; i < k; ++i) {
                bool in = I >> i & 1;
                Formula eq = f_eq(X(i + 1), C(b));
                conj.push_back(in ? eq : f_not(eq));
                ys.push_back(in ? C(a) : X(i + 1));
            }
            conj.push_back(f_rel(r, ys));
            disj.push_back(f_and(conj));
        }
        g.phi[r] = f_or(f_and(same, f_rel(r, arg_terms(k))), f_and(f_not(same), f_or(disj)));
    }
    g.kappa.clear();
    for (auto& d : s.constants) {
        for (auto& c : s.constants) {
            if (d != a)
                g.kappa[d][c] = f_eq(C(c), C(d));
            else
                g.kappa[d][c] = c == b ? f_true() : f_eq(C(c), C(a));
        }
    }
    return g;
}

QfdScheme scheme_fus_to(const Sort& s, const Label& a, const Label& b) {
    QfdScheme f = scheme_fus(s, a, b);
    QfdScheme g = compose_schemes(scheme_srcfg(s, a), f);
    g.name = "fus-to_" + a + "_" + b;
    return g;
}

QfdScheme scheme_inclusion(const Sort& s, const std::map<std::string, int>& extra) {
    Sort out = s;
    out.relations = merge_relations(s.relations, extra);
    return copy_base(s, out, "include");
}

QfdScheme scheme_add(const Sort& s, const Label& p, const Label& q) {
    if (p == q) throw SortError("add: port labels must differ");
    // sources may be present; only the edge relation and the two unary labels matter
    if (!s.has_relation(kEdge) || s.arity(kEdge) != 2) throw SortError("add: needs a binary edge relation");
    for (auto& l : {p, q})
        if (!s.has_relation(l) || s.arity(l) != 1 || l == kEdge)
            throw SortError("add: no port label '" + l + "' in " + s.str());
    QfdScheme g = copy_base(s, s, "add_" + p + "_" + q);
    g.phi[kEdge] = f_or(f_rel(kEdge, {X(1), X(2)}), f_and(f_rel(p, {X(1)}), f_rel(q, {X(2)})));
    return g;
}

QfdScheme scheme_del(const Sort& s, const std::vector<std::pair<Label, Label>>& A) {
    if (!s.has_relation(kEdge) || s.arity(kEdge) != 2) throw SortError("del: needs a binary edge relation");
    QfdScheme g = copy_base(s, s, "del");
    std::vector<Formula> conj{f_rel(kEdge, {X(1), X(2)})};
    for (auto& [a, b] : A) {
        if (a == b) throw SortError("del: pairs must be anti-reflexive");
        need_const(s, a, "del");
        need_const(s, b, "del");
        // nothing is removed when both labels sit on one element
        auto hit = f_or(f_and(f_eq(X(1), C(a)), f_eq(X(2), C(b))), f_and(f_eq(X(1), C(b)), f_eq(X(2), C(a))));
        conj.push_back(f_not(f_and(f_not(f_eq(C(a), C(b))), hit)));
    }
    g.phi[kEdge] = f_and(conj);
    return g;
}

QfdScheme scheme_mdf(const Sort& s, const std::vector<std::pair<Label, Label>>& D) {
    need_ports(s, "mdf");
    std::set<Label> qs;
    for (auto& [p, q] : D) {
        need_port(s, p, "mdf");
        if (q == kEdge) throw SortError("mdf: port label may not be 'edge'");
        qs.insert(q);
    }
    QfdScheme g = copy_base(s, Sort::ports(qs), "mdf");
    for (auto& q : qs) {
        std::vector<Formula> disj;
        for (auto& [p, q2] : D)
            if (q2 == q) disj.push_back(f_rel(p, {X(1)}));
        g.phi[q] = f_or(disj);
    }
    return g;
}

QfdScheme scheme_ren(const Sort& s, const Label& p, const Label& q) {
    need_port(s, p, "ren");
    std::vector<std::pair<Label, Label>> D;
    for (auto& r : port_labels(s))
        if (r != p) D.push_back({r, r});
    D.push_back({p, q});
    QfdScheme g = scheme_mdf(s, D);
    g.name = "ren_" + p + "_" + q;
    return g;
}

QfdScheme scheme_fg(const Sort& s, const Label& p) {
    need_port(s, p, "fg");
    std::vector<std::pair<Label, Label>> D;
    for (auto& r : port_labels(s))
        if (r != p) D.push_back({r, r});
    QfdScheme g = scheme_mdf(s, D);
    g.name = "fg_" + p;
    return g;
}

QfdScheme scheme_mark(const Sort& s, const Label& i) {
    need_ports(s, "mark");
    if (i == kEdge) throw SortError("mark: port label may not be 'edge'");
    Sort out = s;
    out.relations[i] = 1;
    QfdScheme g = copy_base(s, out, "mark_" + i);
    g.phi[i] = f_true();
    return g;
}

QfdScheme builtin(const std::string& name, const std::vector<std::string>& p, const Sort& s) {
    auto need = [&](size_t n) {
        if (p.size() != n) throw SortError("builtin '" + name + "' takes " + std::to_string(n) + " parameters");
    };
    if (name == "identity") return need(0), scheme_identity(s);
    if (name == "srcren") return need(2), scheme_srcren(s, p[0], p[1]);
    if (name == "srcfg") return need(1), scheme_srcfg(s, p[0]);
    if (name == "fus") return need(2), scheme_fus(s, p[0], p[1]);
    if (name == "fus-to") return need(2), scheme_fus_to(s, p[0], p[1]);
    if (name == "add") return need(2), scheme_add(s, p[0], p[1]);
    if (name == "ren") return need(2), scheme_ren(s, p[0], p[1]);
    if (name == "fg") return need(1), scheme_fg(s, p[0]);
    if (name == "mark") return need(1), scheme_mark(s, p[0]);
    if (name == "mdf" || name == "del" || name == "include") {
        if (p.size() % 2) throw SortError("builtin '" + name + "' takes pairs");
        std::vector<std::pair<Label, Label>> D;
        for (size_t i = 0; i < p.size(); i += 2) D.push_back({p[i], p[i + 1]});
        if (name == "mdf") return scheme_mdf(s, D);
        if (name == "del") return scheme_del(s, D);
        std::map<std::string, int> extra;
        for (auto& [r, k] : D) {
            if (k.empty() || k.find_first_not_of("0123456789") != std::string::npos)
                throw SortError("include: arity of '" + r + "' must be a number");
            extra[r] = std::stoi(k);
        }
        return scheme_inclusion(s, extra);
    }
    throw SortError("unknown builtin scheme '" + name + "'");
}

// ---------------------------------------------------------------- source separation

bool preserves_source_separation(const QfdScheme& sch) {
    std::vector<Label> cs(sch.in.constants.begin(), sch.in.constants.end());
    int n = static_cast<int>(cs.size());
    std::vector<std::pair<std::string, Tuple>> slots;
    for (auto& [r, k] : sch.in.relations) {
        if (n == 0) break;
        Tuple t(k, 0);
        while (true) {
            slots.push_back({r, t});
            int p = k - 1;
            while (p >= 0 && ++t[p] == n) t[p--] = 0;
            if (p < 0) break;
        }
    }
    if (slots.size() > 20) throw CapacityError("preserves_source_separation: too many source-only types");
    for (unsigned long mask = 0; mask < (1ul << slots.size()); ++mask) {
        Structure s(sch.in, n);
        for (int i = 0; i < n; ++i) s.set_source(cs[i], i);
        for (size_t i = 0; i < slots.size(); ++i)
            if (mask >> i & 1) s.add(slots[i].first, slots[i].second);
        if (!is_source_separated(apply_scheme(sch, s))) return false;
    }
    return true;
}

bool separation_syntactic(const QfdScheme& sch) {
    std::vector<Formula> distinct;
    for (auto& c : sch.in.constants)
        for (auto& c2 : sch.in.constants)
            if (c < c2) distinct.push_back(f_not(f_eq(C(c), C(c2))));
    Formula hyp = f_and(distinct);
    for (auto& c : sch.in.constants)
        for (auto& d : sch.out.constants)
            for (auto& d2 : sch.out.constants) {
                if (!(d < d2)) continue;
                Formula f = f_implies(f_and(hyp, sch.kap(c, d)), f_not(sch.kap(c, d2)));
                if (!qf_valid(f, sch.in, {}).valid) return false;
            }
    return true;
}

// ---------------------------------------------------------------- union splitting

namespace {

struct SideCtx {
    const Sort* s1;
    const Sort* s2;
    const Structure* z1;
    const Structure* z2;
    std::map<std::string, int> var_side;  // variable -> 1 or 2
};

int term_side(const SideCtx& cx, const LTerm& t) {
    if (t.is_const) {
        if (cx.s1->has_constant(t.name)) return 1;
        if (cx.s2->has_constant(t.name)) return 2;
        throw SortError("split_over_union: constant '" + t.name + "' on neither side");
    }
    auto it = cx.var_side.find(t.name);
    if (it == cx.var_side.end()) throw SortError("split_over_union: unexpected variable '" + t.name + "'");
    return it->second;
}

// Atoms that are false in every disjoint sum become false; closed atoms are read from the types.
Formula side_reduce(const Formula& f, const SideCtx& cx) {
    return simplify(map_atoms(f, [&](const Formula& a) -> Formula {
        if (a->kind != FKind::Eq && a->kind != FKind::Rel) return a;
        int side = 0;
        bool closed = true;
        for (auto& t : a->args) {
            int s = term_side(cx, t);
            if (side && s != side) return f_false();
            side = s;
            if (!t.is_const) closed = false;
        }
        const Sort& srt = side == 1 ? *cx.s1 : *cx.s2;
        if (a->kind == FKind::Rel && !srt.has_relation(a->name)) return f_false();
        if (closed) return eval(side == 1 ? *cx.z1 : *cx.z2, a) ? f_true() : f_false();
        return a;
    }));
}

void collect_atoms(const Formula& f, std::vector<Formula>& out) {
    if (f->kind == FKind::Eq || f->kind == FKind::Rel) {
        for (auto& g : out)
            if (equal(g, f)) return;
        out.push_back(f);
        return;
    }
    for (auto& k : f->kids) collect_atoms(k, out);
}

Formula rename_var(const Formula& f, const std::string& from, const std::string& to) {
    return substitute(f, {{from, LTerm::var(to)}});
}

// Cross formula atoms on variable v, renamed to x1.
void atoms_on(const Formula& f, const std::string& v, std::vector<Formula>& out) {
    std::vector<Formula> all;
    collect_atoms(f, all);
    for (auto& a : all) {
        auto fv = free_vars(a);
        if (fv.size() == 1 && fv.count(v)) {
            Formula r = orient_atom(rename_var(a, v, var_name(1)));
            bool seen = false;
            for (auto& g : out)
                if (equal(g, r)) seen = true;
            if (!seen) out.push_back(r);
        }
    }
}

bool eval_with(const Formula& f, const std::vector<std::pair<Formula, bool>>& vals) {
    Formula g = simplify(map_atoms(f, [&](const Formula& a) -> Formula {
        if (a->kind != FKind::Eq && a->kind != FKind::Rel) return a;
        Formula o = orient_atom(a);
        if (o->kind == FKind::True) return o;
        for (auto& [atom, v] : vals)
            if (equal(atom, o)) return v ? f_true() : f_false();
        throw SortError("split_over_union: unvalued atom " + print_formula(a));
    }));
    if (g->kind == FKind::True) return true;
    if (g->kind == FKind::False) return false;
    throw SortError("split_over_union: residual formula " + print_formula(g));
}

long numeric_label(const Label& q) {
    if (q.empty() || q.size() > 9) return -1;
    for (char ch : q)
        if (ch < '0' || ch > '9') return -1;
    return std::stol(q);
}

}  // namespace

UnionSplit split_over_union(const QfdScheme& h, const Sort& sort1, const Sort& sort2, const Structure& z1,
                            const Structure& z2) {
    if (!h.out.constants.empty()) throw SortError("split_over_union: output sort carries constants");
    if (!is_port_sort(h.out)) throw SortError("split_over_union: output must be a graph-with-ports sort");
    for (auto& c : sort1.constants)
        if (sort2.has_constant(c)) throw SortError("split_over_union: constant sets overlap");
    Sort joint;
    joint.relations = merge_relations(sort1.relations, sort2.relations);
    joint.constants = sort1.constants;
    joint.constants.insert(sort2.constants.begin(), sort2.constants.end());
    if (joint != h.in) throw SortError("split_over_union: part sorts do not combine to the scheme's input sort");
    if (z1.sort != sort1 || z2.sort != sort2) throw SortError("split_over_union: type of the wrong sort");

    auto Q = port_labels(h.out);
    long k = 0;
    for (auto& q : Q) k = std::max(k, numeric_label(q));
    k += 1;

    const std::string v1 = var_name(1), v2 = var_name(2);
    auto ctx = [&](std::map<std::string, int> sides) { return SideCtx{&sort1, &sort2, &z1, &z2, std::move(sides)}; };
    const Formula& edge = h.phi_of(kEdge);
    Formula cross12 = side_reduce(edge, ctx({{v1, 1}, {v2, 2}}));
    Formula cross21 = side_reduce(edge, ctx({{v1, 2}, {v2, 1}}));
    std::vector<Formula> A1, A2;
    atoms_on(cross12, v1, A1);
    atoms_on(cross21, v2, A1);
    atoms_on(cross12, v2, A2);
    atoms_on(cross21, v1, A2);
    std::sort(A1.begin(), A1.end(), atom_less);
    std::sort(A2.begin(), A2.end(), atom_less);
    if (A1.size() > 10 || A2.size() > 10) throw CapacityError("split_over_union: too many unary atoms");
    long l = k + (1L << A1.size());

    UnionSplit u;
    auto side_scheme = [&](int side, const std::vector<Formula>& atoms, long base) {
        const Sort& s = side == 1 ? sort1 : sort2;
        QfdScheme g;
        g.name = "split" + std::to_string(side);
        g.in = s;
        std::set<Label> ports = Q;
        for (long n = 0; n < (1L << atoms.size()); ++n) ports.insert(std::to_string(base + 1 + n));
        g.out = Sort::ports(ports);
        g.delta = side_reduce(h.delta, ctx({{kDeltaVar, side}}));
        Formula d1 = substitute(g.delta, {{kDeltaVar, LTerm::var(v1)}});
        Formula d2 = substitute(g.delta, {{kDeltaVar, LTerm::var(v2)}});
        g.phi[kEdge] = simplify(f_and({side_reduce(edge, ctx({{v1, side}, {v2, side}})), d1, d2}));
        for (auto& q : Q) g.phi[q] = simplify(f_and(side_reduce(h.phi_of(q), ctx({{v1, side}})), d1));
        for (long n = 0; n < (1L << atoms.size()); ++n) {
            std::vector<Formula> conj{d1};
            for (size_t i = 0; i < atoms.size(); ++i) conj.push_back(n >> i & 1 ? atoms[i] : f_not(atoms[i]));
            g.phi[std::to_string(base + 1 + n)] = simplify(f_and(conj));
            std::string desc = "{";
            for (size_t i = 0; i < atoms.size(); ++i)
                if (n >> i & 1) desc += (desc.size() > 1 ? " " : "") + print_formula(atoms[i]);
            u.aux_formulas.push_back(std::to_string(base + 1 + n) + ":" + desc + "}");
        }
        return g;
    };
    u.g1 = side_scheme(1, A1, k);
    u.g2 = side_scheme(2, A2, l);

    for (long b1 = 0; b1 < (1L << A1.size()); ++b1)
        for (long b2 = 0; b2 < (1L << A2.size()); ++b2) {
            std::vector<std::pair<Formula, bool>> at12, at21;
            for (size_t i = 0; i < A1.size(); ++i) {
                at12.push_back({A1[i], (b1 >> i & 1) != 0});
                at21.push_back({substitute(A1[i], {{v1, LTerm::var(v2)}}), (b1 >> i & 1) != 0});
            }
            for (size_t i = 0; i < A2.size(); ++i) {
                at12.push_back({substitute(A2[i], {{v1, LTerm::var(v2)}}), (b2 >> i & 1) != 0});
                at21.push_back({A2[i], (b2 >> i & 1) != 0});
            }
            for (auto& pr : at12) pr.first = orient_atom(pr.first);
            for (auto& pr : at21) pr.first = orient_atom(pr.first);
            Label p1 = std::to_string(k + 1 + b1), p2 = std::to_string(l + 1 + b2);
            if (eval_with(cross12, at12)) u.adds.push_back({p1, p2});
            if (eval_with(cross21, at21)) u.adds.push_back({p2, p1});
        }
    for (auto& q : Q) u.forget.push_back({q, q});
    return u;
}

Structure apply_union_split(const UnionSplit& u, const Structure& x1, const Structure& x2) {
    Structure g = oplus(apply_scheme(u.g1, x1), apply_scheme(u.g2, x2));
    for (auto& [p, q] : u.adds) g = add_edges(g, p, q);
    return mdf(g, u.forget);
}

}  // namespace graft
