#include "graft/formula.hpp"

#include <algorithm>
#include <cctype>

#include "graft/error.hpp"

namespace graft {

std::string LTerm::str() const { return is_const ? "(const " + name + ")" : name; }

namespace {

// Index of an "x<k>" name, or 0 when the name is not of that shape.
long var_index(const std::string& s) {
    if (s.size() < 2 || s[0] != 'x') return 0;
    for (size_t i = 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return 0;
    if (s[1] == '0' || s.size() > 10) return 0;
    return std::stol(s.substr(1));
}

Formula make(FKind k, std::string name = {}, std::vector<LTerm> args = {}, std::vector<Formula> kids = {}) {
    return std::make_shared<const FNode>(FNode{k, std::move(name), std::move(args), std::move(kids)});
}

}  // namespace

bool var_less(const std::string& a, const std::string& b) {
    long ia = var_index(a), ib = var_index(b);
    if (ia && ib) return ia < ib;
    if (ia || ib) return ia != 0;
    return a < b;
}

bool term_less(const LTerm& a, const LTerm& b) {
    if (a.is_const != b.is_const) return !a.is_const;
    if (a.is_const) return a.name < b.name;
    return var_less(a.name, b.name);
}

std::string var_name(int i) { return "x" + std::to_string(i); }

Formula f_true() {
    static const Formula t = make(FKind::True);
    return t;
}
Formula f_false() {
    static const Formula f = make(FKind::False);
    return f;
}
Formula f_prop(const std::string& p) { return make(FKind::Prop, p); }
Formula f_eq(const LTerm& a, const LTerm& b) { return make(FKind::Eq, {}, {a, b}); }
Formula f_rel(const std::string& r, std::vector<LTerm> args) { return make(FKind::Rel, r, std::move(args)); }
Formula f_not(const Formula& f) { return make(FKind::Not, {}, {}, {f}); }

Formula f_and(std::vector<Formula> fs) {
    if (fs.empty()) return f_true();
    if (fs.size() == 1) return fs[0];
    return make(FKind::And, {}, {}, std::move(fs));
}
Formula f_or(std::vector<Formula> fs) {
    if (fs.empty()) return f_false();
    if (fs.size() == 1) return fs[0];
    return make(FKind::Or, {}, {}, std::move(fs));
}
Formula f_and(const Formula& a, const Formula& b) { return f_and(std::vector<Formula>{a, b}); }
Formula f_or(const Formula& a, const Formula& b) { return f_or(std::vector<Formula>{a, b}); }
Formula f_implies(const Formula& a, const Formula& b) { return f_or(f_not(a), b); }
Formula f_iff(const Formula& a, const Formula& b) { return f_and(f_implies(a, b), f_implies(b, a)); }
Formula f_exists(const std::string& x, const Formula& f) { return make(FKind::Exists, x, {}, {f}); }
Formula f_forall(const std::string& x, const Formula& f) { return make(FKind::Forall, x, {}, {f}); }

namespace {

bool is_ident(const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s)
        if (ch == '(' || ch == ')' || std::isspace(static_cast<unsigned char>(ch))) return false;
    return true;
}

LTerm term_from(const SExpr& e) {
    if (e.atom) {
        if (!is_ident(e.text)) throw ParseError("bad term", e.pos);
        return LTerm::var(e.text);
    }
    if (e.head() == "const" && e.items.size() == 2 && e.items[1].atom) return LTerm::cst(e.items[1].text);
    throw ParseError("expected variable or (const a)", e.pos);
}

std::vector<Formula> kids_from(const SExpr& e, size_t from) {
    std::vector<Formula> out;
    for (size_t i = from; i < e.items.size(); ++i) out.push_back(formula_from_sexpr(e.items[i]));
    return out;
}

}  // namespace

Formula formula_from_sexpr(const SExpr& e) {
    if (e.atom) {
        if (e.text == "true") return f_true();
        if (e.text == "false") return f_false();
        return f_prop(e.text);
    }
    const std::string& h = e.head();
    size_t n = e.items.size();
    if (h == "eq") {
        if (n != 3) throw ParseError("eq takes two terms", e.pos);
        return f_eq(term_from(e.items[1]), term_from(e.items[2]));
    }
    if (h == "rel") {
        if (n < 3 || !e.items[1].atom) throw ParseError("rel takes a symbol and at least one term", e.pos);
        std::vector<LTerm> args;
        for (size_t i = 2; i < n; ++i) args.push_back(term_from(e.items[i]));
        return f_rel(e.items[1].text, std::move(args));
    }
    if (h == "not") {
        if (n != 2) throw ParseError("not takes one formula", e.pos);
        return f_not(formula_from_sexpr(e.items[1]));
    }
    if (h == "and") return n == 1 ? f_true() : make(FKind::And, {}, {}, kids_from(e, 1));
    if (h == "or") return n == 1 ? f_false() : make(FKind::Or, {}, {}, kids_from(e, 1));
    if (h == "implies" || h == "iff") {
        if (n != 3) throw ParseError(h + " takes two formulas", e.pos);
        auto a = formula_from_sexpr(e.items[1]), b = formula_from_sexpr(e.items[2]);
        return h == "implies" ? f_implies(a, b) : f_iff(a, b);
    }
    if (h == "exists" || h == "forall") {
        if (n != 3 || !e.items[1].atom) throw ParseError(h + " takes a variable and a formula", e.pos);
        auto body = formula_from_sexpr(e.items[2]);
        return h == "exists" ? f_exists(e.items[1].text, body) : f_forall(e.items[1].text, body);
    }
    throw ParseError("unknown formula head '" + h + "'", e.pos);
}

Formula parse_formula(const std::string& text) { return formula_from_sexpr(parse_sexpr(text)); }

std::string print_formula(const Formula& f) {
    switch (f->kind) {
        case FKind::True: return "true";
        case FKind::False: return "false";
        case FKind::Prop: return f->name;
        case FKind::Eq: return "(eq " + f->args[0].str() + " " + f->args[1].str() + ")";
        case FKind::Rel: {
            std::string s = "(rel " + f->name;
            for (auto& a : f->args) s += " " + a.str();
            return s + ")";
        }
        case FKind::Not: return "(not " + print_formula(f->kids[0]) + ")";
        case FKind::And:
        case FKind::Or: {
            std::string s = f->kind == FKind::And ? "(and" : "(or";
            for (auto& k : f->kids) s += " " + print_formula(k);
            return s + ")";
        }
        case FKind::Exists: return "(exists " + f->name + " " + print_formula(f->kids[0]) + ")";
        case FKind::Forall: return "(forall " + f->name + " " + print_formula(f->kids[0]) + ")";
    }
    return {};
}

bool is_atom(const Formula& f) { return f->kind == FKind::Eq || f->kind == FKind::Rel || f->kind == FKind::Prop; }

bool is_qf(const Formula& f) { return qdepth(f) == 0; }

int qdepth(const Formula& f) {
    int d = 0;
    for (auto& k : f->kids) d = std::max(d, qdepth(k));
    return d + (f->kind == FKind::Exists || f->kind == FKind::Forall ? 1 : 0);
}

int size_of(const Formula& f) {
    int s = 1;
    for (auto& k : f->kids) s += size_of(k);
    return s;
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    for (auto& a : f->args)
        if (!a.is_const && !bound.count(a.name)) out.insert(a.name);
    if (f->kind == FKind::Exists || f->kind == FKind::Forall) {
        bool fresh = bound.insert(f->name).second;
        collect_free(f->kids[0], bound, out);
        if (fresh) bound.erase(f->name);
        return;
    }
    for (auto& k : f->kids) collect_free(k, bound, out);
}

void collect_consts(const Formula& f, std::set<std::string>& out) {
    for (auto& a : f->args)
        if (a.is_const) out.insert(a.name);
    for (auto& k : f->kids) collect_consts(k, out);
}

void collect_props(const Formula& f, std::set<std::string>& out) {
    if (f->kind == FKind::Prop) out.insert(f->name);
    for (auto& k : f->kids) collect_props(k, out);
}

int cmp_term(const LTerm& a, const LTerm& b) {
    if (a == b) return 0;
    return term_less(a, b) ? -1 : 1;
}

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
    std::set<std::string> bound, out;
    collect_free(f, bound, out);
    return out;
}

std::set<std::string> constants_of(const Formula& f) {
    std::set<std::string> out;
    collect_consts(f, out);
    return out;
}

std::set<std::string> props_of(const Formula& f) {
    std::set<std::string> out;
    collect_props(f, out);
    return out;
}

int compare(const Formula& a, const Formula& b) {
    if (a == b) return 0;
    if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
    if (a->name != b->name) return a->name < b->name ? -1 : 1;
    size_t n = std::min(a->args.size(), b->args.size());
    for (size_t i = 0; i < n; ++i)
        if (int c = cmp_term(a->args[i], b->args[i])) return c;
    if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
    n = std::min(a->kids.size(), b->kids.size());
    for (size_t i = 0; i < n; ++i)
        if (int c = compare(a->kids[i], b->kids[i])) return c;
    if (a->kids.size() != b->kids.size()) return a->kids.size() < b->kids.size() ? -1 : 1;
    return 0;
}

bool equal(const Formula& a, const Formula& b) { return compare(a, b) == 0; }

Formula map_atoms(const Formula& f, const std::function<Formula(const Formula&)>& fn) {
    if (f->kids.empty()) return fn(f);
    std::vector<Formula> kids;
    kids.reserve(f->kids.size());
    for (auto& k : f->kids) kids.push_back(map_atoms(k, fn));
    return make(f->kind, f->name, f->args, std::move(kids));
}

namespace {

Formula subst_rec(const Formula& f, std::map<std::string, LTerm> vars, const std::map<std::string, LTerm>& consts) {
    if (f->kind == FKind::Exists || f->kind == FKind::Forall) {
        vars.erase(f->name);
        // A substituted term that mentions the bound variable would be captured.
        for (auto& [v, t] : vars)
            if (!t.is_const && t.name == f->name) throw SortError("substitution would capture '" + f->name + "'");
        return make(f->kind, f->name, {}, {subst_rec(f->kids[0], vars, consts)});
    }
    if (!f->args.empty()) {
        std::vector<LTerm> args = f->args;
        for (auto& a : args) {
            auto& m = a.is_const ? consts : vars;
            auto it = m.find(a.name);
            if (it != m.end()) a = it->second;
        }
        return make(f->kind, f->name, std::move(args));
    }
    if (f->kids.empty()) return f;
    std::vector<Formula> kids;
    for (auto& k : f->kids) kids.push_back(subst_rec(k, vars, consts));
    return make(f->kind, f->name, {}, std::move(kids));
}

}  // namespace

Formula substitute(const Formula& f, const std::map<std::string, LTerm>& vars,
                   const std::map<std::string, LTerm>& consts) {
    return subst_rec(f, vars, consts);
}

Formula simplify(const Formula& f) {
    switch (f->kind) {
        case FKind::Eq:
            return f->args[0] == f->args[1] ? f_true() : f;
        case FKind::Not: {
            auto k = simplify(f->kids[0]);
            if (k->kind == FKind::True) return f_false();
            if (k->kind == FKind::False) return f_true();
            if (k->kind == FKind::Not) return k->kids[0];
            return f_not(k);
        }
        case FKind::And:
        case FKind::Or: {
            bool is_and = f->kind == FKind::And;
            FKind unit = is_and ? FKind::True : FKind::False;
            FKind zero = is_and ? FKind::False : FKind::True;
            std::vector<Formula> kids;
            for (auto& k0 : f->kids) {
                auto k = simplify(k0);
                if (k->kind == zero) return k;
                if (k->kind == unit) continue;
                if (k->kind == f->kind)
                    kids.insert(kids.end(), k->kids.begin(), k->kids.end());
                else
                    kids.push_back(k);
            }
            return is_and ? f_and(std::move(kids)) : f_or(std::move(kids));
        }
        case FKind::Exists:
        case FKind::Forall: {
            auto k = simplify(f->kids[0]);
            // Bodies that are constant still depend on domain non-emptiness, so keep the quantifier.
            return make(f->kind, f->name, {}, {k});
        }
        default:
            return f;
    }
}

namespace {

void check_rec(const Formula& f, const Sort& sort, const std::set<std::string>* vars, std::set<std::string>& bound) {
    for (auto& a : f->args) {
        if (a.is_const) {
            if (!sort.has_constant(a.name)) throw SortError("unknown constant '" + a.name + "'");
        } else if (vars && !bound.count(a.name) && !vars->count(a.name)) {
            throw SortError("unexpected free variable '" + a.name + "'");
        }
    }
    switch (f->kind) {
        case FKind::Rel:
            if (!sort.has_relation(f->name)) throw SortError("unknown relation '" + f->name + "'");
            if (sort.arity(f->name) != static_cast<int>(f->args.size()))
                throw SortError("arity mismatch for '" + f->name + "'");
            break;
        case FKind::Prop:
            throw SortError("proposition '" + f->name + "' in a first-order formula");
        case FKind::Exists:
        case FKind::Forall: {
            bool fresh = bound.insert(f->name).second;
            check_rec(f->kids[0], sort, vars, bound);
            if (fresh) bound.erase(f->name);
            return;
        }
        default:
            break;
    }
    for (auto& k : f->kids) check_rec(k, sort, vars, bound);
}

}  // namespace

void check_formula(const Formula& f, const Sort& sort, const std::set<std::string>* vars) {
    std::set<std::string> bound;
    check_rec(f, sort, vars, bound);
}

}  // namespace graft
