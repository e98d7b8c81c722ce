#include "graft/terms.hpp"

#include <algorithm>
#include <sstream>

#include "graft/error.hpp"

namespace graft {

namespace {

const std::set<std::string> kHrConsts{"src", "src-loop", "edge", "v", "v-loop"};
const std::set<std::string> kVrConsts{"port", "port-loop", "v", "v-loop"};

std::set<std::string> with(std::set<std::string> a, const std::set<std::string>& b) {
    a.insert(b.begin(), b.end());
    a.insert("hole");
    return a;
}

const std::map<Sig, std::set<std::string>>& heads_table() {
    static const std::map<Sig, std::set<std::string>> t = [] {
        std::map<Sig, std::set<std::string>> m;
        std::set<std::string> all_consts = kHrConsts;
        all_consts.insert(kVrConsts.begin(), kVrConsts.end());
        m[Sig::S] = with({"oplus", "parallel", "srcren", "srcfg", "srcfg-all", "fus", "fus-to", "box", "add", "ren",
                          "fg", "mdf", "otimes", "del", "fusrel", "apply-scheme", "mark", "modular"},
                         all_consts);
        m[Sig::VR] = with({"oplus", "add", "ren", "fg", "mdf"}, kVrConsts);
        m[Sig::VRPLUS] = with({"oplus", "add", "ren", "fg", "mdf", "mark", "apply-scheme"}, kVrConsts);
        m[Sig::VRPI] = with({"oplus", "add", "ren"}, {"port", "port-loop"});
        m[Sig::NLC] = with({"otimes", "fg", "ren"}, {"port", "port-loop"});
        m[Sig::HR] = with({"oplus", "srcren", "srcfg", "fus"}, kHrConsts);
        m[Sig::HR_PAR] = with({"parallel", "srcren", "srcfg", "fus"}, kHrConsts);
        m[Sig::HR_SEP] = with({"oplus", "srcren", "srcfg", "fus-to"}, kHrConsts);
        m[Sig::HR_SEP_PAR] = with({"parallel", "srcren", "srcfg", "fus-to"}, kHrConsts);
        m[Sig::HR_FG] = with({"parallel", "srcfg-all"}, kHrConsts);
        m[Sig::HR_REN] = with({"parallel", "srcren"}, kHrConsts);
        m[Sig::CS] = with({"box"}, kHrConsts);
        m[Sig::HRM] = with({"oplus", "srcren", "srcfg", "mfus", "parallel"}, kHrConsts);
        m[Sig::MODULAR] = with({"modular"}, {"v", "v-loop"});
        m[Sig::ECON] = with({"econ-forget", "econ-vertex", "econ-edge", "econ-shift", "econ-swap"}, {"econ-0"});
        return m;
    }();
    return t;
}

const std::vector<std::pair<Sig, std::string>> kSigNames{
    {Sig::S, "S"},         {Sig::VR, "VR"},         {Sig::VRPLUS, "VRPLUS"},         {Sig::VRPI, "VRPI"},
    {Sig::NLC, "NLC"},     {Sig::HR, "HR"},         {Sig::HR_PAR, "HR_PAR"},         {Sig::HR_SEP, "HR_SEP"},
    {Sig::HR_SEP_PAR, "HR_SEP_PAR"}, {Sig::HR_FG, "HR_FG"}, {Sig::HR_REN, "HR_REN"}, {Sig::CS, "CS"},
    {Sig::HRM, "HRM"},     {Sig::MODULAR, "MODULAR"}, {Sig::ECON, "ECON"}};

// Heads by shape of their payload.
const std::map<std::string, int> kLabelCount{
    {"srcren", 2}, {"srcfg", 1}, {"srcfg-all", 0}, {"fus", 2},   {"fus-to", 2},      {"mfus", 2},
    {"add", 2},    {"ren", 2},   {"fg", 1},        {"mark", 1},  {"apply-scheme", 1}, {"port", 1},
    {"port-loop", 1}, {"src", 1}, {"src-loop", 1}, {"edge", 2},  {"v", 0},           {"v-loop", 0},
    {"oplus", 0},  {"parallel", 0}, {"box", 0},    {"econ-0", 0}, {"econ-forget", 0}, {"econ-vertex", 0},
    {"econ-edge", 0}, {"econ-shift", 0}, {"econ-swap", 0}, {"mdf", 0}, {"otimes", 0}, {"del", 0},
    {"fusrel", 0}, {"modular", 1}, {"hole", 0}};
const std::set<std::string> kPairHeads{"mdf", "otimes", "del", "fusrel", "modular"};
const std::set<std::string> kAtomHeads{"econ-0", "hole"};

}  // namespace

Sig parse_sig(const std::string& name) {
    std::string up = name;
    for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (auto& [s, n] : kSigNames)
        if (n == up) return s;
    throw SortError("unknown signature '" + name + "'");
}

std::string sig_name(Sig s) {
    for (auto& [x, n] : kSigNames)
        if (x == s) return n;
    return "?";
}

std::vector<Sig> all_sigs() {
    std::vector<Sig> out;
    for (auto& [s, n] : kSigNames) out.push_back(s);
    return out;
}

const std::set<std::string>& sig_heads(Sig s) { return heads_table().at(s); }
bool sig_admits(Sig s, const std::string& head) { return sig_heads(s).count(head) > 0; }

int OpSym::arity() const {
    static const std::set<std::string> unary{"srcren", "srcfg", "srcfg-all", "fus", "fus-to", "mfus", "add",
                                             "ren", "fg", "mdf", "del", "fusrel", "apply-scheme", "mark",
                                             "econ-forget", "econ-vertex", "econ-edge", "econ-shift", "econ-swap"};
    static const std::set<std::string> binary{"oplus", "parallel", "box", "otimes"};
    static const std::set<std::string> nullary{"port", "port-loop", "src", "src-loop", "edge", "v", "v-loop",
                                               "econ-0", "hole"};
    if (unary.count(head)) return 1;
    if (binary.count(head)) return 2;
    if (nullary.count(head)) return 0;
    if (head == "modular" && !labels.empty()) {
        try {
            return std::stoi(labels[0]);
        } catch (...) {
            return -1;
        }
    }
    return -1;
}

std::string OpSym::key() const {
    std::string s = head;
    for (auto& l : labels) s += " " + l;
    if (has_pairs || kPairHeads.count(head)) {
        s += " (";
        for (size_t i = 0; i < pairs.size(); ++i) s += (i ? " (" : "(") + pairs[i].first + " " + pairs[i].second + ")";
        s += ")";
    }
    return s;
}

TermPtr make_term(OpSym op, std::vector<TermPtr> kids) {
    auto t = std::make_shared<Term>();
    t->op = std::move(op);
    t->kids = std::move(kids);
    return t;
}

TermPtr t_op(const std::string& head, std::vector<std::string> labels, std::vector<TermPtr> kids) {
    OpSym op;
    op.head = head;
    op.labels = std::move(labels);
    op.has_pairs = kPairHeads.count(head) > 0;
    return make_term(std::move(op), std::move(kids));
}

TermPtr t_pairs(const std::string& head, std::vector<std::pair<Label, Label>> pairs, std::vector<TermPtr> kids) {
    OpSym op;
    op.head = head;
    op.pairs = std::move(pairs);
    op.has_pairs = true;
    return make_term(std::move(op), std::move(kids));
}

TermPtr t_hole(int i) { return t_op("hole", i ? std::vector<std::string>{std::to_string(i)} : std::vector<std::string>{}, {}); }

TermPtr term_from_sexpr(const SExpr& e) {
    if (e.atom) {
        if (kAtomHeads.count(e.text) || e.text == "v" || e.text == "v-loop") return t_op(e.text, {}, {});
        throw ParseError("unexpected atom '" + e.text + "' in term position", e.pos);
    }
    if (e.items.empty()) throw ParseError("empty term", e.pos);
    if (!e.items[0].atom) throw ParseError("term head must be a symbol", e.pos);
    OpSym op;
    op.head = e.items[0].text;
    auto lc = kLabelCount.find(op.head);
    if (lc == kLabelCount.end()) throw ParseError("unknown operation '" + op.head + "'", e.items[0].pos);
    size_t i = 1;
    int nlabels = lc->second;
    if (op.head == "hole" && e.items.size() == 2) nlabels = 1;
    for (int k = 0; k < nlabels; ++k, ++i) {
        if (i >= e.items.size() || !e.items[i].atom)
            throw ParseError("'" + op.head + "' expects " + std::to_string(nlabels) + " label(s)", e.pos);
        op.labels.push_back(e.items[i].text);
    }
    if (kPairHeads.count(op.head)) {
        op.has_pairs = true;
        if (i >= e.items.size() || e.items[i].atom) throw ParseError("'" + op.head + "' expects a pair list", e.pos);
        for (auto& p : e.items[i].items) {
            if (p.atom || p.items.size() != 2 || !p.items[0].atom || !p.items[1].atom)
                throw ParseError("malformed pair in '" + op.head + "'", p.pos);
            op.pairs.push_back({p.items[0].text, p.items[1].text});
        }
        ++i;
    }
    std::vector<TermPtr> kids;
    for (; i < e.items.size(); ++i) kids.push_back(term_from_sexpr(e.items[i]));
    int ar = op.arity();
    if (ar < 0) throw ParseError("bad arity for '" + op.head + "'", e.pos);
    if (static_cast<int>(kids.size()) != ar)
        throw ParseError("'" + op.head + "' takes " + std::to_string(ar) + " argument(s), got " +
                             std::to_string(kids.size()),
                         e.pos);
    return make_term(std::move(op), std::move(kids));
}

TermPtr parse_term(const std::string& text) { return term_from_sexpr(parse_sexpr(text)); }

std::string print_term(const TermPtr& t) {
    if (t->kids.empty() && kAtomHeads.count(t->op.head) && t->op.labels.empty()) return t->op.head;
    std::string s = "(" + t->op.key();
    for (auto& k : t->kids) s += " " + print_term(k);
    return s + ")";
}

int term_leaves(const TermPtr& t) {
    if (t->kids.empty()) return 1;
    int n = 0;
    for (auto& k : t->kids) n += term_leaves(k);
    return n;
}

int term_size(const TermPtr& t) {
    int n = 1;
    for (auto& k : t->kids) n += term_size(k);
    return n;
}

std::string TermSort::str() const {
    switch (kind) {
        case Ordered: return "o";
        case Unordered: return "u";
        case Multi: {
            std::string s = "multi{";
            bool first = true;
            for (auto& c : sort.constants) s += (first ? "" : ",") + c, first = false;
            return s + "}";
        }
        default: return sort.str();
    }
}

// ---------------------------------------------------------------------------------------
// sorts

namespace {

Sort joint_sort(const Sort& a, const Sort& b) {
    Sort s;
    s.relations = merge_relations(a.relations, b.relations);
    s.constants = a.constants;
    s.constants.insert(b.constants.begin(), b.constants.end());
    return s;
}

void need(bool ok, const std::string& msg) {
    if (!ok) throw SortError(msg);
}

void need_const(const Sort& s, const Label& a) { need(s.has_constant(a), "no source label '" + a + "' in " + s.str()); }

void need_port_sort(const Sort& s) { need(is_port_sort(s), "needs a graph with ports, got " + s.str()); }

void need_port(const Sort& s, const Label& p) {
    need_port_sort(s);
    need(port_labels(s).count(p) > 0, "no port label '" + p + "' in " + s.str());
}

void need_unary(const Sort& s, const Label& p) {
    need(p != kEdge && s.has_relation(p) && s.arity(p) == 1, "no port label '" + p + "' in " + s.str());
}

void need_edge(const Sort& s) { need(s.has_relation(kEdge) && s.arity(kEdge) == 2, "no binary edge relation in " + s.str()); }

void need_label_name(const Label& p) { need(p != kEdge && !p.empty(), "'" + p + "' cannot be a port label"); }

int modular_arity(const OpSym& op) {
    int n = op.arity();
    need(n >= 2, "modular composition needs at least 2 arguments");
    for (auto& [i, j] : op.pairs) {
        int a = -1, b = -1;
        try {
            a = std::stoi(i);
            b = std::stoi(j);
        } catch (...) {
        }
        need(a >= 1 && a <= n && b >= 1 && b <= n, "modular edge (" + i + " " + j + ") out of range 1.." + std::to_string(n));
    }
    return n;
}

Structure modular_quotient(const OpSym& op) {
    int n = modular_arity(op);
    Structure h(Sort::graph(), n);
    for (auto& [i, j] : op.pairs) h.add(kEdge, {std::stoi(i) - 1, std::stoi(j) - 1});
    return h;
}

const QfdScheme& resolve_scheme(const OpSym& op, const Sort& in, const TypeContext& ctx, QfdScheme& tmp) {
    const std::string& name = op.labels.at(0);
    auto it = ctx.schemes.find(name);
    if (it != ctx.schemes.end()) return it->second;
    // name:p:q selects a builtin
    std::vector<std::string> parts;
    std::stringstream ss(name);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    need(!parts.empty(), "empty scheme name");
    std::vector<std::string> params(parts.begin() + 1, parts.end());
    tmp = builtin(parts[0], params, in);
    return tmp;
}

Sort constant_sort(const OpSym& op) {
    const auto& h = op.head;
    if (h == "port" || h == "port-loop") {
        need_label_name(op.labels[0]);
        return Sort::ports({op.labels[0]});
    }
    if (h == "src" || h == "src-loop") return Sort::graph({op.labels[0]});
    if (h == "edge") {
        need(op.labels[0] != op.labels[1], "edge constant needs two distinct labels");
        return Sort::graph({op.labels[0], op.labels[1]});
    }
    return Sort::graph();  // v, v-loop
}

Sort struct_sort(const OpSym& op, const std::vector<Sort>& in, const TypeContext& ctx) {
    const auto& h = op.head;
    if (op.arity() == 0) return constant_sort(op);
    if (h == "oplus") {
        for (auto& c : in[0].constants) need(!in[1].has_constant(c), "oplus: source label '" + c + "' on both sides");
        return joint_sort(in[0], in[1]);
    }
    if (h == "parallel") return joint_sort(in[0], in[1]);
    if (h == "box") {
        need(in[0].constants == in[1].constants, "box: operands need the same source labels");
        Sort s = joint_sort(in[0], in[1]);
        s.constants.clear();
        return s;
    }
    if (h == "otimes") {
        need_port_sort(in[0]);
        need_port_sort(in[1]);
        auto P = port_labels(in[0]), Q = port_labels(in[1]);
        for (auto& p : P) need(!Q.count(p), "otimes: port label '" + p + "' on both sides");
        for (auto& [p, q] : op.pairs)
            need((P.count(p) && Q.count(q)) || (Q.count(p) && P.count(q)),
                 "otimes: pair (" + p + " " + q + ") does not cross the operands");
        return joint_sort(in[0], in[1]);
    }
    if (h == "modular") {
        for (auto& s : in) need(s == Sort::graph(), "modular: arguments must be plain graphs, got " + s.str());
        modular_arity(op);
        return Sort::graph();
    }
    const Sort& s = in[0];
    if (h == "srcren") {
        need_const(s, op.labels[0]);
        Sort out = s;
        if (op.labels[0] == op.labels[1]) return out;
        need(!s.has_constant(op.labels[1]), "srcren: target '" + op.labels[1] + "' already present");
        out.constants.erase(op.labels[0]);
        out.constants.insert(op.labels[1]);
        return out;
    }
    if (h == "srcfg") {
        need_const(s, op.labels[0]);
        Sort out = s;
        out.constants.erase(op.labels[0]);
        return out;
    }
    if (h == "srcfg-all") {
        Sort out = s;
        out.constants.clear();
        return out;
    }
    if (h == "fus" || h == "fus-to" || h == "mfus") {
        need(op.labels[0] != op.labels[1], h + ": labels must differ");
        need_const(s, op.labels[0]);
        need_const(s, op.labels[1]);
        Sort out = s;
        if (h == "fus-to") out.constants.erase(op.labels[0]);
        return out;
    }
    if (h == "del" || h == "fusrel") {
        if (h == "del") need_edge(s);
        for (auto& [a, b] : op.pairs) {
            need(a != b, h + ": pairs must be anti-reflexive");
            need_const(s, a);
            need_const(s, b);
        }
        return s;
    }
    if (h == "add") {
        need(op.labels[0] != op.labels[1], "add: port labels must differ");
        need_edge(s);
        need_unary(s, op.labels[0]);
        need_unary(s, op.labels[1]);
        return s;
    }
    if (h == "ren") {
        need_port(s, op.labels[0]);
        need_label_name(op.labels[1]);
        auto P = port_labels(s);
        P.erase(op.labels[0]);
        P.insert(op.labels[1]);
        return Sort::ports(P);
    }
    if (h == "fg") {
        need_port(s, op.labels[0]);
        auto P = port_labels(s);
        P.erase(op.labels[0]);
        return Sort::ports(P);
    }
    if (h == "mdf") {
        need_port_sort(s);
        std::set<Label> Q;
        for (auto& [p, q] : op.pairs) {
            need_port(s, p);
            need_label_name(q);
            Q.insert(q);
        }
        return Sort::ports(Q);
    }
    if (h == "mark") {
        need_port_sort(s);
        need_label_name(op.labels[0]);
        auto P = port_labels(s);
        P.insert(op.labels[0]);
        return Sort::ports(P);
    }
    if (h == "apply-scheme") {
        QfdScheme tmp;
        const QfdScheme& g = resolve_scheme(op, s, ctx, tmp);
        need(g.in == s, "apply-scheme: scheme '" + op.labels[0] + "' expects " + g.in.str() + ", got " + s.str());
        return g.out;
    }
    throw SortError("operation '" + h + "' does not apply to structures");
}

struct Checker {
    Sig sig;
    const TypeContext& ctx;

    TermSort go(const TermPtr& t, const std::string& path) {
        std::vector<TermSort> kids;
        for (size_t i = 0; i < t->kids.size(); ++i) kids.push_back(go(t->kids[i], path + "/" + std::to_string(i)));
        try {
            return here(t->op, kids);
        } catch (const SortError& e) {
            throw SortError("ill-typed node at " + path + " (" + t->op.key() + "): " + e.what());
        }
    }

    TermSort here(const OpSym& op, const std::vector<TermSort>& kids) {
        if (op.head == "hole") {
            size_t i = op.labels.empty() ? 0 : std::stoul(op.labels[0]);
            need(i < ctx.holes.size(), "hole " + std::to_string(i) + " has no declared sort");
            return ctx.holes[i];
        }
        need(sig_admits(sig, op.head), "operation '" + op.head + "' is not in signature " + sig_name(sig));
        if (sig == Sig::ECON) {
            if (op.head == "econ-0") return {TermSort::Ordered, Sort::graph()};
            need(kids[0].kind == TermSort::Ordered, op.head + " needs an ordered graph");
            return {op.head == "econ-forget" ? TermSort::Unordered : TermSort::Ordered, Sort::graph()};
        }
        TermSort::Kind kind = sig == Sig::HRM ? TermSort::Multi : TermSort::Struct;
        std::vector<Sort> in;
        for (auto& k : kids) {
            need(k.kind == kind, "argument of kind " + k.str() + " where " +
                                     (kind == TermSort::Multi ? std::string("a multigraph") : std::string("a structure")) +
                                     " is expected");
            in.push_back(k.sort);
        }
        return {kind, struct_sort(op, in, ctx)};
    }
};

}  // namespace

TermSort typecheck_term(const TermPtr& t, Sig sig, const TypeContext& ctx) {
    Checker c{sig, ctx};
    return c.go(t, "root");
}

// ---------------------------------------------------------------------------------------
// evaluation

namespace {

Structure constant_value(const OpSym& op) {
    const auto& h = op.head;
    if (h == "port" || h == "port-loop") return single_port(op.labels[0], h == "port-loop");
    if (h == "src" || h == "src-loop") return single_source(op.labels[0], h == "src-loop");
    if (h == "edge") return source_edge(op.labels[0], op.labels[1]);
    if (h == "v" || h == "v-loop") return single_vertex(h == "v-loop");
    if (h == "econ-0") return Structure(Sort::graph(), 0);
    throw SortError("'" + h + "' is not a constant");
}

Structure struct_op(const OpSym& op, const std::vector<Structure>& a, const TypeContext& ctx) {
    const auto& h = op.head;
    const auto& L = op.labels;
    if (op.arity() == 0) return constant_value(op);
    if (h == "oplus") return oplus(a[0], a[1]);
    if (h == "parallel") return parallel(a[0], a[1]);
    if (h == "box") return box(a[0], a[1]);
    if (h == "otimes") return otimes(op.pairs, a[0], a[1]);
    if (h == "modular") return modular_compose(modular_quotient(op), a);
    if (h == "srcren") return srcren(a[0], L[0], L[1]);
    if (h == "srcfg") return srcfg(a[0], L[0]);
    if (h == "srcfg-all") return srcfg_all(a[0]);
    if (h == "fus") return fus(a[0], L[0], L[1]);
    if (h == "fus-to") return fus_to(a[0], L[0], L[1]);
    if (h == "del") return del_pairs(a[0], op.pairs);
    if (h == "fusrel") return fus_pairs(a[0], op.pairs);
    if (h == "add") return add_edges(a[0], L[0], L[1]);
    if (h == "ren") return ren(a[0], L[0], L[1]);
    if (h == "fg") return fg(a[0], L[0]);
    if (h == "mdf") return mdf(a[0], op.pairs);
    if (h == "mark") return mark(a[0], L[0]);
    if (h == "apply-scheme") {
        QfdScheme tmp;
        return apply_scheme(resolve_scheme(op, a[0].sort, ctx, tmp), a[0]);
    }
    if (h == "econ-forget") return a[0];
    if (h == "econ-vertex") return econ_vertex(a[0]);
    if (h == "econ-edge") return econ_edge(a[0]);
    if (h == "econ-shift") return econ_shift(a[0]);
    if (h == "econ-swap") return econ_swap(a[0]);
    throw SortError("operation '" + h + "' does not apply to structures");
}

MultiGraph multi_op(const OpSym& op, const std::vector<MultiGraph>& a) {
    const auto& h = op.head;
    if (op.arity() == 0) return inject_iota(constant_value(op));
    if (h == "oplus") return m_oplus(a[0], a[1]);
    if (h == "parallel") return m_parallel(a[0], a[1]);
    if (h == "srcren") return m_srcren(a[0], op.labels[0], op.labels[1]);
    if (h == "srcfg") return m_srcfg(a[0], op.labels[0]);
    if (h == "mfus") return mfus(a[0], op.labels[0], op.labels[1]);
    throw SortError("operation '" + h + "' does not apply to multigraphs");
}

Value eval_rec(const TermPtr& t, Sig sig, const EvalContext& ctx) {
    if (t->op.head == "hole") {
        size_t i = t->op.labels.empty() ? 0 : std::stoul(t->op.labels[0]);
        if (i >= ctx.hole_values.size()) throw SortError("hole " + std::to_string(i) + " has no value");
        return ctx.hole_values[i];
    }
    std::vector<Value> vals;
    for (auto& k : t->kids) vals.push_back(eval_rec(k, sig, ctx));
    return apply_op(t->op, vals, sig, ctx);
}

}  // namespace

Value apply_op(const OpSym& op, const std::vector<Value>& args, Sig sig, const TypeContext& ctx) {
    if (sig == Sig::HRM) {
        std::vector<MultiGraph> a;
        for (auto& v : args) a.push_back(std::get<MultiGraph>(v));
        return multi_op(op, a);
    }
    std::vector<Structure> a;
    for (auto& v : args) a.push_back(std::get<Structure>(v));
    return struct_op(op, a, ctx);
}

Value eval_term(const TermPtr& t, Sig sig, const EvalContext& ctx) {
    TypeContext tc = ctx;
    if (tc.holes.size() < ctx.hole_values.size()) {
        for (size_t i = tc.holes.size(); i < ctx.hole_values.size(); ++i) {
            auto& v = ctx.hole_values[i];
            if (auto* s = std::get_if<Structure>(&v))
                tc.holes.push_back({sig == Sig::ECON ? TermSort::Ordered : TermSort::Struct, s->sort});
            else {
                Sort so = Sort::graph(std::get<MultiGraph>(v).constants);
                tc.holes.push_back({TermSort::Multi, so});
            }
        }
    }
    typecheck_term(t, sig, tc);
    return eval_rec(t, sig, ctx);
}

Structure eval_structure(const TermPtr& t, Sig sig, const EvalContext& ctx) {
    if (sig == Sig::HRM) throw SortError("HRM terms evaluate to multigraphs");
    return std::get<Structure>(eval_term(t, sig, ctx));
}

MultiGraph eval_multigraph(const TermPtr& t, const EvalContext& ctx) {
    return std::get<MultiGraph>(eval_term(t, Sig::HRM, ctx));
}

TermPtr plug(const TermPtr& ctx, const std::vector<TermPtr>& args) {
    if (ctx->op.head == "hole") {
        size_t i = ctx->op.labels.empty() ? 0 : std::stoul(ctx->op.labels[0]);
        if (i >= args.size()) throw SortError("no argument for hole " + std::to_string(i));
        return args[i];
    }
    if (ctx->kids.empty()) return ctx;
    std::vector<TermPtr> kids;
    for (auto& k : ctx->kids) kids.push_back(plug(k, args));
    return make_term(ctx->op, std::move(kids));
}

// ---------------------------------------------------------------------------------------
// schemes of operations

namespace {

Label fresh_label(const Label& c, const std::set<Label>& taken) {
    Label x = c + "~";
    while (taken.count(x)) x += "~";
    return x;
}

std::vector<std::pair<Label, Label>> rename_apart(const Sort& left, const Sort& right) {
    std::set<Label> taken = left.constants;
    taken.insert(right.constants.begin(), right.constants.end());
    std::vector<std::pair<Label, Label>> out;
    for (auto& c : right.constants)
        if (left.has_constant(c)) {
            Label x = fresh_label(c, taken);
            taken.insert(x);
            out.push_back({c, x});
        }
    return out;
}

QfdScheme chain(const QfdScheme& first, const QfdScheme& then) { return compose_schemes(then, first); }

}  // namespace

std::optional<QfdScheme> op_scheme(const OpSym& op, const std::vector<Sort>& in, const TypeContext& ctx,
                                   std::vector<std::pair<Label, Label>>* rename) {
    const auto& h = op.head;
    const auto& L = op.labels;
    if (rename) rename->clear();
    if (op.arity() == 1) {
        const Sort& s = in.at(0);
        if (h == "srcren") return scheme_srcren(s, L[0], L[1]);
        if (h == "srcfg") return scheme_srcfg(s, L[0]);
        if (h == "srcfg-all") {
            QfdScheme g = scheme_identity(s);
            for (auto& c : s.constants) g = chain(g, scheme_srcfg(g.out, c));
            return g;
        }
        if (h == "fus") return scheme_fus(s, L[0], L[1]);
        if (h == "fus-to") return scheme_fus_to(s, L[0], L[1]);
        if (h == "add") return scheme_add(s, L[0], L[1]);
        if (h == "ren") return scheme_ren(s, L[0], L[1]);
        if (h == "fg") return scheme_fg(s, L[0]);
        if (h == "mdf") return scheme_mdf(s, op.pairs);
        if (h == "mark") return scheme_mark(s, L[0]);
        if (h == "del") return scheme_del(s, op.pairs);
        if (h == "fusrel") {
            QfdScheme g = scheme_identity(s);
            for (auto& [a, b] : op.pairs) g = chain(g, scheme_fus(g.out, a, b));
            return g;
        }
        if (h == "apply-scheme") {
            QfdScheme tmp;
            return resolve_scheme(op, s, ctx, tmp);
        }
        return std::nullopt;
    }
    if (op.arity() == 2 && in.size() == 2) {
        if (h == "oplus") return scheme_identity(joint_sort(in[0], in[1]));
        if (h == "otimes") {
            QfdScheme g = scheme_identity(joint_sort(in[0], in[1]));
            for (auto& [p, q] : op.pairs) g = chain(g, scheme_add(g.out, p, q));
            return g;
        }
        if (h == "parallel" || h == "box") {
            auto ren = rename_apart(in[0], in[1]);
            Sort r = in[1];
            for (auto& [c, x] : ren) {
                r.constants.erase(c);
                r.constants.insert(x);
            }
            QfdScheme g = scheme_identity(joint_sort(in[0], r));
            for (auto& [c, x] : ren) g = chain(g, scheme_fus(g.out, c, x));
            for (auto& [c, x] : ren) g = chain(g, scheme_srcfg(g.out, x));
            if (h == "box")
                for (auto& c : Sort(g.out).constants) g = chain(g, scheme_srcfg(g.out, c));
            if (rename) *rename = ren;
            return g;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------------------
// derived operations

TermPtr derive_parallel(const Sort& left, const Sort& right, const TermPtr& s, const TermPtr& t) {
    auto ren = rename_apart(left, right);
    TermPtr r = t;
    for (auto& [c, x] : ren) r = t_op("srcren", {c, x}, {r});
    TermPtr u = t_op("oplus", {}, {s, r});
    for (auto& [c, x] : ren) u = t_op("fus", {c, x}, {u});
    for (auto& [c, x] : ren) u = t_op("srcfg", {x}, {u});
    return u;
}

TermPtr expand_derived(const TermPtr& t, Sig sig, const TypeContext& ctx) {
    if (t->kids.empty()) return t;
    std::vector<TermPtr> kids;
    std::vector<Sort> sorts;
    for (auto& k : t->kids) {
        sorts.push_back(typecheck_term(k, sig, ctx).sort);
        kids.push_back(expand_derived(k, sig, ctx));
    }
    const auto& h = t->op.head;
    if (h == "parallel") return derive_parallel(sorts[0], sorts[1], kids[0], kids[1]);
    if (h == "box") {
        TermPtr u = derive_parallel(sorts[0], sorts[1], kids[0], kids[1]);
        for (auto& c : joint_sort(sorts[0], sorts[1]).constants) u = t_op("srcfg", {c}, {u});
        return u;
    }
    if (h == "otimes") {
        TermPtr u = t_op("oplus", {}, kids);
        for (auto& [p, q] : t->op.pairs) u = t_op("add", {p, q}, {u});
        return u;
    }
    if (h == "fus-to") return t_op("srcfg", {t->op.labels[0]}, {t_op("fus", t->op.labels, kids)});
    if (h == "srcfg-all") {
        TermPtr u = kids[0];
        for (auto& c : sorts[0].constants) u = t_op("srcfg", {c}, {u});
        return u;
    }
    if (h == "fusrel") {
        TermPtr u = kids[0];
        for (auto& [a, b] : t->op.pairs) u = t_op("fus", {a, b}, {u});
        return u;
    }
    return make_term(t->op, std::move(kids));
}

Structure modular_compose(const Structure& h, const std::vector<Structure>& parts) {
    if (h.size < 2) throw SortError("modular composition needs a quotient with at least 2 vertices");
    if (static_cast<int>(parts.size()) != h.size)
        throw SortError("modular composition: " + std::to_string(parts.size()) + " parts for " +
                        std::to_string(h.size) + " quotient vertices");
    std::vector<int> offset;
    Structure out(Sort::graph(), 0);
    for (auto& p : parts) {
        if (p.sort != Sort::graph()) throw SortError("modular composition: parts must be plain graphs, got " + p.sort.str());
        offset.push_back(out.size);
        out = oplus(out, p);
    }
    offset.push_back(out.size);
    auto it = h.tuples.find(kEdge);
    if (it != h.tuples.end())
        for (auto& e : it->second) {
            int i = e[0], j = e[1];
            if (i == j) continue;
            for (int u = offset[i]; u < offset[i + 1]; ++u)
                for (int w = offset[j]; w < offset[j + 1]; ++w) out.add(kEdge, {u, w});
        }
    return out;
}

TermPtr vr_term_for_modular(const Structure& h) {
    if (h.size < 2) throw SortError("modular composition needs a quotient with at least 2 vertices");
    TermPtr u;
    for (int i = 0; i < h.size; ++i) {
        TermPtr m = t_op("mark", {std::to_string(i + 1)}, {t_hole(i)});
        u = u ? t_op("oplus", {}, {u, m}) : m;
    }
    auto it = h.tuples.find(kEdge);
    if (it != h.tuples.end())
        for (auto& e : it->second)
            if (e[0] != e[1]) u = t_op("add", {std::to_string(e[0] + 1), std::to_string(e[1] + 1)}, {u});
    return t_pairs("mdf", {}, {u});
}

}  // namespace graft
