#include "graft/recognizers.hpp"

#include <mutex>

#include "graft/modular.hpp"
#include "json.hpp"

namespace graft {

using nlohmann::json;

TreeAutomaton::TreeAutomaton(std::string name, Sig sig, Delta delta, Accept accept)
    : name_(std::move(name)),
      sig_(sig),
      heads_(sig_heads(sig)),
      delta_(std::move(delta)),
      accept_(std::move(accept)),
      memo_(std::make_shared<std::map<std::string, Transition>>()) {}

std::string transition_key(const std::string& op, const std::vector<State>& args) {
    return op + " " + json(args).dump();
}

State TreeAutomaton::delta(const OpSym& op, const std::vector<State>& kids) const {
    if (!heads_.count(op.head))
        throw SortError("automaton '" + name_ + "': symbol '" + op.head + "' is outside its signature");
    std::string key = transition_key(op.key(), kids);
    auto it = memo_->find(key);
    if (it != memo_->end()) return it->second.to;
    State s = delta_(op, kids);
    memo_->emplace(key, Transition{op.key(), kids, s});
    return s;
}

State TreeAutomaton::run(const TermPtr& t, const std::vector<State>& holes) const {
    if (t->op.head == "hole") {
        size_t i = t->op.labels.empty() ? 0 : std::stoul(t->op.labels[0]);
        if (i >= holes.size()) throw SortError("automaton run: hole " + std::to_string(i) + " has no state");
        return holes[i];
    }
    std::vector<State> kids;
    for (auto& k : t->kids) kids.push_back(run(k, holes));
    return delta(t->op, kids);
}

std::vector<TreeAutomaton::Transition> TreeAutomaton::transitions() const {
    std::vector<Transition> out;
    for (auto& [k, t] : *memo_) out.push_back(t);
    return out;
}

TreeAutomaton TreeAutomaton::with_heads(std::set<std::string> heads) const {
    TreeAutomaton a = *this;
    a.heads_ = std::move(heads);
    a.memo_ = std::make_shared<std::map<std::string, Transition>>();
    return a;
}

TreeAutomaton TreeAutomaton::with_accept(Accept accept, std::string name) const {
    TreeAutomaton a = *this;
    a.accept_ = std::move(accept);
    a.name_ = std::move(name);
    return a;
}

State pair_state(const State& a, const State& b) { return json::array({a, b}).dump(); }

std::pair<State, State> unpair_state(const State& s) {
    auto j = json::parse(s, nullptr, false);
    if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
        throw SortError("not a pair state: " + s);
    return {j[0].get<std::string>(), j[1].get<std::string>()};
}

namespace {

TreeAutomaton pairing(const TreeAutomaton& a, const TreeAutomaton& b, bool conj, const std::string& name) {
    if (a.sig() != b.sig())
        throw SortError("automata over different signatures: " + sig_name(a.sig()) + " and " + sig_name(b.sig()));
    TreeAutomaton::Delta d = [a, b](const OpSym& op, const std::vector<State>& kids) {
        std::vector<State> l, r;
        for (auto& k : kids) {
            auto [x, y] = unpair_state(k);
            l.push_back(x);
            r.push_back(y);
        }
        return pair_state(a.delta(op, l), b.delta(op, r));
    };
    TreeAutomaton::Accept acc = [a, b, conj](const State& s) {
        auto [x, y] = unpair_state(s);
        return conj ? a.accepting(x) && b.accepting(y) : a.accepting(x) || b.accepting(y);
    };
    std::set<std::string> heads;
    for (auto& h : a.heads())
        if (b.heads().count(h)) heads.insert(h);
    return TreeAutomaton(name, a.sig(), d, acc).with_heads(heads);
}

}  // namespace

TreeAutomaton product(const TreeAutomaton& a, const TreeAutomaton& b) {
    return pairing(a, b, true, "(" + a.name() + " and " + b.name() + ")");
}

TreeAutomaton automaton_union(const TreeAutomaton& a, const TreeAutomaton& b) {
    return pairing(a, b, false, "(" + a.name() + " or " + b.name() + ")");
}

TreeAutomaton complement(const TreeAutomaton& a) {
    return a.with_accept([a](const State& s) { return !a.accepting(s); }, "(not " + a.name() + ")");
}

TreeAutomaton preimage(const TreeAutomaton& a, const TermPtr& ctx) {
    return a.with_accept([a, ctx](const State& s) { return a.accepting(a.run(ctx, {s})); },
                         "(" + a.name() + " after " + print_term(ctx) + ")");
}

TreeAutomaton restrict_to(const TreeAutomaton& a, Sig sub) {
    std::set<std::string> heads;
    for (auto& h : sig_heads(sub)) {
        if (!a.heads().count(h))
            throw SortError(sig_name(sub) + " is not a subsignature: '" + h + "' is missing from " + a.name());
        heads.insert(h);
    }
    return a.with_heads(heads);
}

TreeAutomaton table_automaton(std::string name, Sig sig, std::map<std::string, State> table, std::set<State> accepting) {
    auto tab = std::make_shared<std::map<std::string, State>>(std::move(table));
    auto acc = std::make_shared<std::set<State>>(std::move(accepting));
    TreeAutomaton::Delta d = [tab](const OpSym& op, const std::vector<State>& kids) {
        auto it = tab->find(transition_key(op.key(), kids));
        if (it == tab->end()) throw SortError("no transition for " + transition_key(op.key(), kids));
        return it->second;
    };
    return TreeAutomaton(std::move(name), sig, d, [acc](const State& s) { return acc->count(s) > 0; });
}

// ---------------------------------------------------------------------------------------
// evaluators

namespace {

std::string eta_text(const EtaRelation& e) {
    std::string s = "{";
    for (auto& [a, b] : e) s += "(" + a + "," + b + ")";
    return s + "}";
}

const Structure& as_structure(const Value& v) {
    if (auto* s = std::get_if<Structure>(&v)) return *s;
    throw SortError("evaluator expects a structure");
}

const MultiGraph& as_multi(const Value& v) {
    if (auto* m = std::get_if<MultiGraph>(&v)) return *m;
    throw SortError("evaluator expects a multigraph");
}

std::string prime_class(const Structure& g, const std::function<bool(const Structure&)>& in_L) {
    if (has_loops(g)) throw SortError("prime classes are defined on loop-free graphs");
    if (g.size == 1) return "one";
    if (!is_prime(g)) return "nonprime";
    return in_L(g) ? "prime-in-L" : "prime-not-in-L";
}

}  // namespace

CongruenceEvaluator zeta_evaluator(Sig sig) {
    return {"zeta", sig, [](const Value& v) { return canonical_key(compute_type(as_structure(v))); }};
}

CongruenceEvaluator simplicity_evaluator() {
    return {"simplicity", Sig::HRM, [](const Value& v) -> std::string {
                const MultiGraph& m = as_multi(v);
                if (has_multiedges(m)) return "MULTI";
                Structure g = simplify_u(m);
                return canonical_key(compute_type(g)) + "|" + eta_text(eta(g));
            }};
}

CongruenceEvaluator prime_evaluator(std::function<bool(const Structure&)> in_L) {
    return {"prime", Sig::MODULAR, [in_L](const Value& v) { return prime_class(as_structure(v), in_L); }};
}

CongruenceEvaluator parity_evaluator(Sig sig) {
    return {"parity", sig, [](const Value& v) -> std::string {
                if (auto* m = std::get_if<MultiGraph>(&v)) return std::to_string(m->nv % 2);
                return std::to_string(as_structure(v).size % 2);
            }};
}

CongruenceEvaluator eta_only_evaluator() {
    return {"eta", Sig::HRM, [](const Value& v) -> std::string {
                const MultiGraph& m = as_multi(v);
                if (has_multiedges(m)) return "MULTI";
                return eta_text(eta(simplify_u(m)));
            }};
}

// ---------------------------------------------------------------------------------------
// congruence check

namespace {

bool port_sig(Sig s) { return s == Sig::VR || s == Sig::VRPLUS || s == Sig::VRPI || s == Sig::NLC; }

TermSort value_sort(const Value& v) {
    if (auto* s = std::get_if<Structure>(&v)) return {TermSort::Struct, s->sort};
    return {TermSort::Multi, Sort::graph(std::get<MultiGraph>(v).constants)};
}

std::vector<std::set<Label>> subsets(const std::vector<Label>& xs) {
    std::vector<std::set<Label>> out;
    for (unsigned m = 0; m < (1u << xs.size()); ++m) {
        std::set<Label> s;
        for (size_t i = 0; i < xs.size(); ++i)
            if (m >> i & 1) s.insert(xs[i]);
        out.push_back(s);
    }
    return out;
}

OpSym mk(const std::string& head, std::vector<std::string> labels = {}, std::vector<std::pair<Label, Label>> pairs = {},
         bool has_pairs = false) {
    OpSym op;
    op.head = head;
    op.labels = std::move(labels);
    op.pairs = std::move(pairs);
    op.has_pairs = has_pairs;
    return op;
}

}  // namespace

std::vector<Value> congruence_domain(Sig sig, const CongruenceDomain& d) {
    if (d.max_size > cap_or(5)) throw CapacityError("congruence domain: size bound " + std::to_string(d.max_size) + " exceeds cap");
    std::vector<Value> out;
    auto keep = [&](const Structure& g) { return d.loops || !has_loops(g); };
    if (sig == Sig::ECON) throw SortError("congruence checks do not cover ECON");
    if (sig == Sig::MODULAR) {
        for (auto& g : all_structures(Sort::graph(), d.max_size, true))
            if (g.size >= 1 && keep(g)) out.push_back(g);
        return out;
    }
    for (auto& C : subsets(d.labels)) {
        Sort s = port_sig(sig) ? Sort::ports(C) : Sort::graph(C);
        for (auto& g : all_structures(s, d.max_size, true)) {
            if (!keep(g)) continue;
            if (sig != Sig::HRM) {
                out.push_back(g);
                continue;
            }
            MultiGraph m = inject_iota(g);
            out.push_back(m);
            if (!m.edges.empty()) {
                m.edges.push_back(m.edges.front());
                out.push_back(m);
            }
        }
    }
    return out;
}

std::vector<OpSym> congruence_ops(Sig sig, const CongruenceDomain& d) {
    const auto& L = d.labels;
    std::vector<Label> T = L;
    T.push_back("z");
    std::vector<OpSym> out;
    for (auto& h : sig_heads(sig)) {
        OpSym probe = mk(h);
        if (h == "hole" || h == "apply-scheme" || (probe.arity() == 0 && h != "modular")) continue;
        if (h == "oplus" || h == "parallel" || h == "box" || h == "srcfg-all") out.push_back(mk(h));
        else if (h == "srcren" || h == "ren") {
            for (auto& x : L)
                for (auto& y : T)
                    if (x != y) out.push_back(mk(h, {x, y}));
        } else if (h == "srcfg" || h == "fg") {
            for (auto& x : L) out.push_back(mk(h, {x}));
        } else if (h == "fus" || h == "fus-to" || h == "mfus" || h == "add") {
            for (auto& x : L)
                for (auto& y : L)
                    if (x != y) out.push_back(mk(h, {x, y}));
        } else if (h == "del" || h == "fusrel" || h == "otimes" || h == "mdf") {
            if (h == "otimes" || h == "mdf") out.push_back(mk(h, {}, {}, true));
            for (auto& x : L)
                for (auto& y : (h == "mdf" ? T : L))
                    if (x != y || h == "mdf") out.push_back(mk(h, {}, {{x, y}}, true));
        } else if (h == "mark") {
            out.push_back(mk(h, {"z"}));
        } else if (h == "modular") {
            for (int n = 2; n <= 3; ++n) {
                std::vector<std::pair<int, int>> slots;
                for (int i = 1; i <= n; ++i)
                    for (int j = 1; j <= n; ++j)
                        if (i != j) slots.push_back({i, j});
                for (unsigned m = 0; m < (1u << slots.size()); ++m) {
                    std::vector<std::pair<Label, Label>> pairs;
                    for (size_t k = 0; k < slots.size(); ++k)
                        if (m >> k & 1) pairs.push_back({std::to_string(slots[k].first), std::to_string(slots[k].second)});
                    out.push_back(mk(h, {std::to_string(n)}, pairs, true));
                }
            }
        } else if (h.starts_with("econ")) {
            continue;
        } else {
            throw SortError("congruence_ops: no payloads for '" + h + "'");
        }
    }
    return out;
}

CongruenceReport check_congruence(const CongruenceEvaluator& ev, const CongruenceDomain& d) {
    CongruenceReport rep;
    auto domain = congruence_domain(ev.sig, d);
    auto ops = congruence_ops(ev.sig, d);
    rep.domain = domain.size();
    // class = sort and label; representative = first member
    std::vector<std::string> cls(domain.size());
    std::map<std::string, size_t> rep_of;
    for (size_t i = 0; i < domain.size(); ++i) {
        cls[i] = value_sort(domain[i]).str() + "#" + ev.label(domain[i]);
        rep_of.emplace(cls[i], i);
    }
    std::vector<size_t> reps;
    for (auto& [c, i] : rep_of) reps.push_back(i);
    rep.classes = reps.size();

    std::map<std::string, bool> typed;
    auto well_sorted = [&](const OpSym& op, const std::vector<size_t>& args) {
        TypeContext ctx;
        std::string key = op.key();
        std::vector<TermPtr> holes;
        for (size_t i = 0; i < args.size(); ++i) {
            ctx.holes.push_back(value_sort(domain[args[i]]));
            key += "|" + ctx.holes.back().str();
            holes.push_back(t_hole(static_cast<int>(i)));
        }
        auto it = typed.find(key);
        if (it != typed.end()) return it->second;
        bool ok = true;
        try {
            typecheck_term(make_term(op, holes), ev.sig, ctx);
        } catch (const SortError&) {
            ok = false;
        }
        typed[key] = ok;
        return ok;
    };
    auto label_of = [&](const OpSym& op, const std::vector<size_t>& args) {
        std::vector<Value> vals;
        for (size_t a : args) vals.push_back(domain[a]);
        return ev.label(apply_op(op, vals, ev.sig));
    };

    for (auto& op : ops) {
        int k = op.arity();
        for (int pos = 0; pos < k; ++pos) {
            // the other positions range over representatives
            size_t combos = 1;
            for (int i = 0; i < k - 1; ++i) combos *= reps.size();
            for (size_t x = 0; x < domain.size(); ++x) {
                size_t r = rep_of[cls[x]];
                if (r == x) continue;
                for (size_t c = 0; c < combos; ++c) {
                    std::vector<size_t> a1, a2;
                    size_t cc = c;
                    for (int i = 0; i < k; ++i) {
                        if (i == pos) {
                            a1.push_back(x);
                            a2.push_back(r);
                        } else {
                            a1.push_back(reps[cc % reps.size()]);
                            a2.push_back(reps[cc % reps.size()]);
                            cc /= reps.size();
                        }
                    }
                    if (!well_sorted(op, a1)) continue;
                    ++rep.checks;
                    if (label_of(op, a1) != label_of(op, a2)) {
                        rep.ok = false;
                        rep.op = op.key();
                        for (size_t i : a1) rep.args.push_back(domain[i]);
                        for (size_t i : a2) rep.other.push_back(domain[i]);
                        rep.message = "(" + op.key() + ") separates argument " + std::to_string(pos) +
                                      " from its class representative";
                        return rep;
                    }
                }
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------------------
// automata

namespace {

Structure constant_structure(const OpSym& op) { return std::get<Structure>(apply_op(op, {}, Sig::S)); }

Structure quotient_of(const OpSym& op) {
    int n = op.arity();
    if (n < 2) throw SortError("modular operation needs arity >= 2");
    Structure h(Sort::graph(), n);
    for (auto& [i, j] : op.pairs) h.add(kEdge, {std::stoi(i) - 1, std::stoi(j) - 1});
    return h;
}

}  // namespace

TreeAutomaton zeta_automaton(Sig sig) {
    if (sig == Sig::HRM || sig == Sig::ECON) throw SortError("zeta automaton works on structure signatures");
    auto reg = std::make_shared<std::map<State, Structure>>();
    auto mutex = std::make_shared<std::mutex>();
    TreeAutomaton::Delta d = [reg, mutex, sig](const OpSym& op, const std::vector<State>& kids) {
        std::vector<Value> vals;
        {
            std::lock_guard<std::mutex> lock(*mutex);
            for (auto& k : kids) vals.push_back(reg->at(k));
        }
        Structure z = canonical(compute_type(std::get<Structure>(apply_op(op, vals, sig))));
        State s = canonical_key(z);
        std::lock_guard<std::mutex> lock(*mutex);
        reg->emplace(s, z);
        return s;
    };
    return TreeAutomaton("zeta", sig, d, [](const State&) { return true; });
}

namespace {

struct SimpState {
    bool multi = false;
    Structure z;  // canonical type
    EtaRelation e;
};

EtaRelation norm_eta(const EtaRelation& e) {
    EtaRelation out;
    for (auto [a, b] : e) {
        if (b < a) std::swap(a, b);
        out.insert({a, b});
    }
    return out;
}

struct Simplicity {
    std::map<State, SimpState> reg;
    std::mutex mutex;

    State put(SimpState s) {
        if (s.multi) {
            std::lock_guard<std::mutex> lock(mutex);
            reg.emplace("MULTI", s);
            return "MULTI";
        }
        s.z = canonical(compute_type(s.z));
        s.e = norm_eta(s.e);
        State key = canonical_key(s.z) + "|" + eta_text(s.e);
        std::lock_guard<std::mutex> lock(mutex);
        reg.emplace(key, s);
        return key;
    }
    SimpState get(const State& k) {
        std::lock_guard<std::mutex> lock(mutex);
        return reg.at(k);
    }

    SimpState oplus_(const SimpState& a, const SimpState& b) {
        if (a.multi || b.multi) return {true, {}, {}};
        SimpState s{false, oplus(a.z, b.z), a.e};
        s.e.insert(b.e.begin(), b.e.end());
        return s;
    }
    SimpState srcren_(const SimpState& a, const Label& x, const Label& y) {
        if (a.multi || x == y) return a;
        SimpState s{false, srcren(a.z, x, y), {}};
        for (auto [c, d] : a.e) s.e.insert({c == x ? y : c, d == x ? y : d});
        s.e = norm_eta(s.e);
        return s;
    }
    SimpState srcfg_(const SimpState& a, const Label& x) {
        if (a.multi) return a;
        SimpState s{false, srcfg(a.z, x), {}};
        for (auto& p : a.e)
            if (p.first != x && p.second != x) s.e.insert(p);
        return s;
    }
    SimpState mfus_(const SimpState& a, const Label& x, const Label& y) {
        if (a.multi) return a;
        if (a.z.source(x) == a.z.source(y)) return a;
        if (predict_mfus_multiedge(a.z, a.e, x, y)) return {true, {}, {}};
        Structure f = fus(a.z, x, y);
        SimpState s{false, f, {}};
        EtaRelation from_type = eta(f);
        // labels grouped by their vertex after the fusion
        std::map<int, std::vector<Label>> at;
        for (auto& [c, v] : f.sources) at[v].push_back(c);
        for (auto& [c, vc] : f.sources)
            for (auto& [d, vd] : f.sources) {
                if (!(c < d) || vc == vd) continue;
                bool hit = from_type.count({c, d}) > 0;
                for (auto& e1 : at[vc])
                    for (auto& e2 : at[vd]) {
                        auto k = e1 < e2 ? std::make_pair(e1, e2) : std::make_pair(e2, e1);
                        if (a.e.count(k)) hit = true;
                    }
                if (hit) s.e.insert({c, d});
            }
        return s;
    }
    SimpState parallel_(const SimpState& a, SimpState b) {
        if (a.multi || b.multi) return {true, {}, {}};
        std::set<Label> taken = a.z.sort.constants;
        taken.insert(b.z.sort.constants.begin(), b.z.sort.constants.end());
        std::vector<std::pair<Label, Label>> ren;
        for (auto& c : b.z.sort.constants)
            if (a.z.sort.has_constant(c)) {
                Label x = c + "~";
                while (taken.count(x)) x += "~";
                taken.insert(x);
                ren.push_back({c, x});
            }
        for (auto& [c, x] : ren) b = srcren_(b, c, x);
        SimpState s = oplus_(a, b);
        for (auto& [c, x] : ren) s = mfus_(s, c, x);
        for (auto& [c, x] : ren) s = srcfg_(s, x);
        return s;
    }
};

}  // namespace

TreeAutomaton simplicity_automaton() {
    auto S = std::make_shared<Simplicity>();
    TreeAutomaton::Delta d = [S](const OpSym& op, const std::vector<State>& kids) -> State {
        const auto& h = op.head;
        if (op.arity() == 0) {
            Structure g = constant_structure(op);
            return S->put({false, g, eta(g)});
        }
        std::vector<SimpState> k;
        for (auto& s : kids) k.push_back(S->get(s));
        if (h == "oplus") return S->put(S->oplus_(k[0], k[1]));
        if (h == "parallel") return S->put(S->parallel_(k[0], k[1]));
        if (h == "srcren") return S->put(S->srcren_(k[0], op.labels[0], op.labels[1]));
        if (h == "srcfg") return S->put(S->srcfg_(k[0], op.labels[0]));
        if (h == "mfus") return S->put(S->mfus_(k[0], op.labels[0], op.labels[1]));
        throw SortError("simplicity automaton: no transition for '" + h + "'");
    };
    return TreeAutomaton("simple", Sig::HRM, d, [](const State& s) { return s != "MULTI"; });
}

TreeAutomaton prime_automaton(std::function<bool(const Structure&)> in_L) {
    TreeAutomaton::Delta d = [in_L](const OpSym& op, const std::vector<State>& kids) -> State {
        if (op.head == "v") return "one";
        if (op.head == "v-loop") throw SortError("prime automaton: loop-free graphs only");
        if (op.head != "modular") throw SortError("prime automaton: no transition for '" + op.head + "'");
        for (auto& k : kids)
            if (k != "one") return "nonprime";
        return prime_class(quotient_of(op), in_L);
    };
    return TreeAutomaton("prime", Sig::MODULAR, d, [](const State& s) { return s == "prime-in-L"; });
}

// ---------------------------------------------------------------------------------------
// FO_d recognizer

namespace {

std::map<State, HType>& fo_registry() {
    static std::map<State, HType> reg;
    return reg;
}
std::mutex& fo_mutex() {
    static std::mutex m;
    return m;
}

State fo_put(const HType& t) {
    std::lock_guard<std::mutex> lock(fo_mutex());
    fo_registry().emplace(t->digest, t);
    return t->digest;
}

}  // namespace

HType fo_state_type(const State& s) {
    std::lock_guard<std::mutex> lock(fo_mutex());
    auto it = fo_registry().find(s);
    if (it == fo_registry().end()) throw SortError("unknown type state " + s);
    return it->second;
}

TreeAutomaton compile_fo_recognizer(const Formula& sentence, int d, Sig sig) {
    if (!free_vars(sentence).empty()) throw SortError("compile_fo_recognizer: the formula has free variables");
    if (qdepth(sentence) > d) throw SortError("compile_fo_recognizer: quantifier depth exceeds d");
    for (auto& h : sig_heads(sig))
        if (h == "mfus" || h.starts_with("econ"))
            throw SortError("compile_fo_recognizer: '" + h + "' is neither disjoint union nor a qfd operation");
    TreeAutomaton::Delta delta = [d, sig](const OpSym& op, const std::vector<State>& kids) -> State {
        const auto& h = op.head;
        if (op.arity() == 0) return fo_put(fo_theory(std::get<Structure>(apply_op(op, {}, sig)), d));
        std::vector<HType> t;
        for (auto& k : kids) t.push_back(fo_state_type(k));
        if (h == "oplus") return fo_put(theory_oplus(t[0], t[1]));
        if (h == "modular") {
            Structure q = quotient_of(op);
            HType acc;
            for (size_t i = 0; i < t.size(); ++i) {
                HType m = theory_qfd(scheme_mark(t[i]->sort, std::to_string(i + 1)), t[i], d);
                acc = acc ? theory_oplus(acc, m) : m;
            }
            for (auto& e : q.tuples.at(kEdge))
                if (e[0] != e[1])
                    acc = theory_qfd(scheme_add(acc->sort, std::to_string(e[0] + 1), std::to_string(e[1] + 1)), acc, d);
            return fo_put(theory_qfd(scheme_mdf(acc->sort, {}), acc, d));
        }
        std::vector<Sort> in;
        for (auto& x : t) in.push_back(x->sort);
        std::vector<std::pair<Label, Label>> ren;
        auto g = op_scheme(op, in, {}, &ren);
        if (!g) throw SortError("compile_fo_recognizer: '" + h + "' has no scheme");
        HType arg = t[0];
        if (t.size() == 2) {
            HType r = t[1];
            for (auto& [c, x] : ren) r = theory_qfd(scheme_srcren(r->sort, c, x), r, d);
            arg = theory_oplus(t[0], r);
        }
        return fo_put(theory_qfd(*g, arg, d));
    };
    auto accept = [sentence](const State& s) { return type_satisfies(fo_state_type(s), sentence); };
    return TreeAutomaton("fo[" + print_formula(sentence) + "]", sig, delta, accept);
}

}  // namespace graft
