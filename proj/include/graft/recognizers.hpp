#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "graft/hintikka.hpp"
#include "graft/terms.hpp"

namespace graft {

using State = std::string;

// Deterministic bottom-up automaton. Transitions are a function, so infinite payload
// families (every label pair, every scheme) are covered; results are memoized and the
// table of transitions taken so far can be exported.
class TreeAutomaton {
public:
    using Delta = std::function<State(const OpSym&, const std::vector<State>&)>;
    using Accept = std::function<bool(const State&)>;

    TreeAutomaton(std::string name, Sig sig, Delta delta, Accept accept);

    const std::string& name() const { return name_; }
    Sig sig() const { return sig_; }
    // Heads allowed; defaults to every head of the signature.
    const std::set<std::string>& heads() const { return heads_; }

    State delta(const OpSym& op, const std::vector<State>& kids) const;
    bool accepting(const State& s) const { return accept_(s); }
    // Holes are read from `holes` (hole i -> holes[i]).
    State run(const TermPtr& t, const std::vector<State>& holes = {}) const;
    bool accepts(const TermPtr& t) const { return accepting(run(t)); }

    struct Transition {
        std::string op;
        std::vector<State> args;
        State to;
    };
    std::vector<Transition> transitions() const;  // memo contents, sorted

    TreeAutomaton with_heads(std::set<std::string> heads) const;
    TreeAutomaton with_accept(Accept accept, std::string name) const;

private:
    std::string name_;
    Sig sig_;
    std::set<std::string> heads_;
    Delta delta_;
    Accept accept_;
    std::shared_ptr<std::map<std::string, Transition>> memo_;
};

// Pair states are JSON arrays ["s","t"].
State pair_state(const State& a, const State& b);
std::pair<State, State> unpair_state(const State& s);

TreeAutomaton product(const TreeAutomaton& a, const TreeAutomaton& b);  // intersection
TreeAutomaton automaton_union(const TreeAutomaton& a, const TreeAutomaton& b);
TreeAutomaton complement(const TreeAutomaton& a);
// Accepts t iff a accepts ctx[t]; ctx has the single hole (hole 0).
TreeAutomaton preimage(const TreeAutomaton& a, const TermPtr& ctx);
// Same automaton on a subsignature; symbols outside it are rejected by run.
TreeAutomaton restrict_to(const TreeAutomaton& a, Sig sub);

// Automaton given by an explicit finite table; missing transitions are errors.
TreeAutomaton table_automaton(std::string name, Sig sig, std::map<std::string, State> table,
                              std::set<State> accepting);
std::string transition_key(const std::string& op, const std::vector<State>& args);

// ---------------------------------------------------------------------------------------
// congruence evaluators on values

struct CongruenceEvaluator {
    std::string name;
    Sig sig;
    std::function<std::string(const Value&)> label;
};

CongruenceEvaluator zeta_evaluator(Sig sig = Sig::HR);
// Labels MULTI or (ζ, η) of the underlying simple graph.
CongruenceEvaluator simplicity_evaluator();
// Four classes: non-prime, one, prime-in-L, prime-not-in-L. Loop-free graphs only.
CongruenceEvaluator prime_evaluator(std::function<bool(const Structure&)> in_L);
// Deliberately wrong evaluators, for the checker's own tests.
CongruenceEvaluator parity_evaluator(Sig sig = Sig::HR);
CongruenceEvaluator eta_only_evaluator();

struct CongruenceReport {
    bool ok = true;
    size_t domain = 0;
    size_t classes = 0;
    size_t checks = 0;
    std::string op;                 // failing operation
    std::vector<Value> args, other;  // label-equal arguments with different results
    std::string message;
};

// Every operation of the evaluator's signature (payloads drawn from `labels`, plus one
// fresh label as a renaming target) on every argument tuple from the finite domain:
// arguments are grouped by label and each argument is checked against its class
// representative, the other positions ranging over all class representatives.
struct CongruenceDomain {
    int max_size = 3;
    std::vector<Label> labels{"a", "b"};
    bool loops = true;
};
std::vector<Value> congruence_domain(Sig sig, const CongruenceDomain& d);
std::vector<OpSym> congruence_ops(Sig sig, const CongruenceDomain& d);
CongruenceReport check_congruence(const CongruenceEvaluator& ev, const CongruenceDomain& d = {});

// ---------------------------------------------------------------------------------------
// automata

// States: canonical key of ζ(value). Any signature over structures.
TreeAutomaton zeta_automaton(Sig sig);
// Over HRM terms; accepts the simple graphs.
TreeAutomaton simplicity_automaton();
// Over MODULAR terms; accepts the prime graphs in L.
TreeAutomaton prime_automaton(std::function<bool(const Structure&)> in_L);
// States are depth-d types (reached lazily); accepts t iff the sentence holds in t's value.
TreeAutomaton compile_fo_recognizer(const Formula& sentence, int d, Sig sig);
// The depth-d type a state of compile_fo_recognizer stands for.
HType fo_state_type(const State& s);

}  // namespace graft
