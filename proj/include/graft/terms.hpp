#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "graft/multigraph.hpp"
#include "graft/qfd.hpp"
#include "graft/random.hpp"
#include "graft/sexpr.hpp"
#include "graft/structure.hpp"

namespace graft {

enum class Sig { S, VR, VRPLUS, VRPI, NLC, HR, HR_PAR, HR_SEP, HR_SEP_PAR, HR_FG, HR_REN, CS, HRM, MODULAR, ECON };

Sig parse_sig(const std::string& name);  // SortError on unknown names
std::string sig_name(Sig s);
std::vector<Sig> all_sigs();
// Operation heads (constants included) admitted by a signature.
const std::set<std::string>& sig_heads(Sig s);
bool sig_admits(Sig s, const std::string& head);

// One operation symbol with its payload. `labels` holds plain label parameters in order,
// `pairs` the (p q) lists of mdf/otimes/del/fusrel and the edges of a modular quotient.
struct OpSym {
    std::string head;
    std::vector<std::string> labels;
    std::vector<std::pair<Label, Label>> pairs;
    bool has_pairs = false;

    int arity() const;  // number of term arguments; -1 for unknown heads
    std::string key() const;  // printed form without arguments, e.g. "srcren a b"
    bool operator==(const OpSym&) const = default;
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    OpSym op;
    std::vector<TermPtr> kids;
};

TermPtr make_term(OpSym op, std::vector<TermPtr> kids = {});
TermPtr term_from_sexpr(const SExpr& e);
TermPtr parse_term(const std::string& text);
std::string print_term(const TermPtr& t);
int term_leaves(const TermPtr& t);
int term_size(const TermPtr& t);

// Shorthands.
TermPtr t_op(const std::string& head, std::vector<std::string> labels, std::vector<TermPtr> kids);
TermPtr t_pairs(const std::string& head, std::vector<std::pair<Label, Label>> pairs, std::vector<TermPtr> kids);
TermPtr t_hole(int i = 0);

// Sort of a term: structures carry a Sort, multigraphs only constants; ECON terms are
// ordered ('o') or unordered ('u') graphs.
struct TermSort {
    enum Kind { Struct, Multi, Ordered, Unordered } kind = Struct;
    Sort sort;
    bool operator==(const TermSort&) const = default;
    std::string str() const;
};

struct TypeContext {
    std::map<std::string, QfdScheme> schemes;  // for apply-scheme; "name:p:q" builds a builtin
    std::vector<TermSort> holes;               // sorts of (hole i)
};

// Sort of t under the signature; SortError names the first ill-typed node with its path.
TermSort typecheck_term(const TermPtr& t, Sig sig, const TypeContext& ctx = {});

using Value = std::variant<Structure, MultiGraph>;
struct EvalContext : TypeContext {
    std::vector<Value> hole_values;
};
Value eval_term(const TermPtr& t, Sig sig, const EvalContext& ctx = {});
Structure eval_structure(const TermPtr& t, Sig sig, const EvalContext& ctx = {});
MultiGraph eval_multigraph(const TermPtr& t, const EvalContext& ctx = {});

// Substitutes (hole i) by args[i].
TermPtr plug(const TermPtr& ctx, const std::vector<TermPtr>& args);
// One-step application of the operation to values.
Value apply_op(const OpSym& op, const std::vector<Value>& args, Sig sig, const TypeContext& ctx = {});
// The scheme an operation applies after the disjoint union of its arguments, for ops that
// are qfd. Binary derived ops (parallel, otimes, box) return the scheme applied to
// left ⊕ renamed-right; `rename` receives the srcren pairs for the right argument.
std::optional<QfdScheme> op_scheme(const OpSym& op, const std::vector<Sort>& in, const TypeContext& ctx,
                                   std::vector<std::pair<Label, Label>>* rename = nullptr);

// Derived operations written in base operations.
// parallel: rename shared labels of the right side apart, ⊕, fuse, forget the copies.
TermPtr derive_parallel(const Sort& left, const Sort& right, const TermPtr& s, const TermPtr& t);
// Rewrites parallel, otimes, box, fus-to, srcfg-all and fusrel into oplus/srcren/srcfg/fus/add.
TermPtr expand_derived(const TermPtr& t, Sig sig, const TypeContext& ctx = {});

// h is a graph on 0..n-1; parts are port- and source-free graphs.
Structure modular_compose(const Structure& h, const std::vector<Structure>& parts);
// VR+ context with holes 0..n-1: mark each part, add edges along h, forget the marks.
TermPtr vr_term_for_modular(const Structure& h);

TermPtr clique_term(int n);  // k_1 = p, k_{n+1} = ren q p (add p q (add q p (k_n ⊕ q)))
TermPtr path_term(int n);    // mdf ∅ (t_n), t_0 = add a b (a ⊕ b)

// ECON: ordered graphs, vertex 0 least. The shift moves the least vertex to the top.
Structure econ_vertex(const Structure& g);
Structure econ_edge(const Structure& g);
Structure econ_shift(const Structure& g);
Structure econ_swap(const Structure& g);
struct EconSearch {
    std::map<std::string, TermPtr> reached;  // canonical key of the unordered graph -> witness term
    size_t states = 0;
};
EconSearch econ_search(int max_vertices);

// Least k <= max_k such that g (port-free graph) is the value of a VR^π term with k labels.
std::optional<int> cwd_exact(const Structure& g, int max_k, int cap = -1);

// Random well-sorted terms. Unary operations are applied with probability `unary_p` above
// each node.
struct RandomTermSpec {
    Sig sig = Sig::S;
    std::vector<Label> labels{"a", "b"};  // source labels
    std::vector<Label> ports{"p", "q"};   // port labels
    int leaves = 4;
    double unary_p = 0.5;
};
TermPtr random_term(const RandomTermSpec& spec, Rng& rng);

}  // namespace graft
