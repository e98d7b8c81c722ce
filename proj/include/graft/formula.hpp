#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "graft/sexpr.hpp"
#include "graft/structure.hpp"

namespace graft {

// A variable or a constant (source label).
struct LTerm {
    bool is_const = false;
    std::string name;

    static LTerm var(std::string n) { return {false, std::move(n)}; }
    static LTerm cst(std::string n) { return {true, std::move(n)}; }
    bool operator==(const LTerm&) const = default;
    std::string str() const;
};

// Fixed order on the variable universe: x1 < x2 < ... then any other names lexicographically.
bool var_less(const std::string& a, const std::string& b);
// Term order used for orienting equalities: variables (universe order) before constants.
bool term_less(const LTerm& a, const LTerm& b);
std::string var_name(int i);  // "x<i>", 1-based

enum class FKind { True, False, Prop, Eq, Rel, Not, And, Or, Exists, Forall };

struct FNode;
using Formula = std::shared_ptr<const FNode>;

struct FNode {
    FKind kind;
    std::string name;           // relation, proposition, or bound variable
    std::vector<LTerm> args;    // Eq: two terms; Rel: arguments
    std::vector<Formula> kids;  // Not: one; And/Or: any; quantifiers: one
};

Formula f_true();
Formula f_false();
Formula f_prop(const std::string& p);
Formula f_eq(const LTerm& a, const LTerm& b);
Formula f_rel(const std::string& r, std::vector<LTerm> args);
Formula f_not(const Formula& f);
Formula f_and(std::vector<Formula> fs);
Formula f_or(std::vector<Formula> fs);
Formula f_and(const Formula& a, const Formula& b);
Formula f_or(const Formula& a, const Formula& b);
Formula f_implies(const Formula& a, const Formula& b);
Formula f_iff(const Formula& a, const Formula& b);
Formula f_exists(const std::string& x, const Formula& f);
Formula f_forall(const std::string& x, const Formula& f);

// Bare identifiers in formula position parse as propositions.
Formula parse_formula(const std::string& text);
Formula formula_from_sexpr(const SExpr& e);
std::string print_formula(const Formula& f);

bool is_atom(const Formula& f);
bool is_qf(const Formula& f);
int qdepth(const Formula& f);
int size_of(const Formula& f);
std::set<std::string> free_vars(const Formula& f);
std::set<std::string> constants_of(const Formula& f);
std::set<std::string> props_of(const Formula& f);

// Structural comparison (used for canonical orders).
int compare(const Formula& a, const Formula& b);
bool equal(const Formula& a, const Formula& b);

// Rewrites every atom (Eq/Rel/Prop/True/False leaves) through `fn`, bottom-up.
Formula map_atoms(const Formula& f, const std::function<Formula(const Formula&)>& fn);
// Simultaneous substitution of free variables and/or constants by terms.
Formula substitute(const Formula& f, const std::map<std::string, LTerm>& vars,
                   const std::map<std::string, LTerm>& consts = {});
// Constant folding of true/false through connectives.
Formula simplify(const Formula& f);

// Arity/sort check: relations of the sort with right arity, constants of the sort, and free
// variables among `vars` (when vars is non-null). Throws SortError.
void check_formula(const Formula& f, const Sort& sort, const std::set<std::string>* vars = nullptr);

}  // namespace graft
