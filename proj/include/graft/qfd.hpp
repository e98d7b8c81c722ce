#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graft/formula.hpp"
#include "graft/logic.hpp"
#include "graft/structure.hpp"

namespace graft {

// A quantifier-free definable operation (R,C) -> (R',C').
// delta has free variable "x"; phi[r] has free variables x1..x_rho(r); kappa[d][c] is closed.
// Absent kappa entries read as false.
struct QfdScheme {
    std::string name;
    Sort in, out;
    Formula delta;
    std::map<std::string, Formula> phi;
    std::map<Label, std::map<Label, Formula>> kappa;  // kappa[d][c], d in C', c in C

    Formula kap(const Label& c, const Label& d) const;
    const Formula& phi_of(const std::string& r) const;  // SortError when missing
};

inline const std::string kDeltaVar = "x";

// Sort and variable discipline of the formulas; throws SortError.
void check_scheme_syntax(const QfdScheme& sch);

struct SchemeReport {
    bool ok = true;
    std::string condition;  // which condition failed
    std::string message;
    std::optional<Structure> witness;
    Assignment assignment;
};
// Decides the four validity conditions (syntax errors surface as SortError first).
SchemeReport validate_scheme(const QfdScheme& sch);
// Throws SortError carrying the report message when invalid.
const QfdScheme& require_valid(const QfdScheme& sch);

Structure apply_scheme(const QfdScheme& sch, const Structure& s);

// Translates a quantifier-free formula over g.out into one over g.in that holds at the
// same elements. Constants of g.out are resolved through kappa.
Formula translate_qf(const QfdScheme& g, const Formula& f);
// g2 after g1.
QfdScheme compose_schemes(const QfdScheme& g2, const QfdScheme& g1);

// Builtin schemes.
QfdScheme scheme_identity(const Sort& s);
QfdScheme scheme_srcren(const Sort& s, const Label& a, const Label& b);
QfdScheme scheme_srcfg(const Sort& s, const Label& a);
QfdScheme scheme_fus(const Sort& s, const Label& a, const Label& b);
// The scheme exactly as usually written down for fus (exact b-positions, no domain guard).
// Kept for comparison; it does not define fus.
QfdScheme scheme_fus_as_written(const Sort& s, const Label& a, const Label& b);
QfdScheme scheme_fus_to(const Sort& s, const Label& a, const Label& b);
QfdScheme scheme_inclusion(const Sort& s, const std::map<std::string, int>& extra);
QfdScheme scheme_add(const Sort& s, const Label& p, const Label& q);
QfdScheme scheme_del(const Sort& s, const std::vector<std::pair<Label, Label>>& A);
QfdScheme scheme_mdf(const Sort& s, const std::vector<std::pair<Label, Label>>& D);
QfdScheme scheme_ren(const Sort& s, const Label& p, const Label& q);
QfdScheme scheme_fg(const Sort& s, const Label& p);
QfdScheme scheme_mark(const Sort& s, const Label& i);
// Dispatch by name: srcren a b | srcfg a | fus a b | fus-to a b | identity | add p q | ren p q |
// fg p | mark i | mdf p q p q ... | del a b ... | include r k r k ...
QfdScheme builtin(const std::string& name, const std::vector<std::string>& params, const Sort& s);

// Semantic decision: images of all source-separated types are source-separated.
bool preserves_source_separation(const QfdScheme& sch);
// Sufficient syntactic condition: kappa_{c,d} implies not kappa_{c,d'} for d != d'.
bool separation_syntactic(const QfdScheme& sch);

// Splitting a scheme over a disjoint union into per-side schemes with auxiliary ports.
struct UnionSplit {
    QfdScheme g1, g2;
    std::vector<std::pair<Label, Label>> adds;     // add_{p,q} instructions, in order
    std::vector<std::pair<Label, Label>> forget;   // final mdf
    std::vector<std::string> aux_formulas;         // printed unary formula sets, by port index
};
Structure apply_union_split(const UnionSplit& u, const Structure& x1, const Structure& x2);
UnionSplit split_over_union(const QfdScheme& h, const Sort& sort1, const Sort& sort2, const Structure& z1,
                            const Structure& z2);

}  // namespace graft
