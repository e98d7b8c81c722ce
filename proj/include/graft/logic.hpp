#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "graft/formula.hpp"
#include "graft/structure.hpp"

namespace graft {

using BigInt = boost::multiprecision::cpp_int;
using Assignment = std::map<std::string, int>;

// Tarskian evaluation. Unassigned free variables and unknown symbols raise SortError.
bool eval(const Structure& s, const Formula& f, const Assignment& a = {});
// Propositional evaluation; props missing from `val` raise SortError.
bool eval_bool(const Formula& f, const std::map<std::string, bool>& val);

// Canonical form of a propositional formula: the disjunction of all prime implicants,
// literals in variable order, disjuncts in lexicographic order. Equal truth tables give
// identical output. Up to 14 distinct propositions.
Formula normalize_bool(const Formula& f);

// Atom order: equalities before relations, then symbol, then argument tuple (term order).
bool atom_less(const Formula& a, const Formula& b);
// Drops x=x, orients equalities; other atoms unchanged.
Formula orient_atom(const Formula& a);

Formula normalize_qf(const Formula& f, const Sort& sort, const std::set<std::string>& vars);
Formula normalize_qf(const Formula& f);
// Throws SortError when qdepth(f) > k.
Formula normalize_fo(const Formula& f, int k);

// f(R,c,n) = (n+c)^2 + sum (n+c)^rho(r); reduced: 1 + (n+c)(n+c-1)/2 + sum.
BigInt count_atoms(const Sort& sort, int n, bool reduced = false);
// Every atom over n variables x1..xn and the sort's constants (x=x and both orientations kept).
std::vector<Formula> generate_atoms(const Sort& sort, int n);

// Nonnegative integers written as a tower 2^2^...^m (height twos above m). Height 0 is exact.
// Normal form keeps m exact while its bit length stays under a fixed limit, which makes
// (height, m) lexicographic order agree with numeric order.
struct Tower {
    int height = 0;
    BigInt m = 0;

    static Tower exact(const BigInt& v) { return {0, v}; }
    Tower pow2() const;
    Tower times3() const;  // exact at height 0, otherwise rounded up: 3*2^v <= 2^(v+2)
    std::string str() const;
    auto operator<=>(const Tower& o) const {
        if (height != o.height) return height <=> o.height;
        return m.compare(o.m) <=> 0;
    }
    bool operator==(const Tower& o) const { return height == o.height && m == o.m; }
};

struct CountBounds {
    Tower g, h;  // h is meaningless (zero) at k = 0
};
// g(0,n) = 2^f(n) as stated; with corrected = true, g(0,n) = 2^2^f(n) (the size of QF^red).
// h(k,n) = 3 g(k-1,n+1), g(k,n) = 2^2^h(k,n).
CountBounds reduced_count_bounds(const Sort& sort, int n, int k, bool corrected = false);

// Validity of quantifier-free formulas over all structures of a sort, decided over the
// structures generated by the terms (vars and constants). On failure a witness is given.
struct QfCheck {
    bool valid = true;
    std::optional<Structure> witness;
    Assignment assignment;
};
QfCheck qf_valid(const Formula& f, const Sort& sort, const std::set<std::string>& vars);
bool qf_equivalent(const Formula& f, const Formula& g, const Sort& sort, const std::set<std::string>& vars,
                   QfCheck* detail = nullptr);

}  // namespace graft
