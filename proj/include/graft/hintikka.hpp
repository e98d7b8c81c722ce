#pragma once

#include <memory>
#include <string>
#include <vector>

#include "graft/formula.hpp"
#include "graft/logic.hpp"
#include "graft/qfd.hpp"
#include "graft/structure.hpp"

namespace graft {

struct HNode;
using HType = std::shared_ptr<const HNode>;

// Depth-d type of a structure with p parameters. Atom layout over the terms
// t_0..t_{p-1} (parameters) followed by the sort's constants in order: first t_i = t_j for
// i < j, then each relation in name order with argument tuples in lexicographic order.
// Children are the depth-(d-1) types of the one-element extensions, sorted by digest.
struct HNode {
    Sort sort;
    int depth = 0;
    int nparams = 0;
    std::string atoms;  // '0' / '1' per atom
    std::vector<HType> kids;
    std::string digest;  // 128-bit content hash, hex
};

HType make_hnode(const Sort& sort, int depth, int nparams, std::string atoms, std::vector<HType> kids);
bool same_type(const HType& a, const HType& b);

// Depth-d type of `s` with the given parameters (element ids).
HType fo_theory(const Structure& s, int d, const std::vector<int>& params = {});
// Same type cut down to a smaller depth.
HType project(const HType& t, int d);

// Type of the disjoint union from the types of its parts (same depth, disjoint constants).
HType theory_oplus(const HType& a, const HType& b);
// Type of g(S) at depth d from the type of S (depth >= d).
HType theory_qfd(const QfdScheme& g, const HType& t, int d);

// Truth of a formula in a type; free variables are bound to parameter indices.
// qdepth(f) must not exceed the type's depth.
bool type_satisfies(const HType& t, const Formula& f, const std::map<std::string, int>& env = {});

// Formula over g.in equivalent on S to f on g(S) (free variables range over g(S)).
Formula backward_translate(const QfdScheme& g, const Formula& f);

// Nested text form, children sorted; stable across runs.
std::string type_text(const HType& t);
size_t type_count_nodes(const HType& t);

}  // namespace graft
