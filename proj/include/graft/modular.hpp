#pragma once

#include <set>
#include <vector>

#include "graft/structure.hpp"
#include "graft/terms.hpp"

namespace graft {

// Vertex sets are bitmasks over 0..n-1; graphs have at most 31 vertices here.
using VertexSet = unsigned;

bool is_module(const Structure& g, VertexSet m);
// Least module containing u and v.
VertexSet minimal_module(const Structure& g, int u, int v);
// Every strong module, singletons and the whole vertex set included.
std::vector<VertexSet> strong_modules(const Structure& g);
// The maximal proper strong modules; they partition the vertex set (n >= 2).
std::vector<VertexSet> find_strong_modules(const Structure& g);

// Leaves are single vertices. Internal nodes hold their quotient on vertices 0..k-1, where
// vertex i stands for kids[i]. Complete, edgeless and linear (transitive tournament)
// quotients are kept flat at any arity.
struct ModularTree {
    enum Kind { Leaf, Prime, Complete, Edgeless, Linear } kind = Leaf;
    int vertex = -1;  // for leaves
    bool loop = false;
    VertexSet module = 0;
    Structure quotient;
    std::vector<ModularTree> kids;
};

std::string kind_name(ModularTree::Kind k);
ModularTree modular_decomposition(const Structure& g);
Structure evaluate_tree(const ModularTree& t);
// The same tree as a MODULAR term.
TermPtr tree_term(const ModularTree& t);

// No module other than singletons and the whole set; false below 2 vertices. Loops are
// ignored: compositions never add or remove them.
bool is_prime(const Structure& g);
// Every quotient of the decomposition is a member of F up to isomorphism. Degenerate
// nodes count when F holds the matching 2-vertex graph (they are chains of it).
bool is_F_graph(const Structure& g, const std::vector<Structure>& F);

}  // namespace graft
