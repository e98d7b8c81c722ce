#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "graft/error.hpp"

namespace graft {

using Tuple = std::vector<int>;
using Label = std::string;

inline const std::string kEdge = "edge";

// A sort (R, C). Relation names map to arities; constants are ordered by string order.
struct Sort {
    std::map<std::string, int> relations;
    std::set<Label> constants;

    bool operator==(const Sort&) const = default;
    auto operator<=>(const Sort&) const = default;

    int arity(const std::string& r) const;
    bool has_relation(const std::string& r) const { return relations.count(r) > 0; }
    bool has_constant(const Label& c) const { return constants.count(c) > 0; }
    std::string str() const;

    // Graph sorts used throughout: GP(P) and GS(C).
    static Sort graph(const std::set<Label>& constants = {});
    static Sort ports(const std::set<Label>& ports);
};

// Merge relation maps, rejecting arity conflicts.
std::map<std::string, int> merge_relations(const std::map<std::string, int>& a,
                                           const std::map<std::string, int>& b);

// Finite relational structure with sources. Elements are 0..size-1.
struct Structure {
    Sort sort;
    int size = 0;
    std::map<std::string, std::set<Tuple>> tuples;  // one entry per relation of the sort
    std::map<Label, int> sources;                   // total on sort.constants

    Structure() = default;
    Structure(Sort s, int n);

    bool has(const std::string& r, const Tuple& t) const;
    void add(const std::string& r, Tuple t);
    void set_source(const Label& c, int v);
    int source(const Label& c) const;

    // Throws SortError when an invariant is violated.
    void check() const;

    std::vector<Label> labels_of(int v) const;
    size_t tuple_count() const;

    bool operator==(const Structure&) const = default;
};

// Convenience builders for edge-only graphs.
Structure make_graph(int n, const std::vector<std::pair<int, int>>& edges,
                     const std::map<Label, int>& sources = {});
Structure complete_graph(int n);   // symmetric, loop-free
Structure path_graph(int n);       // symmetric path on n vertices
Structure directed_path(int n);    // 0->1->...->n-1

// Disjoint union: left keeps ids, right shifted by left size.
Structure oplus(const Structure& s, const Structure& t);

// Renumber: perm[old] = new. perm must be a bijection on 0..size-1.
Structure relabel(const Structure& s, const std::vector<int>& perm);

// Restrict to `keep` (any order); kept elements renumbered in ascending id order.
// A source outside `keep` is a SortError.
Structure induced(const Structure& s, const std::vector<int>& keep);

// Canonical form: a relabeled copy invariant under isomorphism, plus a key string.
std::vector<int> canonical_permutation(const Structure& s);
Structure canonical(const Structure& s);
std::string canonical_key(const Structure& s);
bool isomorphic(const Structure& s, const Structure& t);

// The type zeta(S): restriction to source elements, canonicalized.
Structure compute_type(const Structure& s);
bool is_source_separated(const Structure& s);

// Every structure of the sort with size <= max_size (>= 1 when constants are present).
// The callback returns false to stop early.
void enumerate_structures(const Sort& sort, int max_size, bool up_to_iso,
                          const std::function<bool(const Structure&)>& visit);
std::vector<Structure> all_structures(const Sort& sort, int max_size, bool up_to_iso);

struct SourceSplit {
    Structure result;
    std::map<Label, Label> h0;
    std::set<Label> c0, c1;
};
SourceSplit split_sources(const Structure& s);

// Predicates on edge-only graphs.
bool has_bicomplete(const Structure& g, int n, bool directed = true);
bool is_uniformly_k_sparse(const Structure& g, int k, int cap = -1);
bool has_loops(const Structure& g);

// Basic operations on structures with sources (direct semantics).
Structure srcren(const Structure& s, const Label& a, const Label& b);
Structure srcfg(const Structure& s, const Label& a);
Structure srcfg_all(const Structure& s);
Structure fus(const Structure& s, const Label& a, const Label& b);
Structure fus_to(const Structure& s, const Label& a, const Label& b);
Structure parallel(const Structure& s, const Structure& t);
Structure box(const Structure& s, const Structure& t);
Structure del_pairs(const Structure& s, const std::vector<std::pair<Label, Label>>& A);
Structure fus_pairs(const Structure& s, const std::vector<std::pair<Label, Label>>& A);
Structure include_relations(const Structure& s, const std::map<std::string, int>& extra);

// Operations on graphs with ports (unary relations other than edge).
std::set<Label> port_labels(const Sort& s);
bool is_port_sort(const Sort& s);
Structure add_edges(const Structure& g, const Label& p, const Label& q);
Structure mdf(const Structure& g, const std::vector<std::pair<Label, Label>>& D);
Structure ren(const Structure& g, const Label& p, const Label& q);
Structure fg(const Structure& g, const Label& p);
Structure mark(const Structure& g, const Label& i);
Structure otimes(const std::vector<std::pair<Label, Label>>& J, const Structure& g,
                 const Structure& h);
Structure single_port(const Label& p, bool loop);
Structure single_vertex(bool loop);
Structure single_source(const Label& a, bool loop);
Structure source_edge(const Label& a, const Label& b);

// Port-powerset form sigma: each vertex gets exactly one port, its label set encoded as
// "{p,q}" (the empty set is "{}").
Structure powerset_port_form(const Structure& g);
std::string port_set_name(const std::set<Label>& s);

}  // namespace graft
