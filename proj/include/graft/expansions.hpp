#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graft/recognizers.hpp"
#include "graft/structure.hpp"

namespace graft {

struct PortClass {
    enum Kind { Void, Small, Large } kind = Void;
    int count = 0;
};
using PortStats = std::map<Label, PortClass>;

// Every unary relation of the port sort, classified against threshold m.
PortStats classify_ports(const Structure& g, int m);
std::string port_class_name(PortClass::Kind k);

// Source labels of expansions: s(p,i), in(p,i), out(p,i) with 1 <= i <= m.
Label s_label(const Label& p, int i);
Label in_label(const Label& p, int i);
Label out_label(const Label& p, int i);

// A source-separated graph over the expansion labels. Vertices 0..base_size-1 are the
// base graph's vertices with the same ids; the rest are in/out auxiliaries.
struct Expansion {
    Structure graph;
    int base_size = 0;
};

struct ExpansionSet {
    bool contains_bicomplete = false;  // base has K->_{m+1,m+1}; no expansions listed
    std::vector<Expansion> expansions;   // one per isomorphism class, sorted by key
    std::vector<std::string> keys;       // canonical keys, parallel to `expansions`
};

// Small labels: every injection of the ports into s(p,1..m). Large labels: in(p,1..a)
// and out(p,1..b) auxiliaries for a, b <= m, wired to every p-port. Candidates with
// K->_{m+1,m+1} are dropped. `cap` bounds the number of candidates built (GRAFT_CAP
// scales it; default 200000).
ExpansionSet enumerate_expansions(const Structure& g, int m, long cap = -1);

// Independent generator for tests: per-label assignments of every C(p) label to
// nothing / a base vertex / a new vertex, filtered by the literal conditions.
std::vector<std::string> expansion_keys_by_filter(const Structure& g, int m);

struct SimResult {
    bool equivalent = false;
    char condition = 'a';  // deciding condition: a, b or c
    std::string detail;
};

// G ~ G': (a) K->_{m+1,m+1} in both or neither, (b) equal theories at depth
// `depth` (2m+2 when negative), (c) equal sets of (ev label, theory) over expansions.
SimResult decide_sim_explained(const Structure& g, const Structure& h, int m, const CongruenceEvaluator& ev,
                               int depth = -1);
bool decide_sim(const Structure& g, const Structure& h, int m, const CongruenceEvaluator& ev, int depth = -1);

}  // namespace graft
