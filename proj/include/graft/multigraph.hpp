#pragma once

#include <set>
#include <utility>
#include <vector>

#include "graft/structure.hpp"

namespace graft {

// Directed multigraph with sources. Edge ids are positions in `edges`.
struct MultiGraph {
    std::set<Label> constants;
    int nv = 0;
    std::vector<std::pair<int, int>> edges;  // inc: edge id -> (origin, end)
    std::map<Label, int> sources;

    void check() const;
    bool operator==(const MultiGraph&) const = default;
};

MultiGraph m_oplus(const MultiGraph& g, const MultiGraph& h);
MultiGraph m_srcren(const MultiGraph& g, const Label& a, const Label& b);
MultiGraph m_srcfg(const MultiGraph& g, const Label& a);
MultiGraph mfus(const MultiGraph& g, const Label& a, const Label& b);
// Parallel composition: rename shared labels apart, union, mfus, forget.
MultiGraph m_parallel(const MultiGraph& g, const MultiGraph& h);

bool has_multiedges(const MultiGraph& g);
Structure simplify_u(const MultiGraph& g);
MultiGraph inject_iota(const Structure& g);

// Multigraph isomorphism through an incidence encoding (vertices and edges as elements).
Structure incidence_structure(const MultiGraph& g);
bool m_isomorphic(const MultiGraph& g, const MultiGraph& h);

using EtaRelation = std::set<std::pair<Label, Label>>;  // pairs stored with first < second

EtaRelation eta(const Structure& g);
bool predict_mfus_multiedge(const Structure& type, const EtaRelation& e, const Label& a, const Label& b);

}  // namespace graft
