#include "graft/multigraph.hpp"

#include <algorithm>

namespace graft {

void MultiGraph::check() const {
    if (nv < 0) throw SortError("negative vertex count");
    if (!constants.empty() && nv == 0) throw SortError("multigraph with sources needs a vertex");
    for (auto [x, y] : edges)
        if (x < 0 || x >= nv || y < 0 || y >= nv) throw SortError("edge endpoint out of range");
    if (sources.size() != constants.size()) throw SortError("source map not total");
    for (auto& [c, v] : sources) {
        if (!constants.count(c)) throw SortError("source for undeclared label '" + c + "'");
        if (v < 0 || v >= nv) throw SortError("source out of range");
    }
}

MultiGraph m_oplus(const MultiGraph& g, const MultiGraph& h) {
    MultiGraph out = g;
    for (auto& c : h.constants) {
        if (g.constants.count(c)) throw SortError("m_oplus: label '" + c + "' on both sides");
        out.constants.insert(c);
        out.sources[c] = h.sources.at(c) + g.nv;
    }
    out.nv = g.nv + h.nv;
    for (auto [x, y] : h.edges) out.edges.push_back({x + g.nv, y + g.nv});
    return out;
}

MultiGraph m_srcren(const MultiGraph& g, const Label& a, const Label& b) {
    if (!g.constants.count(a)) throw SortError("m_srcren: unknown label '" + a + "'");
    if (a == b) return g;
    if (g.constants.count(b)) throw SortError("m_srcren: target '" + b + "' already present");
    MultiGraph out = g;
    out.constants.erase(a);
    out.constants.insert(b);
    out.sources[b] = out.sources.at(a);
    out.sources.erase(a);
    return out;
}

MultiGraph m_srcfg(const MultiGraph& g, const Label& a) {
    if (!g.constants.count(a)) throw SortError("m_srcfg: unknown label '" + a + "'");
    MultiGraph out = g;
    out.constants.erase(a);
    out.sources.erase(a);
    return out;
}

MultiGraph mfus(const MultiGraph& g, const Label& a, const Label& b) {
    if (a == b) throw SortError("mfus: labels must differ");
    if (!g.constants.count(a) || !g.constants.count(b)) throw SortError("mfus: unknown label");
    int va = g.sources.at(a), vb = g.sources.at(b);
    if (va == vb) return g;
    std::vector<int> idx(g.nv);
    for (int v = 0, k = 0; v < g.nv; ++v) idx[v] = v == va ? -1 : k++;
    idx[va] = idx[vb];
    MultiGraph out;
    out.constants = g.constants;
    out.nv = g.nv - 1;
    for (auto [x, y] : g.edges) out.edges.push_back({idx[x], idx[y]});
    for (auto& [c, v] : g.sources) out.sources[c] = idx[v];
    return out;
}

MultiGraph m_parallel(const MultiGraph& g, const MultiGraph& h) {
    std::vector<Label> shared;
    for (auto& c : h.constants)
        if (g.constants.count(c)) shared.push_back(c);
    MultiGraph r = h;
    std::vector<std::pair<Label, Label>> fresh;
    for (auto& c : shared) {
        Label t = c + "#";
        while (g.constants.count(t) || r.constants.count(t)) t += "#";
        r = m_srcren(r, c, t);
        fresh.push_back({c, t});
    }
    MultiGraph out = m_oplus(g, r);
    for (auto& [c, t] : fresh) out = mfus(out, t, c);
    for (auto& [c, t] : fresh) out = m_srcfg(out, t);
    return out;
}

bool has_multiedges(const MultiGraph& g) {
    std::set<std::pair<int, int>> seen;
    for (auto& e : g.edges)
        if (!seen.insert(e).second) return true;
    return false;
}

Structure simplify_u(const MultiGraph& g) {
    Structure s(Sort::graph(g.constants), g.nv);
    for (auto [x, y] : g.edges) s.tuples[kEdge].insert({x, y});
    s.sources = g.sources;
    return s;
}

MultiGraph inject_iota(const Structure& g) {
    if (g.sort.relations != Sort::graph().relations) throw SortError("inject_iota: edge-only sort expected");
    MultiGraph m;
    m.constants = g.sort.constants;
    m.nv = g.size;
    for (auto& t : g.tuples.at(kEdge)) m.edges.push_back({t[0], t[1]});
    m.sources = g.sources;
    return m;
}

Structure incidence_structure(const MultiGraph& g) {
    Sort sort;
    sort.relations = {{"vertex", 1}, {"inc", 3}};
    sort.constants = g.constants;
    int m = static_cast<int>(g.edges.size());
    Structure s(sort, g.nv + m);
    for (int v = 0; v < g.nv; ++v) s.tuples["vertex"].insert({v});
    for (int e = 0; e < m; ++e) s.tuples["inc"].insert({g.nv + e, g.edges[e].first, g.edges[e].second});
    s.sources = g.sources;
    return s;
}

bool m_isomorphic(const MultiGraph& g, const MultiGraph& h) {
    if (g.constants != h.constants || g.nv != h.nv || g.edges.size() != h.edges.size()) return false;
    return isomorphic(incidence_structure(g), incidence_structure(h));
}

EtaRelation eta(const Structure& g) {
    if (g.sort.relations != Sort::graph().relations) throw SortError("eta: edge-only sort expected");
    int n = g.size;
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (auto& t : g.tuples.at(kEdge)) adj[t[0]][t[1]] = 1;
    EtaRelation out;
    for (auto ia = g.sources.begin(); ia != g.sources.end(); ++ia)
        for (auto ib = std::next(ia); ib != g.sources.end(); ++ib) {
            int a = ia->second, b = ib->second;
            if (a == b) continue;
            for (int x = 0; x < n; ++x)
                if ((adj[x][a] && adj[x][b]) || (adj[a][x] && adj[b][x])) {
                    out.insert({ia->first, ib->first});
                    break;
                }
        }
    return out;
}

bool predict_mfus_multiedge(const Structure& type, const EtaRelation& e, const Label& a, const Label& b) {
    if (a == b) throw SortError("predict_mfus_multiedge: labels must differ");
    if (!type.sort.has_constant(a) || !type.sort.has_constant(b))
        throw SortError("predict_mfus_multiedge: label absent from sort");
    if (type.source(a) == type.source(b)) return false;
    auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    if (e.count(key)) return true;
    return has_multiedges(mfus(inject_iota(type), a, b));
}

}  // namespace graft
