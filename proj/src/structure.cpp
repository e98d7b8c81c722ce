#include "graft/structure.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace graft {

int cap_or(int fallback) {
    if (const char* env = std::getenv("GRAFT_CAP")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<int>(v);
    }
    return fallback;
}

int default_cap() { return cap_or(20); }

int Sort::arity(const std::string& r) const {
    auto it = relations.find(r);
    if (it == relations.end()) throw SortError("unknown relation '" + r + "'");
    return it->second;
}

std::string Sort::str() const {
    std::ostringstream os;
    os << "({";
    bool first = true;
    for (auto& [r, k] : relations) {
        os << (first ? "" : ",") << r << "/" << k;
        first = false;
    }
    os << "},{";
    first = true;
    for (auto& c : constants) {
        os << (first ? "" : ",") << c;
        first = false;
    }
    os << "})";
    return os.str();
}

Sort Sort::graph(const std::set<Label>& constants) {
    Sort s;
    s.relations[kEdge] = 2;
    s.constants = constants;
    return s;
}

Sort Sort::ports(const std::set<Label>& ports) {
    Sort s;
    s.relations[kEdge] = 2;
    for (auto& p : ports) {
        if (p == kEdge) throw SortError("port label may not be named 'edge'");
        s.relations[p] = 1;
    }
    return s;
}

std::map<std::string, int> merge_relations(const std::map<std::string, int>& a,
                                           const std::map<std::string, int>& b) {
    auto out = a;
    for (auto& [r, k] : b) {
        auto [it, fresh] = out.emplace(r, k);
        if (!fresh && it->second != k)
            throw SortError("relation '" + r + "' used with arities " + std::to_string(it->second) +
                            " and " + std::to_string(k));
    }
    return out;
}

Structure::Structure(Sort s, int n) : sort(std::move(s)), size(n) {
    for (auto& [r, k] : sort.relations) tuples[r];
}

bool Structure::has(const std::string& r, const Tuple& t) const {
    auto it = tuples.find(r);
    return it != tuples.end() && it->second.count(t) > 0;
}

void Structure::add(const std::string& r, Tuple t) {
    int k = sort.arity(r);
    if (static_cast<int>(t.size()) != k) throw SortError("tuple length mismatch for '" + r + "'");
    for (int v : t)
        if (v < 0 || v >= size) throw SortError("tuple entry out of domain");
    tuples[r].insert(std::move(t));
}

void Structure::set_source(const Label& c, int v) {
    if (!sort.has_constant(c)) throw SortError("unknown constant '" + c + "'");
    if (v < 0 || v >= size) throw SortError("source value out of domain");
    sources[c] = v;
}

int Structure::source(const Label& c) const {
    auto it = sources.find(c);
    if (it == sources.end()) throw SortError("unknown constant '" + c + "'");
    return it->second;
}

void Structure::check() const {
    if (size < 0) throw SortError("negative domain size");
    if (!sort.constants.empty() && size == 0)
        throw SortError("structure with constants needs a nonempty domain");
    for (auto& [r, ts] : tuples) {
        auto it = sort.relations.find(r);
        if (it == sort.relations.end()) throw SortError("tuples for undeclared relation '" + r + "'");
        for (auto& t : ts) {
            if (static_cast<int>(t.size()) != it->second)
                throw SortError("tuple length mismatch for '" + r + "'");
            for (int v : t)
                if (v < 0 || v >= size) throw SortError("tuple entry out of domain");
        }
    }
    for (auto& [r, k] : sort.relations) {
        if (k < 1) throw SortError("relation '" + r + "' must have positive arity");
        if (!tuples.count(r)) throw SortError("missing tuple set for '" + r + "'");
    }
    if (sources.size() != sort.constants.size()) throw SortError("source map not total");
    for (auto& [c, v] : sources) {
        if (!sort.has_constant(c)) throw SortError("source for undeclared constant '" + c + "'");
        if (v < 0 || v >= size) throw SortError("source value out of domain");
    }
}

std::vector<Label> Structure::labels_of(int v) const {
    std::vector<Label> out;
    for (auto& [c, x] : sources)
        if (x == v) out.push_back(c);
    return out;
}

size_t Structure::tuple_count() const {
    size_t n = 0;
    for (auto& [r, ts] : tuples) n += ts.size();
    return n;
}

Structure make_graph(int n, const std::vector<std::pair<int, int>>& edges,
                     const std::map<Label, int>& sources) {
    std::set<Label> cs;
    for (auto& [c, v] : sources) cs.insert(c);
    Structure g(Sort::graph(cs), n);
    for (auto [u, v] : edges) g.add(kEdge, {u, v});
    for (auto& [c, v] : sources) g.set_source(c, v);
    return g;
}

Structure complete_graph(int n) {
    Structure g(Sort::graph(), n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) g.add(kEdge, {i, j});
    return g;
}

Structure path_graph(int n) {
    Structure g(Sort::graph(), n);
    for (int i = 0; i + 1 < n; ++i) {
        g.add(kEdge, {i, i + 1});
        g.add(kEdge, {i + 1, i});
    }
    return g;
}

Structure directed_path(int n) {
    Structure g(Sort::graph(), n);
    for (int i = 0; i + 1 < n; ++i) g.add(kEdge, {i, i + 1});
    return g;
}

Structure oplus(const Structure& s, const Structure& t) {
    for (auto& c : t.sort.constants)
        if (s.sort.has_constant(c)) throw SortError("oplus: constant '" + c + "' on both sides");
    Sort sort;
    sort.relations = merge_relations(s.sort.relations, t.sort.relations);
    sort.constants = s.sort.constants;
    sort.constants.insert(t.sort.constants.begin(), t.sort.constants.end());
    Structure out(sort, s.size + t.size);
    for (auto& [r, ts] : s.tuples) out.tuples[r].insert(ts.begin(), ts.end());
    for (auto& [r, ts] : t.tuples) {
        auto& dst = out.tuples[r];
        for (auto tup : ts) {
            for (int& v : tup) v += s.size;
            dst.insert(std::move(tup));
        }
    }
    out.sources = s.sources;
    for (auto& [c, v] : t.sources) out.sources[c] = v + s.size;
    return out;
}

Structure relabel(const Structure& s, const std::vector<int>& perm) {
    Structure out(s.sort, s.size);
    for (auto& [r, ts] : s.tuples) {
        auto& dst = out.tuples[r];
        for (auto tup : ts) {
            for (int& v : tup) v = perm[v];
            dst.insert(std::move(tup));
        }
    }
    for (auto& [c, v] : s.sources) out.sources[c] = perm[v];
    return out;
}

Structure induced(const Structure& s, const std::vector<int>& keep) {
    std::vector<int> sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> idx(s.size, -1);
    for (size_t i = 0; i < sorted.size(); ++i) idx[sorted[i]] = static_cast<int>(i);
    Structure out(s.sort, static_cast<int>(sorted.size()));
    for (auto& [r, ts] : s.tuples) {
        auto& dst = out.tuples[r];
        for (auto& tup : ts) {
            Tuple m(tup.size());
            bool ok = true;
            for (size_t i = 0; i < tup.size() && ok; ++i) {
                m[i] = idx[tup[i]];
                ok = m[i] >= 0;
            }
            if (ok) dst.insert(std::move(m));
        }
    }
    for (auto& [c, v] : s.sources) {
        if (idx[v] < 0) throw SortError("induced: source '" + c + "' removed");
        out.sources[c] = idx[v];
    }
    return out;
}

Structure compute_type(const Structure& s) {
    std::vector<int> keep;
    for (auto& [c, v] : s.sources) keep.push_back(v);
    return canonical(induced(s, keep));
}

bool is_source_separated(const Structure& s) {
    std::set<int> seen;
    for (auto& [c, v] : s.sources)
        if (!seen.insert(v).second) return false;
    return true;
}

SourceSplit split_sources(const Structure& s) {
    SourceSplit out;
    // constants iterate in increasing order, so the first label seen at a vertex is the minimum
    std::map<int, Label> first;
    for (auto& [c, v] : s.sources) {
        auto [it, fresh] = first.emplace(v, c);
        out.h0[c] = it->second;
        if (fresh)
            out.c0.insert(c);
        else
            out.c1.insert(c);
    }
    Structure r(s.sort, s.size + static_cast<int>(out.c1.size()));
    r.tuples = s.tuples;
    int next = s.size;
    for (auto& [c, v] : s.sources) r.sources[c] = out.c1.count(c) ? next++ : v;
    out.result = std::move(r);
    return out;
}

bool has_loops(const Structure& g) {
    auto it = g.tuples.find(kEdge);
    if (it == g.tuples.end()) return false;
    for (auto& t : it->second)
        if (t[0] == t[1]) return true;
    return false;
}

Structure srcren(const Structure& s, const Label& a, const Label& b) {
    if (!s.sort.has_constant(a)) throw SortError("srcren: no constant '" + a + "'");
    if (a == b) return s;
    if (s.sort.has_constant(b)) throw SortError("srcren: target '" + b + "' already present");
    Structure out = s;
    out.sort.constants.erase(a);
    out.sort.constants.insert(b);
    int v = out.sources.at(a);
    out.sources.erase(a);
    out.sources[b] = v;
    return out;
}

Structure srcfg(const Structure& s, const Label& a) {
    if (!s.sort.has_constant(a)) throw SortError("srcfg: no constant '" + a + "'");
    Structure out = s;
    out.sort.constants.erase(a);
    out.sources.erase(a);
    return out;
}

Structure srcfg_all(const Structure& s) {
    Structure out = s;
    out.sort.constants.clear();
    out.sources.clear();
    return out;
}

// Identify a_S with b_S: the b element survives, tuples through a_S are redirected.
Structure fus(const Structure& s, const Label& a, const Label& b) {
    if (a == b) throw SortError("fus: labels must differ");
    if (!s.sort.has_constant(a) || !s.sort.has_constant(b))
        throw SortError("fus: labels '" + a + "','" + b + "' must both be constants");
    int va = s.sources.at(a), vb = s.sources.at(b);
    if (va == vb) return s;
    std::vector<int> idx(s.size);
    for (int v = 0, k = 0; v < s.size; ++v) idx[v] = v == va ? -1 : k++;
    idx[va] = idx[vb];
    Structure out(s.sort, s.size - 1);
    for (auto& [r, ts] : s.tuples) {
        auto& dst = out.tuples[r];
        for (auto tup : ts) {
            for (int& v : tup) v = idx[v];
            dst.insert(std::move(tup));
        }
    }
    for (auto& [c, v] : s.sources) out.sources[c] = idx[v];
    return out;
}

Structure fus_to(const Structure& s, const Label& a, const Label& b) {
    return srcfg(fus(s, a, b), a);
}

Structure parallel(const Structure& s, const Structure& t) {
    Sort sort;
    sort.relations = merge_relations(s.sort.relations, t.sort.relations);
    sort.constants = s.sort.constants;
    sort.constants.insert(t.sort.constants.begin(), t.sort.constants.end());
    int n = s.size + t.size;
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (auto& [c, v] : t.sources) {
        auto it = s.sources.find(c);
        if (it == s.sources.end()) continue;
        int x = find(it->second), y = find(v + s.size);
        if (x != y) parent[std::max(x, y)] = std::min(x, y);
    }
    // classes numbered by their least member
    std::vector<int> idx(n, -1);
    int k = 0;
    for (int v = 0; v < n; ++v)
        if (find(v) == v) idx[v] = k++;
    for (int v = 0; v < n; ++v) idx[v] = idx[find(v)];
    Structure out(sort, k);
    auto copy = [&](const Structure& src, int shift) {
        for (auto& [r, ts] : src.tuples) {
            auto& dst = out.tuples[r];
            for (auto tup : ts) {
                for (int& v : tup) v = idx[v + shift];
                dst.insert(std::move(tup));
            }
        }
        for (auto& [c, v] : src.sources) out.sources[c] = idx[v + shift];
    };
    copy(s, 0);
    copy(t, s.size);
    return out;
}

Structure box(const Structure& s, const Structure& t) {
    if (s.sort.constants != t.sort.constants) throw SortError("box: operands need the same sources");
    return srcfg_all(parallel(s, t));
}

Structure del_pairs(const Structure& s, const std::vector<std::pair<Label, Label>>& A) {
    Structure out = s;
    auto it = out.tuples.find(kEdge);
    for (auto& [a, b] : A) {
        if (a == b) throw SortError("del: pairs must be anti-reflexive");
        int va = s.source(a), vb = s.source(b);
        if (va == vb || it == out.tuples.end()) continue;
        it->second.erase({va, vb});
        it->second.erase({vb, va});
    }
    return out;
}

Structure fus_pairs(const Structure& s, const std::vector<std::pair<Label, Label>>& A) {
    Structure out = s;
    for (auto& [a, b] : A) out = fus(out, a, b);
    return out;
}

Structure include_relations(const Structure& s, const std::map<std::string, int>& extra) {
    Structure out = s;
    out.sort.relations = merge_relations(s.sort.relations, extra);
    for (auto& [r, k] : out.sort.relations) out.tuples[r];
    return out;
}

std::set<Label> port_labels(const Sort& s) {
    std::set<Label> out;
    for (auto& [r, k] : s.relations)
        if (r != kEdge && k == 1) out.insert(r);
    return out;
}

bool is_port_sort(const Sort& s) {
    if (!s.constants.empty()) return false;
    for (auto& [r, k] : s.relations)
        if (r == kEdge ? k != 2 : k != 1) return false;
    return s.has_relation(kEdge);
}

static void require_ports(const Structure& g, const char* op) {
    if (!is_port_sort(g.sort)) throw SortError(std::string(op) + ": needs a graph with ports, got " + g.sort.str());
}

static std::vector<int> members(const Structure& g, const Label& p) {
    std::vector<int> out;
    auto it = g.tuples.find(p);
    if (it != g.tuples.end())
        for (auto& t : it->second) out.push_back(t[0]);
    return out;
}

Structure add_edges(const Structure& g, const Label& p, const Label& q) {
    if (p == q) throw SortError("add: port labels must differ");
    if (!g.sort.has_relation(kEdge)) throw SortError("add: no edge relation");
    Structure out = g;
    auto ps = members(g, p), qs = members(g, q);
    auto& e = out.tuples[kEdge];
    for (int u : ps)
        for (int w : qs) e.insert({u, w});
    return out;
}

Structure mdf(const Structure& g, const std::vector<std::pair<Label, Label>>& D) {
    require_ports(g, "mdf");
    std::set<Label> qs;
    for (auto& [p, q] : D) qs.insert(q);
    Structure out(Sort::ports(qs), g.size);
    out.tuples[kEdge] = g.tuples.at(kEdge);
    for (auto& [p, q] : D)
        for (int v : members(g, p)) out.tuples[q].insert({v});
    return out;
}

Structure ren(const Structure& g, const Label& p, const Label& q) {
    require_ports(g, "ren");
    std::vector<std::pair<Label, Label>> D;
    for (auto& r : port_labels(g.sort))
        if (r != p) D.push_back({r, r});
    D.push_back({p, q});
    return mdf(g, D);
}

Structure fg(const Structure& g, const Label& p) {
    require_ports(g, "fg");
    std::vector<std::pair<Label, Label>> D;
    for (auto& r : port_labels(g.sort))
        if (r != p) D.push_back({r, r});
    return mdf(g, D);
}

Structure mark(const Structure& g, const Label& i) {
    require_ports(g, "mark");
    Structure out = g;
    if (i == kEdge) throw SortError("mark: port label may not be 'edge'");
    out.sort.relations[i] = 1;
    auto& t = out.tuples[i];
    for (int v = 0; v < g.size; ++v) t.insert({v});
    return out;
}

Structure otimes(const std::vector<std::pair<Label, Label>>& J, const Structure& g,
                 const Structure& h) {
    require_ports(g, "otimes");
    require_ports(h, "otimes");
    auto P = port_labels(g.sort), Q = port_labels(h.sort);
    for (auto& p : P)
        if (Q.count(p)) throw SortError("otimes: port label '" + p + "' on both sides");
    for (auto& [p, q] : J) {
        bool ok = (P.count(p) && Q.count(q)) || (Q.count(p) && P.count(q));
        if (!ok) throw SortError("otimes: pair (" + p + "," + q + ") does not cross the operands");
    }
    Structure out = oplus(g, h);
    for (auto& [p, q] : J) out = add_edges(out, p, q);
    return out;
}

Structure single_port(const Label& p, bool loop) {
    Structure g(Sort::ports({p}), 1);
    g.add(p, {0});
    if (loop) g.add(kEdge, {0, 0});
    return g;
}

Structure single_vertex(bool loop) {
    Structure g(Sort::graph(), 1);
    if (loop) g.add(kEdge, {0, 0});
    return g;
}

Structure single_source(const Label& a, bool loop) {
    Structure g(Sort::graph({a}), 1);
    g.set_source(a, 0);
    if (loop) g.add(kEdge, {0, 0});
    return g;
}

Structure source_edge(const Label& a, const Label& b) {
    if (a == b) throw SortError("edge constant needs two distinct labels");
    return make_graph(2, {{0, 1}}, {{a, 0}, {b, 1}});
}

std::string port_set_name(const std::set<Label>& s) {
    std::string out = "{";
    bool first = true;
    for (auto& p : s) {
        out += (first ? "" : ",") + p;
        first = false;
    }
    return out + "}";
}

Structure powerset_port_form(const Structure& g) {
    require_ports(g, "powerset_port_form");
    auto pset = port_labels(g.sort);
    std::vector<Label> P(pset.begin(), pset.end());
    if (P.size() > 12) throw CapacityError("powerset_port_form: more than 12 port labels");
    std::set<Label> names;
    for (unsigned mask = 0; mask < (1u << P.size()); ++mask) {
        std::set<Label> s;
        for (size_t i = 0; i < P.size(); ++i)
            if (mask >> i & 1) s.insert(P[i]);
        names.insert(port_set_name(s));
    }
    Structure out(Sort::ports(names), g.size);
    out.tuples[kEdge] = g.tuples.at(kEdge);
    for (int v = 0; v < g.size; ++v) {
        std::set<Label> s;
        for (auto& p : P)
            if (g.has(p, {v})) s.insert(p);
        out.tuples[port_set_name(s)].insert({v});
    }
    return out;
}

}  // namespace graft
