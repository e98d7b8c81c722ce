#include "graft/expansions.hpp"

#include <algorithm>
#include <set>

#include "graft/hintikka.hpp"

namespace graft {

PortStats classify_ports(const Structure& g, int m) {
    if (m < 1) throw SortError("classify_ports: m must be at least 1");
    if (!is_port_sort(g.sort)) throw SortError("classify_ports: not a graph with ports: " + g.sort.str());
    PortStats out;
    for (auto& p : port_labels(g.sort)) {
        PortClass c;
        c.count = static_cast<int>(g.tuples.at(p).size());
        c.kind = c.count == 0 ? PortClass::Void : c.count <= m ? PortClass::Small : PortClass::Large;
        out[p] = c;
    }
    return out;
}

std::string port_class_name(PortClass::Kind k) {
    switch (k) {
        case PortClass::Void: return "void";
        case PortClass::Small: return "small";
        case PortClass::Large: return "large";
    }
    return "?";
}

Label s_label(const Label& p, int i) { return "s(" + p + "," + std::to_string(i) + ")"; }
Label in_label(const Label& p, int i) { return "in(" + p + "," + std::to_string(i) + ")"; }
Label out_label(const Label& p, int i) { return "out(" + p + "," + std::to_string(i) + ")"; }

namespace {

std::vector<int> ports_of(const Structure& g, const Label& p) {
    std::vector<int> v;
    for (auto& t : g.tuples.at(p)) v.push_back(t[0]);
    return v;
}

// Per-label choice: sources on base vertices and numbers of in/out auxiliaries.
struct Choice {
    std::vector<std::pair<int, Label>> on_base;
    int ins = 0, outs = 0;
};

// Assemble the candidate; `choice[k]` belongs to labels[k].
Structure assemble(const Structure& g, const std::vector<Label>& labels, const std::vector<const Choice*>& choice) {
    std::set<Label> names;
    int extra = 0;
    for (size_t k = 0; k < labels.size(); ++k) {
        for (auto& [v, c] : choice[k]->on_base) names.insert(c);
        for (int i = 1; i <= choice[k]->ins; ++i) names.insert(in_label(labels[k], i));
        for (int i = 1; i <= choice[k]->outs; ++i) names.insert(out_label(labels[k], i));
        extra += choice[k]->ins + choice[k]->outs;
    }
    Structure e(Sort::graph(names), g.size + extra);
    for (auto& t : g.tuples.at(kEdge)) e.add(kEdge, t);
    int next = g.size;
    for (size_t k = 0; k < labels.size(); ++k) {
        for (auto& [v, c] : choice[k]->on_base) e.set_source(c, v);
        auto ports = ports_of(g, labels[k]);
        for (int i = 1; i <= choice[k]->ins; ++i, ++next) {
            e.set_source(in_label(labels[k], i), next);
            for (int x : ports) e.add(kEdge, {x, next});
        }
        for (int i = 1; i <= choice[k]->outs; ++i, ++next) {
            e.set_source(out_label(labels[k], i), next);
            for (int x : ports) e.add(kEdge, {next, x});
        }
    }
    return e;
}

long expansion_cap(long cap) {
    if (cap >= 0) return cap;
    return 200000;
}

}  // namespace

ExpansionSet enumerate_expansions(const Structure& g, int m, long cap) {
    auto stats = classify_ports(g, m);
    cap = expansion_cap(cap);
    ExpansionSet out;
    if (has_bicomplete(g, m + 1)) {
        out.contains_bicomplete = true;
        return out;
    }
    std::vector<Label> labels;
    std::vector<std::vector<Choice>> options;
    std::map<int, int> small_at;
    for (auto& [p, c] : stats) {
        std::vector<Choice> opts;
        if (c.kind == PortClass::Void) {
            opts.push_back({});
        } else if (c.kind == PortClass::Small) {
            auto ports = ports_of(g, p);
            for (int x : ports) ++small_at[x];
            // injections: ports in id order get distinct indices from 1..m
            std::vector<int> idx(m);
            for (int i = 0; i < m; ++i) idx[i] = i + 1;
            std::set<std::vector<int>> seen;
            do {
                std::vector<int> pick(idx.begin(), idx.begin() + ports.size());
                if (!seen.insert(pick).second) continue;
                Choice ch;
                for (size_t j = 0; j < ports.size(); ++j) ch.on_base.push_back({ports[j], s_label(p, pick[j])});
                opts.push_back(ch);
            } while (std::next_permutation(idx.begin(), idx.end()));
        } else {
            for (int a = 0; a <= m; ++a)
                for (int b = 0; b <= m; ++b) {
                    Choice ch;
                    ch.ins = a;
                    ch.outs = b;
                    opts.push_back(ch);
                }
        }
        labels.push_back(p);
        options.push_back(std::move(opts));
    }
    // a vertex carrying two small labels would need two sources
    for (auto& [v, k] : small_at)
        if (k > 1) return out;

    long total = 1;
    for (auto& o : options) {
        total *= static_cast<long>(o.size());
        if (total > cap)
            throw CapacityError("enumerate_expansions: more than " + std::to_string(cap) + " candidates");
    }
    std::map<std::string, Expansion> found;
    std::vector<const Choice*> pick(labels.size());
    std::vector<size_t> at(labels.size(), 0);
    for (long n = 0; n < total; ++n) {
        for (size_t k = 0; k < labels.size(); ++k) pick[k] = &options[k][at[k]];
        Structure e = assemble(g, labels, pick);
        if (!has_bicomplete(e, m + 1)) {
            auto key = canonical_key(e);
            if (!found.count(key)) found[key] = Expansion{std::move(e), g.size};
        }
        for (size_t k = 0; k < labels.size(); ++k) {
            if (++at[k] < options[k].size()) break;
            at[k] = 0;
        }
    }
    for (auto& [k, e] : found) {
        out.keys.push_back(k);
        out.expansions.push_back(std::move(e));
    }
    return out;
}

namespace {

// One label's assignment: for each of its 3m source labels, -1 absent, a base vertex,
// or `n` for a new vertex.
struct RawChoice {
    std::vector<int> s, in, out;
};

bool prefix_present(const std::vector<int>& xs) {
    bool gap = false;
    for (int x : xs) {
        if (x < 0) gap = true;
        else if (gap) return false;
    }
    return true;
}

bool literal_ok(const RawChoice& r, const PortClass& c, const std::vector<int>& ports, int n) {
    auto none = [](const std::vector<int>& xs) { return std::all_of(xs.begin(), xs.end(), [](int x) { return x < 0; }); };
    if (c.kind == PortClass::Void) return none(r.s) && none(r.in) && none(r.out);
    if (c.kind == PortClass::Small) {
        if (!none(r.in) || !none(r.out)) return false;
        std::vector<int> targets;
        for (int x : r.s)
            if (x >= 0) {
                if (x == n) return false;
                targets.push_back(x);
            }
        std::sort(targets.begin(), targets.end());
        if (std::adjacent_find(targets.begin(), targets.end()) != targets.end()) return false;
        std::vector<int> want = ports;
        std::sort(want.begin(), want.end());
        return targets == want;
    }
    if (!none(r.s)) return false;
    for (auto* xs : {&r.in, &r.out})
        for (int x : *xs)
            if (x >= 0 && x != n) return false;
    return prefix_present(r.in) && prefix_present(r.out);
}

}  // namespace

std::vector<std::string> expansion_keys_by_filter(const Structure& g, int m) {
    auto stats = classify_ports(g, m);
    if (has_bicomplete(g, m + 1)) return {};
    const int n = g.size;
    std::vector<Label> labels;
    std::vector<std::vector<RawChoice>> options;
    for (auto& [p, c] : stats) {
        auto ports = ports_of(g, p);
        std::vector<RawChoice> ok;
        // odometer over 3m slots: s slots take -1..n-1 or n, in/out slots likewise
        std::vector<int> slot(3 * m, -1);
        for (;;) {
            RawChoice r;
            r.s.assign(slot.begin(), slot.begin() + m);
            r.in.assign(slot.begin() + m, slot.begin() + 2 * m);
            r.out.assign(slot.begin() + 2 * m, slot.end());
            if (literal_ok(r, c, ports, n)) ok.push_back(r);
            size_t k = 0;
            for (; k < slot.size(); ++k) {
                if (++slot[k] <= n) break;
                slot[k] = -1;
            }
            if (k == slot.size()) break;
        }
        labels.push_back(p);
        options.push_back(std::move(ok));
    }
    std::set<std::string> keys;
    std::vector<size_t> at(labels.size(), 0);
    for (auto& o : options)
        if (o.empty()) return {};
    for (;;) {
        // build the candidate literally from the slot assignments
        std::map<Label, int> src;
        std::vector<std::pair<int, int>> extra_edges;
        int next = n;
        bool separated = true;
        std::set<int> used;
        for (size_t k = 0; k < labels.size(); ++k) {
            const RawChoice& r = options[k][at[k]];
            auto ports = ports_of(g, labels[k]);
            for (int i = 0; i < m; ++i) {
                if (r.s[i] >= 0) {
                    src[s_label(labels[k], i + 1)] = r.s[i];
                    if (!used.insert(r.s[i]).second) separated = false;
                }
                if (r.in[i] >= 0) {
                    int v = next++;
                    src[in_label(labels[k], i + 1)] = v;
                    for (int x : ports) extra_edges.push_back({x, v});
                }
                if (r.out[i] >= 0) {
                    int v = next++;
                    src[out_label(labels[k], i + 1)] = v;
                    for (int x : ports) extra_edges.push_back({v, x});
                }
            }
        }
        if (separated) {
            std::set<Label> names;
            for (auto& [c, v] : src) names.insert(c);
            Structure e(Sort::graph(names), next);
            for (auto& t : g.tuples.at(kEdge)) e.add(kEdge, t);
            for (auto& [a, b] : extra_edges) e.add(kEdge, {a, b});
            for (auto& [c, v] : src) e.set_source(c, v);
            if (is_source_separated(e) && !has_bicomplete(e, m + 1)) keys.insert(canonical_key(e));
        }
        size_t k = 0;
        for (; k < labels.size(); ++k) {
            if (++at[k] < options[k].size()) break;
            at[k] = 0;
        }
        if (k == labels.size()) break;
    }
    return {keys.begin(), keys.end()};
}

SimResult decide_sim_explained(const Structure& g, const Structure& h, int m, const CongruenceEvaluator& ev, int depth) {
    if (g.sort != h.sort) throw SortError("decide_sim: sorts differ: " + g.sort.str() + " vs " + h.sort.str());
    classify_ports(g, m);
    if (depth < 0) depth = 2 * m + 2;
    SimResult r;
    bool kg = has_bicomplete(g, m + 1), kh = has_bicomplete(h, m + 1);
    if (kg || kh) {
        r.condition = 'a';
        r.equivalent = kg && kh;
        r.detail = r.equivalent ? "both contain the bicomplete graph" : "only one contains the bicomplete graph";
        return r;
    }
    r.condition = 'b';
    if (!same_type(fo_theory(g, depth), fo_theory(h, depth))) {
        r.detail = "theories differ at depth " + std::to_string(depth);
        return r;
    }
    r.condition = 'c';
    auto labels = [&](const Structure& x) {
        std::set<std::string> out;
        for (auto& e : enumerate_expansions(x, m).expansions)
            out.insert(ev.label(Value{e.graph}) + "|" + fo_theory(e.graph, depth)->digest);
        return out;
    };
    auto lg = labels(g), lh = labels(h);
    r.equivalent = lg == lh;
    r.detail = r.equivalent ? "expansions match (" + std::to_string(lg.size()) + " classes)"
                            : "expansion classes differ (" + std::to_string(lg.size()) + " vs " +
                                  std::to_string(lh.size()) + ")";
    return r;
}

bool decide_sim(const Structure& g, const Structure& h, int m, const CongruenceEvaluator& ev, int depth) {
    return decide_sim_explained(g, h, m, ev, depth).equivalent;
}

}  // namespace graft
