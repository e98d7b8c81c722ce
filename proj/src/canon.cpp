#include <algorithm>
#include <map>
#include <sstream>

#include "graft/structure.hpp"

namespace graft {

namespace {

// Incidence lists: for each element, the (relation index, tuple) pairs that mention it.
struct Incidence {
    std::vector<std::vector<std::pair<int, const Tuple*>>> at;
};

Incidence build_incidence(const Structure& s) {
    Incidence inc;
    inc.at.resize(s.size);
    int ri = 0;
    for (auto& [r, ts] : s.tuples) {
        for (auto& t : ts) {
            std::vector<int> seen;
            for (int v : t)
                if (std::find(seen.begin(), seen.end(), v) == seen.end()) {
                    seen.push_back(v);
                    inc.at[v].push_back({ri, &t});
                }
        }
        ++ri;
    }
    return inc;
}

// Refine colors until stable. Colors are ranks of sorted signatures, so the result
// depends only on the isomorphism class of (structure, initial coloring).
std::vector<int> refine(const Structure& s, const Incidence& inc, std::vector<int> col) {
    int ncol = -1;
    while (true) {
        std::vector<std::vector<int>> sig(s.size);
        for (int v = 0; v < s.size; ++v) {
            std::vector<std::vector<int>> parts;
            for (auto& [ri, t] : inc.at[v]) {
                std::vector<int> d{ri};
                for (int x : *t) d.push_back(x == v ? -1 : col[x]);
                parts.push_back(std::move(d));
            }
            std::sort(parts.begin(), parts.end());
            auto& out = sig[v];
            out.push_back(col[v]);
            for (auto& p : parts) {
                out.push_back(-2);
                out.insert(out.end(), p.begin(), p.end());
            }
        }
        std::vector<std::vector<int>> uniq = sig;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        std::vector<int> next(s.size);
        for (int v = 0; v < s.size; ++v)
            next[v] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), sig[v]) - uniq.begin());
        int k = static_cast<int>(uniq.size());
        col = std::move(next);
        if (k == ncol) return col;
        ncol = k;
    }
}

std::vector<int> encode(const Structure& s, const std::vector<int>& perm) {
    std::vector<int> enc{s.size};
    for (auto& [r, ts] : s.tuples) {
        std::vector<Tuple> mapped;
        mapped.reserve(ts.size());
        for (auto t : ts) {
            for (int& v : t) v = perm[v];
            mapped.push_back(std::move(t));
        }
        std::sort(mapped.begin(), mapped.end());
        enc.push_back(-1);
        enc.push_back(static_cast<int>(mapped.size()));
        for (auto& t : mapped) enc.insert(enc.end(), t.begin(), t.end());
    }
    enc.push_back(-1);
    for (auto& [c, v] : s.sources) enc.push_back(perm[v]);
    return enc;
}

bool transposition_is_automorphism(const Structure& s, int u, int w) {
    for (auto& [r, ts] : s.tuples)
        for (auto t : ts) {
            bool touched = false;
            for (int& x : t) {
                if (x == u) {
                    x = w;
                    touched = true;
                } else if (x == w) {
                    x = u;
                    touched = true;
                }
            }
            if (touched && !ts.count(t)) return false;
        }
    return true;
}

struct Search {
    const Structure& s;
    const Incidence& inc;
    std::vector<int> best_enc;
    std::vector<int> best_perm;
    bool have = false;

    void run(std::vector<int> col) {
        col = refine(s, inc, std::move(col));
        int n = s.size;
        std::vector<int> count(n, 0);
        for (int c : col) ++count[c];
        int target = -1;
        for (int c = 0; c < n; ++c)
            if (count[c] > 1) {
                target = c;
                break;
            }
        if (target < 0) {
            auto enc = encode(s, col);
            if (!have || enc < best_enc) {
                best_enc = std::move(enc);
                best_perm = col;
                have = true;
            }
            return;
        }
        std::vector<int> cell;
        for (int v = 0; v < n; ++v)
            if (col[v] == target) cell.push_back(v);
        std::vector<int> tried;
        for (int v : cell) {
            bool redundant = false;
            for (int u : tried)
                if (transposition_is_automorphism(s, u, v)) {
                    redundant = true;
                    break;
                }
            if (redundant) continue;
            tried.push_back(v);
            std::vector<int> next(n);
            for (int x = 0; x < n; ++x) next[x] = 2 * col[x] + (col[x] == target && x != v ? 1 : 0);
            run(std::move(next));
        }
    }
};

}  // namespace

std::vector<int> canonical_permutation(const Structure& s) {
    if (s.size == 0) return {};
    Incidence inc = build_incidence(s);
    // initial colors: the ordered list of source labels at each element
    std::vector<std::vector<int>> init(s.size);
    int ci = 0;
    for (auto& [c, v] : s.sources) init[v].push_back(ci++);
    std::vector<std::vector<int>> uniq = init;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    std::vector<int> col(s.size);
    for (int v = 0; v < s.size; ++v)
        col[v] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), init[v]) - uniq.begin());
    Search search{s, inc, {}, {}, false};
    search.run(std::move(col));
    return search.best_perm;
}

Structure canonical(const Structure& s) { return relabel(s, canonical_permutation(s)); }

std::string canonical_key(const Structure& s) {
    auto perm = canonical_permutation(s);
    auto enc = encode(s, perm);
    std::ostringstream os;
    os << s.sort.str() << '|';
    for (int x : enc) os << x << ',';
    return os.str();
}

bool isomorphic(const Structure& s, const Structure& t) {
    if (s.sort != t.sort || s.size != t.size) return false;
    for (auto& [r, ts] : s.tuples)
        if (t.tuples.at(r).size() != ts.size()) return false;
    return canonical(s) == canonical(t);
}

}  // namespace graft
