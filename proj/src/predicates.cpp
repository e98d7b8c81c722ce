#include <algorithm>
#include <cstdint>

#include "graft/structure.hpp"

namespace graft {

namespace {

std::vector<uint64_t> out_masks(const Structure& g, bool symmetric) {
    if (g.size > 64) throw CapacityError("graph predicates support at most 64 vertices");
    std::vector<uint64_t> out(g.size, 0);
    auto it = g.tuples.find(kEdge);
    if (it == g.tuples.end()) return out;
    for (auto& t : it->second) {
        out[t[0]] |= 1ull << t[1];
        if (symmetric) out[t[1]] |= 1ull << t[0];
    }
    return out;
}

// Choose U of size n (ascending), tracking the common out-neighbourhood; W must be n
// vertices of that set outside U.
bool search_bicomplete(const std::vector<uint64_t>& out, int n, int start, int chosen, uint64_t used,
                       uint64_t common) {
    int N = static_cast<int>(out.size());
    if (chosen == n) {
        // W cannot meet U; every remaining common neighbour outside U works
        return __builtin_popcountll(common & ~used) >= n;
    }
    for (int v = start; v < N; ++v) {
        uint64_t c = common & out[v];
        if (__builtin_popcountll(c & ~(used | 1ull << v)) < n) continue;
        if (search_bicomplete(out, n, v + 1, chosen + 1, used | 1ull << v, c)) return true;
    }
    return false;
}

}  // namespace

bool has_bicomplete(const Structure& g, int n, bool directed) {
    if (n < 1) throw SortError("has_bicomplete: n must be positive");
    if (2 * n > g.size) return false;
    auto out = out_masks(g, !directed);
    uint64_t all = g.size == 64 ? ~0ull : (1ull << g.size) - 1;
    return search_bicomplete(out, n, 0, 0, 0, all);
}

bool is_uniformly_k_sparse(const Structure& g, int k, int cap) {
    if (k < 0) throw SortError("sparsity bound must be non-negative");
    if (cap < 0) cap = default_cap();
    if (g.size > cap)
        throw CapacityError("is_uniformly_k_sparse: " + std::to_string(g.size) +
                            " vertices exceed the exhaustive cap " + std::to_string(cap));
    auto out = out_masks(g, false);
    uint64_t total = 1ull << g.size;
    for (uint64_t mask = 1; mask < total; ++mask) {
        long edges = 0;
        for (int v = 0; v < g.size; ++v)
            if (mask >> v & 1) edges += __builtin_popcountll(out[v] & mask);
        if (edges > static_cast<long>(k) * __builtin_popcountll(mask)) return false;
    }
    return true;
}

}  // namespace graft
