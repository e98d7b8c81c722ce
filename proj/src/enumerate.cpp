#include <algorithm>
#include <unordered_set>

#include "graft/structure.hpp"

namespace graft {

namespace {

std::vector<Tuple> all_tuples(int n, int k) {
    std::vector<Tuple> out;
    if (n == 0) return out;
    Tuple t(k, 0);
    while (true) {
        out.push_back(t);
        int i = k - 1;
        while (i >= 0 && ++t[i] == n) t[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

// Relational part of every structure of size n (no sources), bitmask order.
template <class F>
bool for_each_relational(const Sort& sort, int n, F&& visit) {
    std::vector<std::pair<std::string, Tuple>> slots;
    for (auto& [r, k] : sort.relations)
        for (auto& t : all_tuples(n, k)) slots.push_back({r, t});
    if (slots.size() > 30) throw CapacityError("enumerate_structures: " + std::to_string(slots.size()) +
                                               " tuple slots exceed the enumeration cap of 30");
    Sort bare = sort;
    bare.constants.clear();
    unsigned long long total = 1ull << slots.size();
    for (unsigned long long mask = 0; mask < total; ++mask) {
        Structure s(bare, n);
        for (size_t i = 0; i < slots.size(); ++i)
            if (mask >> i & 1) s.tuples[slots[i].first].insert(slots[i].second);
        if (!visit(s)) return false;
    }
    return true;
}

}  // namespace

void enumerate_structures(const Sort& sort, int max_size, bool up_to_iso,
                          const std::function<bool(const Structure&)>& visit) {
    std::vector<Label> cs(sort.constants.begin(), sort.constants.end());
    int lo = cs.empty() ? 0 : 1;
    for (int n = lo; n <= max_size; ++n) {
        std::unordered_set<std::string> seen_rel, seen;
        bool go = for_each_relational(sort, n, [&](const Structure& bare) {
            if (up_to_iso && !seen_rel.insert(canonical_key(bare)).second) return true;
            // every assignment of constants to elements
            std::vector<int> val(cs.size(), 0);
            while (true) {
                Structure s = bare;
                s.sort.constants = sort.constants;
                for (size_t i = 0; i < cs.size(); ++i) s.sources[cs[i]] = val[i];
                if (!up_to_iso || seen.insert(canonical_key(s)).second)
                    if (!visit(s)) return false;
                int i = static_cast<int>(cs.size()) - 1;
                while (i >= 0 && ++val[i] == n) val[i--] = 0;
                if (i < 0) break;
            }
            return true;
        });
        if (!go) return;
    }
}

std::vector<Structure> all_structures(const Sort& sort, int max_size, bool up_to_iso) {
    std::vector<Structure> out;
    enumerate_structures(sort, max_size, up_to_iso, [&](const Structure& s) {
        out.push_back(s);
        return true;
    });
    return out;
}

}  // namespace graft
