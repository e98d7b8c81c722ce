#include "graft/random.hpp"

#include <algorithm>

#include "graft/error.hpp"

namespace graft {

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Structure random_structure(const Sort& sort, int n, double p, Rng& rng) {
    if (n == 0 && !sort.constants.empty()) n = 1;
    Structure s(sort, n);
    for (auto& [r, k] : sort.relations) {
        if (n == 0) break;
        Tuple t(k, 0);
        while (true) {
            if (coin(rng, p)) s.tuples[r].insert(t);
            int i = k - 1;
            while (i >= 0 && ++t[i] == n) t[i--] = 0;
            if (i < 0) break;
        }
    }
    for (auto& c : sort.constants) s.sources[c] = uniform_int(rng, 0, n - 1);
    return s;
}

MultiGraph random_multigraph(const std::set<Label>& constants, int nv, int ne, Rng& rng) {
    if (nv == 0 && !constants.empty()) nv = 1;
    MultiGraph g;
    g.constants = constants;
    g.nv = nv;
    for (int i = 0; i < ne && nv > 0; ++i) g.edges.push_back({uniform_int(rng, 0, nv - 1), uniform_int(rng, 0, nv - 1)});
    for (auto& c : constants) g.sources[c] = uniform_int(rng, 0, nv - 1);
    return g;
}

namespace {

LTerm random_term(const Sort& sort, const std::vector<std::string>& vars, Rng& rng) {
    int nv = static_cast<int>(vars.size()), nc = static_cast<int>(sort.constants.size());
    int i = uniform_int(rng, 0, nv + nc - 1);
    if (i < nv) return LTerm::var(vars[i]);
    auto it = sort.constants.begin();
    std::advance(it, i - nv);
    return LTerm::cst(*it);
}

Formula random_atom(const Sort& sort, const std::vector<std::string>& vars, Rng& rng) {
    if (vars.empty() && sort.constants.empty()) return coin(rng) ? f_true() : f_false();
    int nr = static_cast<int>(sort.relations.size());
    int pick = uniform_int(rng, 0, nr);
    if (pick == nr) return f_eq(random_term(sort, vars, rng), random_term(sort, vars, rng));
    auto it = sort.relations.begin();
    std::advance(it, pick);
    std::vector<LTerm> args;
    for (int i = 0; i < it->second; ++i) args.push_back(random_term(sort, vars, rng));
    return f_rel(it->first, std::move(args));
}

}  // namespace

Formula random_qf(const Sort& sort, const std::vector<std::string>& vars, int size, Rng& rng) {
    if (size <= 0) return random_atom(sort, vars, rng);
    switch (uniform_int(rng, 0, 3)) {
        case 0: return f_not(random_qf(sort, vars, size - 1, rng));
        case 1: {
            int l = uniform_int(rng, 0, size - 1);
            return f_and(random_qf(sort, vars, l, rng), random_qf(sort, vars, size - 1 - l, rng));
        }
        case 2: {
            int l = uniform_int(rng, 0, size - 1);
            return f_or(random_qf(sort, vars, l, rng), random_qf(sort, vars, size - 1 - l, rng));
        }
        default: return random_atom(sort, vars, rng);
    }
}

Formula random_fo(const Sort& sort, const std::vector<std::string>& vars, int depth, int size, Rng& rng) {
    if (size <= 0 || (depth == 0 && coin(rng, 0.3))) return random_qf(sort, vars, depth == 0 ? size : 0, rng);
    int choice = uniform_int(rng, 0, depth > 0 ? 4 : 2);
    switch (choice) {
        case 0: return f_not(random_fo(sort, vars, depth, size - 1, rng));
        case 1:
        case 2: {
            int l = uniform_int(rng, 0, size - 1);
            auto a = random_fo(sort, vars, depth, l, rng), b = random_fo(sort, vars, depth, size - 1 - l, rng);
            return choice == 1 ? f_and(a, b) : f_or(a, b);
        }
        default: {
            std::string x = var_name(uniform_int(rng, 1, static_cast<int>(vars.size()) + 2));
            auto inner = vars;
            if (std::find(inner.begin(), inner.end(), x) == inner.end()) inner.push_back(x);
            auto body = random_fo(sort, inner, depth - 1, size - 1, rng);
            return choice == 3 ? f_exists(x, body) : f_forall(x, body);
        }
    }
}

QfdScheme random_scheme(const Sort& in, const Sort& out, Rng& rng, int size) {
    if (!out.constants.empty() && in.constants.empty())
        throw SortError("random_scheme: constants cannot be defined from a constant-free sort");
    QfdScheme g;
    g.name = "random";
    g.in = in;
    g.out = out;
    std::vector<Label> cs(in.constants.begin(), in.constants.end());
    std::set<Label> image;
    for (auto& d : out.constants) {
        Label h1 = cs[uniform_int(rng, 0, static_cast<int>(cs.size()) - 1)];
        Label h2 = cs[uniform_int(rng, 0, static_cast<int>(cs.size()) - 1)];
        image.insert(h1);
        image.insert(h2);
        if (h1 == h2) {
            g.kappa[d][h1] = f_true();
        } else {
            Formula theta = random_qf(in, {}, uniform_int(rng, 0, size), rng);
            g.kappa[d][h1] = theta;
            g.kappa[d][h2] = f_not(theta);
        }
    }
    std::vector<Formula> dom{random_qf(in, {kDeltaVar}, uniform_int(rng, 0, size), rng)};
    for (auto& c : image) dom.push_back(f_eq(LTerm::var(kDeltaVar), LTerm::cst(c)));
    g.delta = f_or(dom);
    for (auto& [r, k] : out.relations) {
        std::vector<std::string> vars;
        for (int i = 1; i <= k; ++i) vars.push_back(var_name(i));
        std::vector<Formula> conj{random_qf(in, vars, uniform_int(rng, 0, size), rng)};
        for (auto& v : vars) conj.push_back(substitute(g.delta, {{kDeltaVar, LTerm::var(v)}}));
        g.phi[r] = f_and(conj);
    }
    return g;
}

}  // namespace graft
