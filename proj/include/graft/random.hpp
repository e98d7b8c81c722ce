#pragma once

#include <random>
#include <string>
#include <vector>

#include "graft/formula.hpp"
#include "graft/multigraph.hpp"
#include "graft/qfd.hpp"
#include "graft/structure.hpp"

namespace graft {

using Rng = std::mt19937_64;

int uniform_int(Rng& rng, int lo, int hi);  // inclusive
bool coin(Rng& rng, double p = 0.5);

// Every tuple present with probability p; sources uniform. n >= 1 is forced when C is nonempty.
Structure random_structure(const Sort& sort, int n, double p, Rng& rng);
MultiGraph random_multigraph(const std::set<Label>& constants, int nv, int ne, Rng& rng);

// Random quantifier-free formula over the sort with the given variables; `size` bounds the
// number of connectives.
Formula random_qf(const Sort& sort, const std::vector<std::string>& vars, int size, Rng& rng);
// Random first-order formula of quantifier depth at most `depth`; bound variables come from
// x1.. and free variables from `vars`.
Formula random_fo(const Sort& sort, const std::vector<std::string>& vars, int depth, int size, Rng& rng);

// Random scheme that is valid by construction: kappa picks between two sources on a random
// closed condition, delta contains the chosen sources, phi is guarded by delta.
QfdScheme random_scheme(const Sort& in, const Sort& out, Rng& rng, int size = 3);

}  // namespace graft
