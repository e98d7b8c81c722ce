#pragma once

#include <string>

#include "graft/hintikka.hpp"
#include "graft/modular.hpp"
#include "graft/multigraph.hpp"
#include "graft/qfd.hpp"
#include "graft/recognizers.hpp"
#include "json.hpp"

namespace graft {

using Json = nlohmann::ordered_json;

// Text -> JSON; syntax errors become ParseError with the byte offset.
Json parse_json(const std::string& text);
std::string read_file(const std::string& path);  // ParseError when unreadable

Json sort_to_json(const Sort& s);
Sort sort_from_json(const Json& j);

// {"relations":{"edge":2},"constants":["a"],"domain":3,"tuples":{"edge":[[0,1]]},"sources":{"a":0}}
Json structure_to_json(const Structure& s);
Structure structure_from_json(const Json& j);

// Structure form of the underlying simple graph plus "edges":{"e0":[0,1],...}.
Json multigraph_to_json(const MultiGraph& g);
MultiGraph multigraph_from_json(const Json& j);

// {"in":{sort},"out":{sort},"delta":"<formula>","phi":{...},"kappa":{"d":{"c":"<formula>"}}}
Json scheme_to_json(const QfdScheme& g);
QfdScheme scheme_from_json(const Json& j);

// Types are DAGs: {"sort":{...},"root":digest,"nodes":{digest:{depth,params,atoms,kids}}}.
Json type_to_json(const HType& t);
HType type_from_json(const Json& j);

Json tree_to_json(const ModularTree& t);

// {"name","sig","states":[...],"transitions":{"<op> [args]":"state"},"accepting":[...]}
// Lazy automata export the transitions taken so far.
Json automaton_to_json(const TreeAutomaton& a);
TreeAutomaton automaton_from_json(const Json& j);

}  // namespace graft
