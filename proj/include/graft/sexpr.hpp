#pragma once

#include <string>
#include <vector>

namespace graft {

struct SExpr {
    bool atom = true;
    std::string text;
    std::vector<SExpr> items;
    long pos = 0;

    bool is_atom(const std::string& s) const { return atom && text == s; }
    const std::string& head() const;  // text of the first item of a list
    std::string str() const;
};

// Parses exactly one s-expression; trailing garbage is a ParseError.
SExpr parse_sexpr(const std::string& text);

}  // namespace graft
