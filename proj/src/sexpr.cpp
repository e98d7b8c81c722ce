#include "graft/sexpr.hpp"

#include <cctype>

#include "graft/error.hpp"

namespace graft {

const std::string& SExpr::head() const {
    static const std::string empty;
    if (atom || items.empty() || !items[0].atom) return empty;
    return items[0].text;
}

std::string SExpr::str() const {
    if (atom) return text;
    std::string out = "(";
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) out += ' ';
        out += items[i].str();
    }
    return out + ")";
}

namespace {

struct Reader {
    const std::string& s;
    size_t i = 0;

    void skip() {
        while (i < s.size()) {
            if (std::isspace(static_cast<unsigned char>(s[i]))) {
                ++i;
            } else if (s[i] == ';') {
                while (i < s.size() && s[i] != '\n') ++i;
            } else {
                break;
            }
        }
    }

    SExpr read() {
        skip();
        if (i >= s.size()) throw ParseError("unexpected end of input", static_cast<long>(i));
        SExpr e;
        e.pos = static_cast<long>(i);
        if (s[i] == '(') {
            e.atom = false;
            ++i;
            while (true) {
                skip();
                if (i >= s.size()) throw ParseError("unclosed '('", e.pos);
                if (s[i] == ')') {
                    ++i;
                    break;
                }
                e.items.push_back(read());
            }
            return e;
        }
        if (s[i] == ')') throw ParseError("unexpected ')'", static_cast<long>(i));
        size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '(' && s[i] != ')' &&
               s[i] != ';')
            ++i;
        e.text = s.substr(start, i - start);
        return e;
    }
};

}  // namespace

SExpr parse_sexpr(const std::string& text) {
    Reader r{text};
    SExpr e = r.read();
    r.skip();
    if (r.i != text.size()) throw ParseError("trailing input", static_cast<long>(r.i));
    return e;
}

}  // namespace graft
