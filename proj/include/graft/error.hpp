#pragma once

#include <stdexcept>
#include <string>

namespace graft {

// Ill-sorted input: label clashes, arity mismatches, unknown symbols.
struct SortError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed text input. `pos` is a byte offset into the parsed text, -1 if unknown.
struct ParseError : std::runtime_error {
    long pos;
    ParseError(const std::string& msg, long p = -1)
        : std::runtime_error(p >= 0 ? msg + " at offset " + std::to_string(p) : msg), pos(p) {}
};

// An exhaustive routine refused an instance beyond its configured cap.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Default cap for exhaustive predicates; GRAFT_CAP overrides it.
int default_cap();
// GRAFT_CAP when set, otherwise `fallback`.
int cap_or(int fallback);

}  // namespace graft
