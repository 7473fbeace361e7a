#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bistab/reaction.hpp"

namespace bistab {

// Reaction text format, one reaction per line:
//   <lhs> -> <rhs> @ <kappa> [scale=<s>]
// where each side is a '+'-separated sum of counted species A and B
// ("2A + B", "A", "3B"), kappa is a positive rational ("16/3") or decimal,
// and scale overrides the default exponent 1-(a+b). '#' starts a comment.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int col, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(col) + ": " + msg),
          line_(line),
          col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_, col_;
};

struct ParsedNetwork {
    ReactionNetwork net;
    std::vector<std::string> warnings;
};

ParsedNetwork parse_network(const std::string& text);

// Canonical one-reaction-per-line rendering; parses back to an equal network.
std::string pretty_print(const ReactionNetwork& net);

}  // namespace bistab
