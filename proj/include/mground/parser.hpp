// Text front end for aggregate programs.
#pragma once

#include "mground/syntax.hpp"

#include <stdexcept>
#include <string_view>

namespace mground {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    // Message without the position prefix.
    const std::string& message() const { return message_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

// Grammar:
//   program  = {rule}
//   rule     = atom [":-" bodylit {"," bodylit}] "."
//   bodylit  = ["not"] atom | term rel term | aggname "{" [elem {";" elem}] "}" rel term
//   elem     = [termlist] ":" [atomlist] | termlist
// Comments run from % to the end of the line. Predicates starting with "__"
// are reserved and rejected.
Program parse_program(std::string_view text);

} // namespace mground
