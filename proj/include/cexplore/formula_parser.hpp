#pragma once

#include <string_view>

#include "cexplore/formula.hpp"
#include "cexplore/lexer.hpp"

namespace cexplore {

// Parses the surface syntax:
//
//   f ::= true | false | prop | @Type | @event[arg,...] | !f | X f | G f | F f
//       | f U f | f && f | f || f | f -> f | ( f )
//
// Precedence, tightest first: ! X G F, U (right assoc), &&, ||, -> (right
// assoc). `&` and `|` are accepted for && and ||. A prop is an identifier
// optionally followed by [index] groups and "=value", which is how compiled
// models name array cells and one-hot sort values (occupant[r0][g1],
// current[r0]=k1). Throws ParseError with line and column.
Formula parse_formula(std::string_view text);

// Parses one formula from a stream positioned inside a larger grammar.
Formula parse_formula(TokenStream& tokens);

}  // namespace cexplore
