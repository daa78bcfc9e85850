#pragma once

#include <string>
#include <string_view>

#include "robba/scheme.hpp"

namespace robba {

// Series text:
//   series ::= ['-'] term (('+' | '-') term)* '+' 'O(' var '^' int ')'
//   term   ::= coeff ['*'] mono | coeff | mono
//   mono   ::= var ['^' int] ('*' var ['^' int])*
//   coeff  ::= int ['/' int] | int '^' int '*' int '(mod' int '^' int ')' | '0 (mod' int '^' int ')'
// The second coefficient form is a p-adic literal p^v*m (mod p^N); plain
// rationals in p-adic mode are read at the context's precision. Bivariate
// series end in O(u^a, x^b). 1-forms f du are written as f.

/// Parses a univariate series. `var` may be empty, in which case the first
/// variable seen is used and every later one must agree with it.
TruncatedSeries parse_series(std::string_view text, RingLabel ring, const CoeffContext& ctx,
                             std::string_view var = "");
BiSeries parse_biseries(std::string_view text, RingLabel ring, const CoeffContext& ctx,
                        std::string_view base_var, std::string_view fiber_var);
Coefficient parse_coefficient(std::string_view text, const CoeffContext& ctx);

/// The variable named in a series text, or "" when it mentions none.
std::string detect_variable(std::string_view text);

std::string print_coefficient(const Coefficient& c);
std::string print_series(const TruncatedSeries& s, std::string_view var);
std::string print_biseries(const BiSeries& s, std::string_view base_var, std::string_view fiber_var);

}  // namespace robba
