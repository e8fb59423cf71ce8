#pragma once

#include <string>

#include "expoknap/presburger.hpp"
#include "expoknap/words.hpp"

namespace expoknap {

/// {(x, y) | p q^x r = s u^y v} as literal words (no reduction). The result
/// always carries its semilinear representation.
SolutionSet two_power_eq(const Word& p, const Word& q, const Word& r, const Word& s, const Word& u, const Word& v,
                         const std::string& x = "x", const std::string& y = "y");

}  // namespace expoknap
