#ifndef TLSYNTH_EXPRESSION_H_
#define TLSYNTH_EXPRESSION_H_

#include <map>
#include <string>
#include <string_view>

#include "tlsynth/rational.h"

namespace tlsynth {

using ParameterMap = std::map<std::string, Rational>;

// Evaluates an arithmetic expression over rationals and named parameters,
// e.g. "1+alpha", "2*alpha", "alpha/2", "(1+alpha)/3". Literals are integers
// or decimals; "p/q" parses naturally as division.
//
// Throws Error(kParse) for malformed text and Error(kValidation) for unknown
// parameter names.
Rational EvaluateExpression(std::string_view text, const ParameterMap& params);

// Cost-cell syntax: "+inf", "-inf", or an expression.
ExtendedCost EvaluateCost(std::string_view text, const ParameterMap& params);

}  // namespace tlsynth

#endif  // TLSYNTH_EXPRESSION_H_
