#ifndef TLSYNTH_PROBLEM_IO_H_
#define TLSYNTH_PROBLEM_IO_H_

#include <string>
#include <string_view>
#include <vector>

#include "tlsynth/problem.h"

namespace tlsynth {

// Parses a JSON problem document:
//
//   {"name": "file-migration", "inputs": ["0","1"], "outputs": ["0","1"],
//    "r": 1, "aggregation": "sum", "objective": "min",
//    "parameters": {"alpha": "1"}, "initial_outputs": ["0"],
//    "rules": [{"x": ["*","0"], "y": ["0","0"], "cost": "0"}, ...]}
//
// Pattern cells are tokens, "*" or "_|_". Costs are rationals, parameter
// expressions, "+inf" or "-inf". Throws Error(kParse) with line or field
// context, Error(kValidation) for uncovered windows.
LocalProblem LoadProblem(std::string_view document);

// Inverse of LoadProblem; cost cells keep their original expression text.
std::string DumpProblem(const LocalProblem& problem);

// Names accepted by BundledProblem.
std::vector<std::string> BundledProblemNames();

// Document text of a bundled problem. Throws Error(kInvalidArgument).
std::string BundledProblemDocument(std::string_view name);

// LoadProblem(BundledProblemDocument(name)).
LocalProblem BundledProblem(std::string_view name);

// File migration with migration cost alpha.
LocalProblem FileMigration(const Rational& alpha);

}  // namespace tlsynth

#endif  // TLSYNTH_PROBLEM_IO_H_
