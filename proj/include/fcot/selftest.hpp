#pragma once

#include <ostream>

namespace fcot {

// Built-in numerical self-checks: correlation against a naive summation
// oracle, gradient against central finite differences, exact-step line
// minimality, monotone descent, steepest descent against the dense
// normal-equations solution, target encode/decode round trips, and pooling
// convergence. Prints one line per check; returns the number of failures.
int run_selftest(std::ostream& os);

}  // namespace fcot
