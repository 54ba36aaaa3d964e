#pragma once

#include "paretoaro/conic/program.hpp"
#include "paretoaro/conic/solver.hpp"

namespace paretoaro::conic {

// Conic dual written again in standard form. For  min c'x + c0, Ax = b,
// x in K  the result is  min -b'y - c0  s.t.  c - A'y in K* (one dual slack
// block per cone block of the input, free y). metadata["objective_sign"]
// flips so that reported_objective() gives the dual value max b'y + c0.
ConicProgram dualize(const ConicProgram& program);

// Objective in the sense of the program's origin (sign-corrected for
// programs produced by dualize).
double reported_objective(const ConicProgram& program, const ConicSolution& solution);

// Replaces every second-order block of dimension q by a PSD block of order q
// constrained to the arrow form [[x0, x1'], [x1, x0 I]].
ConicProgram lower_soc(const ConicProgram& program);

// Replaces every free block of size n by a nonnegative block of size 2n
// holding (x+, x-).
ConicProgram split_free(const ConicProgram& program);

}  // namespace paretoaro::conic
