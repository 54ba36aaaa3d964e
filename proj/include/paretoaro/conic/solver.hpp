#pragma once

#include <string>

#include "paretoaro/common/types.hpp"
#include "paretoaro/conic/program.hpp"

namespace paretoaro::conic {

struct SolverOptions {
  double tol = 1e-8;
  // Accepted as near optimal when the full tolerance cannot be reached.
  double reduced_tol = 1e-6;
  int max_iter = 200;
  bool verbose = false;
};

enum class Status { kOptimal, kNearOptimal, kInfeasible, kUnbounded, kStalled };

std::string to_string(Status status);

// Optimal, possibly at the reduced tolerance.
inline bool solved(Status status) { return status == Status::kOptimal || status == Status::kNearOptimal; }

struct ConicSolution {
  Status status = Status::kStalled;
  // Indexed like ConicProgram scalars; PSD entries hold X_ij.
  Vector primal;
  // Multipliers y of the equalities: c - A'y lies in the dual cone.
  Vector dual;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  // Relative residuals in the infinity norm after row scaling, each divided
  // by the size of the terms involved: ||Ax-b||/(1+||b||+||Ax||),
  // ||c-A'y-z||/(1+||c||+max(||A'y||,||z||)) and
  // max(|pobj-dobj|, s'z)/(1+|pobj|+|dobj|).
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;

  double value(const LinExpr& e) const;
  Matrix matrix(const ConicProgram& program, int block) const;
};

// Homogeneous self-dual interior-point method with Nesterov-Todd scaling and
// a Mehrotra predictor-corrector. Dense/sparse hybrid normal equations; meant
// for desk-scale programs. Throws kNumericalBreakdown when the Newton system
// cannot be solved.
ConicSolution solve(const ConicProgram& program, const SolverOptions& options = {});

}  // namespace paretoaro::conic
