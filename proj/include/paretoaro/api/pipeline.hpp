#pragma once

#include "paretoaro/api/types.hpp"
#include "paretoaro/conic/program.hpp"
#include "paretoaro/conic/solver.hpp"

namespace paretoaro::api {

struct PipelineOptions {
  conic::SolverOptions solver;
  // Points per coordinate of the oracle grid used for outer tangency; odd so
  // the box midpoint lies on the grid.
  int tangency_grid = 201;
  // Above this value of u_i - (c^i)'x(u) the inner surface is flagged.
  double tightness_threshold = 1e-4;
  double soundness_tol = 1e-6;
};

// Builds the conic program a request would solve (for export and audit).
conic::ConicProgram build_program(const ApproximationRequest& request);

ApproximationResult approximate_inner(const ApproximationRequest& request, const PipelineOptions& options = {});
ApproximationResult approximate_outer(const ApproximationRequest& request, const PipelineOptions& options = {});
ApproximationResult certify_dominated(const ApproximationRequest& request, const PipelineOptions& options = {});

// Dispatches on request.task.
ApproximationResult run(const ApproximationRequest& request, const PipelineOptions& options = {});

}  // namespace paretoaro::api
