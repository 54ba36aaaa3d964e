#include "paretoaro/conic/transform.hpp"

#include <vector>

#include "paretoaro/common/error.hpp"

namespace paretoaro::conic {

namespace {

// Rebuilds `src` on new variables given an affine expression for every old
// scalar.
void rewrite_rows(const ConicProgram& src, const std::vector<LinExpr>& map, ConicProgram& dst) {
  for (const auto& eq : src.equalities()) {
    LinExpr row;
    for (const auto& [k, v] : eq.terms) row += v * map[k];
    dst.add_equality(row, eq.rhs);
  }
  LinExpr obj(src.objective_constant());
  for (const auto& [k, v] : src.objective()) obj += v * map[k];
  dst.set_objective(obj);
  dst.metadata = src.metadata;
}

}  // namespace

ConicProgram dualize(const ConicProgram& p) {
  ConicProgram d;
  const int m = p.num_equalities();
  int y = -1;
  if (m > 0) y = d.add_block("y", Cone::kFree, m);

  // Column view of A (entry semantics).
  std::vector<std::vector<std::pair<int, double>>> cols(p.num_scalars());
  for (int r = 0; r < m; ++r) {
    for (const auto& [k, v] : p.equalities()[r].terms) cols[k].emplace_back(r, v);
  }
  std::vector<double> c(p.num_scalars(), 0.0);
  for (const auto& [k, v] : p.objective()) c[k] += v;

  // Scalar k of a PSD block with i != j carries matrix value coef/2.
  for (int b = 0; b < p.num_blocks(); ++b) {
    const Block& blk = p.block(b);
    int slack = -1;
    if (blk.cone != Cone::kFree) slack = d.add_block("z_" + blk.name, blk.cone, blk.size);
    for (int local = 0; local < blk.length(); ++local) {
      const int k = blk.offset + local;
      const auto loc = p.locate(k);
      const double w = (blk.cone == Cone::kPsd && loc.i != loc.j) ? 0.5 : 1.0;
      LinExpr row;
      for (const auto& [r, v] : cols[k]) row += LinExpr::variable(d.index(y, r), w * v);
      if (slack >= 0) {
        row += (blk.cone == Cone::kPsd) ? d.mat(slack, loc.i, loc.j) : d.var(slack, local);
      }
      d.add_equality(row, w * c[k]);
    }
  }
  LinExpr obj(-p.objective_constant());
  for (int r = 0; r < m; ++r) obj += LinExpr::variable(d.index(y, r), -p.equalities()[r].rhs);
  d.set_objective(obj);
  const int sign = p.metadata.value("objective_sign", 1);
  d.metadata["objective_sign"] = -sign;
  d.metadata["dual_of"] = p.metadata.value("name", std::string("program"));
  return d;
}

double reported_objective(const ConicProgram& program, const ConicSolution& solution) {
  return program.metadata.value("objective_sign", 1) * solution.primal_objective;
}

ConicProgram lower_soc(const ConicProgram& p) {
  ConicProgram d;
  std::vector<LinExpr> map(p.num_scalars());
  for (int b = 0; b < p.num_blocks(); ++b) {
    const Block& blk = p.block(b);
    if (blk.cone != Cone::kSecondOrder) {
      const int nb = d.add_block(blk.name, blk.cone, blk.size);
      for (int local = 0; local < blk.length(); ++local) {
        map[blk.offset + local] = LinExpr::variable(d.block(nb).offset + local);
      }
      continue;
    }
    const int q = blk.size;
    const int nb = d.add_block(blk.name, Cone::kPsd, q);
    map[blk.offset] = d.mat(nb, 0, 0);
    for (int j = 1; j < q; ++j) {
      map[blk.offset + j] = d.mat(nb, 0, j);
      d.add_equality(d.mat(nb, j, j) - d.mat(nb, 0, 0), 0.0);
      for (int i = 1; i < j; ++i) d.add_equality(d.mat(nb, i, j), 0.0);
    }
  }
  rewrite_rows(p, map, d);
  return d;
}

ConicProgram split_free(const ConicProgram& p) {
  ConicProgram d;
  std::vector<LinExpr> map(p.num_scalars());
  for (int b = 0; b < p.num_blocks(); ++b) {
    const Block& blk = p.block(b);
    if (blk.cone != Cone::kFree) {
      const int nb = d.add_block(blk.name, blk.cone, blk.size);
      for (int local = 0; local < blk.length(); ++local) {
        map[blk.offset + local] = LinExpr::variable(d.block(nb).offset + local);
      }
      continue;
    }
    const int nb = d.add_block(blk.name, Cone::kNonNeg, 2 * blk.size);
    for (int i = 0; i < blk.size; ++i) map[blk.offset + i] = d.var(nb, i) - d.var(nb, blk.size + i);
  }
  rewrite_rows(p, map, d);
  return d;
}

}  // namespace paretoaro::conic
