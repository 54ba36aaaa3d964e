#include "paretoaro/conic/program.hpp"

#include <cmath>

#include "paretoaro/common/error.hpp"

namespace paretoaro::conic {

std::string to_string(Cone cone) {
  switch (cone) {
    case Cone::kFree: return "free";
    case Cone::kNonNeg: return "nonneg";
    case Cone::kSecondOrder: return "soc";
    case Cone::kPsd: return "psd";
  }
  return "?";
}

LinExpr LinExpr::variable(int index, double coef) {
  LinExpr e;
  if (coef != 0.0) e.terms[index] = coef;
  return e;
}

LinExpr& LinExpr::operator+=(const LinExpr& other) {
  for (const auto& [k, v] : other.terms) {
    auto it = terms.find(k);
    if (it == terms.end()) {
      terms.emplace(k, v);
    } else {
      it->second += v;
      if (it->second == 0.0) terms.erase(it);
    }
  }
  constant += other.constant;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& other) {
  LinExpr neg = other;
  neg *= -1.0;
  return *this += neg;
}

LinExpr& LinExpr::operator*=(double s) {
  if (s == 0.0) {
    terms.clear();
    constant = 0.0;
    return *this;
  }
  for (auto& [k, v] : terms) v *= s;
  constant *= s;
  return *this;
}

bool LinExpr::is_constant() const { return terms.empty(); }

LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
LinExpr operator-(LinExpr a) { return a *= -1.0; }
LinExpr operator*(LinExpr a, double s) { return a *= s; }
LinExpr operator*(double s, LinExpr a) { return a *= s; }

int ConicProgram::add_block(std::string name, Cone cone, int size) {
  require(size >= 1, ErrorCode::kInvalidArgument, "block '" + name + "' must have size >= 1");
  Block b{std::move(name), cone, size, num_scalars_};
  const int id = static_cast<int>(blocks_.size());
  num_scalars_ += b.length();
  block_of_scalar_.resize(num_scalars_, id);
  blocks_.push_back(std::move(b));
  return id;
}

int ConicProgram::index(int block, int i) const {
  require(block >= 0 && block < num_blocks(), ErrorCode::kInvalidArgument, "unknown block " + std::to_string(block));
  const Block& b = blocks_[block];
  require(b.cone != Cone::kPsd, ErrorCode::kInvalidArgument, "use entry() for PSD blocks");
  require(i >= 0 && i < b.size, ErrorCode::kInvalidArgument, "index out of range in block " + b.name);
  return b.offset + i;
}

int ConicProgram::entry(int block, int i, int j) const {
  require(block >= 0 && block < num_blocks(), ErrorCode::kInvalidArgument, "unknown block " + std::to_string(block));
  const Block& b = blocks_[block];
  require(b.cone == Cone::kPsd, ErrorCode::kInvalidArgument, "entry() requires a PSD block");
  if (i > j) std::swap(i, j);
  require(i >= 0 && j < b.size, ErrorCode::kInvalidArgument, "entry out of range in block " + b.name);
  return b.offset + j * (j + 1) / 2 + i;
}

ConicProgram::Location ConicProgram::locate(int scalar) const {
  require(scalar >= 0 && scalar < num_scalars_, ErrorCode::kInvalidArgument, "scalar index out of range");
  const int id = block_of_scalar_[scalar];
  const Block& b = blocks_[id];
  int local = scalar - b.offset;
  if (b.cone != Cone::kPsd) return {id, local, 0};
  int j = 0;
  while ((j + 1) * (j + 2) / 2 <= local) ++j;
  return {id, local - j * (j + 1) / 2, j};
}

void ConicProgram::add_equality(const LinExpr& lhs, double rhs) {
  Equality eq;
  for (const auto& [k, v] : lhs.terms) {
    if (v != 0.0) eq.terms.emplace_back(k, v);
  }
  eq.rhs = rhs - lhs.constant;
  if (eq.terms.empty() && eq.rhs == 0.0) return;
  equalities_.push_back(std::move(eq));
}

int ConicProgram::add_less_equal(const LinExpr& lhs, double rhs) {
  const int slack = add_block("slack", Cone::kNonNeg, 1);
  add_equality(lhs + var(slack), rhs);
  return slack;
}

void ConicProgram::set_objective(const LinExpr& objective) {
  objective_.clear();
  for (const auto& [k, v] : objective.terms) {
    if (v != 0.0) objective_.emplace_back(k, v);
  }
  objective_constant_ = objective.constant;
}

int ConicProgram::num_blocks_with_cone(Cone cone) const {
  int count = 0;
  for (const auto& b : blocks_) count += (b.cone == cone);
  return count;
}

std::vector<std::string> ConicProgram::validate() const {
  std::vector<std::string> issues;
  auto check_terms = [&](const std::vector<std::pair<int, double>>& terms, const std::string& where) {
    for (const auto& [k, v] : terms) {
      if (k < 0 || k >= num_scalars_) issues.push_back(where + ": undeclared variable " + std::to_string(k));
      if (!std::isfinite(v)) issues.push_back(where + ": non-finite coefficient");
    }
  };
  for (std::size_t r = 0; r < equalities_.size(); ++r) {
    check_terms(equalities_[r].terms, "equality " + std::to_string(r));
    if (!std::isfinite(equalities_[r].rhs)) issues.push_back("equality " + std::to_string(r) + ": non-finite rhs");
  }
  check_terms(objective_, "objective");
  for (const auto& b : blocks_) {
    if (b.cone == Cone::kSecondOrder && b.size < 1) issues.push_back("block " + b.name + ": empty soc");
  }
  return issues;
}

}  // namespace paretoaro::conic
