#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "paretoaro/common/types.hpp"

namespace paretoaro::conic {

enum class Cone { kFree, kNonNeg, kSecondOrder, kPsd };

std::string to_string(Cone cone);

// A contiguous group of scalar variables sharing one cone. For kPsd, `size`
// is the matrix order and the block stores the upper triangle column by
// column: entry (i, j) with i <= j sits at offset + j*(j+1)/2 + i.
struct Block {
  std::string name;
  Cone cone = Cone::kFree;
  int size = 0;
  int offset = 0;

  int length() const { return cone == Cone::kPsd ? size * (size + 1) / 2 : size; }
};

// Sparse affine form over scalar variables. A coefficient attached to an
// off-diagonal PSD entry multiplies X_ij once (not the symmetric pair).
struct LinExpr {
  std::map<int, double> terms;
  double constant = 0.0;

  LinExpr() = default;
  LinExpr(double c) : constant(c) {}  // NOLINT(google-explicit-constructor)

  static LinExpr variable(int index, double coef = 1.0);

  LinExpr& operator+=(const LinExpr& other);
  LinExpr& operator-=(const LinExpr& other);
  LinExpr& operator*=(double s);

  bool is_constant() const;
};

LinExpr operator+(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a);
LinExpr operator*(LinExpr a, double s);
LinExpr operator*(double s, LinExpr a);

struct Equality {
  std::vector<std::pair<int, double>> terms;
  double rhs = 0.0;
};

// Standard-form conic program:  min c'x  s.t.  A x = b,  x in K,
// where K is the product of the block cones.
class ConicProgram {
 public:
  int add_block(std::string name, Cone cone, int size);
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const Block& block(int b) const { return blocks_.at(b); }
  const std::vector<Block>& blocks() const { return blocks_; }
  int num_scalars() const { return num_scalars_; }

  int index(int block, int i) const;
  int entry(int block, int i, int j) const;
  LinExpr var(int block, int i = 0) const { return LinExpr::variable(index(block, i)); }
  LinExpr mat(int block, int i, int j) const { return LinExpr::variable(entry(block, i, j)); }

  // Block and in-block position (row, col for PSD) of a scalar index.
  struct Location {
    int block;
    int i;
    int j;
  };
  Location locate(int scalar) const;

  // lhs.constant is moved to the right-hand side.
  void add_equality(const LinExpr& lhs, double rhs = 0.0);
  // Introduces a nonnegative slack block of size one; returns its block id.
  int add_less_equal(const LinExpr& lhs, double rhs = 0.0);

  void set_objective(const LinExpr& objective);
  const std::vector<std::pair<int, double>>& objective() const { return objective_; }
  double objective_constant() const { return objective_constant_; }
  const std::vector<Equality>& equalities() const { return equalities_; }
  int num_equalities() const { return static_cast<int>(equalities_.size()); }

  int num_blocks_with_cone(Cone cone) const;

  // Empty when every constraint references declared variables and every
  // coefficient is finite.
  std::vector<std::string> validate() const;

  nlohmann::json metadata = nlohmann::json::object();

 private:
  std::vector<Block> blocks_;
  std::vector<int> block_of_scalar_;
  int num_scalars_ = 0;
  std::vector<Equality> equalities_;
  std::vector<std::pair<int, double>> objective_;
  double objective_constant_ = 0.0;
};

}  // namespace paretoaro::conic
