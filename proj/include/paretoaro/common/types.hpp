#pragma once

#include <Eigen/Dense>

namespace paretoaro {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace paretoaro
