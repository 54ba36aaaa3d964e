#include "paretoaro/rule/polynomial.hpp"

#include <sstream>

namespace paretoaro::rule {

std::string to_string(const Polynomial& p) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    if (c == 0.0) continue;
    if (!first) os << " + ";
    first = false;
    os << c;
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (e[j] == 0) continue;
      os << "*u" << (j + 1);
      if (e[j] > 1) os << "^" << e[j];
    }
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace paretoaro::rule
