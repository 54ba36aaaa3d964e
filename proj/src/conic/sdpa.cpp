#include "paretoaro/conic/sdpa.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>
#include <vector>

#include "paretoaro/common/error.hpp"
#include "paretoaro/conic/transform.hpp"

namespace paretoaro::conic {

std::string format_number(double v) {
  if (v == 0.0) return "0.0";
  if (std::nearbyint(v) == v && std::abs(v) < 1e15) {
    std::ostringstream os;
    os << static_cast<long long>(v) << ".0";
    return os.str();
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string export_sdpa(const ConicProgram& input) {
  ConicProgram p = input;
  if (p.num_blocks_with_cone(Cone::kSecondOrder) > 0) p = lower_soc(p);
  if (p.num_blocks_with_cone(Cone::kFree) > 0) p = split_free(p);

  // (matno, blkno, i, j) -> value; 1-based like the file.
  std::map<std::tuple<int, int, int, int>, double> entries;
  auto add = [&](int matno, int scalar, double coef) {
    const auto loc = p.locate(scalar);
    const Block& blk = p.block(loc.block);
    int i = loc.i + 1, j = loc.j + 1;
    double value = coef;
    if (blk.cone == Cone::kNonNeg) {
      j = i;
    } else if (loc.i != loc.j) {
      value = 0.5 * coef;
    }
    entries[{matno, loc.block + 1, i, j}] += value;
  };
  for (const auto& [k, v] : p.objective()) add(0, k, -v);
  for (int r = 0; r < p.num_equalities(); ++r) {
    for (const auto& [k, v] : p.equalities()[r].terms) add(r + 1, k, v);
  }

  std::ostringstream os;
  os << p.num_equalities() << "\n" << p.num_blocks() << "\n";
  for (int b = 0; b < p.num_blocks(); ++b) {
    const Block& blk = p.block(b);
    if (b) os << " ";
    os << (blk.cone == Cone::kNonNeg ? -blk.size : blk.size);
  }
  os << "\n";
  for (int r = 0; r < p.num_equalities(); ++r) {
    if (r) os << " ";
    os << format_number(p.equalities()[r].rhs);
  }
  os << "\n";
  for (const auto& [key, value] : entries) {
    if (value == 0.0) continue;
    const auto& [matno, blk, i, j] = key;
    os << matno << " " << blk << " " << i << " " << j << " " << format_number(value) << "\n";
  }
  return os.str();
}

namespace {

class Tokenizer {
 public:
  explicit Tokenizer(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int number = 0;
    bool header_done = false;
    while (std::getline(in, line)) {
      ++number;
      if (!header_done && (line.rfind('"', 0) == 0 || line.rfind('*', 0) == 0)) continue;
      header_done = true;
      for (char& ch : line) {
        if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
      }
      std::istringstream ls(line);
      std::string tok;
      std::vector<std::string> toks;
      while (ls >> tok) toks.push_back(tok);
      if (!toks.empty()) lines_.push_back({number, std::move(toks)});
    }
  }

  struct Line {
    int number;
    std::vector<std::string> tokens;
  };

  // Reads `count` numbers from the stream, crossing lines as needed; a new
  // logical field always starts at a fresh line.
  std::vector<double> take(std::size_t count, const char* what) {
    std::vector<double> out;
    while (out.size() < count) {
      if (cur_ >= lines_.size()) fail(ErrorCode::kParseError, std::string("unexpected end of file reading ") + what);
      const Line& l = lines_[cur_];
      while (pos_ < l.tokens.size() && out.size() < count) out.push_back(parse(l.tokens[pos_++], l.number, what));
      if (pos_ >= l.tokens.size()) next_line();
    }
    if (pos_ > 0) next_line();
    return out;
  }

  bool done() const { return cur_ >= lines_.size(); }
  const Line& line() const { return lines_[cur_]; }
  void next_line() {
    ++cur_;
    pos_ = 0;
  }

  static double parse(const std::string& tok, int line, const char* what) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      fail(ErrorCode::kParseError, "line " + std::to_string(line) + ": bad number '" + tok + "' in " + what);
    }
  }

 private:
  std::vector<Line> lines_;
  std::size_t cur_ = 0;
  std::size_t pos_ = 0;
};

int as_int(double v, int line, const char* what) {
  if (std::nearbyint(v) != v) fail(ErrorCode::kParseError, "line " + std::to_string(line) + ": " + what + " must be an integer");
  return static_cast<int>(v);
}

}  // namespace

ConicProgram import_sdpa(const std::string& text) {
  Tokenizer tk(text);
  if (tk.done()) fail(ErrorCode::kParseError, "line 1: empty file");
  int line = tk.line().number;
  const int m = as_int(tk.take(1, "constraint count")[0], line, "constraint count");
  line = tk.done() ? line : tk.line().number;
  const int nblocks = as_int(tk.take(1, "block count")[0], line, "block count");
  if (m < 0 || nblocks < 1) fail(ErrorCode::kParseError, "line " + std::to_string(line) + ": invalid sizes");
  line = tk.done() ? line : tk.line().number;
  const auto sizes = tk.take(nblocks, "block sizes");
  const auto rhs = tk.take(m, "rhs vector");

  ConicProgram p;
  for (int b = 0; b < nblocks; ++b) {
    const int s = as_int(sizes[b], line, "block size");
    if (s == 0) fail(ErrorCode::kParseError, "line " + std::to_string(line) + ": zero block size");
    p.add_block("block" + std::to_string(b + 1), s < 0 ? Cone::kNonNeg : Cone::kPsd, std::abs(s));
  }

  std::vector<LinExpr> rows(m);
  LinExpr obj;
  while (!tk.done()) {
    const auto& l = tk.line();
    if (l.tokens.size() != 5) {
      fail(ErrorCode::kParseError, "line " + std::to_string(l.number) + ": expected 'matno blkno i j value'");
    }
    const int mat = as_int(Tokenizer::parse(l.tokens[0], l.number, "matno"), l.number, "matno");
    const int blk = as_int(Tokenizer::parse(l.tokens[1], l.number, "blkno"), l.number, "blkno");
    int i = as_int(Tokenizer::parse(l.tokens[2], l.number, "i"), l.number, "i");
    int j = as_int(Tokenizer::parse(l.tokens[3], l.number, "j"), l.number, "j");
    const double v = Tokenizer::parse(l.tokens[4], l.number, "value");
    if (mat < 0 || mat > m || blk < 1 || blk > nblocks) {
      fail(ErrorCode::kParseError, "line " + std::to_string(l.number) + ": matrix or block index out of range");
    }
    const Block& b = p.block(blk - 1);
    if (i < 1 || j < 1 || i > b.size || j > b.size) {
      fail(ErrorCode::kParseError, "line " + std::to_string(l.number) + ": entry index out of range");
    }
    int scalar;
    double coef = v;
    if (b.cone == Cone::kNonNeg) {
      if (i != j) fail(ErrorCode::kParseError, "line " + std::to_string(l.number) + ": off-diagonal entry in diagonal block");
      scalar = p.index(blk - 1, i - 1);
    } else {
      scalar = p.entry(blk - 1, i - 1, j - 1);
      if (i != j) coef = 2.0 * v;
    }
    if (mat == 0) {
      obj += LinExpr::variable(scalar, -coef);
    } else {
      rows[mat - 1] += LinExpr::variable(scalar, coef);
    }
    tk.next_line();
  }
  for (int r = 0; r < m; ++r) {
    p.add_equality(rows[r], rhs[r]);
  }
  p.set_objective(obj);
  return p;
}

}  // namespace paretoaro::conic
