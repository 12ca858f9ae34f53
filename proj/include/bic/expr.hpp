#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace bic {

// Small arithmetic expression compiler used by the JSON file formats
// ("expr" densities and potentials). Supports + - * / ^, unary minus,
// parentheses, the constants pi and e, and the functions
//   abs log exp sqrt sin cos tan asin acos atan sinh cosh tanh
//   atan2(a,b) pow(a,b) min(a,b) max(a,b) hypot(a,b) ifle(a,b,x,y)
// ifle(a,b,x,y) evaluates to x when a <= b, else y.
//
// Variables are bound by position at compile time; evaluation takes a
// matching value span, so compiled expressions are cheap to evaluate in
// inner loops.
class Expr {
 public:
  Expr() = default;

  // Throws IoError on syntax errors or unknown identifiers.
  static Expr compile(const std::string& text, const std::vector<std::string>& variables);

  double eval(const double* values, int n) const;
  double operator()(std::initializer_list<double> values) const {
    return eval(values.begin(), static_cast<int>(values.size()));
  }

  const std::string& text() const { return text_; }
  bool empty() const { return code_.empty(); }

 private:
  struct Op {
    int kind;    // opcode
    int arg;     // variable index / function id
    double imm;  // literal
  };
  std::string text_;
  std::vector<Op> code_;
  int n_vars_ = 0;

  friend class ExprParser;
};

}  // namespace bic
