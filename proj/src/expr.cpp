#include "bic/expr.hpp"

#include "bic/geometry.hpp"

#include <cctype>
#include <cmath>
#include <map>

namespace bic {

namespace {

enum OpKind { kPush, kLoad, kNeg, kAdd, kSub, kMul, kDiv, kPow, kFn1, kFn2, kIfle };

enum Fn1 { F_ABS, F_LOG, F_EXP, F_SQRT, F_SIN, F_COS, F_TAN, F_ASIN, F_ACOS, F_ATAN, F_SINH, F_COSH, F_TANH };
enum Fn2 { F_ATAN2, F_POW, F_MIN, F_MAX, F_HYPOT };

const std::map<std::string, int>& fn1_table() {
  static const std::map<std::string, int> t = {
      {"abs", F_ABS},   {"log", F_LOG},   {"exp", F_EXP},   {"sqrt", F_SQRT}, {"sin", F_SIN},
      {"cos", F_COS},   {"tan", F_TAN},   {"asin", F_ASIN}, {"acos", F_ACOS}, {"atan", F_ATAN},
      {"sinh", F_SINH}, {"cosh", F_COSH}, {"tanh", F_TANH}};
  return t;
}

const std::map<std::string, int>& fn2_table() {
  static const std::map<std::string, int> t = {
      {"atan2", F_ATAN2}, {"pow", F_POW}, {"min", F_MIN}, {"max", F_MAX}, {"hypot", F_HYPOT}};
  return t;
}

double apply1(int id, double a) {
  switch (id) {
    case F_ABS: return std::abs(a);
    case F_LOG: return std::log(a);
    case F_EXP: return std::exp(a);
    case F_SQRT: return std::sqrt(a);
    case F_SIN: return std::sin(a);
    case F_COS: return std::cos(a);
    case F_TAN: return std::tan(a);
    case F_ASIN: return std::asin(a);
    case F_ACOS: return std::acos(a);
    case F_ATAN: return std::atan(a);
    case F_SINH: return std::sinh(a);
    case F_COSH: return std::cosh(a);
    case F_TANH: return std::tanh(a);
  }
  return 0;
}

double apply2(int id, double a, double b) {
  switch (id) {
    case F_ATAN2: return std::atan2(a, b);
    case F_POW: return std::pow(a, b);
    case F_MIN: return std::min(a, b);
    case F_MAX: return std::max(a, b);
    case F_HYPOT: return std::hypot(a, b);
  }
  return 0;
}

}  // namespace

class ExprParser {
 public:
  ExprParser(const std::string& s, const std::vector<std::string>& vars, Expr& out)
      : s_(s), vars_(vars), out_(out) {}

  void run() {
    parse_expr();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
  }

 private:
  const std::string& s_;
  const std::vector<std::string>& vars_;
  Expr& out_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw IoError("expr parse error at offset " + std::to_string(pos_) + ": " + why + " in \"" + s_ + "\"");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  void emit(int kind, int arg = 0, double imm = 0) { out_.code_.push_back({kind, arg, imm}); }

  void parse_expr() {
    parse_term();
    while (true) {
      if (eat('+')) {
        parse_term();
        emit(kAdd);
      } else if (eat('-')) {
        parse_term();
        emit(kSub);
      } else {
        return;
      }
    }
  }

  void parse_term() {
    parse_unary();
    while (true) {
      if (eat('*')) {
        parse_unary();
        emit(kMul);
      } else if (eat('/')) {
        parse_unary();
        emit(kDiv);
      } else {
        return;
      }
    }
  }

  void parse_unary() {
    if (eat('-')) {
      parse_unary();
      emit(kNeg);
    } else if (eat('+')) {
      parse_unary();
    } else {
      parse_power();
    }
  }

  void parse_power() {
    parse_atom();
    if (eat('^')) {
      parse_unary();  // right associative, binds tighter than unary on the right
      emit(kPow);
    }
  }

  void parse_atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      parse_expr();
      if (!eat(')')) fail("expected ')'");
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t used = 0;
      double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      emit(kPush, 0, v);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      if (peek() == '(') {
        parse_call(name);
        return;
      }
      if (name == "pi") {
        emit(kPush, 0, kPi);
        return;
      }
      if (name == "e") {
        emit(kPush, 0, std::exp(1.0));
        return;
      }
      for (size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == name) {
          emit(kLoad, static_cast<int>(i));
          return;
        }
      }
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  void parse_call(const std::string& name) {
    if (!eat('(')) fail("expected '('");
    if (name == "ifle") {
      parse_expr();
      for (int i = 0; i < 3; ++i) {
        if (!eat(',')) fail("ifle needs 4 arguments");
        parse_expr();
      }
      if (!eat(')')) fail("expected ')'");
      emit(kIfle);
      return;
    }
    if (auto it = fn2_table().find(name); it != fn2_table().end()) {
      parse_expr();
      if (!eat(',')) fail(name + " needs 2 arguments");
      parse_expr();
      if (!eat(')')) fail("expected ')'");
      emit(kFn2, it->second);
      return;
    }
    if (auto it = fn1_table().find(name); it != fn1_table().end()) {
      parse_expr();
      if (!eat(')')) fail("expected ')'");
      emit(kFn1, it->second);
      return;
    }
    fail("unknown function '" + name + "'");
  }
};

Expr Expr::compile(const std::string& text, const std::vector<std::string>& variables) {
  Expr e;
  e.text_ = text;
  e.n_vars_ = static_cast<int>(variables.size());
  ExprParser(text, variables, e).run();
  return e;
}

double Expr::eval(const double* values, int n) const {
  if (n < n_vars_) throw InvalidArgument("expr evaluated with too few variables");
  double stack[64];
  int top = 0;
  for (const Op& op : code_) {
    switch (op.kind) {
      case kPush: stack[top++] = op.imm; break;
      case kLoad: stack[top++] = values[op.arg]; break;
      case kNeg: stack[top - 1] = -stack[top - 1]; break;
      case kAdd: --top; stack[top - 1] += stack[top]; break;
      case kSub: --top; stack[top - 1] -= stack[top]; break;
      case kMul: --top; stack[top - 1] *= stack[top]; break;
      case kDiv: --top; stack[top - 1] /= stack[top]; break;
      case kPow: --top; stack[top - 1] = std::pow(stack[top - 1], stack[top]); break;
      case kFn1: stack[top - 1] = apply1(op.arg, stack[top - 1]); break;
      case kFn2: --top; stack[top - 1] = apply2(op.arg, stack[top - 1], stack[top]); break;
      case kIfle: {
        top -= 3;
        double a = stack[top - 1], b = stack[top], x = stack[top + 1], y = stack[top + 2];
        stack[top - 1] = (a <= b) ? x : y;
        break;
      }
    }
  }
  return top ? stack[top - 1] : 0.0;
}

}  // namespace bic
