#include "indde/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "indde/error.hpp"

namespace indde {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::syntax: return "syntax";
    case ErrorCode::unknown_identifier: return "unknown_identifier";
    case ErrorCode::unbalanced_parentheses: return "unbalanced_parentheses";
    case ErrorCode::mixed_variables: return "mixed_variables";
    case ErrorCode::non_integer_exponent: return "non_integer_exponent";
    case ErrorCode::division_by_zero: return "division_by_zero";
    case ErrorCode::wrong_variable: return "wrong_variable";
    case ErrorCode::non_finite: return "non_finite";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::out_of_range: return "out_of_range";
    case ErrorCode::nonpositive_v: return "nonpositive_v";
    case ErrorCode::non_empty_impulses: return "non_empty_impulses";
    case ErrorCode::q_too_large: return "q_too_large";
    case ErrorCode::recovery_diverged: return "recovery_diverged";
    case ErrorCode::impulse_delay_collision: return "impulse_delay_collision";
    case ErrorCode::not_converged: return "not_converged";
    case ErrorCode::too_few_points: return "too_few_points";
    case ErrorCode::spec_file: return "spec_file";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

char to_char(Var v) {
  switch (v) {
    case Var::t: return 't';
    case Var::x: return 'x';
    case Var::k: return 'k';
  }
  return '?';
}

enum class Kind : std::uint8_t { constant, variable, unary, binary };

struct Expr::Node {
  Kind kind = Kind::constant;
  double value = 0.0;
  Var var = Var::t;
  UnaryOp uop = UnaryOp::neg;
  BinaryOp bop = BinaryOp::add;
  std::optional<Var> mentions;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

const std::shared_ptr<const Expr::Node>& zero_node() {
  static const auto node = std::make_shared<const Expr::Node>();
  return node;
}

std::optional<Var> merge_vars(std::optional<Var> a, std::optional<Var> b) {
  if (a && b && *a != *b) {
    throw Error(ErrorCode::mixed_variables,
                std::string("expression mixes variables '") + to_char(*a) +
                    "' and '" + to_char(*b) + "'");
  }
  return a ? a : b;
}

double checked(double v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::non_finite, "expression evaluated to a non-finite value");
  }
  return v;
}

double integer_power(double base, long long exponent) {
  if (exponent < 0) {
    if (base == 0.0) {
      throw Error(ErrorCode::division_by_zero, "division by zero in negative power");
    }
    return 1.0 / integer_power(base, -exponent);
  }
  double result = 1.0;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

double eval_node(const Expr::Node& n, double value);

double eval_expr(const Expr& e, double value) { return eval_node(e.node(), value); }
double eval_expr(const std::shared_ptr<const Expr::Node>& n, double value) {
  return eval_node(*n, value);
}

double eval_node(const Expr::Node& n, double value) {
  switch (n.kind) {
    case Kind::constant:
      return n.value;
    case Kind::variable:
      return value;
    case Kind::unary: {
      const double a = eval_expr(n.lhs, value);
      switch (n.uop) {
        case UnaryOp::neg: return -a;
        case UnaryOp::abs: return std::abs(a);
        case UnaryOp::sin: return std::sin(a);
        case UnaryOp::cos: return std::cos(a);
        case UnaryOp::tanh: return std::tanh(a);
        case UnaryOp::arctan: return std::atan(a);
        case UnaryOp::exp: return checked(std::exp(a));
        case UnaryOp::satlin: return 0.5 * (std::abs(a + 1.0) - std::abs(a - 1.0));
      }
      break;
    }
    case Kind::binary: {
      const double a = eval_expr(n.lhs, value);
      const double b = eval_expr(n.rhs, value);
      switch (n.bop) {
        case BinaryOp::add: return checked(a + b);
        case BinaryOp::sub: return checked(a - b);
        case BinaryOp::mul: return checked(a * b);
        case BinaryOp::div:
          if (b == 0.0) throw Error(ErrorCode::division_by_zero, "division by zero");
          return checked(a / b);
        case BinaryOp::pow:
          return checked(integer_power(a, std::llround(b)));
      }
      break;
    }
  }
  return 0.0;
}

const char* unary_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::neg: return "-";
    case UnaryOp::abs: return "abs";
    case UnaryOp::sin: return "sin";
    case UnaryOp::cos: return "cos";
    case UnaryOp::tanh: return "tanh";
    case UnaryOp::arctan: return "arctan";
    case UnaryOp::exp: return "exp";
    case UnaryOp::satlin: return "satlin";
  }
  return "?";
}

const char* binary_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return " + ";
    case BinaryOp::sub: return " - ";
    case BinaryOp::mul: return "*";
    case BinaryOp::div: return "/";
    case BinaryOp::pow: return "^";
  }
  return "?";
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const double mag = std::abs(v);
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), mag);
  std::string s(buf.data(), end);
  return v < 0 || std::signbit(v) ? "(-" + s + ")" : s;
}

void print_node(const Expr::Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::constant:
      out += format_number(n.value);
      return;
    case Kind::variable:
      out += to_char(n.var);
      return;
    case Kind::unary:
      if (n.uop == UnaryOp::neg) {
        out += "(-";
        print_node(*n.lhs, out);
        out += ')';
      } else {
        out += unary_name(n.uop);
        out += '(';
        print_node(*n.lhs, out);
        out += ')';
      }
      return;
    case Kind::binary:
      out += '(';
      print_node(*n.lhs, out);
      out += binary_symbol(n.bop);
      print_node(*n.rhs, out);
      out += ')';
      return;
  }
}

bool equal_nodes(const Expr::Node& a, const Expr::Node& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::constant:
      return a.value == b.value;
    case Kind::variable:
      return a.var == b.var;
    case Kind::unary:
      return a.uop == b.uop && equal_nodes(*a.lhs, *b.lhs);
    case Kind::binary:
      return a.bop == b.bop && equal_nodes(*a.lhs, *b.lhs) &&
             equal_nodes(*a.rhs, *b.rhs);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Recursive-descent parser.

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr run() {
    Expr e = expression();
    skip_ws();
    if (pos_ < text_.size()) {
      if (text_[pos_] == ')') {
        throw ParseError(ErrorCode::unbalanced_parentheses, "unmatched ')'", pos_);
      }
      throw ParseError(ErrorCode::syntax,
                       std::string("unexpected character '") + text_[pos_] + "'", pos_);
    }
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_close(std::size_t open_at) {
    if (!accept(')')) {
      skip_ws();
      if (pos_ >= text_.size()) {
        throw ParseError(ErrorCode::unbalanced_parentheses, "unclosed '('", open_at);
      }
      throw ParseError(ErrorCode::syntax, "expected ')'", pos_);
    }
  }

  // Wraps construction so mixed-variable errors carry a position.
  template <typename F>
  Expr build(std::size_t at, F&& make) {
    try {
      return make();
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::mixed_variables) {
        throw ParseError(ErrorCode::mixed_variables, e.what(), at);
      }
      throw;
    }
  }

  Expr expression() {
    Expr lhs = term();
    for (;;) {
      const std::size_t at = (skip_ws(), pos_);
      if (accept('+')) {
        Expr rhs = term();
        lhs = build(at, [&] { return Expr::binary(BinaryOp::add, lhs, rhs); });
      } else if (accept('-')) {
        Expr rhs = term();
        lhs = build(at, [&] { return Expr::binary(BinaryOp::sub, lhs, rhs); });
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      const std::size_t at = (skip_ws(), pos_);
      if (accept('*')) {
        Expr rhs = unary();
        lhs = build(at, [&] { return Expr::binary(BinaryOp::mul, lhs, rhs); });
      } else if (accept('/')) {
        Expr rhs = unary();
        lhs = build(at, [&] { return Expr::binary(BinaryOp::div, lhs, rhs); });
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::unary(UnaryOp::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    const std::size_t at = (skip_ws(), pos_);
    if (accept('^')) {
      const std::size_t exp_at = (skip_ws(), pos_);
      Expr exponent = unary();
      return make_pow(base, exponent, at, exp_at);
    }
    return base;
  }

  Expr make_pow(const Expr& base, const Expr& exponent, std::size_t at,
                std::size_t exp_at) {
    if (!exponent.is_constant()) {
      throw ParseError(ErrorCode::non_integer_exponent,
                       "exponent must not depend on a variable", exp_at);
    }
    const double p = exponent.constant_value();
    if (p != std::round(p)) {
      throw ParseError(ErrorCode::non_integer_exponent, "exponent must be an integer",
                       exp_at);
    }
    return build(at, [&] { return Expr::binary(BinaryOp::pow, base, exponent); });
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= text_.size()) {
      throw ParseError(ErrorCode::syntax, "unexpected end of input", pos_);
    }
    const char c = text_[pos_];
    if (c == '(') {
      const std::size_t open_at = pos_++;
      Expr inner = expression();
      expect_close(open_at);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (c == ')') {
      throw ParseError(ErrorCode::unbalanced_parentheses, "unmatched ')'", pos_);
    }
    throw ParseError(ErrorCode::syntax, std::string("unexpected character '") + c + "'",
                     pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    double value = 0.0;
    auto [ptr, ec] =
        std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value,
                        std::chars_format::general);
    if (ec != std::errc{}) throw ParseError(ErrorCode::syntax, "malformed number", start);
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return Expr::constant(value);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "t") return Expr::variable(Var::t);
    if (name == "x") return Expr::variable(Var::x);
    if (name == "k") return Expr::variable(Var::k);
    if (name == "pi") return Expr::constant(std::numbers::pi);

    static constexpr std::pair<std::string_view, UnaryOp> functions[] = {
        {"abs", UnaryOp::abs},       {"sin", UnaryOp::sin},
        {"cos", UnaryOp::cos},       {"tanh", UnaryOp::tanh},
        {"arctan", UnaryOp::arctan}, {"atan", UnaryOp::arctan},
        {"exp", UnaryOp::exp},       {"satlin", UnaryOp::satlin},
    };
    for (const auto& [fname, op] : functions) {
      if (name == fname) {
        const std::size_t open_at = (skip_ws(), pos_);
        if (!accept('(')) {
          throw ParseError(ErrorCode::syntax,
                           "expected '(' after '" + std::string(name) + "'", pos_);
        }
        Expr arg = expression();
        expect_close(open_at);
        return Expr::unary(op, arg);
      }
    }
    if (name == "pow") {
      const std::size_t open_at = (skip_ws(), pos_);
      if (!accept('(')) throw ParseError(ErrorCode::syntax, "expected '(' after 'pow'", pos_);
      Expr base = expression();
      if (!accept(',')) throw ParseError(ErrorCode::syntax, "expected ','", pos_);
      const std::size_t exp_at = (skip_ws(), pos_);
      Expr exponent = expression();
      expect_close(open_at);
      return make_pow(base, exponent, start, exp_at);
    }
    throw ParseError(ErrorCode::unknown_identifier,
                     "unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

struct Candidate {
  double at;
  double value;
};

double golden_max(const Expr& e, double a, double b) {
  constexpr double inv_phi = 0.6180339887498949;
  auto f = [&](double s) { return std::abs(eval_expr(e, s)); };
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 80 && (b - a) > 1e-15 * (1.0 + std::abs(a)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return std::max(fc, fd);
}

void check_grid(double lo, double hi, double grid_step) {
  if (!(lo < hi) || !(grid_step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::invalid_argument, "grid requires lo < hi and grid_step > 0");
  }
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(Var v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::variable;
  n->var = v;
  n->mentions = v;
  return Expr(std::move(n));
}

Expr Expr::unary(UnaryOp op, Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::unary;
  n->uop = op;
  n->mentions = operand.node().mentions;
  n->lhs = std::move(operand.node_);
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::binary;
  n->bop = op;
  n->mentions = merge_vars(lhs.node().mentions, rhs.node().mentions);
  n->lhs = std::move(lhs.node_);
  n->rhs = std::move(rhs.node_);
  return Expr(std::move(n));
}

Expr Expr::sum(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) {
    return constant(a.constant_value() + b.constant_value());
  }
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return binary(BinaryOp::add, a, b);
}

Expr Expr::product(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) {
    return constant(a.constant_value() * b.constant_value());
  }
  if (a.is_zero() || b.is_zero()) return constant(0.0);
  return binary(BinaryOp::mul, a, b);
}

std::optional<Var> Expr::variable() const { return node_->mentions; }

bool Expr::is_zero() const {
  return is_constant() && constant_value() == 0.0;
}

double Expr::constant_value() const {
  if (!is_constant()) {
    throw Error(ErrorCode::wrong_variable, "expression is not constant");
  }
  return eval_node(*node_, 0.0);
}

double Expr::operator()(double value) const {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::non_finite, "non-finite evaluation point");
  }
  return eval_node(*node_, value);
}

double Expr::eval(Var v, double value) const {
  if (node_->mentions && *node_->mentions != v) {
    throw Error(ErrorCode::wrong_variable, std::string("expression is over '") +
                                               to_char(*node_->mentions) +
                                               "', bound '" + to_char(v) + "'");
  }
  return (*this)(value);
}

std::string Expr::print() const {
  std::string out;
  print_node(*node_, out);
  return out;
}

bool operator==(const Expr& a, const Expr& b) {
  return equal_nodes(*a.node_, *b.node_);
}

Expr parse(std::string_view text) { return Parser(text).run(); }

Expr parse_over(std::string_view text, Var expected) {
  Expr e = parse(text);
  if (auto v = e.variable(); v && *v != expected) {
    throw Error(ErrorCode::wrong_variable, std::string("expected an expression in '") +
                                               to_char(expected) + "', got '" +
                                               to_char(*v) + "'");
  }
  return e;
}

double eval(const Expr& e, double value) { return e(value); }

double sup_abs(const Expr& e, double lo, double hi, double grid_step) {
  check_grid(lo, hi, grid_step);
  if (e.is_constant()) return std::abs(e.constant_value());

  const auto cells = static_cast<std::size_t>(std::ceil((hi - lo) / grid_step));
  auto node_at = [&](std::size_t k) {
    return k >= cells ? hi : lo + static_cast<double>(k) * grid_step;
  };

  // Local maxima of the grid samples, best first.
  std::vector<Candidate> peaks;
  double prev2 = -1.0;
  double prev = std::abs(e(node_at(0)));
  double best = prev;
  peaks.push_back({node_at(0), prev});
  for (std::size_t k = 1; k <= cells; ++k) {
    const double cur = std::abs(e(node_at(k)));
    best = std::max(best, cur);
    if (prev >= prev2 && prev >= cur && k >= 2) peaks.push_back({node_at(k - 1), prev});
    prev2 = prev;
    prev = cur;
  }
  peaks.push_back({hi, prev});

  std::sort(peaks.begin(), peaks.end(),
            [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
  const std::size_t refine = std::min<std::size_t>(peaks.size(), 3);
  for (std::size_t p = 0; p < refine; ++p) {
    const double a = std::max(lo, peaks[p].at - grid_step);
    const double b = std::min(hi, peaks[p].at + grid_step);
    if (b > a) best = std::max(best, golden_max(e, a, b));
  }
  return best;
}

double lipschitz_estimate(const Expr& e, double lo, double hi, double grid_step) {
  check_grid(lo, hi, grid_step);
  if (e.is_constant()) return 0.0;
  const auto cells = static_cast<std::size_t>(std::ceil((hi - lo) / grid_step));
  double x0 = lo;
  double y0 = e(x0);
  double best = 0.0;
  for (std::size_t k = 1; k <= cells; ++k) {
    const double x1 = k >= cells ? hi : lo + static_cast<double>(k) * grid_step;
    const double y1 = e(x1);
    if (x1 > x0) best = std::max(best, std::abs(y1 - y0) / (x1 - x0));
    x0 = x1;
    y0 = y1;
  }
  return best;
}

}  // namespace indde
