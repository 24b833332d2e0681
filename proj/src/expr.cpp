#include "jumpfrac/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

#include "jumpfrac/error.hpp"
#include "jumpfrac/format.hpp"

namespace jumpfrac {

namespace {

enum class Kind { Number, VarX, VarZ, Neg, Add, Sub, Mul, Div, Call };

enum class Fn { Sin, Cos, Exp, Tanh, Abs, Sign, Clamp, Min, Max, Pow };

struct FnInfo {
  std::string_view name;
  Fn fn;
  int arity;
};

constexpr std::array<FnInfo, 10> kFunctions{{
    {"sin", Fn::Sin, 1},
    {"cos", Fn::Cos, 1},
    {"exp", Fn::Exp, 1},
    {"tanh", Fn::Tanh, 1},
    {"abs", Fn::Abs, 1},
    {"sign", Fn::Sign, 1},
    {"clamp", Fn::Clamp, 3},
    {"min", Fn::Min, 2},
    {"max", Fn::Max, 2},
    {"pow", Fn::Pow, 2},
}};

const FnInfo* find_function(std::string_view name) {
  for (const auto& f : kFunctions)
    if (f.name == name) return &f;
  return nullptr;
}

std::string_view function_name(Fn fn) {
  for (const auto& f : kFunctions)
    if (f.fn == fn) return f.name;
  return "?";
}

}  // namespace

struct Expr::Node {
  Kind kind = Kind::Number;
  double value = 0.0;  // literal, or the pow exponent
  Fn fn = Fn::Sin;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_number(double v) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Kind::Number;
  n->value = v;
  return n;
}

NodePtr make_node(Kind k, std::vector<NodePtr> args) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->args = std::move(args);
  return n;
}

class Parser {
public:
  Parser(std::string_view text, bool allow_z) : text_(text), allow_z_(allow_z) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ >= text_.size()) fail("empty expression");
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) {
      if (text_[pos_] == ')') fail("unbalanced parentheses: unexpected ')'");
      fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    }
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, static_cast<int>(at) + 1);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make_node(Kind::Add, {lhs, parse_term()});
      } else if (accept('-')) {
        lhs = make_node(Kind::Sub, {lhs, parse_term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_node(Kind::Mul, {lhs, parse_unary()});
      } else if (accept('/')) {
        lhs = make_node(Kind::Div, {lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_node(Kind::Neg, {parse_unary()});
    return parse_primary();
  }

  double parse_number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        ++pos_;
      } else if ((c == 'e' || c == 'E') && pos_ > start) {
        ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      } else {
        break;
      }
    }
    double v = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) fail_at("malformed number", start);
    return v;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      const std::size_t open = pos_;
      ++pos_;
      NodePtr e = parse_expr();
      if (!accept(')')) fail_at("unbalanced parentheses: missing ')'", open);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return make_number(parse_number());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string_view ident = text_.substr(start, pos_ - start);
      skip_ws();
      const bool is_call = pos_ < text_.size() && text_[pos_] == '(';
      if (!is_call) {
        if (ident == "x") return make_node(Kind::VarX, {});
        if (ident == "z" && allow_z_) return make_node(Kind::VarZ, {});
        fail_at("unknown identifier '" + std::string(ident) + "'", start);
      }
      const FnInfo* info = find_function(ident);
      if (!info) fail_at("unknown function '" + std::string(ident) + "'", start);
      return parse_call(*info, start);
    }
    if (c == ')') fail("unbalanced parentheses: unexpected ')'");
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr parse_call(const FnInfo& info, std::size_t start) {
    const std::size_t open = pos_;
    ++pos_;  // '('
    std::vector<NodePtr> args;
    double pow_exponent = 0.0;
    if (!accept(')')) {
      for (;;) {
        if (info.fn == Fn::Pow && args.size() == 1) {
          skip_ws();
          const std::size_t lit = pos_;
          const bool negative = accept('-');
          skip_ws();
          if (pos_ >= text_.size() ||
              !(std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            fail_at("pow exponent must be a numeric literal", lit);
          pow_exponent = parse_number();
          if (negative) pow_exponent = -pow_exponent;
          args.push_back(make_number(pow_exponent));
        } else {
          args.push_back(parse_expr());
        }
        if (accept(',')) continue;
        if (accept(')')) break;
        skip_ws();
        if (pos_ >= text_.size()) fail_at("unbalanced parentheses: missing ')'", open);
        fail("expected ',' or ')'");
      }
    }
    if (static_cast<int>(args.size()) != info.arity) {
      fail_at(std::string(info.name) + " expects " + std::to_string(info.arity) +
                  " argument(s), got " + std::to_string(args.size()),
              start);
    }
    auto n = std::make_shared<Expr::Node>();
    n->kind = Kind::Call;
    n->fn = info.fn;
    if (info.fn == Fn::Pow) {
      n->value = pow_exponent;
      n->args = {args[0]};
    } else {
      n->args = std::move(args);
    }
    return n;
  }

  std::string_view text_;
  bool allow_z_;
  std::size_t pos_ = 0;
};

int precedence(const Expr::Node& n) {
  switch (n.kind) {
    case Kind::Add:
    case Kind::Sub:
      return 1;
    case Kind::Mul:
    case Kind::Div:
      return 2;
    case Kind::Neg:
      return 3;
    default:
      return 4;
  }
}

void print(const Expr::Node& n, std::string& out) {
  auto child = [&out](const Expr::Node& c, bool parens) {
    if (parens) out += '(';
    print(c, out);
    if (parens) out += ')';
  };
  switch (n.kind) {
    case Kind::Number:
      // A negative literal can only come from Expr::constant; it prints the
      // same as the parsed negation, which keeps the canonical form stable.
      out += format_double(n.value);
      return;
    case Kind::VarX:
      out += 'x';
      return;
    case Kind::VarZ:
      out += 'z';
      return;
    case Kind::Neg:
      out += '-';
      child(*n.args[0], precedence(*n.args[0]) < 3 ||
                            (n.args[0]->kind == Kind::Number && n.args[0]->value < 0));
      return;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      const int p = precedence(n);
      child(*n.args[0], precedence(*n.args[0]) < p);
      out += n.kind == Kind::Add ? "+" : n.kind == Kind::Sub ? "-" : n.kind == Kind::Mul ? "*" : "/";
      const auto& rhs = *n.args[1];
      child(rhs, precedence(rhs) <= p || (rhs.kind == Kind::Number && rhs.value < 0));
      return;
    }
    case Kind::Call:
      out += function_name(n.fn);
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        print(*n.args[i], out);
      }
      if (n.fn == Fn::Pow) {
        out += ", ";
        out += format_double(n.value);
      }
      out += ')';
      return;
  }
}

enum class Op : std::uint8_t {
  Push, LoadX, LoadZ, Neg, Add, Sub, Mul, Div,
  Sin, Cos, Exp, Tanh, Abs, Sign, Clamp, Min, Max, Pow
};

struct Instr {
  Op op;
  double value;
};

}  // namespace

struct Expr::Program {
  std::vector<Instr> code;
  std::size_t max_depth = 0;
  std::optional<double> constant;
  bool uses_x = false;
  bool uses_z = false;
};

namespace {

void compile(const Expr::Node& n, Expr::Program& prog, std::size_t depth) {
  auto emit = [&prog](Op op, double v = 0.0) { prog.code.push_back({op, v}); };
  auto bump = [&prog](std::size_t d) { prog.max_depth = std::max(prog.max_depth, d); };
  switch (n.kind) {
    case Kind::Number:
      emit(Op::Push, n.value);
      bump(depth + 1);
      return;
    case Kind::VarX:
      emit(Op::LoadX);
      prog.uses_x = true;
      bump(depth + 1);
      return;
    case Kind::VarZ:
      emit(Op::LoadZ);
      prog.uses_z = true;
      bump(depth + 1);
      return;
    default:
      break;
  }
  for (std::size_t i = 0; i < n.args.size(); ++i)
    compile(*n.args[i], prog, depth + i);
  switch (n.kind) {
    case Kind::Neg: emit(Op::Neg); break;
    case Kind::Add: emit(Op::Add); break;
    case Kind::Sub: emit(Op::Sub); break;
    case Kind::Mul: emit(Op::Mul); break;
    case Kind::Div: emit(Op::Div); break;
    case Kind::Call:
      switch (n.fn) {
        case Fn::Sin: emit(Op::Sin); break;
        case Fn::Cos: emit(Op::Cos); break;
        case Fn::Exp: emit(Op::Exp); break;
        case Fn::Tanh: emit(Op::Tanh); break;
        case Fn::Abs: emit(Op::Abs); break;
        case Fn::Sign: emit(Op::Sign); break;
        case Fn::Clamp: emit(Op::Clamp); break;
        case Fn::Min: emit(Op::Min); break;
        case Fn::Max: emit(Op::Max); break;
        case Fn::Pow: emit(Op::Pow, n.value); break;
      }
      break;
    default:
      break;
  }
}

bool depends_on_variables(const Expr::Node& n) {
  if (n.kind == Kind::VarX || n.kind == Kind::VarZ) return true;
  return std::any_of(n.args.begin(), n.args.end(),
                     [](const NodePtr& a) { return depends_on_variables(*a); });
}

double run(const Expr::Program& p, double x, double z) {
  constexpr std::size_t kInline = 32;
  std::array<double, kInline> small{};
  std::vector<double> big;
  double* st = small.data();
  if (p.max_depth > kInline) {
    big.resize(p.max_depth);
    st = big.data();
  }
  std::size_t sp = 0;
  for (const Instr& in : p.code) {
    switch (in.op) {
      case Op::Push: st[sp++] = in.value; continue;
      case Op::LoadX: st[sp++] = x; continue;
      case Op::LoadZ: st[sp++] = z; continue;
      case Op::Neg: st[sp - 1] = -st[sp - 1]; continue;
      case Op::Add: --sp; st[sp - 1] += st[sp]; break;
      case Op::Sub: --sp; st[sp - 1] -= st[sp]; break;
      case Op::Mul: --sp; st[sp - 1] *= st[sp]; break;
      case Op::Div:
        --sp;
        if (st[sp] == 0.0) throw NumericalError("division by zero");
        st[sp - 1] /= st[sp];
        break;
      case Op::Sin: st[sp - 1] = std::sin(st[sp - 1]); break;
      case Op::Cos: st[sp - 1] = std::cos(st[sp - 1]); break;
      case Op::Exp: st[sp - 1] = std::exp(st[sp - 1]); break;
      case Op::Tanh: st[sp - 1] = std::tanh(st[sp - 1]); break;
      case Op::Abs: st[sp - 1] = std::fabs(st[sp - 1]); break;
      case Op::Sign: {
        const double v = st[sp - 1];
        st[sp - 1] = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
        break;
      }
      case Op::Clamp:
        sp -= 2;
        st[sp - 1] = std::min(std::max(st[sp - 1], st[sp]), st[sp + 1]);
        break;
      case Op::Min: --sp; st[sp - 1] = std::min(st[sp - 1], st[sp]); break;
      case Op::Max: --sp; st[sp - 1] = std::max(st[sp - 1], st[sp]); break;
      case Op::Pow: st[sp - 1] = std::pow(st[sp - 1], in.value); break;
    }
    if (!std::isfinite(st[sp - 1])) throw NumericalError("non-finite intermediate value in expression");
  }
  return st[0];
}

}  // namespace

Expr::Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {
  auto prog = std::make_shared<Program>();
  compile(*root_, *prog, 0);
  if (!depends_on_variables(*root_)) {
    try {
      prog->constant = run(*prog, 0.0, 0.0);
    } catch (const NumericalError&) {
      // Left non-constant; eval reports the error on use.
    }
  }
  program_ = std::move(prog);
}

Expr Expr::parse(std::string_view text, bool allow_z) {
  return Expr(Parser(text, allow_z).parse());
}

Expr Expr::constant(double value) { return Expr(make_number(value)); }

double Expr::eval(double x, double z) const {
  if (program_->constant) return *program_->constant;
  if (!std::isfinite(x) || !std::isfinite(z)) throw NumericalError("non-finite expression argument");
  return run(*program_, x, z);
}

std::string Expr::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

std::optional<double> Expr::constant_value() const noexcept { return program_->constant; }

bool Expr::uses_x() const noexcept { return program_->uses_x; }

bool Expr::uses_z() const noexcept { return program_->uses_z; }

Expr parse_expr(std::string_view text) { return Expr::parse(text); }

double eval_expr(const Expr& e, double x) { return e.eval(x); }

double estimate_lipschitz(const Expr& e, double lo, double hi, std::size_t n) {
  if (!(lo < hi)) throw ValidationError("estimate_lipschitz: need lo < hi");
  if (n < 2) throw ValidationError("estimate_lipschitz: need n >= 2");
  const double step = (hi - lo) / static_cast<double>(n - 1);
  double prev_x = lo;
  double prev = e.eval(lo);
  double best = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double x = i + 1 == n ? hi : lo + step * static_cast<double>(i);
    const double v = e.eval(x);
    best = std::max(best, std::fabs(v - prev) / (x - prev_x));
    prev = v;
    prev_x = x;
  }
  return best;
}

bool check_range(const Expr& e, double lo, double hi, Interval band, std::size_t n) {
  if (!(lo <= hi)) throw ValidationError("check_range: need lo <= hi");
  if (n < 1) throw ValidationError("check_range: need n >= 1");
  for (std::size_t i = 0; i < n; ++i) {
    const double x = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    if (!band.contains(e.eval(x))) return false;
  }
  return true;
}

}  // namespace jumpfrac
