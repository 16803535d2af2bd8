#include "torsionlab/hamlab/expression.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "torsionlab/errors.hpp"

namespace torsionlab::hamlab {

std::size_t VariableSet::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  if (auto it = aliases.find(std::string(name)); it != aliases.end()) return it->second;
  throw ParseError("unknown variable '" + std::string(name) + "'");
}

VariableSet VariableSet::phase(std::size_t coords) {
  VariableSet v;
  v.names.push_back("t");
  for (std::size_t i = 1; i <= coords; ++i) v.names.push_back("x" + std::to_string(i));
  const char* short_names[] = {"x", "y", "z"};
  for (std::size_t i = 0; i < 3 && i < coords; ++i) v.aliases[short_names[i]] = i + 1;
  return v;
}

VariableSet VariableSet::strip() {
  VariableSet v;
  v.names = {"s", "t"};
  v.aliases["tau"] = 0;
  return v;
}

struct Expression::Node {
  Op op;
  double value = 0;
  std::size_t var = 0;
  std::shared_ptr<const Node> a, b;
};

using NodePtr = std::shared_ptr<const Expression::Node>;

struct ExpressionBuilder {
  using Op = Expression::Op;

  static NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }
  static NodePtr num(double v) {
    auto n = std::make_shared<Expression::Node>();
    n->op = Op::kConst;
    n->value = v;
    return n;
  }
  static NodePtr var(std::size_t i) {
    auto n = std::make_shared<Expression::Node>();
    n->op = Op::kVar;
    n->var = i;
    return n;
  }
  static bool is_num(const NodePtr& n, double v) { return n->op == Op::kConst && n->value == v; }
  static bool is_const(const NodePtr& n) { return n->op == Op::kConst; }

  static NodePtr add(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return num(a->value + b->value);
    if (is_num(a, 0)) return b;
    if (is_num(b, 0)) return a;
    return make(Op::kAdd, std::move(a), std::move(b));
  }
  static NodePtr sub(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return num(a->value - b->value);
    if (is_num(b, 0)) return a;
    if (is_num(a, 0)) return neg(std::move(b));
    return make(Op::kSub, std::move(a), std::move(b));
  }
  static NodePtr mul(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return num(a->value * b->value);
    if (is_num(a, 0) || is_num(b, 0)) return num(0);
    if (is_num(a, 1)) return b;
    if (is_num(b, 1)) return a;
    return make(Op::kMul, std::move(a), std::move(b));
  }
  static NodePtr div(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b) && b->value != 0) return num(a->value / b->value);
    if (is_num(a, 0)) return num(0);
    if (is_num(b, 1)) return a;
    return make(Op::kDiv, std::move(a), std::move(b));
  }
  static NodePtr pow(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return num(std::pow(a->value, b->value));
    if (is_num(b, 0)) return num(1);
    if (is_num(b, 1)) return a;
    return make(Op::kPow, std::move(a), std::move(b));
  }
  static NodePtr neg(NodePtr a) {
    if (is_const(a)) return num(-a->value);
    if (a->op == Op::kNeg) return a->a;
    return make(Op::kNeg, std::move(a));
  }
  static NodePtr fn(Op op, NodePtr a) {
    if (is_const(a)) return num(apply(op, a->value));
    return make(op, std::move(a));
  }
  static NodePtr named(const std::string& id, NodePtr arg) {
    static const std::pair<const char*, Op> fns[] = {{"sin", Op::kSin}, {"cos", Op::kCos}, {"tan", Op::kTan},
                                                     {"exp", Op::kExp}, {"log", Op::kLog}, {"sqrt", Op::kSqrt},
                                                     {"sinh", Op::kSinh}, {"cosh", Op::kCosh}, {"tanh", Op::kTanh}};
    for (const auto& [fname, op] : fns)
      if (id == fname) return fn(op, std::move(arg));
    return nullptr;
  }
  static double apply(Op op, double x) {
    switch (op) {
      case Op::kSin: return std::sin(x);
      case Op::kCos: return std::cos(x);
      case Op::kTan: return std::tan(x);
      case Op::kExp: return std::exp(x);
      case Op::kLog: return std::log(x);
      case Op::kSqrt: return std::sqrt(x);
      case Op::kSinh: return std::sinh(x);
      case Op::kCosh: return std::cosh(x);
      case Op::kTanh: return std::tanh(x);
      default: return x;
    }
  }

  static NodePtr diff(const NodePtr& n, std::size_t v) {
    switch (n->op) {
      case Op::kConst: return num(0);
      case Op::kVar: return num(n->var == v ? 1 : 0);
      case Op::kAdd: return add(diff(n->a, v), diff(n->b, v));
      case Op::kSub: return sub(diff(n->a, v), diff(n->b, v));
      case Op::kMul: return add(mul(diff(n->a, v), n->b), mul(n->a, diff(n->b, v)));
      case Op::kDiv:
        return div(sub(mul(diff(n->a, v), n->b), mul(n->a, diff(n->b, v))), mul(n->b, n->b));
      case Op::kNeg: return neg(diff(n->a, v));
      case Op::kPow: {
        if (is_const(n->b)) {
          const double c = n->b->value;
          return mul(mul(num(c), pow(n->a, num(c - 1))), diff(n->a, v));
        }
        // u^w (w' log u + w u'/u)
        NodePtr inner = add(mul(diff(n->b, v), fn(Op::kLog, n->a)), div(mul(n->b, diff(n->a, v)), n->a));
        return mul(n, inner);
      }
      case Op::kSin: return mul(fn(Op::kCos, n->a), diff(n->a, v));
      case Op::kCos: return neg(mul(fn(Op::kSin, n->a), diff(n->a, v)));
      case Op::kTan: {
        NodePtr c = fn(Op::kCos, n->a);
        return div(diff(n->a, v), mul(c, c));
      }
      case Op::kExp: return mul(n, diff(n->a, v));
      case Op::kLog: return div(diff(n->a, v), n->a);
      case Op::kSqrt: return div(diff(n->a, v), mul(num(2), n));
      case Op::kSinh: return mul(fn(Op::kCosh, n->a), diff(n->a, v));
      case Op::kCosh: return mul(fn(Op::kSinh, n->a), diff(n->a, v));
      case Op::kTanh: return mul(sub(num(1), mul(n, n)), diff(n->a, v));
    }
    return num(0);
  }

  static void print(std::ostream& os, const NodePtr& n, const VariableSet& vars) {
    auto binary = [&](const char* sym) {
      os << '(';
      print(os, n->a, vars);
      os << sym;
      print(os, n->b, vars);
      os << ')';
    };
    auto unary = [&](const char* name) {
      os << name << '(';
      print(os, n->a, vars);
      os << ')';
    };
    switch (n->op) {
      case Op::kConst: {
        std::ostringstream num_text;
        num_text.precision(17);
        num_text << n->value;
        if (n->value < 0) os << '(' << num_text.str() << ')';
        else os << num_text.str();
        break;
      }
      case Op::kVar: os << vars.names.at(n->var); break;
      case Op::kAdd: binary(" + "); break;
      case Op::kSub: binary(" - "); break;
      case Op::kMul: binary("*"); break;
      case Op::kDiv: binary("/"); break;
      case Op::kPow: binary("^"); break;
      case Op::kNeg: unary("-"); break;
      case Op::kSin: unary("sin"); break;
      case Op::kCos: unary("cos"); break;
      case Op::kTan: unary("tan"); break;
      case Op::kExp: unary("exp"); break;
      case Op::kLog: unary("log"); break;
      case Op::kSqrt: unary("sqrt"); break;
      case Op::kSinh: unary("sinh"); break;
      case Op::kCosh: unary("cosh"); break;
      case Op::kTanh: unary("tanh"); break;
    }
  }
};

namespace {

using B = ExpressionBuilder;

class Parser {
 public:
  Parser(std::string_view text, const VariableSet& vars) : text_(text), vars_(vars) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression '" + std::string(text_) + "' at " + std::to_string(pos_) + ": " + msg);
  }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr n = term();
    while (true) {
      if (accept('+')) n = B::add(n, term());
      else if (accept('-')) n = B::sub(n, term());
      else return n;
    }
  }
  NodePtr term() {
    NodePtr n = unary();
    while (true) {
      if (accept('*')) n = B::mul(n, unary());
      else if (accept('/')) n = B::div(n, unary());
      else return n;
    }
  }
  NodePtr unary() {
    if (accept('-')) return B::neg(unary());
    if (accept('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return B::pow(base, unary());
    return base;
  }
  NodePtr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end");
    const char c = text_[pos_];
    if (accept('(')) {
      NodePtr n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }
  NodePtr number() {
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return B::num(v);
  }
  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string id(text_.substr(start, pos_ - start));
    if (accept('(')) {
      NodePtr arg = expr();
      if (!accept(')')) fail("expected ')'");
      if (NodePtr n = B::named(id, arg)) return n;
      fail("unknown function '" + id + "'");
    }
    if (id == "pi") return B::num(std::numbers::pi);
    try {
      return B::var(vars_.index_of(id));
    } catch (const ParseError&) {
      fail("unknown variable '" + id + "'");
    }
  }

  std::string_view text_;
  const VariableSet& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression() : Expression(B::num(0), 0) {}

Expression::Expression(std::shared_ptr<const Node> root, std::size_t arity) : root_(std::move(root)), arity_(arity) {
  compile();
}

Expression Expression::parse(std::string_view text, const VariableSet& vars) {
  return Expression(Parser(text, vars).parse(), vars.size());
}

Expression Expression::constant(double c, std::size_t arity) { return Expression(B::num(c), arity); }

bool Expression::is_constant() const { return root_->op == Op::kConst; }

double Expression::constant_value() const { return root_->value; }

Expression Expression::derivative(std::size_t var) const {
  if (var >= arity_) throw InvalidArgument("derivative variable out of range");
  return Expression(B::diff(root_, var), arity_);
}

std::string Expression::to_string(const VariableSet& vars) const {
  std::ostringstream os;
  B::print(os, root_, vars);
  return os.str();
}

void Expression::compile() {
  code_.clear();
  std::size_t depth = 0;
  depth_ = 0;
  // Post-order walk with an explicit stack.
  struct Frame {
    const Node* n;
    bool expanded;
  };
  std::vector<Frame> stack{{root_.get(), false}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const Node* n = f.n;
    if (!f.expanded && (n->a || n->b)) {
      stack.push_back({n, true});
      if (n->b) stack.push_back({n->b.get(), false});
      stack.push_back({n->a.get(), false});
      continue;
    }
    code_.push_back(Instr{n->op, n->var, n->value});
    if (n->op == Op::kConst || n->op == Op::kVar) ++depth;
    else if (n->b) --depth;
    depth_ = std::max(depth_, depth);
  }
}

double Expression::operator()(std::span<const double> vars) const {
  constexpr std::size_t kInline = 64;
  std::array<double, kInline> small;
  small[0] = 0;
  std::vector<double> large;
  double* st = small.data();
  if (depth_ > kInline) {
    large.resize(depth_);
    st = large.data();
  }
  std::size_t sp = 0;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::kConst: st[sp++] = in.value; break;
      case Op::kVar: st[sp++] = vars[in.var]; break;
      case Op::kAdd: --sp; st[sp - 1] += st[sp]; break;
      case Op::kSub: --sp; st[sp - 1] -= st[sp]; break;
      case Op::kMul: --sp; st[sp - 1] *= st[sp]; break;
      case Op::kDiv: --sp; st[sp - 1] /= st[sp]; break;
      case Op::kPow: --sp; st[sp - 1] = std::pow(st[sp - 1], st[sp]); break;
      case Op::kNeg: st[sp - 1] = -st[sp - 1]; break;
      case Op::kSin: st[sp - 1] = std::sin(st[sp - 1]); break;
      case Op::kCos: st[sp - 1] = std::cos(st[sp - 1]); break;
      case Op::kTan: st[sp - 1] = std::tan(st[sp - 1]); break;
      case Op::kExp: st[sp - 1] = std::exp(st[sp - 1]); break;
      case Op::kLog: st[sp - 1] = std::log(st[sp - 1]); break;
      case Op::kSqrt: st[sp - 1] = std::sqrt(st[sp - 1]); break;
      case Op::kSinh: st[sp - 1] = std::sinh(st[sp - 1]); break;
      case Op::kCosh: st[sp - 1] = std::cosh(st[sp - 1]); break;
      case Op::kTanh: st[sp - 1] = std::tanh(st[sp - 1]); break;
    }
  }
  return st[0];
}

void Expression::evaluate_batch(std::span<const double* const> vars, std::size_t n, double* out,
                                std::vector<double>& work) const {
  if (n == 0) return;
  if (work.size() < depth_ * n) work.resize(depth_ * n);
  std::size_t sp = 0;
  auto slot = [&](std::size_t k) { return work.data() + k * n; };
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::kConst: std::fill(slot(sp), slot(sp) + n, in.value); ++sp; break;
      case Op::kVar: std::copy(vars[in.var], vars[in.var] + n, slot(sp)); ++sp; break;
      case Op::kAdd: case Op::kSub: case Op::kMul: case Op::kDiv: case Op::kPow: {
        --sp;
        double* a = slot(sp - 1);
        const double* b = slot(sp);
        switch (in.op) {
          case Op::kAdd: for (std::size_t i = 0; i < n; ++i) a[i] += b[i]; break;
          case Op::kSub: for (std::size_t i = 0; i < n; ++i) a[i] -= b[i]; break;
          case Op::kMul: for (std::size_t i = 0; i < n; ++i) a[i] *= b[i]; break;
          case Op::kDiv: for (std::size_t i = 0; i < n; ++i) a[i] /= b[i]; break;
          default: for (std::size_t i = 0; i < n; ++i) a[i] = std::pow(a[i], b[i]); break;
        }
        break;
      }
      default: {
        double* a = slot(sp - 1);
        switch (in.op) {
          case Op::kNeg: for (std::size_t i = 0; i < n; ++i) a[i] = -a[i]; break;
          case Op::kSin: for (std::size_t i = 0; i < n; ++i) a[i] = std::sin(a[i]); break;
          case Op::kCos: for (std::size_t i = 0; i < n; ++i) a[i] = std::cos(a[i]); break;
          case Op::kTan: for (std::size_t i = 0; i < n; ++i) a[i] = std::tan(a[i]); break;
          case Op::kExp: for (std::size_t i = 0; i < n; ++i) a[i] = std::exp(a[i]); break;
          case Op::kLog: for (std::size_t i = 0; i < n; ++i) a[i] = std::log(a[i]); break;
          case Op::kSqrt: for (std::size_t i = 0; i < n; ++i) a[i] = std::sqrt(a[i]); break;
          case Op::kSinh: for (std::size_t i = 0; i < n; ++i) a[i] = std::sinh(a[i]); break;
          case Op::kCosh: for (std::size_t i = 0; i < n; ++i) a[i] = std::cosh(a[i]); break;
          case Op::kTanh: for (std::size_t i = 0; i < n; ++i) a[i] = std::tanh(a[i]); break;
          default: break;
        }
        break;
      }
    }
  }
  std::copy(slot(0), slot(0) + n, out);
}

}  // namespace torsionlab::hamlab
