#pragma once

// Closed-form scalar expressions with symbolic derivatives.
//
// Grammar:
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('-' | '+') unary | power
//   power  := atom ('^' unary)?
//   atom   := number | name | name '(' expr ')' | '(' expr ')'
// Functions: sin cos tan exp log sqrt sinh cosh tanh. Constant: pi.

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace torsionlab::hamlab {

/// Variable names in evaluation order plus optional aliases.
struct VariableSet {
  std::vector<std::string> names;
  std::map<std::string, std::size_t> aliases;

  std::size_t size() const { return names.size(); }
  /// Throws ParseError for unknown names.
  std::size_t index_of(std::string_view name) const;

  /// t, x1..xm with x, y, z aliasing x1, x2, x3.
  static VariableSet phase(std::size_t coords);
  /// s, t with tau aliasing s.
  static VariableSet strip();
};

class Expression {
 public:
  struct Node;

  /// The constant 0.
  Expression();

  static Expression parse(std::string_view text, const VariableSet& vars);
  static Expression constant(double c, std::size_t arity);

  std::size_t arity() const { return arity_; }
  bool is_constant() const;
  /// Precondition: is_constant().
  double constant_value() const;

  double operator()(std::span<const double> vars) const;
  /// Evaluates n points at once: vars[k] points to n values of variable k.
  /// `work` is scratch space reused between calls.
  void evaluate_batch(std::span<const double* const> vars, std::size_t n, double* out, std::vector<double>& work) const;
  Expression derivative(std::size_t var) const;

  std::string to_string(const VariableSet& vars) const;

 private:
  enum class Op : unsigned char { kConst, kVar, kAdd, kSub, kMul, kDiv, kPow, kNeg, kSin, kCos, kTan, kExp, kLog, kSqrt, kSinh, kCosh, kTanh };
  struct Instr {
    Op op;
    std::size_t var = 0;
    double value = 0;
  };

  Expression(std::shared_ptr<const Node> root, std::size_t arity);
  void compile();

  std::shared_ptr<const Node> root_;
  std::size_t arity_ = 0;
  std::vector<Instr> code_;
  std::size_t depth_ = 0;

  friend struct ExpressionBuilder;
};

}  // namespace torsionlab::hamlab
