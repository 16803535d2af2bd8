#pragma once

// Linear algebra over the valuation ring Lambda_{0,nov}.
//
// Every finitely generated ideal of Lambda_{0,nov} is generated by any of
// its minimum-valuation elements: if v(x) >= v(y) then x / y lies in the
// ring. Elimination with a minimum-valuation pivot therefore never leaves
// the ring, which is what makes a Smith-type normal form exist even though
// the ring is not Noetherian. All matrices carry one uniform truncation
// level and arithmetic is done in Lambda_{0,nov} / T^trunc.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "torsionlab/novikov.hpp"

namespace torsionlab {

class NovikovMatrix {
 public:
  NovikovMatrix() = default;
  NovikovMatrix(std::size_t rows, std::size_t cols, ExtendedRational trunc = {});

  static NovikovMatrix identity(std::size_t n, ExtendedRational trunc = {});

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const ExtendedRational& trunc() const { return trunc_; }

  const NovikovElement& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  /// Stores x truncated to the matrix level.
  void set(std::size_t r, std::size_t c, const NovikovElement& x);

  bool is_zero() const;
  bool entries_in_nonnegative_part() const;
  /// Copy with every entry truncated to min(trunc, level).
  NovikovMatrix truncated(const ExtendedRational& level) const;

  friend NovikovMatrix operator*(const NovikovMatrix& a, const NovikovMatrix& b);
  friend NovikovMatrix operator-(const NovikovMatrix& a, const NovikovMatrix& b);
  friend bool operator==(const NovikovMatrix&, const NovikovMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  ExtendedRational trunc_;
  std::vector<NovikovElement> entries_;
};

/// U * m * V = D with U, V invertible over Lambda_{0,nov} and D diagonal,
/// each nonzero diagonal entry a monic power T^{lambda}, valuations
/// non-decreasing down the diagonal.
struct SmithForm {
  NovikovMatrix U;
  NovikovMatrix D;
  NovikovMatrix V;
  std::size_t rank = 0;

  /// Valuations of the first `rank` diagonal entries.
  std::vector<Rational> pivot_valuations() const;
};

/// Pivot: a minimum-valuation entry of the remaining block, ties broken by
/// the lowest (row, col). Throws PrecisionExhausted when a quotient cannot be
/// resolved at the matrix truncation level, InvalidArgument for entries
/// outside Lambda_{0,nov}.
SmithForm smith_normal_form(const NovikovMatrix& m);

/// Cochain complex C^0 -> C^1 -> ... with d_k : C^k -> C^{k+1} stored as an
/// r_{k+1} x r_k matrix acting on column vectors.
struct ChainComplex {
  std::vector<std::size_t> ranks;
  std::vector<NovikovMatrix> differentials;

  /// Shape checks only.
  void validate_shapes() const;
  /// Throws NotAComplex if some d_{k+1} d_k is nonzero at the truncation level.
  void check_square_zero() const;
};

/// Lambda_{0,nov}^{betti} + sum_i Lambda_{0,nov} / T^{torsion_i}.
struct ModuleDecomposition {
  long betti = 0;
  std::vector<Rational> torsion;  // descending

  /// Sorts torsion descending.
  void normalize();
  friend bool operator==(const ModuleDecomposition&, const ModuleDecomposition&) = default;
};

/// Cohomology at one degree.
ModuleDecomposition decompose(const ChainComplex& c, std::size_t degree);
/// Per-degree decompositions, index = degree.
std::vector<ModuleDecomposition> decompose_all(const ChainComplex& c);
/// Direct sum over all degrees.
ModuleDecomposition decompose_total(const ChainComplex& c);

/// #{ i : lambda_i >= lam }. Requires lam > 0.
long b_count(const ModuleDecomposition& dec, const Rational& lam);
/// a + 2 b(hofer): lower bound on the number of intersection points of a
/// transversal Hamiltonian image. Requires hofer > 0.
long theorem_j_bound(const ModuleDecomposition& dec, const Rational& hofer);
/// +inf if betti > 0, otherwise the largest torsion exponent (0 if none).
ExtendedRational torsion_threshold(const ModuleDecomposition& dec);

struct LipschitzEntry {
  std::size_t index = 0;  // 1-based position in the descending order
  Rational lambda;
  std::optional<Rational> lambda_prime;
  bool ok = true;
  std::string reason;
};

struct LipschitzReport {
  Rational nu0;
  std::vector<LipschitzEntry> entries;
  bool pass = true;
};

/// Checks, for every i with lambda_i > nu0, that i <= b' and, when also
/// lambda'_i > nu0, that |lambda_i - lambda'_i| <= nu0. Reports, never throws
/// on failure.
LipschitzReport lipschitz_check(const ModuleDecomposition& dec, const ModuleDecomposition& dec_prime,
                                const Rational& nu0);

/// 4 x (largest T-exponent appearing in any entry), at least 4.
ExtendedRational default_truncation(const std::vector<NovikovMatrix>& inputs);

// JSON: {"rows":R,"cols":C,"entries":[["T(2)", "0"], ...], "trunc":"p/q"}
// The truncation level is `trunc` if given, else the "trunc" member, else
// default_truncation() of the entries.
nlohmann::json to_json(const NovikovMatrix& m);
NovikovMatrix matrix_from_json(const nlohmann::json& j, const std::optional<ExtendedRational>& trunc = {});
// {"ranks":[...],"differentials":[matrix, ...],"trunc":"p/q"}
ChainComplex complex_from_json(const nlohmann::json& j, const std::optional<ExtendedRational>& trunc = {});
nlohmann::json to_json(const ModuleDecomposition& dec);
nlohmann::json to_json(const LipschitzReport& report);

}  // namespace torsionlab
