#include "torsionlab/valmat.hpp"

#include <algorithm>
#include <utility>

#include "torsionlab/errors.hpp"

namespace torsionlab {

NovikovMatrix::NovikovMatrix(std::size_t rows, std::size_t cols, ExtendedRational trunc)
    : rows_(rows), cols_(cols), trunc_(std::move(trunc)), entries_(rows * cols, NovikovElement::zero(trunc_)) {}

NovikovMatrix NovikovMatrix::identity(std::size_t n, ExtendedRational trunc) {
  NovikovMatrix m(n, n, std::move(trunc));
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, NovikovElement::constant(Rational(1)));
  return m;
}

void NovikovMatrix::set(std::size_t r, std::size_t c, const NovikovElement& x) {
  if (r >= rows_ || c >= cols_) throw InvalidArgument("matrix index out of range");
  entries_[r * cols_ + c] = x.truncated(trunc_).with_trunc(trunc_);
}

bool NovikovMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const auto& x) { return x.is_zero(); });
}

bool NovikovMatrix::entries_in_nonnegative_part() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const auto& x) { return x.in_nonnegative_part(); });
}

NovikovMatrix NovikovMatrix::truncated(const ExtendedRational& level) const {
  NovikovMatrix out(rows_, cols_, min(trunc_, level));
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i].with_trunc(out.trunc_);
  return out;
}

NovikovMatrix operator*(const NovikovMatrix& a, const NovikovMatrix& b) {
  if (a.cols_ != b.rows_) throw InvalidArgument("matrix product shape mismatch");
  NovikovMatrix out(a.rows_, b.cols_, min(a.trunc_, b.trunc_));
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t j = 0; j < b.cols_; ++j) {
      NovikovElement acc = NovikovElement::zero(out.trunc_);
      for (std::size_t k = 0; k < a.cols_; ++k) acc = acc + a(i, k) * b(k, j);
      out.entries_[i * out.cols_ + j] = acc.truncated(out.trunc_).with_trunc(out.trunc_);
    }
  }
  return out;
}

NovikovMatrix operator-(const NovikovMatrix& a, const NovikovMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InvalidArgument("matrix difference shape mismatch");
  NovikovMatrix out(a.rows_, a.cols_, min(a.trunc_, b.trunc_));
  for (std::size_t i = 0; i < out.entries_.size(); ++i)
    out.entries_[i] = (a.entries_[i] - b.entries_[i]).with_trunc(out.trunc_);
  return out;
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

// Row/column operations mirrored into U and V. Entries stay reduced modulo
// T^trunc; quotients are promoted to exact representatives so each
// elementary operation is an honest unimodular matrix.
class Eliminator {
 public:
  explicit Eliminator(const NovikovMatrix& m)
      : a_(m), u_(NovikovMatrix::identity(m.rows(), m.trunc())), v_(NovikovMatrix::identity(m.cols(), m.trunc())) {}

  SmithForm run() {
    const std::size_t steps = std::min(a_.rows(), a_.cols());
    std::size_t rank = 0;
    for (std::size_t k = 0; k < steps; ++k) {
      auto pivot = find_pivot(k);
      if (!pivot) break;
      swap_rows(k, pivot->first);
      swap_cols(k, pivot->second);
      normalize_pivot(k);
      for (std::size_t i = k + 1; i < a_.rows(); ++i) clear_row_entry(k, i);
      for (std::size_t j = k + 1; j < a_.cols(); ++j) clear_col_entry(k, j);
      ++rank;
    }
    return SmithForm{std::move(u_), std::move(a_), std::move(v_), rank};
  }

 private:
  std::optional<std::pair<std::size_t, std::size_t>> find_pivot(std::size_t k) const {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    ExtendedRational best_val;
    for (std::size_t i = k; i < a_.rows(); ++i) {
      for (std::size_t j = k; j < a_.cols(); ++j) {
        ExtendedRational v = valuation(a_(i, j));
        if (v.is_finite() && (!best || v < best_val)) {
          best = {i, j};
          best_val = v;
        }
      }
    }
    return best;
  }

  void swap_rows(std::size_t r1, std::size_t r2) {
    if (r1 == r2) return;
    for (std::size_t j = 0; j < a_.cols(); ++j) swap_entries(a_, r1, j, r2, j);
    for (std::size_t j = 0; j < u_.cols(); ++j) swap_entries(u_, r1, j, r2, j);
  }

  void swap_cols(std::size_t c1, std::size_t c2) {
    if (c1 == c2) return;
    for (std::size_t i = 0; i < a_.rows(); ++i) swap_entries(a_, i, c1, i, c2);
    for (std::size_t i = 0; i < v_.rows(); ++i) swap_entries(v_, i, c1, i, c2);
  }

  static void swap_entries(NovikovMatrix& m, std::size_t r1, std::size_t c1, std::size_t r2, std::size_t c2) {
    NovikovElement tmp = m(r1, c1);
    m.set(r1, c1, m(r2, c2));
    m.set(r2, c2, tmp);
  }

  NovikovElement representative(const NovikovElement& q) const { return q.with_trunc(a_.trunc()); }

  // Scale row k by the inverse of the pivot's unit part so the pivot becomes T^v.
  void normalize_pivot(std::size_t k) {
    const NovikovElement& pivot = a_(k, k);
    const Rational v = pivot.terms().front().t_exp;
    const NovikovElement monic = NovikovElement::monomial(Rational(1), v, 0, a_.trunc());
    if (pivot == monic) return;
    NovikovElement unit = divide_exact(pivot, monic);
    NovikovElement scale = representative(invert(unit));
    for (std::size_t j = k; j < a_.cols(); ++j) a_.set(k, j, a_(k, j) * scale);
    for (std::size_t j = 0; j < u_.cols(); ++j) u_.set(k, j, u_(k, j) * scale);
    if (a_(k, k) != monic) throw PrecisionExhausted("pivot normalization not resolved at truncation " + a_.trunc().to_string());
  }

  // row_i -= (a_ik / a_kk) row_k
  void clear_row_entry(std::size_t k, std::size_t i) {
    if (a_(i, k).is_zero()) return;
    NovikovElement q = representative(divide_exact(a_(i, k), a_(k, k)));
    for (std::size_t j = k; j < a_.cols(); ++j) a_.set(i, j, a_(i, j) - q * a_(k, j));
    for (std::size_t j = 0; j < u_.cols(); ++j) u_.set(i, j, u_(i, j) - q * u_(k, j));
    if (!a_(i, k).is_zero())
      throw PrecisionExhausted("row elimination needs terms beyond truncation " + a_.trunc().to_string());
  }

  // col_j -= (a_kj / a_kk) col_k. Rows below k are already zero in column k.
  void clear_col_entry(std::size_t k, std::size_t j) {
    if (a_(k, j).is_zero()) return;
    NovikovElement q = representative(divide_exact(a_(k, j), a_(k, k)));
    a_.set(k, j, a_(k, j) - q * a_(k, k));
    for (std::size_t i = 0; i < v_.rows(); ++i) v_.set(i, j, v_(i, j) - q * v_(i, k));
    if (!a_(k, j).is_zero())
      throw PrecisionExhausted("column elimination needs terms beyond truncation " + a_.trunc().to_string());
  }

  NovikovMatrix a_;
  NovikovMatrix u_;
  NovikovMatrix v_;
};

}  // namespace

std::vector<Rational> SmithForm::pivot_valuations() const {
  std::vector<Rational> out;
  for (std::size_t k = 0; k < rank; ++k) out.push_back(valuation(D(k, k)).value());
  return out;
}

SmithForm smith_normal_form(const NovikovMatrix& m) {
  if (!m.entries_in_nonnegative_part())
    throw InvalidArgument("Smith normal form needs entries in Lambda_{0,nov}");
  return Eliminator(m).run();
}

// ---------------------------------------------------------------------------
// Chain complexes

void ChainComplex::validate_shapes() const {
  if (ranks.empty()) throw InvalidArgument("chain complex has no groups");
  if (differentials.size() + 1 != ranks.size())
    throw InvalidArgument("chain complex needs exactly one differential between consecutive groups");
  for (std::size_t k = 0; k < differentials.size(); ++k) {
    const auto& d = differentials[k];
    if (d.cols() != ranks[k] || d.rows() != ranks[k + 1])
      throw InvalidArgument("differential d_" + std::to_string(k) + " has shape " + std::to_string(d.rows()) + "x" +
                            std::to_string(d.cols()) + ", expected " + std::to_string(ranks[k + 1]) + "x" +
                            std::to_string(ranks[k]));
  }
}

void ChainComplex::check_square_zero() const {
  validate_shapes();
  for (std::size_t k = 0; k + 1 < differentials.size(); ++k) {
    if (differentials[k].rows() == 0 || differentials[k].cols() == 0 || differentials[k + 1].rows() == 0) continue;
    if (!(differentials[k + 1] * differentials[k]).is_zero())
      throw NotAComplex("d_" + std::to_string(k + 1) + " * d_" + std::to_string(k) + " is nonzero at the truncation level");
  }
}

void ModuleDecomposition::normalize() { std::sort(torsion.begin(), torsion.end(), std::greater<>()); }

namespace {

struct DifferentialData {
  std::size_t rank = 0;
  std::vector<Rational> positive_pivots;
};

DifferentialData analyze(const NovikovMatrix& d) {
  DifferentialData out;
  if (d.rows() == 0 || d.cols() == 0) return out;
  SmithForm snf = smith_normal_form(d);
  out.rank = snf.rank;
  for (const auto& v : snf.pivot_valuations())
    if (v > 0) out.positive_pivots.push_back(v);
  return out;
}

ModuleDecomposition assemble(std::size_t rank_here, const DifferentialData* incoming, const DifferentialData* outgoing) {
  ModuleDecomposition out;
  long betti = static_cast<long>(rank_here);
  if (outgoing) betti -= static_cast<long>(outgoing->rank);
  if (incoming) {
    betti -= static_cast<long>(incoming->rank);
    out.torsion = incoming->positive_pivots;
  }
  out.betti = betti;
  out.normalize();
  return out;
}

}  // namespace

std::vector<ModuleDecomposition> decompose_all(const ChainComplex& c) {
  c.check_square_zero();
  std::vector<DifferentialData> data;
  data.reserve(c.differentials.size());
  for (const auto& d : c.differentials) data.push_back(analyze(d));
  std::vector<ModuleDecomposition> out;
  for (std::size_t k = 0; k < c.ranks.size(); ++k) {
    const DifferentialData* incoming = k > 0 ? &data[k - 1] : nullptr;
    const DifferentialData* outgoing = k < data.size() ? &data[k] : nullptr;
    out.push_back(assemble(c.ranks[k], incoming, outgoing));
  }
  return out;
}

ModuleDecomposition decompose(const ChainComplex& c, std::size_t degree) {
  c.check_square_zero();
  if (degree >= c.ranks.size()) throw InvalidArgument("degree " + std::to_string(degree) + " out of range");
  std::optional<DifferentialData> incoming, outgoing;
  if (degree > 0) incoming = analyze(c.differentials[degree - 1]);
  if (degree < c.differentials.size()) outgoing = analyze(c.differentials[degree]);
  return assemble(c.ranks[degree], incoming ? &*incoming : nullptr, outgoing ? &*outgoing : nullptr);
}

ModuleDecomposition decompose_total(const ChainComplex& c) {
  ModuleDecomposition total;
  for (auto& dec : decompose_all(c)) {
    total.betti += dec.betti;
    total.torsion.insert(total.torsion.end(), dec.torsion.begin(), dec.torsion.end());
  }
  total.normalize();
  return total;
}

// ---------------------------------------------------------------------------
// Counting and thresholds

long b_count(const ModuleDecomposition& dec, const Rational& lam) {
  if (lam <= 0) throw InvalidArgument("b_count needs lam > 0");
  return static_cast<long>(std::count_if(dec.torsion.begin(), dec.torsion.end(), [&](const Rational& x) { return x >= lam; }));
}

long theorem_j_bound(const ModuleDecomposition& dec, const Rational& hofer) {
  if (hofer <= 0) throw InvalidArgument("Hofer norm must be positive");
  return dec.betti + 2 * b_count(dec, hofer);
}

ExtendedRational torsion_threshold(const ModuleDecomposition& dec) {
  if (dec.betti > 0) return ExtendedRational::infinity();
  if (dec.torsion.empty()) return Rational(0);
  return *std::max_element(dec.torsion.begin(), dec.torsion.end());
}

LipschitzReport lipschitz_check(const ModuleDecomposition& dec, const ModuleDecomposition& dec_prime,
                                const Rational& nu0) {
  if (nu0 < 0) throw InvalidArgument("nu0 must be non-negative");
  ModuleDecomposition a = dec, b = dec_prime;
  a.normalize();
  b.normalize();
  LipschitzReport report;
  report.nu0 = nu0;
  for (std::size_t i = 0; i < a.torsion.size(); ++i) {
    const Rational& lam = a.torsion[i];
    if (lam <= nu0) continue;
    LipschitzEntry entry;
    entry.index = i + 1;
    entry.lambda = lam;
    if (i >= b.torsion.size()) {
      entry.ok = false;
      entry.reason = "index exceeds b' = " + std::to_string(b.torsion.size());
    } else {
      entry.lambda_prime = b.torsion[i];
      if (b.torsion[i] > nu0 && abs(Rational(lam - b.torsion[i])) > nu0) {
        entry.ok = false;
        entry.reason = "|lambda - lambda'| exceeds nu0";
      }
    }
    report.pass = report.pass && entry.ok;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

ExtendedRational default_truncation(const std::vector<NovikovMatrix>& inputs) {
  Rational largest(0);
  for (const auto& m : inputs)
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        for (const auto& term : m(i, j).terms()) largest = std::max(largest, term.t_exp);
  return Rational(4 * std::max(largest, Rational(1)));
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const NovikovMatrix& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(format(m(i, j)));
    entries.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}, {"trunc", m.trunc().to_string()}};
}

NovikovMatrix matrix_from_json(const nlohmann::json& j, const std::optional<ExtendedRational>& trunc) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
    throw ParseError("matrix JSON needs rows, cols and entries");
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const auto& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != rows) throw ParseError("matrix JSON: entries must have 'rows' rows");
  NovikovMatrix raw(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!entries[r].is_array() || entries[r].size() != cols) throw ParseError("matrix JSON: ragged row " + std::to_string(r));
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& cell = entries[r][c];
      raw.set(r, c, cell.is_string() ? parse_novikov(cell.get<std::string>()) : novikov_from_json(cell));
    }
  }
  ExtendedRational level;
  if (trunc) level = *trunc;
  else if (j.contains("trunc")) level = parse_extended(j.at("trunc").get<std::string>());
  else level = default_truncation({raw});
  return raw.truncated(level);
}

ChainComplex complex_from_json(const nlohmann::json& j, const std::optional<ExtendedRational>& trunc) {
  if (!j.is_object() || !j.contains("ranks") || !j.contains("differentials"))
    throw ParseError("complex JSON needs ranks and differentials");
  ChainComplex c;
  c.ranks = j.at("ranks").get<std::vector<std::size_t>>();
  std::vector<NovikovMatrix> raw;
  for (const auto& d : j.at("differentials")) raw.push_back(matrix_from_json(d, ExtendedRational::infinity()));
  ExtendedRational level;
  if (trunc) level = *trunc;
  else if (j.contains("trunc")) level = parse_extended(j.at("trunc").get<std::string>());
  else level = default_truncation(raw);
  for (auto& d : raw) c.differentials.push_back(d.truncated(level));
  c.validate_shapes();
  return c;
}

nlohmann::json to_json(const ModuleDecomposition& dec) {
  nlohmann::json torsion = nlohmann::json::array();
  for (const auto& x : dec.torsion) torsion.push_back(x.get_str());
  return {{"betti", dec.betti}, {"torsion", std::move(torsion)}, {"threshold", torsion_threshold(dec).to_string()}};
}

nlohmann::json to_json(const LipschitzReport& report) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : report.entries) {
    nlohmann::json item = {{"index", e.index}, {"lambda", e.lambda.get_str()}, {"ok", e.ok}};
    item["lambda_prime"] = e.lambda_prime ? nlohmann::json(e.lambda_prime->get_str()) : nlohmann::json(nullptr);
    if (!e.reason.empty()) item["reason"] = e.reason;
    entries.push_back(std::move(item));
  }
  return {{"nu0", report.nu0.get_str()}, {"pass", report.pass}, {"entries", std::move(entries)}};
}

}  // namespace torsionlab
