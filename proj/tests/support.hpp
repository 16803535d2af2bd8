#pragma once

// Shared test helpers: seeded generators and oracles that do not go through
// the code under test.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "torsionlab/novikov.hpp"
#include "torsionlab/valmat.hpp"

namespace testsupport {

using namespace torsionlab;

inline Rational q(long p, long r = 1) {
  Rational out(p, r);
  out.canonicalize();
  return out;
}
inline NovikovElement nv(const char* text, ExtendedRational trunc = {}) { return parse_novikov(text, trunc); }

/// Random element with small coefficients and exponents in (1/6)Z in [0, 3].
inline NovikovElement random_element(std::mt19937_64& rng, int max_terms = 4, bool graded = true,
                                     ExtendedRational trunc = {}) {
  std::uniform_int_distribution<int> nterms(1, max_terms), coeff(-4, 4), texp(0, 18), eexp(-1, 1);
  for (;;) {
    std::vector<NovikovTerm> terms;
    const int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
      int c = coeff(rng);
      if (c == 0) c = 1;
      terms.push_back({q(c), q(texp(rng), 6), graded ? eexp(rng) : 0});
    }
    auto x = NovikovElement::from_terms(std::move(terms), trunc);
    if (!x.is_zero()) return x;
  }
}

inline const std::vector<const char*>& palette() {
  static const std::vector<const char*> p{"0", "1", "T", "1 - T", "T(1/2)", "T(2) - T(3)", "2*T(3/2)", "1 + T(1/3)",
                                          "0", "T(1/2) + T(1)"};
  return p;
}

/// Exact determinant by cofactor expansion (no division).
inline NovikovElement determinant(const std::vector<std::vector<NovikovElement>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return NovikovElement::constant(Rational(1));
  if (n == 1) return a[0][0];
  NovikovElement det;
  for (std::size_t c = 0; c < n; ++c) {
    if (a[0][c].is_zero()) continue;
    std::vector<std::vector<NovikovElement>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<NovikovElement> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(std::move(row));
    }
    NovikovElement term = a[0][c] * determinant(minor);
    det = (c % 2 == 0) ? det + term : det - term;
  }
  return det;
}

inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(k), true);
  do {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (pick[i]) s.push_back(i);
    out.push_back(std::move(s));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

/// Invariant-factor valuations from determinantal divisors: d_k is the least
/// valuation of a k x k minor and the k-th factor is d_k - d_{k-1}. Entries
/// are taken exactly (no truncation). Returns ascending valuations.
inline std::vector<Rational> invariant_factor_valuations(const std::vector<std::vector<NovikovElement>>& m) {
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  std::vector<Rational> out;
  ExtendedRational prev = Rational(0);
  for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
    ExtendedRational best = ExtendedRational::infinity();
    for (const auto& rs : subsets(rows, k)) {
      for (const auto& cs : subsets(cols, k)) {
        std::vector<std::vector<NovikovElement>> sub(k, std::vector<NovikovElement>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) sub[i][j] = m[rs[i]][cs[j]];
        best = min(best, valuation(determinant(sub)));
      }
    }
    if (best.is_infinite()) break;
    out.push_back(best.value() - prev.value());
    prev = best;
  }
  return out;
}

/// Contraction complex of w assembled from scratch: C^p has the subsets of
/// size n - p as basis, d(e_S) = sum_{i in S} sign * w_i e_{S - i}.
inline ChainComplex contraction_complex(const std::vector<NovikovElement>& w, const ExtendedRational& trunc) {
  const std::size_t n = w.size();
  ChainComplex c;
  std::vector<std::vector<std::vector<std::size_t>>> basis;
  for (std::size_t p = 0; p <= n; ++p) {
    basis.push_back(subsets(n, n - p));
    c.ranks.push_back(basis.back().size());
  }
  for (std::size_t p = 0; p < n; ++p) {
    NovikovMatrix d(c.ranks[p + 1], c.ranks[p], trunc);
    for (std::size_t col = 0; col < basis[p].size(); ++col) {
      const auto& S = basis[p][col];
      for (std::size_t pos = 0; pos < S.size(); ++pos) {
        std::vector<std::size_t> rest = S;
        rest.erase(rest.begin() + static_cast<long>(pos));
        const auto it = std::find(basis[p + 1].begin(), basis[p + 1].end(), rest);
        const std::size_t row = static_cast<std::size_t>(it - basis[p + 1].begin());
        const NovikovElement term = pos % 2 == 0 ? w[S[pos]] : -w[S[pos]];
        d.set(row, col, d(row, col) + term);
      }
    }
    c.differentials.push_back(std::move(d));
  }
  return c;
}

/// Cohomology by rank bookkeeping over SNF pivots of every differential.
inline ModuleDecomposition brute_force_total(const ChainComplex& c) {
  ModuleDecomposition total;
  std::vector<std::vector<Rational>> pivots;
  for (const auto& d : c.differentials) pivots.push_back(smith_normal_form(d).pivot_valuations());
  for (std::size_t k = 0; k < c.ranks.size(); ++k) {
    const long out_rank = k < pivots.size() ? static_cast<long>(pivots[k].size()) : 0;
    const long in_rank = k > 0 ? static_cast<long>(pivots[k - 1].size()) : 0;
    total.betti += static_cast<long>(c.ranks[k]) - out_rank - in_rank;
    if (k > 0)
      for (const auto& v : pivots[k - 1])
        if (v > 0) total.torsion.push_back(v);
  }
  std::sort(total.torsion.begin(), total.torsion.end(), [](const Rational& a, const Rational& b) { return a > b; });
  return total;
}

/// Closed form for a covector over a valuation ring: 2^n free generators if
/// w = 0, otherwise 2^(n-1) copies of the cyclic module of the least
/// valuation among the components.
inline ModuleDecomposition koszul_closed_form(const std::vector<NovikovElement>& w) {
  ModuleDecomposition out;
  const std::size_t n = w.size();
  ExtendedRational v = ExtendedRational::infinity();
  for (const auto& x : w) v = min(v, valuation(x));
  if (v.is_infinite()) {
    out.betti = 1L << n;
    return out;
  }
  if (v.value() > 0) out.torsion.assign(std::size_t{1} << (n - 1), v.value());
  return out;
}

}  // namespace testsupport
