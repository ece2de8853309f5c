#pragma once

#include "polyspace/exact.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace polyspace::linalg {

using IntRow = std::vector<Integer>;
using IntMatrix = std::vector<IntRow>;

inline bool is_zero_row(const IntRow &r) {
  for (const auto &x : r)
    if (x != 0)
      return false;
  return true;
}

/// Row Hermite normal form: pivots positive, entries above each pivot
/// reduced into [0, pivot). Zero rows are dropped.
struct Echelon {
  IntMatrix rows;
  std::vector<std::size_t> pivot_cols;

  bool unimodular_pivots() const {
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i][pivot_cols[i]] != 1)
        return false;
    return true;
  }
};

inline Echelon hermite(IntMatrix a, std::size_t ncols) {
  Echelon out;
  std::size_t r = 0;
  for (std::size_t col = 0; col < ncols && r < a.size(); ++col) {
    while (true) {
      std::size_t best = a.size();
      for (std::size_t i = r; i < a.size(); ++i)
        if (a[i][col] != 0 && (best == a.size() || abs(a[i][col]) < abs(a[best][col])))
          best = i;
      if (best == a.size())
        break;
      std::swap(a[r], a[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < a.size(); ++i) {
        if (a[i][col] == 0)
          continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][col].get_mpz_t(), a[r][col].get_mpz_t());
        for (std::size_t j = col; j < ncols; ++j)
          a[i][j] -= q * a[r][j];
        if (a[i][col] != 0)
          done = false;
      }
      if (done)
        break;
    }
    if (r >= a.size() || a[r][col] == 0)
      continue;
    if (a[r][col] < 0)
      for (std::size_t j = col; j < ncols; ++j)
        a[r][j] = -a[r][j];
    for (std::size_t i = 0; i < r; ++i) {
      if (a[i][col] == 0)
        continue;
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), a[i][col].get_mpz_t(), a[r][col].get_mpz_t());
      for (std::size_t j = col; j < ncols; ++j)
        a[i][j] -= q * a[r][j];
    }
    out.pivot_cols.push_back(col);
    ++r;
  }
  a.resize(r);
  out.rows = std::move(a);
  return out;
}

/// Nonzero invariant factors d_1 | d_2 | ... of an integer matrix.
inline std::vector<Integer> smith_diagonal(IntMatrix a, std::size_t ncols) {
  std::vector<Integer> diag;
  const std::size_t nrows = a.size();
  std::size_t t = 0;
  while (t < nrows && t < ncols) {
    std::size_t pi = nrows, pj = ncols;
    for (std::size_t i = t; i < nrows; ++i)
      for (std::size_t j = t; j < ncols; ++j)
        if (a[i][j] != 0 && (pi == nrows || abs(a[i][j]) < abs(a[pi][pj]))) {
          pi = i;
          pj = j;
        }
    if (pi == nrows)
      break;
    std::swap(a[t], a[pi]);
    for (auto &row : a)
      std::swap(row[t], row[pj]);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < nrows; ++i) {
        if (a[i][t] == 0)
          continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
        for (std::size_t j = t; j < ncols; ++j)
          a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) {
          std::swap(a[t], a[i]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < ncols; ++j) {
        if (a[t][j] == 0)
          continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
        for (std::size_t i = t; i < nrows; ++i)
          a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) {
          for (auto &row : a)
            std::swap(row[t], row[j]);
          clean = false;
        }
      }
      if (!clean)
        continue;
      // pivot must divide the rest of the block
      for (std::size_t i = t + 1; i < nrows && clean; ++i)
        for (std::size_t j = t + 1; j < ncols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            for (std::size_t c = t; c < ncols; ++c)
              a[t][c] += a[i][c];
            clean = false;
            break;
          }
    }
    diag.push_back(abs(a[t][t]));
    ++t;
  }
  return diag;
}

inline std::size_t rational_rank(std::vector<std::vector<Rational>> a) {
  std::size_t rank = 0;
  const std::size_t ncols = a.empty() ? 0 : a[0].size();
  for (std::size_t col = 0; col < ncols && rank < a.size(); ++col) {
    std::size_t p = rank;
    while (p < a.size() && a[p][col].is_zero())
      ++p;
    if (p == a.size())
      continue;
    std::swap(a[rank], a[p]);
    for (std::size_t i = rank + 1; i < a.size(); ++i) {
      if (a[i][col].is_zero())
        continue;
      Rational f = a[i][col] / a[rank][col];
      for (std::size_t j = col; j < ncols; ++j)
        a[i][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

/// Whether `target` lies in the GF(2) span of `gens` (all entries 0/1).
inline bool gf2_in_span(std::vector<std::vector<int>> gens, std::vector<int> target) {
  const std::size_t n = target.size();
  std::vector<std::vector<int>> basis;
  std::vector<std::size_t> piv;
  for (auto &g : gens) {
    for (std::size_t b = 0; b < basis.size(); ++b)
      if (g[piv[b]])
        for (std::size_t j = 0; j < n; ++j)
          g[j] ^= basis[b][j];
    std::size_t p = 0;
    while (p < n && !g[p])
      ++p;
    if (p == n)
      continue;
    for (std::size_t b = 0; b < basis.size(); ++b)
      if (basis[b][p])
        for (std::size_t j = 0; j < n; ++j)
          basis[b][j] ^= g[j];
    basis.push_back(g);
    piv.push_back(p);
  }
  for (std::size_t b = 0; b < basis.size(); ++b)
    if (target[piv[b]])
      for (std::size_t j = 0; j < n; ++j)
        target[j] ^= basis[b][j];
  for (int x : target)
    if (x)
      return false;
  return true;
}

} // namespace polyspace::linalg
