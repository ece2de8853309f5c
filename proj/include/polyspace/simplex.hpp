#pragma once

#include "polyspace/exact.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace polyspace::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
  Status status = Status::Infeasible;
  Rational value;
  std::vector<Rational> x;
};

/// maximize c·x subject to A x <= b, x >= 0, in exact arithmetic.
/// Two-phase tableau simplex with Bland's rule, so degenerate pivots
/// cannot cycle.
class Simplex {
public:
  Simplex(const std::vector<std::vector<Rational>> &a, const std::vector<Rational> &b,
          const std::vector<Rational> &c)
      : m_(static_cast<int>(b.size())), n_(static_cast<int>(c.size())),
        d_(static_cast<std::size_t>(m_ + 2), std::vector<Rational>(static_cast<std::size_t>(n_ + 2))),
        basic_(static_cast<std::size_t>(m_)), nonbasic_(static_cast<std::size_t>(n_ + 1)) {
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j)
        at(i, j) = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      basic_[static_cast<std::size_t>(i)] = n_ + i;
      at(i, n_) = -1;
      at(i, n_ + 1) = b[static_cast<std::size_t>(i)];
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[static_cast<std::size_t>(j)] = j;
      at(m_, j) = -c[static_cast<std::size_t>(j)];
    }
    nonbasic_[static_cast<std::size_t>(n_)] = -1;
    at(m_ + 1, n_) = 1;
  }

  Solution solve() {
    Solution out;
    int r = 0;
    for (int i = 1; i < m_; ++i)
      if (at(i, n_ + 1) < at(r, n_ + 1))
        r = i;
    if (m_ > 0 && at(r, n_ + 1).sign() < 0) {
      pivot(r, n_);
      if (!run(1) || at(m_ + 1, n_ + 1).sign() < 0)
        return out;
      for (int i = 0; i < m_; ++i) {
        if (basic_[static_cast<std::size_t>(i)] != -1)
          continue;
        int s = -1;
        for (int j = 0; j <= n_; ++j)
          if (!at(i, j).is_zero() && (s == -1 || nb(j) < nb(s)))
            s = j;
        if (s != -1)
          pivot(i, s);
      }
    }
    if (!run(2)) {
      out.status = Status::Unbounded;
      return out;
    }
    out.status = Status::Optimal;
    out.x.assign(static_cast<std::size_t>(n_), Rational());
    for (int i = 0; i < m_; ++i)
      if (basic_[static_cast<std::size_t>(i)] >= 0 && basic_[static_cast<std::size_t>(i)] < n_)
        out.x[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])] = at(i, n_ + 1);
    out.value = at(m_, n_ + 1);
    return out;
  }

private:
  Rational &at(int i, int j) { return d_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  int nb(int j) const { return nonbasic_[static_cast<std::size_t>(j)]; }

  void pivot(int r, int s) {
    const Rational inv = Rational(1) / at(r, s);
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r || at(i, s).is_zero())
        continue;
      const Rational f = at(i, s) * inv;
      for (int j = 0; j < n_ + 2; ++j)
        if (j != s && !at(r, j).is_zero())
          at(i, j) -= at(r, j) * f;
    }
    for (int j = 0; j < n_ + 2; ++j)
      if (j != s)
        at(r, j) *= inv;
    for (int i = 0; i < m_ + 2; ++i)
      if (i != r)
        at(i, s) *= -inv;
    at(r, s) = inv;
    std::swap(basic_[static_cast<std::size_t>(r)], nonbasic_[static_cast<std::size_t>(s)]);
  }

  bool run(int phase) {
    const int x = phase == 1 ? m_ + 1 : m_;
    while (true) {
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (phase == 2 && nb(j) == -1)
          continue;
        if (at(x, j).sign() < 0 && (s == -1 || nb(j) < nb(s)))
          s = j;
      }
      if (s == -1)
        return true;
      int r = -1;
      Rational best;
      for (int i = 0; i < m_; ++i) {
        if (at(i, s).sign() <= 0)
          continue;
        Rational ratio = at(i, n_ + 1) / at(i, s);
        if (r == -1 || ratio < best ||
            (ratio == best && basic_[static_cast<std::size_t>(i)] < basic_[static_cast<std::size_t>(r)])) {
          r = i;
          best = ratio;
        }
      }
      if (r == -1)
        return false;
      pivot(r, s);
    }
  }

  int m_, n_;
  std::vector<std::vector<Rational>> d_;
  std::vector<int> basic_, nonbasic_;
};

inline Solution maximize(const std::vector<std::vector<Rational>> &a, const std::vector<Rational> &b,
                         const std::vector<Rational> &c) {
  return Simplex(a, b, c).solve();
}

} // namespace polyspace::lp
