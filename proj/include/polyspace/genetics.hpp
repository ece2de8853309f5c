#pragma once

#include "polyspace/errors.hpp"
#include "polyspace/exact.hpp"
#include "polyspace/simplex.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace polyspace {

inline constexpr int kMaxN = 20;

/// Subset of {1..n}; bit i-1 set iff i is a member.
class SubsetMask {
public:
  constexpr SubsetMask() = default;
  constexpr explicit SubsetMask(std::uint32_t bits) : bits_(bits) {}
  static SubsetMask of(std::initializer_list<int> elems) {
    SubsetMask s;
    for (int e : elems)
      s.insert(e);
    return s;
  }
  static SubsetMask of(const std::vector<int> &elems) {
    SubsetMask s;
    for (int e : elems)
      s.insert(e);
    return s;
  }
  static constexpr SubsetMask singleton(int i) { return SubsetMask(1u << (i - 1)); }
  static constexpr SubsetMask range(int n) { return SubsetMask(n >= 32 ? ~0u : (1u << n) - 1u); }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool contains(int i) const { return i >= 1 && i <= 32 && (bits_ >> (i - 1)) & 1u; }
  void insert(int i) {
    if (i < 1 || i > kMaxN)
      throw ValidationError("index " + std::to_string(i) + " out of range 1.." + std::to_string(kMaxN));
    bits_ |= 1u << (i - 1);
  }
  constexpr SubsetMask with(int i) const { return SubsetMask(bits_ | (1u << (i - 1))); }
  constexpr SubsetMask without(int i) const { return SubsetMask(bits_ & ~(1u << (i - 1))); }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int max_element() const { return bits_ ? 32 - std::countl_zero(bits_) : 0; }
  constexpr bool subset_of(SubsetMask o) const { return (bits_ & ~o.bits_) == 0; }

  /// Elements in descending order.
  std::vector<int> descending() const {
    std::vector<int> out;
    for (int i = 32; i >= 1; --i)
      if (contains(i))
        out.push_back(i);
    return out;
  }
  std::vector<int> ascending() const {
    auto d = descending();
    std::reverse(d.begin(), d.end());
    return d;
  }
  int element_sum() const {
    int s = 0;
    for (int i = 1; i <= 32; ++i)
      if (contains(i))
        s += i;
    return s;
  }

  std::string str() const {
    std::string out = "{";
    bool first = true;
    for (int e : descending()) {
      if (!first)
        out += ",";
      out += std::to_string(e);
      first = false;
    }
    return out + "}";
  }

  friend constexpr SubsetMask operator|(SubsetMask a, SubsetMask b) { return SubsetMask(a.bits_ | b.bits_); }
  friend constexpr SubsetMask operator&(SubsetMask a, SubsetMask b) { return SubsetMask(a.bits_ & b.bits_); }
  friend constexpr bool operator==(SubsetMask, SubsetMask) = default;
  friend constexpr auto operator<=>(SubsetMask a, SubsetMask b) { return a.bits_ <=> b.bits_; }

private:
  std::uint32_t bits_ = 0;
};

/// The partial order on index sets: with A = {a1 > a2 > ...} and
/// B = {b1 > b2 > ...}, A <= B iff |A| <= |B| and a_i <= b_i for each i <= |A|.
inline bool leq_sets(SubsetMask a, SubsetMask b) {
  if (a.size() > b.size())
    return false;
  std::uint32_t x = a.bits(), y = b.bits();
  while (x) {
    int ai = 31 - std::countl_zero(x);
    int bi = 31 - std::countl_zero(y);
    if (ai > bi)
      return false;
    x &= ~(1u << ai);
    y &= ~(1u << bi);
  }
  return true;
}

/// Canonical gene order: by size, then lexicographically on the descending
/// element lists.
inline bool gene_less(SubsetMask a, SubsetMask b) {
  if (a.size() != b.size())
    return a.size() < b.size();
  return a.descending() < b.descending();
}

/// Sets covering `s` in the order: one element moved up by one, or 1 added.
inline std::vector<SubsetMask> upper_covers(SubsetMask s, int n) {
  std::vector<SubsetMask> out;
  if (!s.contains(1))
    out.push_back(s.with(1));
  for (int a = 1; a < n; ++a)
    if (s.contains(a) && !s.contains(a + 1))
      out.push_back(s.without(a).with(a + 1));
  return out;
}

/// Sets covered by `s`, restricted to sets that still contain `keep`
/// (pass 0 to keep nothing fixed).
inline std::vector<SubsetMask> lower_covers(SubsetMask s, int keep = 0) {
  std::vector<SubsetMask> out;
  if (s.contains(1) && keep != 1)
    out.push_back(s.without(1));
  for (int a = 2; a <= 32; ++a)
    if (s.contains(a) && a != keep && !s.contains(a - 1))
      out.push_back(s.without(a).with(a - 1));
  return out;
}

class LengthVector {
public:
  /// Sorts the entries; requires 3 <= n <= 20 and every entry positive.
  explicit LengthVector(std::vector<Rational> lengths) : l_(std::move(lengths)) {
    if (l_.size() < 3 || l_.size() > static_cast<std::size_t>(kMaxN))
      throw ValidationError("length vector must have between 3 and " + std::to_string(kMaxN) +
                            " entries, got " + std::to_string(l_.size()));
    for (const auto &x : l_)
      if (x.sign() <= 0)
        throw ValidationError("lengths must be positive, got " + x.str());
    std::sort(l_.begin(), l_.end());
    total_ = Rational();
    for (const auto &x : l_)
      total_ += x;
  }

  static LengthVector parse(const std::string &csv) {
    std::vector<Rational> v;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
      v.push_back(Rational::parse(tok));
    return LengthVector(std::move(v));
  }

  int n() const { return static_cast<int>(l_.size()); }
  int m() const { return n() - 3; }
  const Rational &operator[](int i) const { return l_.at(static_cast<std::size_t>(i - 1)); }
  const std::vector<Rational> &values() const { return l_; }
  const Rational &total() const { return total_; }

  Rational sum(SubsetMask s) const {
    Rational acc;
    for (int i = 1; i <= n(); ++i)
      if (s.contains(i))
        acc += l_[static_cast<std::size_t>(i - 1)];
    return acc;
  }

  /// Some S with sum(S) equal to half the total, if one exists.
  std::optional<SubsetMask> find_tie() const;

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < l_.size(); ++i)
      out += (i ? "," : "") + l_[i].str();
    return out;
  }

  friend bool operator==(const LengthVector &, const LengthVector &) = default;

private:
  std::vector<Rational> l_;
  Rational total_;
};

inline bool is_short(const LengthVector &l, SubsetMask s) {
  return s.subset_of(SubsetMask::range(l.n())) && Rational(2) * l.sum(s) < l.total();
}

namespace detail {

/// Lengths scaled to integers; sums of subsets containing n, indexed by the
/// mask of the remaining n-1 indices. Uses 64-bit sums when they fit.
struct SubsetSums {
  int n;
  bool small;
  std::vector<std::int64_t> fast;
  std::vector<Integer> slow;
  std::int64_t total_fast = 0;
  Integer total_slow;

  explicit SubsetSums(const LengthVector &l) : n(l.n()) {
    Integer lcm = 1;
    for (const auto &x : l.values())
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.denominator().get_mpz_t());
    std::vector<Integer> w;
    Integer total = 0;
    for (const auto &x : l.values()) {
      w.push_back(x.numerator() * (lcm / x.denominator()));
      total += w.back();
    }
    const std::size_t count = std::size_t{1} << (n - 1);
    small = mpz_sizeinbase(total.get_mpz_t(), 2) < 60;
    if (small) {
      fast.assign(count, 0);
      total_fast = total.get_si();
      fast[0] = w[static_cast<std::size_t>(n - 1)].get_si();
      for (std::size_t mask = 1; mask < count; ++mask) {
        int low = std::countr_zero(mask);
        fast[mask] = fast[mask & (mask - 1)] + w[static_cast<std::size_t>(low)].get_si();
      }
    } else {
      slow.assign(count, 0);
      total_slow = total;
      slow[0] = w[static_cast<std::size_t>(n - 1)];
      for (std::size_t mask = 1; mask < count; ++mask) {
        int low = std::countr_zero(mask);
        slow[mask] = slow[mask & (mask - 1)] + w[static_cast<std::size_t>(low)];
      }
    }
  }

  /// sign of 2*sum - total for the set mask ∪ {n}
  int compare(std::size_t mask) const {
    if (small) {
      std::int64_t d = 2 * fast[mask] - total_fast;
      return (d > 0) - (d < 0);
    }
    return sgn(Integer(2 * slow[mask] - total_slow));
  }
};

} // namespace detail

inline std::optional<SubsetMask> LengthVector::find_tie() const {
  detail::SubsetSums sums(*this);
  for (std::size_t mask = 0; mask < (std::size_t{1} << (n() - 1)); ++mask)
    if (sums.compare(mask) == 0)
      return SubsetMask(static_cast<std::uint32_t>(mask)).with(n());
  return std::nullopt;
}

class GeneticCode {
public:
  GeneticCode() = default;

  /// Validates (each gene contains n, antichain) and sorts canonically.
  GeneticCode(int n, std::vector<SubsetMask> genes) : n_(n), genes_(std::move(genes)) {
    if (n < 3 || n > kMaxN)
      throw ValidationError("n must lie in 3.." + std::to_string(kMaxN) + ", got " + std::to_string(n));
    for (auto g : genes_) {
      if (!g.contains(n))
        throw ValidationError("gene " + g.str() + " does not contain n=" + std::to_string(n));
      if (!g.subset_of(SubsetMask::range(n)))
        throw ValidationError("gene " + g.str() + " has an element larger than n=" + std::to_string(n));
    }
    std::sort(genes_.begin(), genes_.end(), gene_less);
    for (std::size_t i = 0; i < genes_.size(); ++i)
      for (std::size_t j = 0; j < genes_.size(); ++j)
        if (i != j && leq_sets(genes_[i], genes_[j]))
          throw ValidationError("genes " + genes_[i].str() + " and " + genes_[j].str() +
                                " are comparable; a genetic code is an antichain");
  }

  /// Parses "{{7,4},{7,6,1}}"; n is the largest element unless given.
  static GeneticCode parse(const std::string &text, std::optional<int> n = std::nullopt);

  int n() const { return n_; }
  int m() const { return n_ - 3; }
  const std::vector<SubsetMask> &genes() const { return genes_; }
  bool empty() const { return genes_.empty(); }

  /// Size of the largest gee (gene minus n).
  int max_gee_size() const {
    int s = 0;
    for (auto g : genes_)
      s = std::max(s, g.size() - 1);
    return s;
  }

  bool is_short_set(SubsetMask a) const {
    for (auto g : genes_)
      if (leq_sets(a, g))
        return true;
    return false;
  }

  /// Single gene {n,k}.
  std::optional<int> family_nk() const {
    if (genes_.size() == 1 && genes_[0].size() == 2)
      return genes_[0].without(n_).max_element();
    return std::nullopt;
  }
  /// Single gene {n,k,1} with k >= 2.
  std::optional<int> family_nk1() const {
    if (genes_.size() == 1 && genes_[0].size() == 3 && genes_[0].contains(1)) {
      int k = genes_[0].without(n_).without(1).max_element();
      if (k >= 2)
        return k;
    }
    return std::nullopt;
  }

  std::string str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < genes_.size(); ++i)
      out += (i ? "," : "") + genes_[i].str();
    return out + "}";
  }

  friend bool operator==(const GeneticCode &, const GeneticCode &) = default;
  friend bool operator<(const GeneticCode &a, const GeneticCode &b) {
    if (a.n_ != b.n_)
      return a.n_ < b.n_;
    return std::lexicographical_compare(a.genes_.begin(), a.genes_.end(), b.genes_.begin(), b.genes_.end(),
                                        gene_less);
  }

private:
  int n_ = 0;
  std::vector<SubsetMask> genes_;
};

inline GeneticCode GeneticCode::parse(const std::string &text, std::optional<int> n) {
  std::size_t pos = 0;
  auto fail = [&](const std::string &why) {
    throw ValidationError("bad genetic code at position " + std::to_string(pos) + ": " + why + "\n  " + text +
                          "\n  " + std::string(pos, ' ') + "^");
  };
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t'))
      ++pos;
  };
  auto expect = [&](char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c)
      fail(std::string("expected '") + c + "'");
    ++pos;
  };
  std::vector<std::vector<int>> genes;
  expect('{');
  skip_ws();
  if (pos < text.size() && text[pos] == '}') {
    ++pos;
  } else {
    while (true) {
      expect('{');
      std::vector<int> gene;
      while (true) {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
          ++pos;
        if (start == pos)
          fail("expected a positive integer");
        if (pos - start > 3)
          fail("index too large");
        int v = std::stoi(text.substr(start, pos - start));
        if (v < 1 || v > kMaxN) {
          pos = start;
          fail("index out of range 1.." + std::to_string(kMaxN));
        }
        gene.push_back(v);
        skip_ws();
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        break;
      }
      expect('}');
      genes.push_back(gene);
      skip_ws();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      break;
    }
    expect('}');
  }
  skip_ws();
  if (pos != text.size())
    fail("trailing characters");
  int nn = n.value_or(0);
  if (!n) {
    for (const auto &g : genes)
      for (int e : g)
        nn = std::max(nn, e);
    if (genes.empty())
      throw ValidationError("empty genetic code needs an explicit n");
  }
  std::vector<SubsetMask> masks;
  for (const auto &g : genes) {
    SubsetMask s = SubsetMask::of(g);
    if (s.size() != static_cast<int>(g.size()))
      throw ValidationError("gene " + s.str() + " lists an element twice");
    masks.push_back(s);
  }
  return GeneticCode(nn, std::move(masks));
}

class GenericityError : public ValidationError {
public:
  GenericityError(const LengthVector &l, SubsetMask tie)
      : ValidationError("length vector (" + l.str() + ") is not generic: subset " + tie.str() +
                        " has exactly half the total length"),
        tie_(tie) {}
  SubsetMask tie() const { return tie_; }

private:
  SubsetMask tie_;
};

inline GeneticCode genetic_code(const LengthVector &l) {
  const int n = l.n();
  detail::SubsetSums sums(l);
  const std::size_t count = std::size_t{1} << (n - 1);
  for (std::size_t mask = 0; mask < count; ++mask)
    if (sums.compare(mask) == 0)
      throw GenericityError(l, SubsetMask(static_cast<std::uint32_t>(mask)).with(n));
  std::vector<SubsetMask> genes;
  for (std::size_t mask = 0; mask < count; ++mask) {
    if (sums.compare(mask) > 0)
      continue;
    SubsetMask s = SubsetMask(static_cast<std::uint32_t>(mask)).with(n);
    bool maximal = true;
    for (auto c : upper_covers(s, n))
      if (sums.compare(c.without(n).bits()) < 0) {
        maximal = false;
        break;
      }
    if (maximal)
      genes.push_back(s);
  }
  return GeneticCode(n, std::move(genes));
}

/// Subgees: T ⊆ {1..n-1} with T ∪ {n} below some gene.
class SubgeeLattice {
public:
  explicit SubgeeLattice(const GeneticCode &code) : n_(code.n()) {
    const std::size_t count = std::size_t{1} << (n_ - 1);
    member_.assign(count, false);
    for (std::size_t mask = 0; mask < count; ++mask) {
      SubsetMask t(static_cast<std::uint32_t>(mask));
      if (code.is_short_set(t.with(n_))) {
        member_[mask] = true;
        all_.push_back(t);
      }
    }
    std::sort(all_.begin(), all_.end(), [](SubsetMask a, SubsetMask b) {
      if (a.size() != b.size())
        return a.size() < b.size();
      return a.ascending() < b.ascending();
    });
    for (int i = 1; i < n_; ++i)
      if (contains(SubsetMask::singleton(i)))
        k_ = i;
    s_ = code.max_gee_size();
  }

  int n() const { return n_; }
  bool contains(SubsetMask t) const {
    return t.subset_of(SubsetMask::range(n_ - 1)) && member_[t.bits()];
  }
  /// Sorted by size, then ascending element lists.
  const std::vector<SubsetMask> &subgees() const { return all_; }
  int k() const { return k_; }
  int s() const { return s_; }

private:
  int n_;
  std::vector<bool> member_;
  std::vector<SubsetMask> all_;
  int k_ = 0;
  int s_ = 0;
};

inline SubgeeLattice subgee_lattice(const GeneticCode &code) { return SubgeeLattice(code); }

struct Unrealizable {
  std::string reason;
  Rational best_margin; ///< optimal slack of the LP; <= 0 certifies infeasibility
};

namespace detail {

/// Row of coefficients on the increments d_1..d_n (ℓ_i = d_1 + ... + d_i)
/// for sum_{S} ℓ - sum_{not S} ℓ.
inline std::vector<Rational> signed_sum_row(SubsetMask s, int n) {
  std::vector<Rational> row(static_cast<std::size_t>(n));
  long acc = 0;
  for (int i = n; i >= 1; --i) {
    acc += s.contains(i) ? 1 : -1;
    row[static_cast<std::size_t>(i - 1)] = acc;
  }
  return row;
}

struct MarginResult {
  Rational margin;
  std::vector<Rational> lengths;
};

/// Maximize t subject to: sets in `shorts` have margin >= t on the short
/// side, sets in `longs` margin >= t on the long side, 0 < ℓ_1 (>= t),
/// ℓ nondecreasing, ℓ_n = 1.
inline MarginResult max_margin(int n, const std::vector<SubsetMask> &shorts, const std::vector<SubsetMask> &longs) {
  // variables: d_1..d_n, t+, t-
  const std::size_t nv = static_cast<std::size_t>(n) + 2;
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  auto add = [&](std::vector<Rational> row, Rational rhs) {
    row.resize(nv);
    a.push_back(std::move(row));
    b.push_back(std::move(rhs));
  };
  std::vector<Rational> norm(nv);
  for (int i = 0; i < n; ++i)
    norm[static_cast<std::size_t>(i)] = 1;
  add(norm, 1);
  for (auto &x : norm)
    x = -x;
  add(norm, -1);
  {
    std::vector<Rational> row(nv);
    row[0] = -1;
    row[nv - 2] = 1;
    row[nv - 1] = -1;
    add(row, 0);
  }
  for (auto s : shorts) {
    auto row = signed_sum_row(s, n);
    row.resize(nv);
    row[nv - 2] = 1;
    row[nv - 1] = -1;
    add(row, 0);
  }
  for (auto s : longs) {
    auto row = signed_sum_row(s, n);
    for (auto &x : row)
      x = -x;
    row.resize(nv);
    row[nv - 2] = 1;
    row[nv - 1] = -1;
    add(row, 0);
  }
  std::vector<Rational> c(nv);
  c[nv - 2] = 1;
  c[nv - 1] = -1;
  auto sol = lp::maximize(a, b, c);
  if (sol.status != lp::Status::Optimal)
    throw InvariantError("margin LP did not reach an optimum");
  MarginResult out;
  out.margin = sol.value;
  Rational acc;
  for (int i = 0; i < n; ++i) {
    acc += sol.x[static_cast<std::size_t>(i)];
    out.lengths.push_back(acc);
  }
  return out;
}

/// Smallest positive integer multiple of the lengths, divided by their gcd.
inline LengthVector integral_witness(const std::vector<Rational> &lengths) {
  Integer lcm = 1;
  for (const auto &x : lengths)
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.denominator().get_mpz_t());
  std::vector<Integer> w;
  Integer g = 0;
  for (const auto &x : lengths) {
    w.push_back(x.numerator() * (lcm / x.denominator()));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), w.back().get_mpz_t());
  }
  std::vector<Rational> out;
  for (auto &x : w)
    out.emplace_back(Integer(x / g));
  return LengthVector(std::move(out));
}

} // namespace detail

/// Minimal sets containing n that are not below any gene.
inline std::vector<SubsetMask> minimal_long_sets(const GeneticCode &code) {
  const int n = code.n();
  std::vector<SubsetMask> out;
  for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
    SubsetMask s = SubsetMask(mask).with(n);
    if (code.is_short_set(s))
      continue;
    bool minimal = true;
    for (auto c : lower_covers(s, n))
      if (!code.is_short_set(c)) {
        minimal = false;
        break;
      }
    if (minimal)
      out.push_back(s);
  }
  return out;
}

using Realization = std::variant<LengthVector, Unrealizable>;

/// A generic length vector with the given genetic code, or a certificate
/// (non-positive optimal margin) that none exists.
inline Realization realize(const GeneticCode &code) {
  const int n = code.n();
  auto longs = minimal_long_sets(code);
  auto res = detail::max_margin(n, code.genes(), longs);
  if (res.margin.sign() <= 0)
    return Unrealizable{"strict inequality system has optimal margin " + res.margin.str(), res.margin};
  LengthVector witness = detail::integral_witness(res.lengths);
  if (genetic_code(witness) != code)
    throw InvariantError("realize: witness (" + witness.str() + ") has code " + genetic_code(witness).str() +
                         ", expected " + code.str());
  return witness;
}

namespace detail {

/// Depth-first search over the sets containing n, taken in a linear
/// extension of the order; each set is declared short or long, subject to
/// monotonicity and exact LP feasibility of the declarations so far.
class CodeEnumerator {
public:
  explicit CodeEnumerator(int n) : n_(n) {
    for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask)
      order_.push_back(SubsetMask(mask).with(n));
    std::sort(order_.begin(), order_.end(), [](SubsetMask a, SubsetMask b) {
      if (a.element_sum() != b.element_sum())
        return a.element_sum() < b.element_sum();
      return gene_less(a, b);
    });
    index_.assign(std::size_t{1} << (n - 1), 0);
    for (std::size_t i = 0; i < order_.size(); ++i)
      index_[order_[i].without(n).bits()] = i;
  }

  struct Node {
    std::size_t depth = 0;
    std::vector<signed char> status; // 0 undecided, 1 short, -1 long
    std::vector<Rational> witness;   // lengths satisfying the declarations strictly
  };

  Node root() const {
    Node r;
    r.status.assign(order_.size(), 0);
    // {n} short: nonempty codes only
    r.status[0] = 1;
    r.depth = 1;
    r.witness.assign(static_cast<std::size_t>(n_), Rational(1));
    r.witness.back() = Rational(1, 2) * Rational(n_);
    return r;
  }

  /// Children of a node, in deterministic order. Leaves produce a code.
  void expand(const Node &node, std::vector<Node> &children, std::vector<GeneticCode> &leaves) const {
    Node cur = node;
    // forced-long sets need no LP
    while (cur.depth < order_.size() && forced_long(cur, order_[cur.depth])) {
      cur.status[cur.depth] = -1;
      ++cur.depth;
    }
    if (cur.depth == order_.size()) {
      leaves.push_back(code_of(cur));
      return;
    }
    SubsetMask s = order_[cur.depth];
    // the parent's witness already settles one branch unless it ties on s
    const int side = (Rational(2) * sum(cur.witness, s) - total(cur.witness)).sign();
    for (signed char choice : {static_cast<signed char>(1), static_cast<signed char>(-1)}) {
      Node child = cur;
      child.status[cur.depth] = choice;
      child.depth = cur.depth + 1;
      if (side != -choice) {
        auto res = feasibility(child);
        if (res.margin.sign() <= 0)
          continue;
        child.witness = std::move(res.lengths);
      }
      children.push_back(std::move(child));
    }
  }

private:
  bool forced_long(const Node &node, SubsetMask s) const {
    for (auto c : lower_covers(s, n_))
      if (node.status[index_[c.without(n_).bits()]] == -1)
        return true;
    return false;
  }

  MarginResult feasibility(const Node &node) const {
    std::vector<SubsetMask> shorts, longs;
    for (std::size_t i = 0; i < node.depth; ++i) {
      SubsetMask s = order_[i];
      if (node.status[i] == 1) {
        bool implied = false;
        for (auto c : upper_covers(s, n_))
          if (node.status[index_[c.without(n_).bits()]] == 1) {
            implied = true;
            break;
          }
        if (!implied)
          shorts.push_back(s);
      } else if (!forced_long(node, s)) {
        longs.push_back(s);
      }
    }
    return max_margin(n_, shorts, longs);
  }

  GeneticCode code_of(const Node &node) const {
    std::vector<SubsetMask> genes;
    for (std::size_t i = 0; i < order_.size(); ++i) {
      if (node.status[i] != 1)
        continue;
      bool maximal = true;
      for (auto c : upper_covers(order_[i], n_))
        if (node.status[index_[c.without(n_).bits()]] == 1)
          maximal = false;
      if (maximal)
        genes.push_back(order_[i]);
    }
    return GeneticCode(n_, std::move(genes));
  }

  static Rational sum(const std::vector<Rational> &l, SubsetMask s) {
    Rational acc;
    for (std::size_t i = 0; i < l.size(); ++i)
      if (s.contains(static_cast<int>(i) + 1))
        acc += l[i];
    return acc;
  }
  static Rational total(const std::vector<Rational> &l) {
    Rational acc;
    for (const auto &x : l)
      acc += x;
    return acc;
  }

  int n_;
  std::vector<SubsetMask> order_;
  std::vector<std::size_t> index_;
};

} // namespace detail

/// All realizable nonempty genetic codes for n, canonically sorted.
/// Output is independent of `threads`.
inline std::vector<GeneticCode> enumerate_codes(int n, unsigned threads = 1) {
  if (n < 3 || n > 9)
    throw UnsupportedRange("enumerate_codes supports 3 <= n <= 9, got " + std::to_string(n));
  detail::CodeEnumerator en(n);
  std::vector<GeneticCode> codes;
  std::vector<detail::CodeEnumerator::Node> frontier{en.root()};
  threads = std::max(1u, threads);
  // breadth-first until there is enough independent work
  while (!frontier.empty() && frontier.size() < 8 * static_cast<std::size_t>(threads) && threads > 1) {
    std::vector<detail::CodeEnumerator::Node> next;
    for (const auto &node : frontier)
      en.expand(node, next, codes);
    frontier = std::move(next);
  }
  std::mutex mu;
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    std::vector<GeneticCode> local;
    while (true) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= frontier.size())
        break;
      std::vector<detail::CodeEnumerator::Node> stack{frontier[i]};
      while (!stack.empty()) {
        auto node = std::move(stack.back());
        stack.pop_back();
        std::vector<detail::CodeEnumerator::Node> children;
        en.expand(node, children, local);
        for (auto it = children.rbegin(); it != children.rend(); ++it)
          stack.push_back(std::move(*it));
      }
    }
    std::lock_guard lock(mu);
    codes.insert(codes.end(), local.begin(), local.end());
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back(worker);
  }
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  return codes;
}

} // namespace polyspace
