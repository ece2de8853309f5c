#pragma once

#include "polyspace/errors.hpp"
#include "polyspace/exact.hpp"
#include "polyspace/genetics.hpp"
#include "polyspace/linalg.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace polyspace {

inline bool is_zero(const Integer &x) { return x == 0; }
inline bool is_zero(const Rational &x) { return x.is_zero(); }

/// R^r_exp · V_{v_set}; v_set is squarefree because V_i^2 = -R V_i.
struct CohMonomial {
  int r_exp = 0;
  SubsetMask v_set;

  int degree() const { return r_exp + v_set.size(); }

  std::string str() const {
    std::string out;
    if (r_exp > 0)
      out += r_exp == 1 ? "R" : "R^" + std::to_string(r_exp);
    for (int i : v_set.ascending())
      out += (out.empty() ? "" : "*") + std::string("V") + std::to_string(i);
    return out.empty() ? "1" : out;
  }

  friend bool operator==(const CohMonomial &, const CohMonomial &) = default;
};

/// Column order inside a grading: R-power descending, then v_set ascending.
struct CohMonomialOrder {
  bool operator()(const CohMonomial &a, const CohMonomial &b) const {
    if (a.degree() != b.degree())
      return a.degree() < b.degree();
    if (a.r_exp != b.r_exp)
      return a.r_exp > b.r_exp;
    return a.v_set.ascending() < b.v_set.ascending();
  }
};

class CohRingContext;
using CohContextPtr = std::shared_ptr<const CohRingContext>;

template <typename C> class CohomElement;
using CohInt = CohomElement<Integer>;
using CohRat = CohomElement<Rational>;

/// The cohomology ring of N(ℓ) as a quotient of Z[R, V_1..V_{n-1}]:
/// non-subgee products vanish, R V_i + V_i^2 = 0, and for each grading d
/// and subgee T with |T| >= n-2-d the sum of R^{d-|S|} V_S over subgees S
/// disjoint from T vanishes.
class CohRingContext : public std::enable_shared_from_this<CohRingContext> {
public:
  struct Grading {
    std::vector<CohMonomial> monomials; ///< column order
    std::map<CohMonomial, std::size_t, CohMonomialOrder> column;
    linalg::Echelon echelon;
    std::vector<Integer> smith;         ///< invariant factors of the relation lattice
    std::vector<CohMonomial> basis;     ///< non-pivot monomials
    std::size_t listed_relations = 0;   ///< rows before ideal closure
  };

  static CohContextPtr build(const GeneticCode &code) {
    return std::shared_ptr<const CohRingContext>(new CohRingContext(code));
  }

  const GeneticCode &code() const { return code_; }
  const SubgeeLattice &lattice() const { return lattice_; }
  int n() const { return code_.n(); }
  int m() const { return code_.m(); }
  /// Number of nonzero V_i generators (singleton subgees are {1}..{k}).
  int k() const { return lattice_.k(); }

  /// Gradings 0..m+1 (index = half the cohomological degree).
  const Grading &grading(int d) const { return gradings_.at(static_cast<std::size_t>(d)); }
  int top() const { return m(); }

  int betti(int d) const {
    if (d < 0 || d > m() + 1)
      return 0;
    return static_cast<int>(grading(d).basis.size());
  }
  std::vector<int> betti_numbers() const {
    std::vector<int> out;
    for (int d = 0; d <= m(); ++d)
      out.push_back(betti(d));
    return out;
  }
  bool torsion_free() const {
    for (const auto &g : gradings_)
      for (const auto &x : g.smith)
        if (x != 1)
          return false;
    return true;
  }

  /// Product of two monomials in the free normal form; nullopt when zero.
  std::optional<std::pair<int, CohMonomial>> multiply(const CohMonomial &a, const CohMonomial &b) const {
    SubsetMask u = a.v_set | b.v_set;
    if (!lattice_.contains(u))
      return std::nullopt;
    int overlap = (a.v_set & b.v_set).size();
    return std::make_pair(overlap % 2 ? -1 : 1, CohMonomial{a.r_exp + b.r_exp + overlap, u});
  }

  /// Rewrites a combination of free normal-form monomials onto the basis.
  template <typename C> std::map<CohMonomial, C, CohMonomialOrder> reduce(const std::map<CohMonomial, C, CohMonomialOrder> &raw) const {
    std::map<CohMonomial, C, CohMonomialOrder> out;
    std::map<int, std::vector<C>> by_degree;
    for (const auto &[mono, c] : raw) {
      if (is_zero(c))
        continue;
      int d = mono.degree();
      if (d > m())
        continue;
      if (!lattice_.contains(mono.v_set))
        continue;
      auto &vec = by_degree[d];
      const auto &g = grading(d);
      vec.resize(g.monomials.size());
      vec[g.column.at(mono)] += c;
    }
    for (auto &[d, vec] : by_degree) {
      const auto &g = grading(d);
      for (std::size_t r = 0; r < g.echelon.rows.size(); ++r) {
        std::size_t p = g.echelon.pivot_cols[r];
        if (is_zero(vec[p]))
          continue;
        C f = vec[p];
        const auto &row = g.echelon.rows[r];
        for (std::size_t j = 0; j < row.size(); ++j)
          if (row[j] != 0)
            vec[j] -= f * C(row[j]);
      }
      for (std::size_t j = 0; j < vec.size(); ++j)
        if (!is_zero(vec[j]))
          out.emplace(g.monomials[j], vec[j]);
    }
    return out;
  }

private:
  explicit CohRingContext(const GeneticCode &code) : code_(code), lattice_(code) {
    if (code.empty())
      throw ValidationError("cohomology requires a nonempty genetic code");
    build_gradings();
  }

  void build_gradings() {
    const int mm = m();
    const auto &subgees = lattice_.subgees();
    for (int d = 0; d <= mm + 1; ++d) {
      Grading g;
      for (auto s : subgees)
        if (s.size() <= d)
          g.monomials.push_back(CohMonomial{d - s.size(), s});
      std::sort(g.monomials.begin(), g.monomials.end(), CohMonomialOrder{});
      for (std::size_t i = 0; i < g.monomials.size(); ++i)
        g.column.emplace(g.monomials[i], i);
      const std::size_t ncols = g.monomials.size();

      linalg::IntMatrix rows;
      for (auto t : subgees) {
        if (t.size() < mm + 1 - d)
          continue;
        linalg::IntRow row(ncols, 0);
        for (auto s : subgees)
          if (s.size() <= d && (s & t).empty())
            row[g.column.at(CohMonomial{d - s.size(), s})] += 1;
        rows.push_back(std::move(row));
      }
      g.listed_relations = rows.size();
      if (d > 0) {
        // ideal closure: generators times the relation lattice one grading down
        const auto &prev = gradings_.back();
        std::vector<CohMonomial> gens{CohMonomial{1, {}}};
        for (int i = 1; i <= k(); ++i)
          gens.push_back(CohMonomial{0, SubsetMask::singleton(i)});
        for (const auto &rel : prev.echelon.rows)
          for (const auto &gen : gens) {
            linalg::IntRow row(ncols, 0);
            for (std::size_t j = 0; j < rel.size(); ++j) {
              if (rel[j] == 0)
                continue;
              auto prod = multiply(prev.monomials[j], gen);
              if (!prod)
                continue;
              row[g.column.at(prod->second)] += prod->first * rel[j];
            }
            if (!linalg::is_zero_row(row))
              rows.push_back(std::move(row));
          }
      }
      g.smith = linalg::smith_diagonal(rows, ncols);
      g.echelon = linalg::hermite(rows, ncols);
      if (!g.echelon.unimodular_pivots())
        throw InvariantError("cohomology of " + code_.str() + " in grading " + std::to_string(d) +
                             ": relation lattice has a non-unit Hermite pivot; no monomial basis in the fixed order");
      std::vector<bool> pivot(ncols, false);
      for (auto p : g.echelon.pivot_cols)
        pivot[p] = true;
      for (std::size_t j = 0; j < ncols; ++j)
        if (!pivot[j])
          g.basis.push_back(g.monomials[j]);
      gradings_.push_back(std::move(g));
    }
  }

  GeneticCode code_;
  SubgeeLattice lattice_;
  std::vector<Grading> gradings_;
};

inline CohContextPtr build_context(const GeneticCode &code) { return CohRingContext::build(code); }

/// Element of H^*(N(ℓ)) with coefficients in Z or Q, kept reduced onto the
/// basis of each grading.
template <typename C> class CohomElement {
public:
  using Terms = std::map<CohMonomial, C, CohMonomialOrder>;

  explicit CohomElement(CohContextPtr ctx) : ctx_(std::move(ctx)) {}
  CohomElement(CohContextPtr ctx, const Terms &raw) : ctx_(std::move(ctx)), terms_(ctx_->reduce(raw)) {}

  static CohomElement constant(CohContextPtr ctx, const C &c) {
    return CohomElement(ctx, Terms{{CohMonomial{0, {}}, c}});
  }
  static CohomElement one(CohContextPtr ctx) { return constant(std::move(ctx), C(1)); }
  static CohomElement monomial(CohContextPtr ctx, CohMonomial mono, const C &c = C(1)) {
    return CohomElement(ctx, Terms{{mono, c}});
  }
  static CohomElement R(CohContextPtr ctx) { return monomial(std::move(ctx), CohMonomial{1, {}}); }
  static CohomElement V(CohContextPtr ctx, int i) {
    return monomial(std::move(ctx), CohMonomial{0, SubsetMask::singleton(i)});
  }

  const CohContextPtr &context() const { return ctx_; }
  const Terms &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  C coefficient(const CohMonomial &mono) const {
    auto it = terms_.find(mono);
    return it == terms_.end() ? C(0) : it->second;
  }

  /// Homogeneous part in grading d.
  CohomElement component(int d) const {
    CohomElement out(ctx_);
    for (const auto &[mono, c] : terms_)
      if (mono.degree() == d)
        out.terms_.emplace(mono, c);
    return out;
  }
  /// Coordinates in grading d, in the order of the grading's basis.
  std::vector<C> coordinates(int d) const {
    std::vector<C> out;
    if (d < 0 || d > ctx_->m())
      return out;
    for (const auto &b : ctx_->grading(d).basis)
      out.push_back(coefficient(b));
    return out;
  }
  bool homogeneous() const {
    if (terms_.empty())
      return true;
    int d = terms_.begin()->first.degree();
    for (const auto &[mono, c] : terms_)
      if (mono.degree() != d)
        return false;
    return true;
  }

  CohomElement &operator+=(const CohomElement &o) {
    check(o);
    for (const auto &[mono, c] : o.terms_) {
      auto [it, fresh] = terms_.emplace(mono, c);
      if (!fresh) {
        it->second += c;
        if (polyspace::is_zero(it->second))
          terms_.erase(it);
      }
    }
    return *this;
  }
  CohomElement &operator-=(const CohomElement &o) { return *this += o * C(-1); }
  friend CohomElement operator+(CohomElement a, const CohomElement &b) { return a += b; }
  friend CohomElement operator-(CohomElement a, const CohomElement &b) { return a -= b; }
  friend CohomElement operator*(CohomElement a, const C &s) {
    if (polyspace::is_zero(s))
      return CohomElement(a.ctx_);
    for (auto &[mono, c] : a.terms_)
      c *= s;
    return a;
  }
  friend CohomElement operator*(const C &s, CohomElement a) { return std::move(a) * s; }

  friend CohomElement operator*(const CohomElement &a, const CohomElement &b) {
    a.check(b);
    Terms raw;
    const int top = a.ctx_->m();
    for (const auto &[ma, ca] : a.terms_)
      for (const auto &[mb, cb] : b.terms_) {
        if (ma.degree() + mb.degree() > top)
          continue;
        auto prod = a.ctx_->multiply(ma, mb);
        if (!prod)
          continue;
        C c = ca * cb;
        if (prod->first < 0)
          c = -c;
        raw[prod->second] += c;
      }
    return CohomElement(a.ctx_, raw);
  }

  friend bool operator==(const CohomElement &a, const CohomElement &b) {
    return a.ctx_ == b.ctx_ && a.terms_ == b.terms_;
  }

  C constant_term() const { return coefficient(CohMonomial{0, {}}); }

  std::string str() const {
    if (terms_.empty())
      return "0";
    std::string out;
    for (const auto &[mono, c] : terms_) {
      std::string cs;
      if constexpr (std::is_same_v<C, Integer>)
        cs = c.get_str();
      else
        cs = c.str();
      out += (out.empty() ? "" : " + ") + (cs == "1" ? "" : cs + "*") + mono.str();
    }
    return out;
  }

private:
  void check(const CohomElement &o) const {
    if (ctx_ != o.ctx_)
      throw ValidationError("cohomology elements from different ring contexts");
  }

  CohContextPtr ctx_;
  Terms terms_;
};

template <typename C> CohomElement<C> coh_mul(const CohomElement<C> &x, const CohomElement<C> &y) { return x * y; }

template <typename C> CohomElement<C> pow(const CohomElement<C> &x, unsigned e) {
  auto r = CohomElement<C>::one(x.context());
  auto b = x;
  while (e) {
    if (e & 1)
      r = r * b;
    e >>= 1;
    if (e)
      b = b * b;
  }
  return r;
}

/// Inverse of an element with constant term 1; the augmentation ideal is
/// nilpotent so the geometric series terminates.
template <typename C> CohomElement<C> inverse(const CohomElement<C> &x) {
  if (x.constant_term() != C(1))
    throw std::invalid_argument("inverse: constant term must be 1");
  auto one = CohomElement<C>::one(x.context());
  auto u = one - x;
  auto r = one;
  auto term = one;
  for (int i = 1; i <= x.context()->m(); ++i) {
    term = term * u;
    r += term;
  }
  return r;
}

template <typename C> CohomElement<C> pow(const CohomElement<C> &x, long e) {
  if (e >= 0)
    return pow(x, static_cast<unsigned>(e));
  return pow(inverse(x), static_cast<unsigned>(-e));
}

inline CohRat to_rational(const CohInt &x) {
  CohRat::Terms t;
  for (const auto &[mono, c] : x.terms())
    t.emplace(mono, Rational(c));
  return CohRat(x.context(), t);
}

/// Coefficients reduced into [0, modulus).
inline CohInt reduce_mod(const CohInt &x, long modulus) {
  CohInt::Terms t;
  for (const auto &[mono, c] : x.terms()) {
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(modulus));
    if (r != 0)
      t.emplace(mono, r);
  }
  return CohInt(x.context(), t);
}

enum class Modulus { Integral, Mod4, Mod2 };

/// c(τ) = Π_{i<=k} (1 + 2V_i + R) · (1 + R)^{m+1-k}.
inline CohInt chern_tangent(const CohContextPtr &ctx) {
  auto one = CohInt::one(ctx);
  auto R = CohInt::R(ctx);
  auto c = pow(one + R, static_cast<long>(ctx->m() + 1 - ctx->k()));
  for (int i = 1; i <= ctx->k(); ++i)
    c = c * (one + CohInt::V(ctx, i) * Integer(2) + R);
  return c;
}

inline CohInt chern_normal(const CohContextPtr &ctx, Modulus mod = Modulus::Integral) {
  auto c = inverse(chern_tangent(ctx));
  switch (mod) {
  case Modulus::Mod4:
    return reduce_mod(c, 4);
  case Modulus::Mod2:
    return reduce_mod(c, 2);
  default:
    return c;
  }
}

/// Steenrod square Sq^2 on a homogeneous mod-2 class, via the Cartan
/// formula from Sq^2(g) = g^2 on the degree-2 generators.
inline CohInt sq2(const CohInt &x) {
  if (!x.homogeneous())
    throw ValidationError("sq2 needs a homogeneous class");
  const auto &ctx = x.context();
  CohInt out(ctx);
  for (const auto &[mono, c] : x.terms()) {
    auto base = CohInt::monomial(ctx, mono, c);
    if (mono.r_exp > 0)
      out += base * CohInt::R(ctx) * Integer(mono.r_exp);
    for (int i : mono.v_set.ascending())
      out += base * CohInt::V(ctx, i);
  }
  return reduce_mod(out, 2);
}

struct StiefelWhitney {
  CohInt tangent; ///< (1+R)^{m+1} mod 2
  CohInt normal;  ///< (1+R)^{-(m+1)} mod 2
  CohInt w2_normal;
};

inline StiefelWhitney sw_classes(const CohContextPtr &ctx) {
  auto one = CohInt::one(ctx);
  auto R = CohInt::R(ctx);
  const long e = ctx->m() + 1;
  StiefelWhitney w{reduce_mod(pow(one + R, e), 2), reduce_mod(pow(one + R, -e), 2), CohInt(ctx)};
  w.w2_normal = w.normal.component(1);
  return w;
}

struct FamilyCheckReport {
  std::string family; ///< "nk" or "nk1"
  std::vector<std::string> passed;
  std::vector<std::string> failed;
  bool ok() const { return failed.empty(); }
};

namespace detail {

/// Whether the listed homogeneous elements form a Z-basis of grading d.
inline bool is_integral_basis(const CohContextPtr &ctx, int d, const std::vector<CohInt> &elems) {
  const auto &basis = ctx->grading(d).basis;
  if (elems.size() != basis.size())
    return false;
  linalg::IntMatrix mat;
  for (const auto &e : elems)
    mat.push_back(e.coordinates(d));
  auto diag = linalg::smith_diagonal(mat, basis.size());
  if (diag.size() != basis.size())
    return false;
  for (const auto &x : diag)
    if (x != 1)
      return false;
  return true;
}

} // namespace detail

/// Checks the closed-form presentations for the codes {{n,k}} and
/// {{n,k,1}} against the computed quotient.
inline FamilyCheckReport relation_check_family(const CohContextPtr &ctx) {
  const auto &code = ctx->code();
  const int m = ctx->m();
  FamilyCheckReport rep;
  auto R = CohInt::R(ctx);
  auto V = [&](int i) { return CohInt::V(ctx, i); };
  auto P = [&](const CohInt &x, int e) { return pow(x, static_cast<unsigned>(e)); };
  auto expect = [&](bool cond, const std::string &what) { (cond ? rep.passed : rep.failed).push_back(what); };
  auto sgn = [](int e) { return Integer(e % 2 ? -1 : 1); };
  auto basis_check = [&](int d, const std::vector<CohInt> &elems, const std::string &what) {
    expect(detail::is_integral_basis(ctx, d, elems), what);
  };

  if (auto kk = code.family_nk()) {
    const int k = *kk;
    rep.family = "nk";
    for (int i = 1; i <= k; ++i)
      for (int j = i + 1; j <= k; ++j)
        expect((V(i) * V(j)).is_zero(), "V" + std::to_string(i) + "*V" + std::to_string(j) + " = 0");
    for (int i = 1; i <= k; ++i) {
      expect(V(i) * V(i) == R * V(i) * Integer(-1), "V" + std::to_string(i) + "^2 = -R*V" + std::to_string(i));
      expect(P(V(1), m) == P(V(i), m), "V1^m = V" + std::to_string(i) + "^m");
      expect(P(R, m) == P(V(i), m) * (sgn(m) * Integer(k - 1)), "R^m = (-1)^m (k-1) V" + std::to_string(i) + "^m");
    }
    expect(ctx->betti(m + 1) == 0, "R^{m+1} = V_i^{m+1} = 0");
    for (int j = 1; j < m; ++j) {
      std::vector<CohInt> b{P(R, j)};
      for (int i = 1; i <= k; ++i)
        b.push_back(P(V(i), j));
      basis_check(j, b, "basis {R^j, V_i^j} in grading " + std::to_string(j));
    }
    basis_check(m, {P(V(1), m)}, "basis {V1^m} in top grading");
  } else if (auto kk1 = code.family_nk1()) {
    const int k = *kk1;
    rep.family = "nk1";
    for (int i = 2; i <= k; ++i)
      for (int j = i + 1; j <= k; ++j)
        expect((V(i) * V(j)).is_zero(), "V" + std::to_string(i) + "*V" + std::to_string(j) + " = 0");
    for (int d = 1; d <= m - 2; ++d) {
      std::vector<CohInt> b{P(R, d)};
      for (int i = 1; i <= k; ++i)
        b.push_back(P(V(i), d));
      if (d >= 2)
        for (int i = 2; i <= k; ++i)
          b.push_back(V(1) * P(V(i), d - 1));
      basis_check(d, b, "basis in grading " + std::to_string(d));
    }
    if (m - 1 >= 1) {
      std::vector<CohInt> b{P(V(1), m - 1), P(V(k), m - 1)};
      if (m - 2 >= 1)
        for (int i = 2; i <= k; ++i)
          b.push_back(V(1) * P(V(i), m - 2));
      basis_check(m - 1, b, "basis {V1^{m-1}, Vk^{m-1}, V1*Vi^{m-2}} in grading m-1");
      for (int i = 2; i <= k; ++i)
        expect(P(V(i), m - 1) == P(V(k), m - 1), "V" + std::to_string(i) + "^{m-1} = Vk^{m-1}");
      expect(P(R, m - 1) == P(V(k), m - 1) * (sgn(m - 1) * Integer(k - 2)), "R^{m-1} = (-1)^{m-1} (k-2) Vk^{m-1}");
    }
    expect(P(R, m).is_zero(), "R^m = 0");
    for (int i = 2; i <= k; ++i) {
      expect(P(V(i), m).is_zero(), "V" + std::to_string(i) + "^m = 0");
      expect(V(1) * P(V(i), m - 1) == V(1) * P(V(k), m - 1), "V1*V" + std::to_string(i) + "^{m-1} = V1*Vk^{m-1}");
    }
    basis_check(m, {V(1) * P(V(k), m - 1)}, "V1*Vk^{m-1} generates the top grading");
    expect(P(V(1), m) == V(1) * P(V(k), m - 1) * Integer(k - 2), "V1^m = (k-2) V1*Vk^{m-1}");
    expect(ctx->betti(m + 1) == 0, "grading above m vanishes");
  } else {
    throw ValidationError("relation_check_family needs a code {{n,k}} or {{n,k,1}}, got " + code.str());
  }
  return rep;
}

} // namespace polyspace
