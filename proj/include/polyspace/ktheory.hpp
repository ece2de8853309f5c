#pragma once

#include "polyspace/cohomology.hpp"
#include "polyspace/errors.hpp"
#include "polyspace/exact.hpp"
#include "polyspace/genetics.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace polyspace {

/// β^b_exp · Π α_i^{a_exps[i-1]}, where α_i = [L_i - 1] and β = [L_R - 1].
struct KMonomial {
  int b_exp = 0;
  std::vector<int> a_exps;

  int degree() const {
    int d = b_exp;
    for (int e : a_exps)
      d += e;
    return d;
  }
  SubsetMask support() const {
    SubsetMask s;
    for (std::size_t i = 0; i < a_exps.size(); ++i)
      if (a_exps[i] > 0)
        s.insert(static_cast<int>(i) + 1);
    return s;
  }
  int a(int i) const { return a_exps.at(static_cast<std::size_t>(i - 1)); }

  std::string str() const {
    std::string out;
    auto factor = [&](const std::string &g, int e) {
      if (e == 0)
        return;
      out += (out.empty() ? "" : "*") + g + (e == 1 ? "" : "^" + std::to_string(e));
    };
    factor("b", b_exp);
    for (std::size_t i = 0; i < a_exps.size(); ++i)
      factor("a" + std::to_string(i + 1), a_exps[i]);
    return out.empty() ? "1" : out;
  }

  friend bool operator==(const KMonomial &, const KMonomial &) = default;
};

/// Degree first, then β-power descending, then α exponents descending.
struct KMonomialOrder {
  bool operator()(const KMonomial &x, const KMonomial &y) const {
    if (x.degree() != y.degree())
      return x.degree() < y.degree();
    if (x.b_exp != y.b_exp)
      return x.b_exp > y.b_exp;
    return x.a_exps > y.a_exps;
  }
};

/// Free (unreduced) polynomial in β, α_1..α_k.
using KPoly = std::map<KMonomial, Rational, KMonomialOrder>;

enum class KMode { FamilyNK, FamilyNK1, GeneralQuotient };

inline std::string to_string(KMode mode) {
  switch (mode) {
  case KMode::FamilyNK:
    return "family_nk";
  case KMode::FamilyNK1:
    return "family_nk1";
  default:
    return "general_quotient";
  }
}

inline KMode parse_kmode(const std::string &s) {
  if (s == "family_nk")
    return KMode::FamilyNK;
  if (s == "family_nk1")
    return KMode::FamilyNK1;
  if (s == "general_quotient" || s == "general")
    return KMode::GeneralQuotient;
  throw ValidationError("unknown K-theory mode '" + s + "' (family_nk, family_nk1, general_quotient)");
}

class KRingContext;
using KContextPtr = std::shared_ptr<const KRingContext>;

/// A rewrite system for K(N(ℓ)) (families) or for its quotient by
/// (m-s+1)-fold products (general codes). Every monomial reduces to a
/// Z-linear combination of the distinguished basis.
class KRingContext {
public:
  static KContextPtr build(const GeneticCode &code, KMode mode) {
    return std::shared_ptr<const KRingContext>(new KRingContext(code, mode));
  }
  /// Family mode when the code is {{n,k}} or {{n,k,1}}, else the general quotient.
  static KContextPtr strongest(const GeneticCode &code) {
    if (code.family_nk())
      return build(code, KMode::FamilyNK);
    if (code.family_nk1())
      return build(code, KMode::FamilyNK1);
    return build(code, KMode::GeneralQuotient);
  }

  const GeneticCode &code() const { return code_; }
  const SubgeeLattice &lattice() const { return lattice_; }
  KMode mode() const { return mode_; }
  int m() const { return code_.m(); }
  int k() const { return k_; }
  int s() const { return lattice_.s(); }
  /// Monomials of higher total degree vanish.
  int truncation() const { return trunc_; }
  const std::vector<KMonomial> &basis() const { return basis_; }

  KMonomial unit() const { return KMonomial{0, std::vector<int>(static_cast<std::size_t>(k_), 0)}; }
  KMonomial beta(int e = 1) const {
    auto x = unit();
    x.b_exp = e;
    return x;
  }
  KMonomial alpha(int i, int e = 1) const {
    if (i < 1 || i > k_)
      throw ValidationError("alpha_" + std::to_string(i) + " is not a generator (k=" + std::to_string(k_) + ")");
    auto x = unit();
    x.a_exps[static_cast<std::size_t>(i - 1)] = e;
    return x;
  }

  bool is_basis(const KMonomial &x) const {
    return std::binary_search(basis_.begin(), basis_.end(), x, KMonomialOrder{});
  }

  /// Relations that define the rewrite system, as (lhs, rhs) pairs of free
  /// polynomials; lhs - rhs vanishes in the ring.
  std::vector<std::pair<std::string, KPoly>> defining_relations() const;

  KPoly reduce(const KPoly &raw) const {
    KPoly pending;
    for (const auto &[mono, c] : raw)
      if (!c.is_zero())
        pending[mono] += c;
    KPoly out;
    while (!pending.empty()) {
      auto node = pending.extract(pending.begin());
      const KMonomial &x = node.key();
      const Rational &c = node.mapped();
      if (c.is_zero())
        continue;
      if (x.degree() > trunc_)
        continue;
      auto repl = rewrite(x);
      if (!repl) {
        auto &slot = out[x];
        slot += c;
        if (slot.is_zero())
          out.erase(x);
        continue;
      }
      for (const auto &[y, d] : *repl)
        pending[y] += c * d;
    }
    return out;
  }

private:
  KRingContext(const GeneticCode &code, KMode mode) : code_(code), lattice_(code), mode_(mode) {
    if (code.empty())
      throw ValidationError("K-theory requires a nonempty genetic code");
    k_ = lattice_.k();
    if (mode == KMode::FamilyNK && !code.family_nk())
      throw ValidationError("family_nk mode needs a code {{n,k}}, got " + code.str());
    if (mode == KMode::FamilyNK1 && !code.family_nk1())
      throw ValidationError("family_nk1 mode needs a code {{n,k,1}} with k >= 2, got " + code.str());
    if (mode == KMode::FamilyNK1 && m() < 2)
      throw ValidationError("family_nk1 mode needs n >= 5");
    trunc_ = mode == KMode::GeneralQuotient ? m() - s() : m();
    build_basis();
  }

  bool subgee_support(const KMonomial &x) const { return lattice_.contains(x.support()); }

  /// One rewrite step; nullopt when x is a basis monomial.
  std::optional<KPoly> rewrite(const KMonomial &x) const {
    if (!subgee_support(x))
      return KPoly{};
    switch (mode_) {
    case KMode::FamilyNK:
      return rewrite_nk(x);
    case KMode::FamilyNK1:
      return rewrite_nk1(x);
    default:
      return rewrite_general(x);
    }
  }

  /// α_i β = -α_i^2 / (1 + α_i), expanded up to the truncation.
  KPoly eliminate_beta(const KMonomial &x, int i) const {
    KPoly out;
    KMonomial y = x;
    y.b_exp -= 1;
    for (int t = 0; y.degree() + 1 + t <= trunc_; ++t) {
      KMonomial z = y;
      z.a_exps[static_cast<std::size_t>(i - 1)] += 1 + t;
      out[z] += Rational(t % 2 ? 1 : -1);
    }
    return out;
  }

  std::optional<KPoly> rewrite_general(const KMonomial &x) const {
    // α_j^2 = -α_j β / (1 + β)
    for (int j = 1; j <= k_; ++j)
      if (x.a(j) >= 2) {
        KPoly out;
        KMonomial y = x;
        y.a_exps[static_cast<std::size_t>(j - 1)] -= 1;
        for (int t = 1; y.degree() + t <= trunc_; ++t) {
          KMonomial z = y;
          z.b_exp += t;
          out[z] += Rational(t % 2 ? -1 : 1);
        }
        return out;
      }
    return std::nullopt;
  }

  std::optional<KPoly> rewrite_nk(const KMonomial &x) const {
    const int m = this->m();
    SubsetMask supp = x.support();
    if (x.b_exp > 0 && !supp.empty())
      return eliminate_beta(x, supp.ascending().front());
    if (supp.empty()) {
      if (x.b_exp < m)
        return std::nullopt;
      // β^m = (-1)^m (k-1) α_1^m
      return KPoly{{alpha(1, m), Rational((m % 2 ? -1 : 1) * (k_ - 1))}};
    }
    int i = supp.ascending().front();
    int e = x.a(i);
    if (e < m || i == 1)
      return std::nullopt;
    return KPoly{{alpha(1, m), Rational(1)}};
  }

  std::optional<KPoly> rewrite_nk1(const KMonomial &x) const {
    const int m = this->m();
    SubsetMask supp = x.support();
    if (x.b_exp > 0 && !supp.empty())
      return eliminate_beta(x, supp.ascending().front());
    if (supp.empty()) {
      if (x.b_exp <= m - 2)
        return std::nullopt;
      if (x.b_exp == m - 1)
        return KPoly{{alpha(k_, m - 1), Rational(((m - 1) % 2 ? -1 : 1) * (k_ - 2))}};
      return KPoly{};
    }
    auto elems = supp.ascending();
    if (elems.size() == 2) {
      // support {1, i}
      int i = elems[1];
      int t = x.a(1), j = x.a(i);
      if (t >= 2) {
        KMonomial y = alpha(1);
        y.a_exps[static_cast<std::size_t>(i - 1)] = j + t - 1;
        return KPoly{{y, Rational(1)}};
      }
      if (j <= m - 2 || i == k_)
        return std::nullopt;
      KMonomial y = alpha(1);
      y.a_exps[static_cast<std::size_t>(k_ - 1)] = m - 1;
      return KPoly{{y, Rational(1)}};
    }
    int i = elems[0];
    int e = x.a(i);
    if (i == 1) {
      if (e <= m - 1)
        return std::nullopt;
      KMonomial y = alpha(1);
      y.a_exps[static_cast<std::size_t>(k_ - 1)] = m - 1;
      return KPoly{{y, Rational(k_ - 2)}};
    }
    if (e <= m - 2)
      return std::nullopt;
    if (e == m - 1)
      return i == k_ ? std::nullopt : std::optional<KPoly>(KPoly{{alpha(k_, m - 1), Rational(1)}});
    return KPoly{};
  }

  void build_basis() {
    const int m = this->m();
    std::vector<KMonomial> b{unit()};
    switch (mode_) {
    case KMode::FamilyNK:
      for (int j = 1; j <= m; ++j)
        b.push_back(alpha(1, j));
      for (int j = 1; j < m; ++j) {
        for (int i = 2; i <= k_; ++i)
          b.push_back(alpha(i, j));
        b.push_back(beta(j));
      }
      break;
    case KMode::FamilyNK1:
      for (int j = 1; j <= m - 2; ++j) {
        for (int i = 1; i <= k_; ++i)
          b.push_back(alpha(i, j));
        b.push_back(beta(j));
        for (int i = 2; i <= k_; ++i) {
          auto y = alpha(1);
          y.a_exps[static_cast<std::size_t>(i - 1)] = j;
          b.push_back(y);
        }
      }
      b.push_back(alpha(1, m - 1));
      if (k_ != 1)
        b.push_back(alpha(k_, m - 1));
      {
        auto y = alpha(1);
        y.a_exps[static_cast<std::size_t>(k_ - 1)] = m - 1;
        b.push_back(y);
      }
      break;
    default:
      for (auto sg : lattice_.subgees())
        for (int i = 0; i + sg.size() <= trunc_; ++i) {
          auto y = beta(i);
          for (int j : sg.ascending())
            y.a_exps[static_cast<std::size_t>(j - 1)] = 1;
          b.push_back(y);
        }
      break;
    }
    std::sort(b.begin(), b.end(), KMonomialOrder{});
    b.erase(std::unique(b.begin(), b.end()), b.end());
    basis_ = std::move(b);
  }

  GeneticCode code_;
  SubgeeLattice lattice_;
  KMode mode_;
  int k_ = 0;
  int trunc_ = 0;
  std::vector<KMonomial> basis_;
};

inline KContextPtr k_context(const GeneticCode &code, KMode mode) { return KRingContext::build(code, mode); }

class KElement {
public:
  explicit KElement(KContextPtr ctx) : ctx_(std::move(ctx)) {}
  KElement(KContextPtr ctx, const KPoly &raw) : ctx_(std::move(ctx)), terms_(ctx_->reduce(raw)) {}

  static KElement constant(KContextPtr ctx, const Rational &c) {
    auto u = ctx->unit();
    return KElement(ctx, KPoly{{u, c}});
  }
  static KElement one(KContextPtr ctx) { return constant(std::move(ctx), Rational(1)); }
  static KElement beta(KContextPtr ctx) {
    auto b = ctx->beta();
    return KElement(ctx, KPoly{{b, Rational(1)}});
  }
  static KElement alpha(KContextPtr ctx, int i) {
    auto a = ctx->alpha(i);
    return KElement(ctx, KPoly{{a, Rational(1)}});
  }

  const KContextPtr &context() const { return ctx_; }
  const KPoly &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational coefficient(const KMonomial &x) const {
    auto it = terms_.find(x);
    return it == terms_.end() ? Rational() : it->second;
  }
  Rational constant_term() const { return coefficient(ctx_->unit()); }

  KElement &operator+=(const KElement &o) {
    check(o);
    for (const auto &[x, c] : o.terms_) {
      auto &slot = terms_[x];
      slot += c;
      if (slot.is_zero())
        terms_.erase(x);
    }
    return *this;
  }
  KElement &operator-=(const KElement &o) { return *this += o * Rational(-1); }
  friend KElement operator+(KElement a, const KElement &b) { return a += b; }
  friend KElement operator-(KElement a, const KElement &b) { return a -= b; }
  friend KElement operator*(KElement a, const Rational &s) {
    if (s.is_zero())
      return KElement(a.ctx_);
    for (auto &[x, c] : a.terms_)
      c *= s;
    return a;
  }
  friend KElement operator*(const Rational &s, KElement a) { return std::move(a) * s; }
  friend KElement operator*(const KElement &a, const KElement &b) {
    a.check(b);
    KPoly raw;
    const int top = a.ctx_->truncation();
    for (const auto &[x, c] : a.terms_)
      for (const auto &[y, d] : b.terms_) {
        if (x.degree() + y.degree() > top)
          continue;
        KMonomial z = x;
        z.b_exp += y.b_exp;
        for (std::size_t i = 0; i < z.a_exps.size(); ++i)
          z.a_exps[i] += y.a_exps[i];
        raw[z] += c * d;
      }
    return KElement(a.ctx_, raw);
  }
  friend bool operator==(const KElement &a, const KElement &b) { return a.ctx_ == b.ctx_ && a.terms_ == b.terms_; }

  std::string str() const {
    if (terms_.empty())
      return "0";
    std::string out;
    for (const auto &[x, c] : terms_) {
      std::string cs = c.str();
      out += (out.empty() ? "" : " + ") + (cs == "1" ? "" : cs + "*") + x.str();
    }
    return out;
  }

private:
  void check(const KElement &o) const {
    if (ctx_ != o.ctx_)
      throw ValidationError("K-theory elements from different ring contexts");
  }
  KContextPtr ctx_;
  KPoly terms_;
};

inline KElement k_mul(const KElement &x, const KElement &y) { return x * y; }

inline KElement pow(const KElement &x, unsigned e) {
  auto r = KElement::one(x.context());
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

inline KElement inverse(const KElement &x) {
  if (x.constant_term() != Rational(1))
    throw std::invalid_argument("K inverse: constant term must be 1");
  auto one = KElement::one(x.context());
  auto u = one - x;
  auto r = one;
  auto term = one;
  for (int i = 1; i <= x.context()->truncation(); ++i) {
    term = term * u;
    r += term;
  }
  return r;
}

inline KElement pow(const KElement &x, long e) {
  return e >= 0 ? pow(x, static_cast<unsigned>(e)) : pow(inverse(x), static_cast<unsigned>(-e));
}

/// Σ_j s[j] y^j for a ring element y with no constant term.
inline KElement substitute(const TruncatedSeries &s, const KElement &y) {
  auto out = KElement(y.context());
  auto power = KElement::one(y.context());
  for (int j = 0; j <= s.degree(); ++j) {
    if (!s[j].is_zero())
      out += power * s[j];
    power = power * y;
    if (power.is_zero())
      break;
  }
  return out;
}

/// Least t >= 0 with 2^t x integral in basis coordinates.
inline long integrality_gap(const KElement &x) {
  long worst = 0;
  for (const auto &[mono, c] : x.terms())
    worst = std::max(worst, -nu2(c).value());
  return worst;
}

/// Same, over pure β^i coordinates only.
inline long integrality_gap_pure_beta(const KElement &x) {
  long worst = 0;
  for (const auto &[mono, c] : x.terms())
    if (mono.support().empty())
      worst = std::max(worst, -nu2(c).value());
  return worst;
}

inline std::vector<std::pair<std::string, KPoly>> KRingContext::defining_relations() const {
  std::vector<std::pair<std::string, KPoly>> rels;
  const int m = this->m();
  auto mono_poly = [](const KMonomial &x, const Rational &c = Rational(1)) { return KPoly{{x, c}}; };
  auto diff = [](KPoly a, const KPoly &b) {
    for (const auto &[x, c] : b)
      a[x] -= c;
    return a;
  };
  // α_i β (1 + α_i) + α_i^2 = 0
  for (int i = 1; i <= k_; ++i) {
    auto ab = alpha(i);
    ab.b_exp = 1;
    auto a2b = alpha(i, 2);
    a2b.b_exp = 1;
    rels.emplace_back("a" + std::to_string(i) + "*b = -a" + std::to_string(i) + "^2/(1+a" + std::to_string(i) + ")",
                      KPoly{{ab, Rational(1)}, {a2b, Rational(1)}, {alpha(i, 2), Rational(1)}});
  }
  for (int i = 1; i <= k_; ++i)
    for (int j = i + 1; j <= k_; ++j)
      if (!lattice_.contains(SubsetMask::singleton(i) | SubsetMask::singleton(j))) {
        auto y = alpha(i);
        y.a_exps[static_cast<std::size_t>(j - 1)] = 1;
        rels.emplace_back("a" + std::to_string(i) + "*a" + std::to_string(j) + " = 0", mono_poly(y));
      }
  if (mode_ == KMode::FamilyNK) {
    const Rational sgn((m % 2 ? -1 : 1) * (k_ - 1));
    for (int i = 2; i <= k_; ++i)
      rels.emplace_back("a1^m = a" + std::to_string(i) + "^m", diff(mono_poly(alpha(1, m)), mono_poly(alpha(i, m))));
    for (int i = 1; i <= k_; ++i) {
      rels.emplace_back("b^m = (-1)^m (k-1) a" + std::to_string(i) + "^m",
                        diff(mono_poly(beta(m)), mono_poly(alpha(i, m), sgn)));
      rels.emplace_back("a" + std::to_string(i) + "^{m+1} = 0", mono_poly(alpha(i, m + 1)));
    }
    rels.emplace_back("b^{m+1} = 0", mono_poly(beta(m + 1)));
  } else if (mode_ == KMode::FamilyNK1) {
    for (int i = 2; i < k_; ++i)
      rels.emplace_back("a" + std::to_string(i) + "^{m-1} = a" + std::to_string(k_) + "^{m-1}",
                        diff(mono_poly(alpha(i, m - 1)), mono_poly(alpha(k_, m - 1))));
    rels.emplace_back("b^{m-1} = (-1)^{m-1} (k-2) a_k^{m-1}",
                      diff(mono_poly(beta(m - 1)), mono_poly(alpha(k_, m - 1), Rational(((m - 1) % 2 ? -1 : 1) * (k_ - 2)))));
    // consequences listed with the presentation
    for (int i = 2; i <= k_; ++i)
      for (int t = 2; t <= m - 1; ++t)
        for (int j = 1; t + j <= m; ++j) {
          auto lhs = alpha(1, t);
          lhs.a_exps[static_cast<std::size_t>(i - 1)] = j;
          auto rhs = alpha(1);
          rhs.a_exps[static_cast<std::size_t>(i - 1)] = j + t - 1;
          rels.emplace_back("a1^" + std::to_string(t) + "*a" + std::to_string(i) + "^" + std::to_string(j) + " = a1*a" +
                                std::to_string(i) + "^" + std::to_string(j + t - 1),
                            diff(mono_poly(lhs), mono_poly(rhs)));
        }
    for (int i = 2; i <= k_; ++i)
      rels.emplace_back("a" + std::to_string(i) + "^m = 0", mono_poly(alpha(i, m)));
    rels.emplace_back("b^m = 0", mono_poly(beta(m)));
    auto top = alpha(1);
    top.a_exps[static_cast<std::size_t>(k_ - 1)] = m - 1;
    rels.emplace_back("a1^m = (k-2) a1*a_k^{m-1}", diff(mono_poly(alpha(1, m)), mono_poly(top, Rational(k_ - 2))));
  }
  return rels;
}

/// Chern character of a free polynomial: ch(α_i) = e^{V_i} - 1,
/// ch(β) = e^R - 1, into rational cohomology truncated at grading m.
class ChernCharacter {
public:
  ChernCharacter(KContextPtr kctx, CohContextPtr cctx) : kctx_(std::move(kctx)), cctx_(std::move(cctx)) {
    if (!(kctx_->code() == cctx_->code()))
      throw ValidationError("chern_character: contexts for different genetic codes");
    exp_minus_one_.push_back(exp_minus_one(CohRat::R(cctx_)));
    for (int i = 1; i <= kctx_->k(); ++i)
      exp_minus_one_.push_back(exp_minus_one(CohRat::V(cctx_, i)));
  }

  CohRat operator()(const KPoly &x) const {
    CohRat out(cctx_);
    for (const auto &[mono, c] : x) {
      auto term = power(0, mono.b_exp);
      for (int i = 1; i <= kctx_->k() && !term.is_zero(); ++i)
        if (mono.a(i) > 0)
          term = term * power(static_cast<std::size_t>(i), mono.a(i));
      out += term * c;
    }
    return out;
  }
  CohRat operator()(const KElement &x) const { return (*this)(x.terms()); }

private:
  CohRat exp_minus_one(const CohRat &x) const {
    CohRat out(cctx_);
    CohRat p = CohRat::one(cctx_);
    Rational fact(1);
    for (int j = 1; j <= cctx_->m(); ++j) {
      p = p * x;
      fact *= Rational(j);
      out += p * (Rational(1) / fact);
    }
    return out;
  }
  CohRat power(std::size_t gen, int e) const {
    auto &cache = cache_[gen];
    if (cache.empty())
      cache.push_back(CohRat::one(cctx_));
    while (static_cast<int>(cache.size()) <= e)
      cache.push_back(cache.back() * exp_minus_one_[gen]);
    return cache[static_cast<std::size_t>(e)];
  }

  KContextPtr kctx_;
  CohContextPtr cctx_;
  std::vector<CohRat> exp_minus_one_;
  mutable std::map<std::size_t, std::vector<CohRat>> cache_;
};

inline CohRat chern_character(const KElement &x, const CohContextPtr &cctx) {
  return ChernCharacter(x.context(), cctx)(x);
}

/// Components of grading <= d only.
inline CohRat truncate_above(const CohRat &x, int d) {
  CohRat out(x.context());
  for (int j = 0; j <= d; ++j)
    out += x.component(j);
  return out;
}

} // namespace polyspace
