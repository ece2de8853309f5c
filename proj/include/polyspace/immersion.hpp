#pragma once

#include "polyspace/cohomology.hpp"
#include "polyspace/errors.hpp"
#include "polyspace/exact.hpp"
#include "polyspace/genetics.hpp"
#include "polyspace/ktheory.hpp"
#include "polyspace/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace polyspace {

/// (1 + β/2)^e expanded through the truncation degree.
inline KElement half_beta_power(const KContextPtr &ctx, long e) {
  auto s = series_pow(one_plus(Rational(1, 2), ctx->truncation()), e);
  return substitute(s, KElement::beta(ctx));
}

/// Γ(η) = Π_{i<=k} (1 + α_i)^{-1} · (1 + β/2)^{-(m+1)}.
inline KElement gamma_normal(const KContextPtr &ctx) {
  auto g = half_beta_power(ctx, -(ctx->m() + 1));
  auto one = KElement::one(ctx);
  for (int i = 1; i <= ctx->k(); ++i)
    g = g * inverse(one + KElement::alpha(ctx, i));
  return g;
}

/// Γ(τ) from the line-bundle splitting: each L_R L_i^2 - 1 = 2α_i + β + α_iβ
/// contributes 1 + (2α_i + β + α_iβ)/2, the remaining copies of L_R
/// contribute 1 + β/2.
inline KElement gamma_tangent(const KContextPtr &ctx) {
  auto one = KElement::one(ctx);
  auto b = KElement::beta(ctx);
  auto g = half_beta_power(ctx, ctx->m() + 1 - ctx->k());
  for (int i = 1; i <= ctx->k(); ++i) {
    auto a = KElement::alpha(ctx, i);
    auto x = a * Rational(2) + b + a * b;
    g = g * (one + x * Rational(1, 2));
  }
  return g;
}

/// Γ(η) as the inverse of the line-bundle form of Γ(τ).
inline KElement gamma_normal_dual(const KContextPtr &ctx) { return inverse(gamma_tangent(ctx)); }

struct Nonimmersion {
  KMode mode = KMode::GeneralQuotient;
  int truncation = 0;
  long gap = 0;
  int dimension = 0;
};

inline Nonimmersion nonimmersion(const KContextPtr &ctx) {
  auto g = gamma_normal(ctx);
  Nonimmersion out;
  out.mode = ctx->mode();
  out.truncation = ctx->truncation();
  out.gap = ctx->mode() == KMode::GeneralQuotient ? integrality_gap_pure_beta(g) : integrality_gap(g);
  out.dimension = 2 * ctx->m() + 2 * static_cast<int>(out.gap) - 1;
  return out;
}

inline Nonimmersion nonimmersion(const GeneticCode &code, std::optional<KMode> mode = std::nullopt) {
  return nonimmersion(mode ? KRingContext::build(code, *mode) : KRingContext::strongest(code));
}

inline int nonimmersion_dim(const GeneticCode &code) { return nonimmersion(code).dimension; }

inline void check_ms(int m, int s) {
  if (m < 0 || s < 0 || s > m)
    throw ValidationError("need 0 <= s <= m, got m=" + std::to_string(m) + " s=" + std::to_string(s));
}

/// max_{0<=i<=m-s} (i - ν binom(m+i, i)).
inline long M_formula(int m, int s) {
  check_ms(m, s);
  long best = 0;
  for (int i = 0; i <= m - s; ++i)
    best = std::max(best, i - nu2(binom(m + i, i)).value());
  return best;
}

inline int M_formula_dim(int m, int s) { return 2 * m + 2 * static_cast<int>(M_formula(m, s)) - 1; }

/// Largest i <= m-s with binom(m+i, i) odd, as a dimension 2m+2i-1.
inline int sw_nonimmersion_dim(int m, int s) {
  check_ms(m, s);
  int best = 0;
  for (int i = 0; i <= m - s; ++i)
    if (binom(m + i, i) % 2 != 0)
      best = i;
  return 2 * m + 2 * best - 1;
}

struct Range {
  int lo = 0, hi = 0;
  static Range parse(const std::string &text) {
    auto colon = text.find(':');
    try {
      std::size_t used = 0;
      Range r;
      if (colon == std::string::npos) {
        r.lo = r.hi = std::stoi(text, &used);
        if (used != text.size())
          throw std::invalid_argument(text);
      } else {
        r.lo = std::stoi(text.substr(0, colon), &used);
        if (used != colon)
          throw std::invalid_argument(text);
        auto rest = text.substr(colon + 1);
        r.hi = std::stoi(rest, &used);
        if (used != rest.size())
          throw std::invalid_argument(text);
      }
      if (r.lo > r.hi)
        throw ValidationError("empty range '" + text + "'");
      return r;
    } catch (const std::logic_error &e) {
      if (dynamic_cast<const ValidationError *>(&e))
        throw;
      throw ValidationError("malformed range '" + text + "' (expected lo:hi)");
    }
  }
};

struct Table1 {
  Range m, s;
  std::vector<std::vector<int>> values; ///< values[m - m.lo][s - s.lo]
  int at(int mm, int ss) const {
    return values.at(static_cast<std::size_t>(mm - m.lo)).at(static_cast<std::size_t>(ss - s.lo));
  }
};

inline Table1 table1(Range m, Range s) {
  Table1 t{m, s, {}};
  for (int mm = m.lo; mm <= m.hi; ++mm) {
    std::vector<int> row;
    for (int ss = s.lo; ss <= s.hi; ++ss)
      row.push_back(M_formula_dim(mm, ss));
    t.values.push_back(std::move(row));
  }
  return t;
}

/// Trace of the α_k^{m-1} coordinate of Γ(η) for the code {{n,k,1}}.
struct Nk1Certificate {
  int n = 0, k = 0, m = 0;
  Rational coordinate;        ///< exact coefficient of α_k^{m-1}
  Valuation valuation = Valuation::infinite(); ///< ν(coordinate)
  long target = 0;            ///< α(m) - m
  Rational beta_part;         ///< (-1)^{m-1}(k-2) binom(-m-1, m-1) / 2^{m-1}
  Rational all_part;          ///< [x^{m-1}] Σ_{t>0} (-x)^t (1+x)^{m+1}/(1+x/2)^{m+1}
  bool decomposition_holds = false; ///< coordinate = beta_part + (k-1) all_part
  bool certified = false;     ///< k odd and valuation == target
};

inline Nk1Certificate refined_nk1_certificate(int n, int k) {
  if (n < 5 || k < 2 || k >= n)
    throw ValidationError("refined certificate needs n >= 5 and 1 < k < n");
  GeneticCode code(n, {SubsetMask::of({n, k, 1})});
  auto ctx = KRingContext::build(code, KMode::FamilyNK1);
  const int m = code.m();
  Nk1Certificate c;
  c.n = n;
  c.k = k;
  c.m = m;
  c.target = alpha(static_cast<std::uint64_t>(m)) - m;
  c.coordinate = gamma_normal(ctx).coefficient(ctx->alpha(k, m - 1));
  c.valuation = nu2(c.coordinate);

  c.beta_part = Rational(binom(-m - 1, m - 1)) * pow2(-(m - 1)) * Rational(((m - 1) % 2 ? -1 : 1) * (k - 2));
  auto f = series_pow(one_plus(Rational(1), m), m + 1) * series_pow(one_plus(Rational(1, 2), m), -(m + 1));
  for (int t = 1; t <= m - 1; ++t)
    c.all_part += t % 2 ? -f[m - 1 - t] : f[m - 1 - t];
  c.decomposition_holds = c.coordinate == c.beta_part + Rational(k - 1) * c.all_part;
  c.certified = k % 2 == 1 && !c.valuation.is_infinite() && c.valuation.value() == c.target;
  return c;
}

/// ν([x^i] ((1+2x)/(1+x))^{m+1}) for i = 0..m-1.
inline std::vector<Valuation> series_valuations(int m) {
  auto f = series_pow(one_plus(Rational(2), m), m + 1) * series_pow(one_plus(Rational(1), m), -(m + 1));
  std::vector<Valuation> out;
  for (int i = 0; i <= m - 1; ++i)
    out.push_back(nu2(f[i]));
  return out;
}

enum class Verdict { Immerses, DoesNotImmerse };

inline std::string to_string(Verdict v) { return v == Verdict::Immerses ? "Immerses" : "DoesNotImmerse"; }

struct ObstructionTrace {
  Verdict verdict = Verdict::DoesNotImmerse;
  Integer c_m;          ///< c_m(η) on the generator of H^{2m}
  bool m_even = false;
  std::vector<int> indeterminacy; ///< images of Sq^2 y + w_2 y over the basis of H^{2m-2}, mod 2
};

inline ObstructionTrace immersion_4m_minus_2(const CohContextPtr &ctx) {
  if (ctx->n() < 5)
    throw ValidationError("immersion in R^{4m-2} needs n >= 5");
  const int m = ctx->m();
  if (ctx->betti(m) != 1)
    throw InvariantError("top cohomology is not of rank 1");
  ObstructionTrace t;
  t.m_even = m % 2 == 0;
  t.c_m = chern_normal(ctx).coordinates(m).at(0);
  const bool even = t.c_m % 2 == 0;
  if (!t.m_even) {
    t.verdict = even ? Verdict::Immerses : Verdict::DoesNotImmerse;
    return t;
  }
  auto w2 = sw_classes(ctx).w2_normal;
  std::vector<std::vector<int>> gens;
  for (const auto &b : ctx->grading(m - 1).basis) {
    auto y = CohInt::monomial(ctx, b);
    auto img = reduce_mod(sq2(y) + w2 * y, 2).coordinates(m).at(0);
    t.indeterminacy.push_back(img == 0 ? 0 : 1);
    gens.push_back({t.indeterminacy.back()});
  }
  if (!even) {
    t.verdict = Verdict::DoesNotImmerse;
    return t;
  }
  Integer z = t.c_m / 2;
  int target = z % 2 == 0 ? 0 : 1;
  t.verdict = linalg::gf2_in_span(gens, {target}) ? Verdict::Immerses : Verdict::DoesNotImmerse;
  return t;
}

inline Verdict immerses_in_4m_minus_2(const GeneticCode &code) {
  return immersion_4m_minus_2(build_context(code)).verdict;
}

struct ImmersionReport {
  GeneticCode code;
  std::vector<Rational> lengths;
  int n = 0, m = 0, s = 0, k = 0;
  std::vector<int> betti;
  long gamma_gap = 0;
  int nonimmersion_dim = 0;
  int M_formula_dim = 0;
  int sw_dim = 0;
  std::optional<Verdict> immerses_4m_minus_2;
  KMode mode = KMode::GeneralQuotient;
  int truncation = 0;
};

inline ImmersionReport immersion_report(const GeneticCode &code) {
  if (code.empty())
    throw ValidationError("report needs a nonempty genetic code");
  ImmersionReport r;
  r.code = code;
  auto realized = realize(code);
  if (auto *u = std::get_if<Unrealizable>(&realized))
    throw ValidationError("code " + code.str() + " is not realizable: " + u->reason);
  r.lengths = std::get<LengthVector>(realized).values();
  auto cctx = build_context(code);
  r.n = code.n();
  r.m = code.m();
  r.k = cctx->k();
  r.s = code.max_gee_size();
  r.betti = cctx->betti_numbers();
  auto ni = nonimmersion(code);
  r.gamma_gap = ni.gap;
  r.nonimmersion_dim = ni.dimension;
  r.mode = ni.mode;
  r.truncation = ni.truncation;
  r.M_formula_dim = M_formula_dim(r.m, r.s);
  r.sw_dim = sw_nonimmersion_dim(r.m, r.s);
  if (r.n >= 5)
    r.immerses_4m_minus_2 = immersion_4m_minus_2(cctx).verdict;
  return r;
}

/// Reports in input order; work is shared across threads by index.
inline std::vector<ImmersionReport> immersion_reports(const std::vector<GeneticCode> &codes, unsigned threads = 1) {
  std::vector<std::optional<ImmersionReport>> slots(codes.size());
  std::vector<std::exception_ptr> errors(codes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < codes.size();) {
      try {
        slots[i] = immersion_report(codes[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < std::max(1u, threads); ++t)
      pool.emplace_back(worker);
    worker();
  }
  std::vector<ImmersionReport> out;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (errors[i])
      std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

} // namespace polyspace
