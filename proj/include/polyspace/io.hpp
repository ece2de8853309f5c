#pragma once

#include "polyspace/cohomology.hpp"
#include "polyspace/errors.hpp"
#include "polyspace/genetics.hpp"
#include "polyspace/immersion.hpp"
#include "polyspace/ktheory.hpp"

#include "json.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace polyspace::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchema = 1;

inline Json to_json(const GeneticCode &code) {
  Json genes = Json::array();
  for (auto g : code.genes())
    genes.push_back(g.descending());
  return Json{{"n", code.n()}, {"genes", genes}};
}

inline GeneticCode code_from_json(const Json &j) {
  try {
    int n = j.at("n").get<int>();
    std::vector<SubsetMask> genes;
    for (const auto &g : j.at("genes"))
      genes.push_back(SubsetMask::of(g.get<std::vector<int>>()));
    return GeneticCode(n, genes);
  } catch (const Json::exception &e) {
    throw ValidationError(std::string("malformed genetic code JSON: ") + e.what());
  }
}

inline Json to_json(const std::vector<Rational> &xs) {
  Json out = Json::array();
  for (const auto &x : xs)
    out.push_back(x.str());
  return out;
}

inline std::vector<Rational> rationals_from_json(const Json &j) {
  std::vector<Rational> out;
  for (const auto &x : j) {
    if (!x.is_string())
      throw ValidationError("rationals are stored as strings, got " + x.dump());
    out.push_back(Rational::parse(x.get<std::string>()));
  }
  return out;
}

inline Json to_json(const ImmersionReport &r) {
  return Json{{"code", to_json(r.code)},
              {"lengths", to_json(r.lengths)},
              {"n", r.n},
              {"m", r.m},
              {"s", r.s},
              {"k", r.k},
              {"betti", r.betti},
              {"gamma_gap", r.gamma_gap},
              {"nonimmersion_dim", r.nonimmersion_dim},
              {"M_formula_dim", r.M_formula_dim},
              {"sw_dim", r.sw_dim},
              {"immerses_4m_minus_2", r.immerses_4m_minus_2 ? Json(to_string(*r.immerses_4m_minus_2)) : Json(nullptr)},
              {"provenance", Json{{"mode", to_string(r.mode)}, {"truncation", r.truncation}}}};
}

inline ImmersionReport report_from_json(const Json &j) {
  try {
    ImmersionReport r;
    r.code = code_from_json(j.at("code"));
    r.lengths = rationals_from_json(j.at("lengths"));
    r.n = j.at("n").get<int>();
    r.m = j.at("m").get<int>();
    r.s = j.at("s").get<int>();
    r.k = j.at("k").get<int>();
    r.betti = j.at("betti").get<std::vector<int>>();
    r.gamma_gap = j.at("gamma_gap").get<long>();
    r.nonimmersion_dim = j.at("nonimmersion_dim").get<int>();
    r.M_formula_dim = j.at("M_formula_dim").get<int>();
    r.sw_dim = j.at("sw_dim").get<int>();
    const auto &v = j.at("immerses_4m_minus_2");
    if (!v.is_null()) {
      auto s = v.get<std::string>();
      if (s != "Immerses" && s != "DoesNotImmerse")
        throw ValidationError("unknown verdict '" + s + "'");
      r.immerses_4m_minus_2 = s == "Immerses" ? Verdict::Immerses : Verdict::DoesNotImmerse;
    }
    r.mode = parse_kmode(j.at("provenance").at("mode").get<std::string>());
    r.truncation = j.at("provenance").at("truncation").get<int>();
    return r;
  } catch (const Json::exception &e) {
    throw ValidationError(std::string("malformed catalog entry: ") + e.what());
  }
}

/// Catalog file: entries in canonical code order.
inline std::string write_catalog(int n, std::vector<ImmersionReport> reports) {
  std::sort(reports.begin(), reports.end(), [](const auto &a, const auto &b) { return a.code < b.code; });
  Json entries = Json::array();
  for (const auto &r : reports)
    entries.push_back(to_json(r));
  Json doc{{"schema", kSchema}, {"n", n}, {"count", reports.size()}, {"entries", entries}};
  return doc.dump(2) + "\n";
}

struct Catalog {
  int n = 0;
  std::vector<ImmersionReport> entries;
};

inline Catalog read_catalog(const std::string &text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error &e) {
    throw ValidationError(std::string("catalog is not valid JSON: ") + e.what());
  }
  if (!doc.contains("schema") || doc["schema"] != kSchema)
    throw ValidationError("unsupported catalog schema");
  Catalog c;
  c.n = doc.at("n").get<int>();
  for (const auto &e : doc.at("entries"))
    c.entries.push_back(report_from_json(e));
  return c;
}

inline Json cohomology_json(const CohContextPtr &ctx) {
  Json gradings = Json::array();
  for (int d = 0; d <= ctx->m(); ++d) {
    Json basis = Json::array();
    for (const auto &b : ctx->grading(d).basis)
      basis.push_back(b.str());
    gradings.push_back(Json{{"grading", 2 * d}, {"rank", ctx->betti(d)}, {"basis", basis}});
  }
  auto sw = sw_classes(ctx);
  return Json{{"schema", kSchema},
              {"code", to_json(ctx->code())},
              {"m", ctx->m()},
              {"k", ctx->k()},
              {"betti", ctx->betti_numbers()},
              {"torsion_free", ctx->torsion_free()},
              {"groups", gradings},
              {"chern_tangent", chern_tangent(ctx).str()},
              {"chern_normal", chern_normal(ctx).str()},
              {"sw_normal", sw.normal.str()},
              {"w2_normal", sw.w2_normal.str()}};
}

inline Json ktheory_json(const KContextPtr &kctx, bool dump_relations) {
  Json basis = Json::array();
  for (const auto &b : kctx->basis())
    basis.push_back(b.str());
  Json out{{"schema", kSchema},
           {"code", to_json(kctx->code())},
           {"mode", to_string(kctx->mode())},
           {"truncation", kctx->truncation()},
           {"basis", basis}};
  auto cctx = build_context(kctx->code());
  ChernCharacter ch(kctx, cctx);
  if (dump_relations) {
    Json rels = Json::array();
    bool all_ok = true;
    for (const auto &[name, rel] : kctx->defining_relations()) {
      bool ch_zero = truncate_above(ch(rel), kctx->truncation()).is_zero();
      bool reduces = KElement(kctx, rel).is_zero();
      all_ok = all_ok && ch_zero && reduces;
      rels.push_back(Json{{"relation", name}, {"ch_zero", ch_zero}, {"reduces_to_zero", reduces}});
    }
    out["relations"] = rels;
    out["ch_oracle_ok"] = all_ok;
  }
  out["gamma_normal"] = gamma_normal(kctx).str();
  auto ni = nonimmersion(kctx);
  out["integrality_gap"] = ni.gap;
  out["nonimmersion_dim"] = ni.dimension;
  return out;
}

inline std::string table1_tsv(const Table1 &t) {
  std::ostringstream os;
  os << "m/s";
  for (int s = t.s.lo; s <= t.s.hi; ++s)
    os << '\t' << s;
  os << '\n';
  for (int m = t.m.lo; m <= t.m.hi; ++m) {
    os << m;
    for (int s = t.s.lo; s <= t.s.hi; ++s)
      os << '\t' << t.at(m, s);
    os << '\n';
  }
  return os.str();
}

inline Json table1_json(const Table1 &t) {
  Json rows = Json::array();
  for (int m = t.m.lo; m <= t.m.hi; ++m)
    rows.push_back(Json{{"m", m}, {"values", t.values[static_cast<std::size_t>(m - t.m.lo)]}});
  return Json{{"schema", kSchema}, {"s_lo", t.s.lo}, {"s_hi", t.s.hi}, {"rows", rows}};
}

} // namespace polyspace::io
