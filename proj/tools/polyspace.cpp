// polyspace: genetic codes, cohomology, K-theory and immersion bounds for
// planar polygon spaces.

#include "polyspace/cohomology.hpp"
#include "polyspace/errors.hpp"
#include "polyspace/genetics.hpp"
#include "polyspace/immersion.hpp"
#include "polyspace/io.hpp"
#include "polyspace/ktheory.hpp"
#include "polyspace/verify.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

using namespace polyspace;
using io::Json;

namespace {

struct Options {
  std::string lengths, code, mode, format = "json", out, m_range = "16:31", s_range = "1:8";
  int n = 0;
  unsigned threads = 1;
  bool dump_relations = false;
};

unsigned default_threads() {
  if (const char *env = std::getenv("POLYSPACE_THREADS")) {
    try {
      int t = std::stoi(env);
      if (t >= 1)
        return static_cast<unsigned>(t);
    } catch (const std::exception &) {
    }
    throw ValidationError(std::string("POLYSPACE_THREADS must be a positive integer, got '") + env + "'");
  }
  return 1;
}

void emit(const Options &o, const std::string &text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f)
    throw ValidationError("cannot open '" + o.out + "' for writing");
  f << text;
}

void emit(const Options &o, const Json &j) { emit(o, j.dump() + "\n"); }

bool tsv(const Options &o) {
  if (o.format != "json" && o.format != "tsv")
    throw ValidationError("--format must be json or tsv, got '" + o.format + "'");
  return o.format == "tsv";
}

void json_only(const Options &o, const char *cmd) {
  if (tsv(o))
    throw ValidationError(std::string(cmd) + " has no TSV form");
}

GeneticCode code_arg(const Options &o) {
  if (o.code.empty())
    throw ValidationError("--code is required");
  return GeneticCode::parse(o.code, o.n > 0 ? std::optional<int>(o.n) : std::nullopt);
}

/// A code that actually occurs as the genetic code of some length vector.
GeneticCode manifold_code(const Options &o) {
  auto code = code_arg(o);
  if (code.empty())
    throw ValidationError("the empty code describes the empty manifold");
  auto realized = realize(code);
  if (auto *u = std::get_if<Unrealizable>(&realized))
    throw ValidationError("code " + code.str() + " is not realizable: " + u->reason);
  return code;
}

std::string lengths_str(const std::vector<Rational> &l) {
  std::string s;
  for (const auto &x : l)
    s += (s.empty() ? "" : ",") + x.str();
  return s;
}

void cmd_genetic_code(const Options &o) {
  if (o.lengths.empty())
    throw ValidationError("--lengths is required");
  auto code = genetic_code(LengthVector::parse(o.lengths));
  if (tsv(o))
    return emit(o, code.str() + "\n");
  Json j{{"schema", io::kSchema}};
  const auto body = io::to_json(code);
  for (auto it = body.begin(); it != body.end(); ++it)
    j[it.key()] = it.value();
  emit(o, j);
}

void cmd_enumerate(const Options &o) {
  auto codes = enumerate_codes(o.n, o.threads);
  if (tsv(o)) {
    std::string text;
    for (const auto &c : codes)
      text += c.str() + "\n";
    return emit(o, text);
  }
  Json list = Json::array();
  for (const auto &c : codes)
    list.push_back(io::to_json(c));
  emit(o, Json{{"schema", io::kSchema}, {"n", o.n}, {"count", codes.size()}, {"codes", list}});
}

void cmd_cohomology(const Options &o) {
  json_only(o, "cohomology");
  emit(o, io::cohomology_json(build_context(manifold_code(o))));
}

void cmd_ktheory(const Options &o) {
  json_only(o, "ktheory");
  auto code = manifold_code(o);
  auto ctx = o.mode.empty() ? KRingContext::strongest(code) : KRingContext::build(code, parse_kmode(o.mode));
  emit(o, io::ktheory_json(ctx, o.dump_relations));
}

void cmd_nonimmersion(const Options &o) {
  auto code = manifold_code(o);
  auto ni = o.mode.empty() ? nonimmersion(code) : nonimmersion(code, parse_kmode(o.mode));
  const int s = code.max_gee_size();
  Json j{{"schema", io::kSchema},
         {"code", io::to_json(code)},
         {"m", code.m()},
         {"s", s},
         {"mode", to_string(ni.mode)},
         {"truncation", ni.truncation},
         {"integrality_gap", ni.gap},
         {"nonimmersion_dim", ni.dimension},
         {"M_formula_dim", M_formula_dim(code.m(), s)},
         {"sw_dim", sw_nonimmersion_dim(code.m(), s)}};
  if (!tsv(o))
    return emit(o, j);
  std::string text;
  for (auto &[k, v] : j.items())
    if (k != "schema")
      text += k + "\t" + (k == "code" ? code.str() : v.dump()) + "\n";
  emit(o, text);
}

void cmd_immersion(const Options &o) {
  auto code = manifold_code(o);
  auto t = immersion_4m_minus_2(build_context(code));
  if (tsv(o))
    return emit(o, code.str() + "\t" + to_string(t.verdict) + "\n");
  emit(o, Json{{"schema", io::kSchema},
               {"code", io::to_json(code)},
               {"m", code.m()},
               {"dimension", 4 * code.m() - 2},
               {"c_m_normal", t.c_m.get_str()},
               {"indeterminacy_mod2", t.indeterminacy},
               {"verdict", to_string(t.verdict)}});
}

void cmd_table1(const Options &o) {
  auto t = table1(Range::parse(o.m_range), Range::parse(o.s_range));
  if (tsv(o))
    return emit(o, io::table1_tsv(t));
  emit(o, io::table1_json(t));
}

void cmd_report(const Options &o) {
  std::vector<GeneticCode> codes;
  int n = o.n;
  if (!o.code.empty()) {
    codes.push_back(manifold_code(o));
    n = codes.front().n();
  } else {
    if (n < 4)
      throw ValidationError("report needs --n >= 4 or --code");
    codes = enumerate_codes(n, o.threads);
  }
  auto reports = immersion_reports(codes, o.threads);
  if (!tsv(o))
    return emit(o, io::write_catalog(n, reports));
  std::string text = "code\tlengths\tbetti\tgamma_gap\tnonimmersion_dim\tM_formula_dim\tsw_dim\timmerses_4m_minus_2\tmode\n";
  for (const auto &r : reports) {
    std::string betti;
    for (int b : r.betti)
      betti += (betti.empty() ? "" : ",") + std::to_string(b);
    text += r.code.str() + "\t" + lengths_str(r.lengths) + "\t" + betti + "\t" + std::to_string(r.gamma_gap) + "\t" +
            std::to_string(r.nonimmersion_dim) + "\t" + std::to_string(r.M_formula_dim) + "\t" +
            std::to_string(r.sw_dim) + "\t" + (r.immerses_4m_minus_2 ? to_string(*r.immerses_4m_minus_2) : "-") +
            "\t" + to_string(r.mode) + "\n";
  }
  emit(o, text);
}

int cmd_verify(const Options &o) {
  auto results = verify::run_all(o.threads);
  bool ok = true;
  if (tsv(o)) {
    std::string text;
    for (const auto &r : results) {
      ok = ok && r.passed;
      text += std::to_string(r.id) + "\t" + (r.passed ? "PASS" : "FAIL") + "\t" + r.name + "\t" + r.detail + "\n";
    }
    emit(o, text);
  } else {
    Json checks = Json::array();
    for (const auto &r : results) {
      ok = ok && r.passed;
      checks.push_back(Json{{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    }
    emit(o, Json{{"schema", io::kSchema}, {"passed", ok}, {"checks", checks}});
  }
  return ok ? 0 : 3;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Genetic codes, cohomology, K-theory and immersion bounds for planar polygon spaces"};
  app.require_subcommand(1);
  Options o;
  int status = 0;

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--format", o.format, "json or tsv")->capture_default_str();
    sub->add_option("--out", o.out, "write to this file instead of stdout");
    sub->add_option("--threads", o.threads, "worker threads (default: $POLYSPACE_THREADS or 1)");
  };

  auto *gc = app.add_subcommand("genetic-code", "genetic code of a length vector");
  gc->add_option("--lengths", o.lengths, "comma-separated rationals, e.g. 1,1,2,2,3")->required();
  add_common(gc);

  auto *en = app.add_subcommand("enumerate", "all realizable nonempty genetic codes for n");
  en->add_option("--n", o.n, "number of edges (3..9)")->required();
  add_common(en);

  auto *co = app.add_subcommand("cohomology", "integral cohomology ring of N(l)");
  co->add_option("--code", o.code, "genetic code, e.g. {{7,4}}")->required();
  co->add_option("--n", o.n, "n, needed only for the empty code {}");
  add_common(co);

  auto *kt = app.add_subcommand("ktheory", "complex K-theory ring and Gamma class");
  kt->add_option("--code", o.code, "genetic code")->required();
  kt->add_option("--mode", o.mode, "family_nk, family_nk1 or general_quotient");
  kt->add_flag("--dump-relations", o.dump_relations, "list relations with Chern character check");
  add_common(kt);

  auto *ni = app.add_subcommand("nonimmersion", "nonimmersion dimension from the Gamma class");
  ni->add_option("--code", o.code, "genetic code")->required();
  ni->add_option("--mode", o.mode, "force a K-theory mode");
  add_common(ni);

  auto *im = app.add_subcommand("immersion-4m2", "decide immersion in R^{4m-2}");
  im->add_option("--code", o.code, "genetic code")->required();
  add_common(im);

  auto *tb = app.add_subcommand("table1", "nonimmersion dimensions 2m+2M-1 over a grid of (m, s)");
  tb->add_option("--m", o.m_range, "m range lo:hi")->capture_default_str();
  tb->add_option("--s", o.s_range, "s range lo:hi")->capture_default_str();
  add_common(tb);

  auto *rp = app.add_subcommand("report", "full immersion report per code");
  rp->add_option("--n", o.n, "report every enumerated code for this n");
  rp->add_option("--code", o.code, "report a single code");
  add_common(rp);

  auto *vf = app.add_subcommand("verify", "run the regression suite");
  add_common(vf);

  try {
    o.threads = default_threads();
    app.parse(argc, argv);
    if (o.threads < 1)
      throw ValidationError("--threads must be >= 1");
    if (*gc)
      cmd_genetic_code(o);
    else if (*en)
      cmd_enumerate(o);
    else if (*co)
      cmd_cohomology(o);
    else if (*kt)
      cmd_ktheory(o);
    else if (*ni)
      cmd_nonimmersion(o);
    else if (*im)
      cmd_immersion(o);
    else if (*tb)
      cmd_table1(o);
    else if (*rp)
      cmd_report(o);
    else if (*vf)
      status = cmd_verify(o);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  } catch (const ValidationError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvariantError &e) {
    std::cerr << "internal invariant failed: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return status;
}
