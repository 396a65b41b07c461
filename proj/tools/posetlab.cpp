// posetlab command line: build posets, compute indices, certify, verify.
//
// Exit codes: 0 success, 1 a mathematical check failed (witness printed),
// 2 usage or precondition error.

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "posetlab/acceptance.hpp"
#include "posetlab/constructions.hpp"
#include "posetlab/corpus.hpp"
#include "posetlab/flag_enum.hpp"
#include "posetlab/homology.hpp"
#include "posetlab/io.hpp"
#include "posetlab/sheaf.hpp"
#include "posetlab/subdivision.hpp"

using namespace posetlab;
using io::Json;

namespace {

struct Globals {
  bool json = false;
  std::uint64_t seed = 1;
  int max_rank = 5;
};

Globals g;

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

template <class P>
void emit_poly(const P& p) {
  if (g.json) emit(io::to_json(p));
  else std::cout << p.to_string() << "\n";
}

std::vector<std::string> labels_of(const GradedPoset& p, const Chain& x) {
  std::vector<std::string> out;
  for (auto e : x) out.push_back(p.label(e));
  return out;
}

/// Each input is parsed once, so "-" can feed both the poset and its boundary.
const Json& document(const std::string& path) {
  static std::map<std::string, Json> cache;
  auto it = cache.find(path);
  if (it == cache.end()) it = cache.emplace(path, io::parse(io::slurp(path))).first;
  return it->second;
}

GradedPoset read_poset(const std::string& path) { return io::poset_from_json(document(path)); }

std::vector<ElementId> parse_boundary(const GradedPoset& p, const std::string& text) {
  if (text == "auto") return derive_boundary(p);
  std::vector<ElementId> out;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');)
    if (!tok.empty()) out.push_back(p.element(tok));
  return out;
}

/// Boundary from --boundary, else from a "boundary" array in the input file.
std::vector<ElementId> boundary_for(const std::string& path, const GradedPoset& p, const std::string& text) {
  if (!text.empty()) return parse_boundary(p, text);
  const Json& doc = document(path);
  if (!doc.contains("boundary")) throw Error(Errc::ParseError, "no --boundary given and none in the input");
  std::vector<ElementId> out;
  for (const auto& b : doc.at("boundary")) out.push_back(b.get<ElementId>());
  return out;
}

int report_homology(const GradedPoset& p, const HomologyReport& r) {
  if (g.json) {
    emit({{"ok", r.ok},
          {"reason", r.reason},
          {"witness", labels_of(p, r.witness)},
          {"betti", r.witness_homology.betti}});
  } else if (r.ok) {
    std::cout << "true\n";
  } else {
    std::cout << "false: " << r.reason << "\n  reduced betti " << r.witness_homology.str() << "\n";
  }
  return r.ok ? 0 : 1;
}

int report_comparison(const std::string& smaller, const CdPoly& lhs, const std::string& larger, const CdPoly& rhs,
                      const CoeffwiseComparison& c) {
  if (g.json) {
    emit({{"holds", c.holds},
          {smaller, io::to_json(lhs)},
          {larger, io::to_json(rhs)},
          {"witness", c.witness ? c.witness->pretty() : ""}});
  } else {
    std::cout << smaller << ": " << lhs.to_string() << "\n" << larger << ": " << rhs.to_string() << "\n";
    std::cout << (c.holds ? "holds" : "fails") << "\n";
    if (!c.holds) std::cout << "witness: " << c.witness->pretty() << "\n";
  }
  return c.holds ? 0 : 1;
}

int sheaf_cd(const GradedPoset& p, const std::string& word, bool verify) {
  const CdPoly flag = cd_index(p);
  std::vector<CdWord> words;
  if (word.empty()) words = cd_words(p.rank());
  else words.push_back(CdWord::from_string(word));
  const Sheaf f = constant_sheaf(p);
  detail::check_base(p);
  SheafOptions opt;
  opt.check_base = false;
  bool all_ok = true;
  Json rows = Json::array();
  if (!g.json) std::cout << std::left << std::setw(10) << "word" << std::setw(8) << "sheaf" << "flag\n";
  for (const auto& w : words) {
    const auto got = cd_coefficient_via_CD(f, w, g.seed, opt);
    const Integer expect = flag.coeff(w);
    const bool ok = Integer(static_cast<unsigned long>(got)) == expect;
    all_ok = all_ok && ok;
    if (g.json) {
      rows.push_back({{"word", w.str()}, {"sheaf", got}, {"flag", expect.get_str()}, {"match", ok}});
    } else {
      std::cout << std::setw(10) << w.str() << std::setw(8) << got << expect << (ok ? "" : "  mismatch") << "\n";
    }
  }
  if (g.json) emit({{"seed", g.seed}, {"rows", rows}, {"match", all_ok}});
  return verify && !all_ok ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("POSETLAB_SEED")) g.seed = std::strtoull(env, nullptr, 10);

  CLI::App app{"Graded posets, cd-indices and their inequalities"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_flag("--json", g.json, "JSON output");
  app.add_option("--seed", g.seed, "seed for the D operation (default POSETLAB_SEED or 1)");
  app.add_option("--max-rank", g.max_rank, "rank cap for corpus runs");

  int result = 0;
  std::string file, file2, element, boundary, map_file, word;
  int count = 0;
  bool verify = false;

  // build
  auto* build = app.add_subcommand("build", "construct a poset (JSON on stdout)");
  build->require_subcommand(1);
  auto int_builder = [&](const char* name, const char* help, auto make) {
    auto* c = build->add_subcommand(name, help);
    c->add_option("k", count)->required();
    c->callback([&, make] { emit(io::to_json(make(count))); });
  };
  int_builder("boolean", "boolean algebra B_k minus its top", [](int k) { return boolean_algebra(k); });
  int_builder("polygon", "face poset of an m-gon", [](int m) { return polygon(m); });
  int_builder("cube", "face poset of the d-cube", [](int d) { return cube(d); });
  int_builder("cross", "face poset of the d-cross-polytope", [](int d) { return cross_polytope(d); });
  auto unary = [&](const char* name, const char* help, auto make) {
    auto* c = build->add_subcommand(name, help);
    c->add_option("file", file)->required();
    c->callback([&, make] { emit(io::to_json(make(read_poset(file)))); });
  };
  unary("pyr", "pyramid", [](const GradedPoset& p) { return pyr_poset(p); });
  unary("order-complex", "chains of P as a poset", [](const GradedPoset& p) { return order_complex(p); });
  unary("dual", "reverse the order (with the virtual top made real)",
        [](const GradedPoset& p) { return without_top(dual(with_top(p))); });
  auto binary = [&](const char* name, const char* help, auto make) {
    auto* c = build->add_subcommand(name, help);
    c->add_option("file1", file)->required();
    c->add_option("file2", file2)->required();
    c->callback([&, make] { emit(io::to_json(make(read_poset(file), read_poset(file2)))); });
  };
  binary("star", "star product", [](const auto& p, const auto& q) { return star_product(p, q); });
  binary("product", "Cartesian product of P u 1 and Q u 1, minus the top",
         [](const auto& p, const auto& q) { return cartesian_product(p, q); });
  binary("sum", "product of the posets themselves (free sum of polytopes)",
         [](const auto& p, const auto& q) { return product(p, q); });
  auto with_element = [&](const char* name, const char* help, auto make) {
    auto* c = build->add_subcommand(name, help);
    c->add_option("file", file)->required();
    c->add_option("--element", element)->required();
    c->callback([&, make] {
      const auto p = read_poset(file);
      emit(make(p, p.element(element)));
    });
  };
  with_element("semisusp", "semisuspension", [](const auto& p, ElementId nu) { return io::to_json(semisuspension(p, nu)); });
  with_element("subdivision-target", "[0,nu) * Pyr[nu,1) with the map from P",
               [](const auto& p, ElementId nu) { return io::to_json(subdivision_target_and_map(p, nu)); });
  with_element("collapse", "the collapse map of P", [](const auto& p, ElementId nu) { return io::to_json(collapse_map(p, nu)); });
  with_element("remove-upset", "P minus [nu,1) with its boundary", [](const auto& p, ElementId nu) {
    const auto pair = remove_upset(p, nu);
    return Json{{"poset", io::to_json(pair.poset)}, {"boundary", pair.boundary}};
  });
  {
    auto* c = build->add_subcommand("corpus", "a named corpus poset");
    c->add_option("name", word)->required();
    c->callback([&] { emit(io::to_json(corpus_entry(word).poset)); });
  }

  // indices
  auto* ab = app.add_subcommand("ab-index", "ab-index");
  ab->add_option("file", file)->required();
  ab->callback([&] { emit_poly(ab_index(read_poset(file))); });
  auto* cd = app.add_subcommand("cd-index", "cd-index (Eulerian posets)");
  cd->add_option("file", file)->required();
  cd->callback([&] { emit_poly(cd_index(read_poset(file))); });
  auto* ncd = app.add_subcommand("near-cd-index", "Phi + Psi_boundary of a near-Gorenstein* pair");
  ncd->add_option("file", file)->required();
  ncd->add_option("--boundary", boundary, "comma separated ids or labels, or auto");
  ncd->callback([&] {
    const auto p = read_poset(file);
    const auto r = near_cd_index(p, boundary_for(file, p, boundary));
    if (g.json) emit({{"phi", io::to_json(r.phi)}, {"boundary", io::to_json(r.boundary)}});
    else std::cout << "phi: " << r.phi.to_string() << "\nboundary: " << r.boundary.to_string() << "\n";
  });
  auto* lnu = app.add_subcommand("lambda-nu", "ab-index of Lambda_nu by the closed formula");
  lnu->add_option("file", file)->required();
  lnu->add_option("--element", element)->required();
  lnu->callback([&] {
    const auto p = read_poset(file);
    emit_poly(lambda_nu_ab_formula(p, p.element(element)));
  });
  auto* lnp = app.add_subcommand("lambda-nu-prime", "cd-index of the semisuspension by the closed formula");
  lnp->add_option("file", file)->required();
  lnp->add_option("--element", element)->required();
  lnp->callback([&] {
    const auto p = read_poset(file);
    emit_poly(lambda_nu_prime_cd(p, p.element(element)));
  });

  // check
  auto* check = app.add_subcommand("check", "homological certificates");
  check->require_subcommand(1);
  auto* cg = check->add_subcommand("gorenstein-star", "order complex is a homology sphere");
  cg->add_option("file", file)->required();
  cg->callback([&] {
    const auto p = read_poset(file);
    result = report_homology(p, gorenstein_star_report(p));
  });
  auto* cn = check->add_subcommand("near-gorenstein-star", "homology ball with the given boundary");
  cn->add_option("file", file)->required();
  cn->add_option("--boundary", boundary, "comma separated ids or labels, or auto");
  cn->callback([&] {
    const auto p = read_poset(file);
    const auto b = boundary_for(file, p, boundary);
    result = report_homology(p, near_gorenstein_star_report(p, b));
  });
  auto* ccm = check->add_subcommand("cm", "Cohen-Macaulay");
  ccm->add_option("file", file)->required();
  ccm->callback([&] {
    const auto p = read_poset(file);
    result = report_homology(p, cohen_macaulay_report(p));
  });

  // verify
  auto* ver = app.add_subcommand("verify", "inequalities and the decomposition");
  ver->require_subcommand(1);
  auto* vd = ver->add_subcommand("decomposition", "Psi(source) = sum Phi_sigma Psi[sigma,1)");
  vd->add_option("--map", map_file)->required();
  vd->callback([&] {
    const auto m = io::map_from_json(document(map_file));
    const auto rep = is_subdivision(m);
    if (!rep) {
      if (g.json) emit({{"ok", false}, {"reason", rep.reason}});
      else std::cout << "not a subdivision: " << rep.reason << "\n";
      result = 1;
      return;
    }
    try {
      const auto d = decompose(m, false);
      if (g.json) {
        Json terms = Json::array();
        for (const auto& [s, f] : d.phi) terms.push_back({{"sigma", m.target.label(s)}, {"phi", io::to_json(f)}});
        emit({{"ok", d.all_nonnegative}, {"source", io::to_json(d.source_index)}, {"fibers", terms}});
      } else {
        for (const auto& [s, f] : d.phi) std::cout << "phi[" << m.target.label(s) << "] = " << f.to_string() << "\n";
        std::cout << "source: " << d.source_index.to_string() << "\nassembled: " << d.assembled.to_string() << "\n";
        std::cout << (d.all_nonnegative ? "verified" : "negative fiber coefficient") << "\n";
      }
      result = d.all_nonnegative ? 0 : 1;
    } catch (const Error& e) {
      if (e.code() != Errc::DecompositionMismatch) throw;
      std::cout << "mismatch: " << e.what() << "\n";
      result = 1;
    }
  });
  auto* vm = ver->add_subcommand("main-inequality", "Psi(L) >= Psi[0,nu) Pyr(Psi[nu,1)) and its dual form");
  vm->add_option("file", file)->required();
  vm->add_option("--element", element)->required();
  vm->callback([&] {
    const auto p = read_poset(file);
    const auto r = verify_main_inequality(p, p.element(element));
    const auto w = r.witness();
    if (g.json) {
      emit({{"holds", r.holds()},
            {"lattice", r.lattice},
            {"lhs", io::to_json(r.lhs)},
            {"rhs", io::to_json(r.rhs)},
            {"rhs_dual", io::to_json(r.rhs_dual)},
            {"witness", w ? w->pretty() : ""}});
    } else {
      std::cout << "lhs: " << r.lhs.to_string() << "\nrhs: " << r.rhs.to_string()
                << "\nrhs (dual form): " << r.rhs_dual.to_string() << "\n";
      if (!r.lattice) std::cout << "note: input is not a lattice\n";
      std::cout << (r.holds() ? "holds" : "fails") << "\n";
      if (w) std::cout << "witness: " << w->pretty() << "\n";
    }
    result = r.holds() ? 0 : 1;
  });
  auto* vs = ver->add_subcommand("stanley", "cd(B_{n+1}) <= cd(L)");
  vs->add_option("file", file)->required();
  vs->callback([&] {
    const auto p = read_poset(file);
    result = report_comparison("boolean", cd_index(boolean_algebra(p.rank() + 1)), "poset", cd_index(p),
                               verify_stanley_minimum(p));
  });
  auto* vss = ver->add_subcommand("semisusp", "cd(L'_nu) <= cd(L)");
  vss->add_option("file", file)->required();
  vss->add_option("--element", element)->required();
  vss->callback([&] {
    const auto p = read_poset(file);
    const ElementId nu = p.element(element);
    result = report_comparison("semisuspension", lambda_nu_prime_cd(p, nu), "poset", cd_index(p),
                               verify_corollary_semisusp(p, nu));
  });

  // sheaf
  auto* sh = app.add_subcommand("sheaf-cd", "cd coefficients as stalk dimensions of C/D applied to the constant sheaf");
  sh->add_option("file", file)->required();
  sh->add_option("--word", word);
  sh->add_flag("--verify", verify, "exit 1 on any mismatch with the flag enumeration");
  sh->callback([&] { result = sheaf_cd(read_poset(file), word, verify); });

  // corpus
  auto* corp = app.add_subcommand("corpus", "the named test posets");
  corp->require_subcommand(1);
  corp->add_subcommand("list", "names, ranks and flags")->callback([&] {
    Json rows = Json::array();
    for (const auto& e : corpus()) {
      if (e.poset.rank() > g.max_rank) continue;
      if (g.json)
        rows.push_back({{"name", e.name}, {"rank", e.poset.rank()}, {"size", e.poset.size()},
                        {"lattice", e.lattice}, {"gorenstein", e.gorenstein}});
      else
        std::cout << std::left << std::setw(26) << e.name << " rank " << e.poset.rank() << "  " << std::setw(3)
                  << e.poset.size() << " elements" << (e.lattice ? "  lattice" : "") << "\n";
    }
    if (g.json) emit(rows);
  });
  corp->add_subcommand("run-all", "the acceptance checks")->callback([&] {
    AcceptanceOptions o;
    o.seed = g.seed;
    o.max_rank = g.max_rank;
    Json rows = Json::array();
    const auto results = run_acceptance(o, [&](const CriterionResult& r) {
      if (!g.json)
        std::cout << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.title << " ("
                  << std::fixed << std::setprecision(2) << r.seconds << " s) " << r.detail << std::endl;
    });
    bool all = true;
    for (const auto& r : results) {
      all = all && r.passed;
      rows.push_back({{"id", r.id}, {"passed", r.passed}, {"seconds", r.seconds}, {"detail", r.detail}});
    }
    if (g.json) emit(rows);
    result = all ? 0 : 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return result;
}
