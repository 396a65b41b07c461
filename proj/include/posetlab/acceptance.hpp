#pragma once

// The end-to-end checks run by the acceptance binary and `corpus run-all`.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "posetlab/constructions.hpp"
#include "posetlab/corpus.hpp"
#include "posetlab/flag_enum.hpp"
#include "posetlab/homology.hpp"
#include "posetlab/ncpoly.hpp"
#include "posetlab/sheaf.hpp"
#include "posetlab/subdivision.hpp"

namespace posetlab {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0;
  double limit = 0;  // seconds; 0 = none
};

struct AcceptanceOptions {
  std::uint64_t seed = 1;
  int seeds_per_D = 100;
  int max_rank = 5;
};

namespace detail {

/// Collects failures; the first few are kept for the report.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (notes_.size() < 3) notes_.push_back(what);
  }
  void note(const std::string& s) { extra_ = s; }
  bool ok() const { return failures_ == 0; }
  std::string str() const {
    std::ostringstream os;
    os << checks_ << " checks, " << failures_ << " failed";
    if (!extra_.empty()) os << "; " << extra_;
    for (const auto& n : notes_) os << "; " << n;
    return os.str();
  }

 private:
  long checks_ = 0, failures_ = 0;
  std::vector<std::string> notes_;
  std::string extra_;
};

template <class F>
void guarded(Tally& t, const std::string& what, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    t.check(false, what + ": " + e.what());
  }
}

inline std::vector<const CorpusEntry*> filtered(const AcceptanceOptions& o, const std::function<bool(const CorpusEntry&)>& keep) {
  std::vector<const CorpusEntry*> out;
  for (const auto& e : corpus())
    if (e.poset.rank() <= o.max_rank && keep(e)) out.push_back(&e);
  return out;
}

inline CdPoly polygon_formula(int m) { return cd_c() * cd_c() + cd_d() * Integer(m - 2); }

}  // namespace detail

inline CriterionResult criterion_polygons(const AcceptanceOptions&) {
  detail::Tally t;
  for (int m = 2; m <= 12; ++m)
    t.check(cd_index(polygon(m)) == detail::polygon_formula(m), "polygon" + std::to_string(m));
  return {1, "polygon cd-index c^2+(n-2)d, n=2..12", t.ok(), t.str(), 0, 1};
}

inline CriterionResult criterion_main_inequality(const AcceptanceOptions& o) {
  detail::Tally t;
  for (const auto* e : inequality_corpus()) {
    if (e->poset.rank() > o.max_rank) continue;
    for (ElementId nu = 1; nu < e->poset.size(); ++nu)
      detail::guarded(t, e->name, [&] {
        const auto r = verify_main_inequality(e->poset, nu);
        t.check(r.holds(), e->name + " at " + e->poset.label(nu) + " fails at " +
                               (r.witness() ? r.witness()->pretty() : std::string("?")));
      });
  }
  const GradedPoset p2 = polygon(2);
  const auto r = verify_main_inequality(p2, p2.element("v1"));
  t.check(!r.holds() && r.witness() && r.witness()->pretty() == "d", "polygon2 at v1 should fail with witness d");
  t.note("polygon2 at v1 fails with witness " + (r.witness() ? r.witness()->pretty() : std::string("none")));
  return {2, "main inequality on lattices; polygon2 counterexample", t.ok(), t.str(), 0, 60};
}

inline CriterionResult criterion_decomposition(const AcceptanceOptions& o) {
  detail::Tally t;
  for (const auto* e : inequality_corpus()) {
    if (e->poset.rank() > o.max_rank) continue;
    for (ElementId nu = 1; nu < e->poset.size(); ++nu) {
      const std::string where = e->name + " at " + e->poset.label(nu);
      detail::guarded(t, where + " (pyramid map)", [&] {
        const auto d = decompose(subdivision_target_and_map(e->poset, nu));
        t.check(d.all_nonnegative, where + ": negative fiber index");
      });
      detail::guarded(t, where + " (collapse)", [&] {
        const auto d = decompose(collapse_map(e->poset, nu));
        t.check(d.all_nonnegative, where + ": negative fiber index");
      });
    }
  }
  return {3, "decomposition exact with non-negative fiber indices", t.ok(), t.str(), 0, 120};
}

inline CriterionResult criterion_stanley(const AcceptanceOptions& o) {
  detail::Tally t;
  for (const auto* e : detail::filtered(o, [](const CorpusEntry& c) { return is_lattice(c.poset); }))
    detail::guarded(t, e->name, [&] {
      if (!is_gorenstein_star(e->poset)) return;
      const auto r = verify_stanley_minimum(e->poset);
      t.check(r.holds, e->name + " below the boolean algebra at " + (r.witness ? r.witness->pretty() : ""));
    });
  return {4, "boolean algebra minimises the cd-index", t.ok(), t.str(), 0, 0};
}

inline CriterionResult criterion_lambda_formulas(const AcceptanceOptions& o) {
  detail::Tally t;
  for (const auto* e : detail::filtered(o, [](const CorpusEntry& c) { return is_lattice(c.poset); })) {
    for (ElementId nu = 1; nu < e->poset.size(); ++nu) {
      const std::string where = e->name + " at " + e->poset.label(nu);
      detail::guarded(t, where, [&] {
        t.check(ab_index(lambda_nu_poset(e->poset, nu)) == lambda_nu_ab_formula(e->poset, nu),
                where + ": Lambda_nu ab-index");
        t.check(cd_index(semisuspension(e->poset, nu)) == lambda_nu_prime_cd(e->poset, nu),
                where + ": semisuspension cd-index");
      });
    }
  }
  for (int k = 1; k <= 8; ++k) t.check(alpha_ab_form(k) == ab_expand(alpha(k)), "alpha_" + std::to_string(k));
  for (const auto* e : detail::filtered(o, [](const CorpusEntry& c) { return c.poset.rank() <= 4; })) {
    const GradedPoset& p = e->poset;
    for (ElementId tau = 0; tau < p.size(); ++tau) {
      detail::guarded(t, e->name, [&] {
        if (p.rank_to_top(tau) <= 4) t.check(pyr_alpha_recurrence_check(p, tau, kTop), e->name + " recurrence to top");
        const Bitset& up = p.up_set(tau);
        for (auto pi = up.find_first(); pi != Bitset::npos; pi = up.find_next(pi))
          if (pi != tau && p.rank_of(pi) - p.rank_of(tau) <= 4)
            t.check(pyr_alpha_recurrence_check(p, tau, pi), e->name + " recurrence");
      });
    }
  }
  return {5, "Lambda_nu / semisuspension formulas, alpha_k, Pyr-alpha recurrence", t.ok(), t.str(), 0, 0};
}

inline CriterionResult criterion_homology(const AcceptanceOptions& o) {
  detail::Tally t;
  for (const auto* e : detail::filtered(o, [](const CorpusEntry&) { return true; }))
    detail::guarded(t, e->name, [&] { t.check(is_gorenstein_star(e->poset), e->name + " not Gorenstein*"); });

  const GradedPoset path = GradedPoset::from_covers(2, {0, 1, 2}, {{0, 1}, {1, 2}});
  const GradedPoset sphere_minus_cell = remove_maximal(polygon(4), polygon(4).element("e1")).poset;
  const GradedPoset two_triangles = GradedPoset::from_covers(
      2, {0, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2},
      {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {0, 6}, {1, 7}, {2, 7}, {2, 8}, {3, 8}, {3, 9}, {1, 9},
       {4, 10}, {5, 10}, {5, 11}, {6, 11}, {6, 12}, {4, 12}});
  const GradedPoset ball = with_top(polygon(3));
  for (const auto* bad : {&path, &sphere_minus_cell, &two_triangles, &ball})
    t.check(!is_gorenstein_star(*bad), "a non-example was certified");

  int instances = 0;
  for (const auto* e : detail::filtered(o, [](const CorpusEntry& c) { return c.poset.rank() >= 1 && c.poset.rank() <= 4; })) {
    const auto tops = e->poset.maximal_elements();
    for (std::size_t i = 0; i < std::min<std::size_t>(tops.size(), 2); ++i)
      detail::guarded(t, e->name, [&] {
        const auto pair = remove_maximal(e->poset, tops[i]);
        t.check(is_near_gorenstein_star(pair.poset, pair.boundary), e->name + " minus a facet");
        const GradedPoset glued = cap_boundary(pair);
        t.check(is_gorenstein_star(glued) && isomorphic(glued, e->poset), e->name + " reglued");
        ++instances;
      });
  }
  t.check(instances >= 20, "fewer than 20 facet-removal instances");

  for (const auto* e : inequality_corpus()) {
    if (e->poset.rank() > o.max_rank) continue;
    for (ElementId nu = 1; nu < e->poset.size(); ++nu)
      detail::guarded(t, e->name, [&] {
        const auto pair = remove_upset(e->poset, nu);
        t.check(is_near_gorenstein_star(pair.poset, pair.boundary) && derive_boundary(pair.poset) == pair.boundary,
                e->name + " minus upset of " + e->poset.label(nu));
      });
  }
  t.note(std::to_string(instances) + " facet removal/regluing instances");
  return {6, "homology certification", t.ok(), t.str(), 0, 0};
}

inline CriterionResult criterion_sheaf(const AcceptanceOptions& o) {
  detail::Tally t;
  long applications = 0;
  for (const auto* e : detail::filtered(o, [](const CorpusEntry& c) { return c.poset.rank() <= 4; })) {
    const GradedPoset& p = e->poset;
    detail::guarded(t, e->name, [&] {
      if (!is_gorenstein_star(p)) return;
      const CdPoly flag = cd_index(p);
      const Sheaf f = constant_sheaf(p);
      detail::check_base(p);
      SheafOptions opt;
      opt.check_base = false;
      for (const auto& w : cd_words(p.rank())) {
        bool has_d = false;
        for (int i = 0; i < w.length(); ++i) has_d = has_d || w.letter(i);
        const int runs = has_d ? o.seeds_per_D : 1;
        for (int s = 0; s < runs; ++s) {
          const auto got = cd_coefficient_via_CD(f, w, o.seed + static_cast<std::uint64_t>(s), opt);
          ++applications;
          t.check(Integer(static_cast<unsigned long>(got)) == flag.coeff(w),
                  e->name + " word " + w.pretty() + " seed " + std::to_string(o.seed + s));
        }
      }
    });
  }
  t.note(std::to_string(applications) + " word evaluations");
  return {7, "C/D stalk dimensions equal flag cd coefficients", t.ok(), t.str(), 0, 300};
}

inline CriterionResult criterion_algebra(const AcceptanceOptions& o) {
  detail::Tally t;
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<int> deg(0, 8), coeff(-40, 40), nterms(1, 6);
  for (int i = 0; i < 500; ++i) {
    const auto words = cd_words(deg(rng));
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    CdPoly q;
    for (int k = nterms(rng); k > 0; --k) q.add_term(words[pick(rng)], Integer(coeff(rng)));
    t.check(cd_contract(ab_expand(q)) == q, "round trip of " + q.to_string());
  }

  const auto small = detail::filtered(o, [](const CorpusEntry& c) { return c.poset.size() <= 31; });
  for (const auto* a : small)
    for (const auto* b : small) {
      if (a->poset.rank() + b->poset.rank() > std::min(o.max_rank, 5)) continue;
      detail::guarded(t, a->name + "*" + b->name, [&] {
        t.check(cd_index(star_product(a->poset, b->poset)) == cd_index(a->poset) * cd_index(b->poset),
                a->name + " * " + b->name);
      });
    }
  for (const auto* e : detail::filtered(o, [](const CorpusEntry& c) { return c.poset.rank() <= 4; }))
    detail::guarded(t, e->name, [&] {
      t.check(cd_index(pyr_poset(e->poset)) == pyr_op(cd_index(e->poset)), "pyramid of " + e->name);
    });

  long duals = 0;
  auto dual_check = [&](const Sheaf& f, const std::string& what) {
    detail::guarded(t, what, [&] {
      const Sheaf g = dual_sheaf(f);
      bool ok = true;
      for (std::size_t s = 0; s < f.base.size(); ++s)
        ok = ok && static_cast<long>(g.dim[s]) == dual_dim_formula(f, s);
      const Sheaf gg = dual_sheaf(g);
      ok = ok && gg.dim == f.dim;
      t.check(ok, "dual dimensions of " + what);
      duals += 2;
    });
  };
  for (const auto* e : detail::filtered(o, [](const CorpusEntry& c) { return c.poset.rank() <= 3; })) {
    const GradedPoset& p = e->poset;
    dual_check(constant_sheaf(p), "constant sheaf on " + e->name);
    if (p.rank() >= 1) dual_check(op_C(constant_sheaf(p), {false, false, 8}), "C of the constant sheaf on " + e->name);
    if (p.rank() >= 1) {
      const auto top = p.maximal_elements().front();
      const GradedPoset sk = skeleton(p, p.rank() - 1);
      std::vector<ElementId> below;
      for (std::size_t i = 0; i < sk.size(); ++i)
        if (p.less(sk.origin()[i], top)) below.push_back(i);
      dual_check(constant_sheaf(sk, below), "constant sheaf below a facet of " + e->name);
    }
  }
  const GradedPoset ball = with_top(polygon(3));
  dual_check(constant_sheaf(ball), "constant sheaf on a triangle with its top");
  t.note(std::to_string(duals) + " duals compared with the dimension formula");
  return {8, "algebra identities and duality dimensions", t.ok(), t.str(), 0, 0};
}

inline std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& o = {}, const std::function<void(const CriterionResult&)>& on_result = {}) {
  using Fn = CriterionResult (*)(const AcceptanceOptions&);
  const Fn fns[] = {criterion_polygons,        criterion_main_inequality, criterion_decomposition,
                    criterion_stanley,         criterion_lambda_formulas, criterion_homology,
                    criterion_sheaf,           criterion_algebra};
  std::vector<CriterionResult> out;
  for (auto fn : fns) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = fn(o);
    } catch (const std::exception& e) {
      r.id = static_cast<int>(out.size()) + 1;
      r.detail = std::string("uncaught: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.limit > 0 && r.seconds > r.limit) {
      r.passed = false;
      r.detail += "; over the time limit";
    }
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace posetlab
