#pragma once

// Subdivision maps: certification, the fiber decomposition of the source
// index, and the coefficientwise inequalities built on it.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "posetlab/constructions.hpp"
#include "posetlab/error.hpp"
#include "posetlab/flag_enum.hpp"
#include "posetlab/homology.hpp"
#include "posetlab/ncpoly.hpp"
#include "posetlab/poset.hpp"

namespace posetlab {

/// The fiber pair over sigma: phi^{-1}[0,sigma] as a poset of rank
/// rank(sigma), with phi^{-1}[0,sigma) as boundary ids in that poset.
inline PosetWithBoundary fiber_pair(const PosetMap& phi, ElementId sigma) {
  const auto closed = phi.fiber(sigma, true);
  PosetWithBoundary out{induced_subposet(phi.source, closed, phi.target.rank_of(sigma)), {}};
  for (std::size_t i = 0; i < out.poset.size(); ++i)
    if (phi.target.less(phi.assignment[out.poset.origin()[i]], sigma)) out.boundary.push_back(i);
  return out;
}

struct SubdivisionReport {
  bool ok = true;
  std::string reason;
  std::optional<ElementId> failing;  // target element whose fiber pair failed
  HomologyReport homology;
  explicit operator bool() const { return ok; }
};

inline SubdivisionReport is_subdivision(const PosetMap& phi) {
  if (phi.source.rank() != phi.target.rank())
    throw Error(Errc::RankMismatch, "source and target ranks differ");
  if (phi.assignment.size() != phi.source.size())
    throw Error(Errc::UnknownElement, "assignment does not cover the source");
  for (auto y : phi.assignment)
    if (y >= phi.target.size()) throw Error(Errc::UnknownElement, "assignment leaves the target");
  if (!is_gorenstein_star(phi.source)) throw Error(Errc::SourceNotGorenstein, "source is not Gorenstein*");
  if (!is_gorenstein_star(phi.target)) throw Error(Errc::TargetNotGorenstein, "target is not Gorenstein*");
  if (!phi.is_order_preserving()) return {false, "map is not order preserving", std::nullopt, {}};
  if (!phi.is_surjective()) return {false, "map is not surjective", std::nullopt, {}};
  for (auto sigma : phi.target.by_rank()) {
    SubdivisionReport rep;
    try {
      const auto pair = fiber_pair(phi, sigma);
      auto h = near_gorenstein_star_report(pair.poset, pair.boundary);
      if (h.ok) continue;
      rep = {false, "fiber over " + phi.target.label(sigma) + ": " + h.reason, sigma, std::move(h)};
    } catch (const Error& e) {
      rep = {false, "fiber over " + phi.target.label(sigma) + ": " + e.what(), sigma, {}};
    }
    return rep;
  }
  return {};
}

struct Decomposition {
  std::vector<std::pair<ElementId, CdPoly>> phi;  // Phi of each fiber pair
  CdPoly assembled;
  CdPoly source_index;
  bool all_nonnegative = true;
};

/// Psi(source) = sum over sigma of Phi(fiber pair) * Psi([sigma, 1)).
inline Decomposition decompose(const PosetMap& map, bool certify = true) {
  if (certify) {
    auto rep = is_subdivision(map);
    if (!rep) throw Error(Errc::NotASubdivision, rep.reason);
  }
  Decomposition out;
  out.source_index = cd_index(map.source);
  for (auto sigma : map.target.by_rank()) {
    const auto pair = fiber_pair(map, sigma);
    CdPoly f = near_cd_index(pair.poset, pair.boundary).phi;
    if (!has_nonnegative_coefficients(f)) out.all_nonnegative = false;
    out.assembled += f * cd_index(interval(map.target, sigma, kTop));
    out.phi.emplace_back(sigma, std::move(f));
  }
  if (out.assembled != out.source_index)
    throw Error(Errc::DecompositionMismatch,
                "assembled " + out.assembled.to_string() + " but source has " + out.source_index.to_string());
  return out;
}

/// cd(target) <= cd(source).
inline CoeffwiseComparison verify_subdivision_inequality(const PosetMap& map) {
  auto rep = is_subdivision(map);
  if (!rep) throw Error(Errc::NotASubdivision, rep.reason);
  return coeffwise_compare(cd_index(map.target), cd_index(map.source));
}

struct MainInequalityReport {
  bool lattice = true;  // hypotheses, reported rather than enforced
  CdPoly lhs;
  CdPoly rhs;       // Psi[0,nu) * Pyr(Psi[nu,1))
  CdPoly rhs_dual;  // Psi(Pyr[0,nu)) * Psi[nu,1)
  CoeffwiseComparison primal;
  CoeffwiseComparison dual;
  bool holds() const { return primal.holds && dual.holds; }
  std::optional<CdWord> witness() const { return primal.holds ? dual.witness : primal.witness; }
};

/// Both forms of Psi(L) >= Psi[0,nu) Pyr(Psi[nu,1)). A non-lattice input is
/// evaluated anyway and flagged, so the failure can be exhibited.
inline MainInequalityReport verify_main_inequality(const GradedPoset& lat, ElementId nu) {
  if (nu == kBottom || nu >= lat.size()) throw Error(Errc::ElementOutOfRange, "need 0 < nu < 1");
  if (!is_gorenstein_star(lat)) throw Error(Errc::NotGorensteinStar, "poset is not Gorenstein*");
  MainInequalityReport r;
  r.lattice = is_lattice(lat);
  const GradedPoset lower = interval(lat, kBottom, nu);
  const GradedPoset upper = interval(lat, nu, kTop);
  r.lhs = cd_index(lat);
  r.rhs = cd_index(lower) * pyr_op(cd_index(upper));
  r.rhs_dual = cd_index(pyr_poset(lower)) * cd_index(upper);
  r.primal = coeffwise_compare(r.rhs, r.lhs);
  r.dual = coeffwise_compare(r.rhs_dual, r.lhs);
  return r;
}

/// cd(B_{n+1}) <= cd(L).
inline CoeffwiseComparison verify_stanley_minimum(const GradedPoset& lat) {
  if (!is_gorenstein_star(lat)) throw Error(Errc::NotGorensteinStar, "poset is not Gorenstein*");
  return coeffwise_compare(cd_index(boolean_algebra(lat.rank() + 1)), cd_index(lat));
}

/// cd(L'_nu) <= cd(L), with the left side from the closed formula.
inline CoeffwiseComparison verify_corollary_semisusp(const GradedPoset& lat, ElementId nu) {
  return coeffwise_compare(lambda_nu_prime_cd(lat, nu), cd_index(lat));
}

}  // namespace posetlab
