#pragma once

// Poset factories: Boolean algebras, polygons, products, pyramids, order
// complexes, the posets Lambda_nu and their semisuspensions, and the maps
// used by the subdivision verifiers.

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "posetlab/error.hpp"
#include "posetlab/flag_enum.hpp"
#include "posetlab/poset.hpp"

namespace posetlab {

/// Proper subsets of {1..k}, rank k-1.
inline GradedPoset boolean_algebra(int k) {
  if (k < 1 || k > 20) throw Error(Errc::ElementOutOfRange, "boolean algebra size must be in 1..20");
  const std::size_t full = (std::size_t{1} << k) - 1;
  std::vector<int> ranks;
  std::vector<std::string> labels;
  std::vector<std::size_t> mask_of;
  std::vector<std::size_t> id_of(full + 1, 0);
  // Order subsets by size so that the empty set gets id 0.
  std::vector<std::size_t> masks(full);
  for (std::size_t m = 0; m < full; ++m) masks[m] = m;
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::size_t a, std::size_t b) { return std::popcount(a) < std::popcount(b); });
  for (auto m : masks) {
    id_of[m] = ranks.size();
    ranks.push_back(std::popcount(m));
    std::string s = "{";
    for (int i = 0; i < k; ++i)
      if (m >> i & 1) s += (s.size() > 1 ? "," : "") + std::to_string(i + 1);
    labels.push_back(s + "}");
  }
  CoverList covers;
  for (auto m : masks)
    for (int i = 0; i < k; ++i) {
      const std::size_t up = m | (std::size_t{1} << i);
      if (up != m && up != full) covers.emplace_back(id_of[m], id_of[up]);
    }
  return GradedPoset::from_covers(k - 1, std::move(ranks), covers, std::move(labels));
}

/// Face poset of an m-gon without its top; edge e_i joins v_i and v_{i+1}.
/// m = 2 gives two edges glued along both endpoints.
inline GradedPoset polygon(int m) {
  if (m < 2) throw Error(Errc::ElementOutOfRange, "polygon needs at least 2 sides");
  std::vector<int> ranks{0};
  std::vector<std::string> labels{"0"};
  for (int i = 1; i <= m; ++i) ranks.push_back(1), labels.push_back("v" + std::to_string(i));
  for (int i = 1; i <= m; ++i) ranks.push_back(2), labels.push_back("e" + std::to_string(i));
  CoverList covers;
  for (int i = 1; i <= m; ++i) {
    covers.emplace_back(0, i);
    const ElementId e = m + i;
    covers.emplace_back(i, e);
    covers.emplace_back(i % m + 1, e);
  }
  return GradedPoset::from_covers(2, std::move(ranks), covers, std::move(labels));
}

/// P * Q: Q minus its bottom stacked above all of P. Elements of P keep their
/// ids; x != 0 in Q becomes |P| + x - 1.
inline GradedPoset star_product(const GradedPoset& p, const GradedPoset& q) {
  const std::size_t np = p.size();
  auto qid = [np](ElementId x) { return np + x - 1; };
  std::vector<int> ranks = p.ranks();
  std::vector<std::string> labels = p.labels();
  for (std::size_t x = 1; x < q.size(); ++x) {
    ranks.push_back(q.rank_of(x) + p.rank());
    labels.push_back(q.label(x));
  }
  CoverList covers = p.covers();
  for (auto [lo, hi] : q.covers())
    if (lo != kBottom) covers.emplace_back(qid(lo), qid(hi));
  for (auto top : p.maximal_elements())
    for (auto atom : q.upper_covers(kBottom)) covers.emplace_back(top, qid(atom));
  return GradedPoset::from_covers(p.rank() + q.rank(), std::move(ranks), covers, std::move(labels));
}

namespace detail {

/// Pairs (x, y) from X x Y with the order componentwise. `top_x` and
/// `top_y` say whether the last index of each side is an adjoined top; the
/// pair of two tops is dropped. Pair (x, y) gets id x * |Y| + y.
inline GradedPoset pair_poset(const GradedPoset& a, bool a_has_top, const GradedPoset& b, bool b_has_top,
                              int n) {
  const std::size_t na = a.size() + (a_has_top ? 1 : 0);
  const std::size_t nb = b.size() + (b_has_top ? 1 : 0);
  auto rank_a = [&](std::size_t x) { return x < a.size() ? a.rank_of(x) : a.rank() + 1; };
  auto rank_b = [&](std::size_t y) { return y < b.size() ? b.rank_of(y) : b.rank() + 1; };
  auto label_a = [&](std::size_t x) { return x < a.size() ? a.label(x) : std::string("1"); };
  auto label_b = [&](std::size_t y) { return y < b.size() ? b.label(y) : std::string("1"); };
  auto ups_a = [&](std::size_t x) {
    std::vector<std::size_t> u;
    if (x == a.size()) return u;
    u.assign(a.upper_covers(x).begin(), a.upper_covers(x).end());
    if (a_has_top && a.upper_covers(x).empty()) u.push_back(a.size());
    return u;
  };
  auto ups_b = [&](std::size_t y) {
    std::vector<std::size_t> u;
    if (y == b.size()) return u;
    u.assign(b.upper_covers(y).begin(), b.upper_covers(y).end());
    if (b_has_top && b.upper_covers(y).empty()) u.push_back(b.size());
    return u;
  };
  const bool drop_last = a_has_top && b_has_top;
  const std::size_t total = na * nb - (drop_last ? 1 : 0);
  std::vector<int> ranks(total);
  std::vector<std::string> labels(total);
  CoverList covers;
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t y = 0; y < nb; ++y) {
      const std::size_t id = x * nb + y;
      if (id >= total) continue;
      ranks[id] = rank_a(x) + rank_b(y);
      labels[id] = "(" + label_a(x) + "," + label_b(y) + ")";
      for (auto u : ups_a(x))
        if (u * nb + y < total) covers.emplace_back(id, u * nb + y);
      for (auto v : ups_b(y))
        if (x * nb + v < total) covers.emplace_back(id, x * nb + v);
    }
  return GradedPoset::from_covers(n, std::move(ranks), covers, std::move(labels));
}

}  // namespace detail

/// (P u 1) x (Q u 1) with its top removed; rank m + n + 1. Geometrically the
/// join of the two polytopes.
inline GradedPoset cartesian_product(const GradedPoset& p, const GradedPoset& q) {
  return detail::pair_poset(p, true, q, true, p.rank() + q.rank() + 1);
}

/// P x Q with no tops adjoined; rank m + n. For face posets this is the free
/// sum, so three segments give the octahedron.
inline GradedPoset product(const GradedPoset& p, const GradedPoset& q) {
  return detail::pair_poset(p, false, q, false, p.rank() + q.rank());
}

/// (P u 1) x B_1 without its top. (x, 0) sits at the base, (x, 1) over it.
inline GradedPoset pyr_poset(const GradedPoset& p) { return cartesian_product(p, GradedPoset::point()); }

inline GradedPoset cross_polytope(int d) {
  if (d < 1) throw Error(Errc::ElementOutOfRange, "dimension must be positive");
  GradedPoset out = boolean_algebra(2);
  for (int i = 1; i < d; ++i) out = product(out, boolean_algebra(2));
  return out;
}

inline GradedPoset cube(int d) {
  if (d == 1) return boolean_algebra(2);
  const auto q = without_top(dual(with_top(cross_polytope(d))));
  auto labels = q.labels();
  labels[kBottom] = "0";
  return GradedPoset::from_covers(q.rank(), q.ranks(), q.covers(), std::move(labels));
}

/// O(P) as a poset together with the chain behind each element.
struct ChainPoset {
  GradedPoset poset;
  std::vector<Chain> chains;  // chains[i] starts at 0 and is increasing
};

inline ChainPoset order_complex_with_chains(const GradedPoset& p) {
  std::map<Chain, ElementId> id;
  std::vector<Chain> chains;
  for_each_chain(p, [&](const Chain& c) {
    id.emplace(c, chains.size());
    chains.push_back(c);
  });
  std::vector<int> ranks;
  std::vector<std::string> labels;
  CoverList covers;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    const Chain& c = chains[i];
    ranks.push_back(static_cast<int>(c.size()) - 1);
    std::string s;
    for (std::size_t j = 0; j < c.size(); ++j) s += (j ? "<" : "") + p.label(c[j]);
    labels.push_back(s);
    for (std::size_t j = 1; j < c.size(); ++j) {
      Chain sub = c;
      sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(j));
      covers.emplace_back(id.at(sub), i);
    }
  }
  return {GradedPoset::from_covers(p.rank(), std::move(ranks), covers, std::move(labels), false),
          std::move(chains)};
}

/// Chains containing 0 ordered by inclusion. Labels list the chain.
inline GradedPoset order_complex(const GradedPoset& p) { return order_complex_with_chains(p).poset; }

/// Elements sigma with sigma v nu below the virtual top.
inline std::vector<ElementId> lambda_nu_elements(const GradedPoset& lat, ElementId nu) {
  require_lattice(lat);
  if (nu == kBottom || nu >= lat.size()) throw Error(Errc::ElementOutOfRange, "need 0 < nu < 1");
  std::vector<ElementId> out;
  for (std::size_t s = 0; s < lat.size(); ++s)
    if (join(lat, s, nu)) out.push_back(s);
  return out;
}

inline GradedPoset lambda_nu_poset(const GradedPoset& lat, ElementId nu) {
  return induced_subposet(lat, lambda_nu_elements(lat, nu), lat.rank());
}

/// Lambda_nu plus one rank-n element * above every sigma with nu not <= sigma.
/// Throws NotGraded when those sigma are not the down-set of their rank n-1
/// members, since * could then not be placed at rank n.
inline GradedPoset semisuspension(const GradedPoset& lat, ElementId nu) {
  const GradedPoset base = lambda_nu_poset(lat, nu);
  const int n = lat.rank();
  if (n < 1) throw Error(Errc::ElementOutOfRange, "semisuspension needs rank at least 1");
  std::vector<int> ranks = base.ranks();
  std::vector<std::string> labels = base.labels();
  CoverList covers = base.covers();
  const ElementId star = base.size();
  ranks.push_back(n);
  labels.push_back("*");
  Bitset expected(base.size()), reached(base.size());
  for (std::size_t s = 0; s < base.size(); ++s) {
    if (lat.leq(nu, base.origin()[s])) continue;
    expected.set(s);
    if (base.rank_of(s) == n - 1) {
      covers.emplace_back(s, star);
      reached |= base.down_set(s);
    }
  }
  if (expected != reached)
    throw Error(Errc::NotGraded, "elements below * are not generated by rank n-1 elements");
  auto out = GradedPoset::from_covers(n, std::move(ranks), covers, std::move(labels));
  auto origin = base.origin();
  origin.push_back(lat.size());  // * has no preimage; marked out of range
  out.set_origin(std::move(origin));
  return out;
}

/// Lambda minus [nu, 1) together with its boundary {tau | tau v nu < 1},
/// boundary ids taken in the new poset.
struct PosetWithBoundary {
  GradedPoset poset;
  std::vector<ElementId> boundary;
};

inline PosetWithBoundary remove_upset(const GradedPoset& lat, ElementId nu) {
  require_lattice(lat);
  if (nu == kBottom || nu >= lat.size()) throw Error(Errc::ElementOutOfRange, "need 0 < nu < 1");
  std::vector<ElementId> keep;
  for (std::size_t s = 0; s < lat.size(); ++s)
    if (!lat.leq(nu, s)) keep.push_back(s);
  PosetWithBoundary out{induced_subposet(lat, keep, lat.rank()), {}};
  for (std::size_t i = 0; i < out.poset.size(); ++i)
    if (join(lat, out.poset.origin()[i], nu)) out.boundary.push_back(i);
  return out;
}

/// P minus a maximal element pi, with boundary [0, pi). No lattice needed.
inline PosetWithBoundary remove_maximal(const GradedPoset& p, ElementId pi) {
  if (pi == kBottom || !p.upper_covers(pi).empty())
    throw Error(Errc::ElementOutOfRange, "element must be maximal and above 0");
  std::vector<ElementId> keep;
  for (std::size_t s = 0; s < p.size(); ++s)
    if (s != pi) keep.push_back(s);
  PosetWithBoundary out{induced_subposet(p, keep, p.rank()), {}};
  for (std::size_t i = 0; i < out.poset.size(); ++i)
    if (p.less(out.poset.origin()[i], pi)) out.boundary.push_back(i);
  return out;
}

/// Glues one rank-n cell onto the boundary of a rank-n pair.
inline GradedPoset cap_boundary(const PosetWithBoundary& pair) {
  const GradedPoset& p = pair.poset;
  const int n = p.rank();
  std::vector<int> ranks = p.ranks();
  std::vector<std::string> labels = p.labels();
  CoverList covers = p.covers();
  const ElementId cap = p.size();
  ranks.push_back(n);
  labels.push_back("cap");
  Bitset expected(p.size()), reached(p.size());
  for (auto b : pair.boundary) {
    expected.set(b);
    if (p.rank_of(b) == n - 1) {
      covers.emplace_back(b, cap);
      reached |= p.down_set(b);
    }
  }
  if (pair.boundary.empty() || expected != reached)
    throw Error(Errc::BoundaryWrongRank, "boundary is not generated by rank n-1 elements");
  return GradedPoset::from_covers(n, std::move(ranks), covers, std::move(labels));
}

/// Order-preserving map between graded posets.
struct PosetMap {
  GradedPoset source;
  GradedPoset target;
  std::vector<ElementId> assignment;

  /// phi^{-1}[0, sigma] (closed) or phi^{-1}[0, sigma) (open), as source ids.
  std::vector<ElementId> fiber(ElementId sigma, bool closed) const {
    std::vector<ElementId> out;
    for (std::size_t x = 0; x < source.size(); ++x) {
      const ElementId y = assignment[x];
      if (closed ? target.leq(y, sigma) : target.less(y, sigma)) out.push_back(x);
    }
    return out;
  }

  bool is_order_preserving() const {
    for (auto [lo, hi] : source.covers())
      if (!target.leq(assignment[lo], assignment[hi])) return false;
    return true;
  }

  bool is_surjective() const {
    std::vector<char> hit(target.size(), 0);
    for (auto y : assignment) hit[y] = 1;
    return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
  }
};

inline PosetMap identity_map(const GradedPoset& p) {
  std::vector<ElementId> a(p.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = i;
  return {p, p, std::move(a)};
}

namespace detail {

inline std::vector<ElementId> inverse_origin(const GradedPoset& sub, std::size_t ambient) {
  std::vector<ElementId> inv(ambient, ambient);
  for (std::size_t i = 0; i < sub.size(); ++i)
    if (sub.origin()[i] < ambient) inv[sub.origin()[i]] = i;
  return inv;
}

}  // namespace detail

/// T = [0, nu) * Pyr[nu, 1) and the map tau -> tau (tau < nu),
/// (tau, 1) (tau >= nu), (tau v nu, 0) otherwise.
inline PosetMap subdivision_target_and_map(const GradedPoset& lat, ElementId nu) {
  if (nu == kBottom || nu >= lat.size()) throw Error(Errc::ElementOutOfRange, "need 0 < nu < 1");
  require_lattice(lat);
  const GradedPoset lower = interval(lat, kBottom, nu, false);
  const GradedPoset upper = interval(lat, nu, kTop);
  const GradedPoset pyr = pyr_poset(upper);
  GradedPoset target = star_product(lower, pyr);
  const auto lower_of = detail::inverse_origin(lower, lat.size());
  const auto upper_of = detail::inverse_origin(upper, lat.size());
  // Pyr pair (x, y) has id x * 2 + y with y = 0 base and y = 1 apex side;
  // x = |upper| stands for the top of [nu, 1).
  auto in_target = [&](std::size_t x, std::size_t y) { return lower.size() + (x * 2 + y) - 1; };
  std::vector<ElementId> a(lat.size());
  for (std::size_t t = 0; t < lat.size(); ++t) {
    if (lat.less(t, nu)) {
      a[t] = lower_of[t];
    } else if (lat.leq(nu, t)) {
      a[t] = in_target(upper_of[t], 1);
    } else {
      const ElementOrTop j = join(lat, t, nu);
      a[t] = in_target(j ? upper_of[*j] : upper.size(), 0);
    }
  }
  return {lat, std::move(target), std::move(a)};
}

/// Lambda -> Lambda'_nu: identity on Lambda_nu, everything else to *.
inline PosetMap collapse_map(const GradedPoset& lat, ElementId nu) {
  GradedPoset target = semisuspension(lat, nu);
  const auto inv = detail::inverse_origin(target, lat.size());
  const ElementId star = target.size() - 1;
  std::vector<ElementId> a(lat.size());
  for (std::size_t t = 0; t < lat.size(); ++t) a[t] = inv[t] < lat.size() ? inv[t] : star;
  return {lat, std::move(target), std::move(a)};
}

/// Backtracking isomorphism test for small posets.
inline bool isomorphic(const GradedPoset& p, const GradedPoset& q) {
  if (p.rank() != q.rank() || p.size() != q.size() || p.cover_count() != q.cover_count()) return false;
  auto sig = [](const GradedPoset& g, ElementId x) {
    return std::tuple(g.rank_of(x), g.upper_covers(x).size(), g.lower_covers(x).size(),
                      g.up_set(x).count(), g.down_set(x).count());
  };
  const auto& order = p.by_rank();
  std::vector<ElementId> image(p.size(), q.size());
  std::vector<char> used(q.size(), 0);
  std::function<bool(std::size_t)> rec = [&](std::size_t k) {
    if (k == order.size()) return true;
    const ElementId x = order[k];
    for (std::size_t y = 0; y < q.size(); ++y) {
      if (used[y] || sig(p, x) != sig(q, y)) continue;
      bool ok = true;
      for (auto l : p.lower_covers(x))
        if (!q.less(image[l], y) || q.rank_of(image[l]) + 1 != q.rank_of(y)) ok = false;
      if (!ok) continue;
      image[x] = y;
      used[y] = 1;
      if (rec(k + 1)) return true;
      used[y] = 0;
    }
    image[x] = q.size();
    return false;
  };
  return rec(0);
}

}  // namespace posetlab
