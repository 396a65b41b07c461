#pragma once

// Finite graded posets with a minimal element 0 and no stored maximum.
//
// The virtual top 1 is never materialised; it sits at rank n+1 where n is
// the rank of the poset, so rank_to_top(x) = n + 1 - rank(x).

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "posetlab/error.hpp"

namespace posetlab {

using ElementId = std::size_t;
/// An element, or the virtual top when empty.
using ElementOrTop = std::optional<ElementId>;
inline constexpr std::nullopt_t kTop = std::nullopt;
using CoverList = std::vector<std::pair<ElementId, ElementId>>;
using Bitset = boost::dynamic_bitset<>;

inline constexpr ElementId kBottom = 0;

class GradedPoset {
 public:
  GradedPoset() : GradedPoset(point()) {}

  /// Validates ranks and covers and materialises the order relation.
  /// With require_pure, every maximal element must have rank n.
  static GradedPoset from_covers(int n, std::vector<int> ranks, const CoverList& covers,
                                 std::vector<std::string> labels = {}, bool require_pure = true) {
    GradedPoset p;
    p.n_ = n;
    const std::size_t m = ranks.size();
    if (m == 0) throw Error(Errc::NoBottom, "poset has no elements");
    if (n < 0) throw Error(Errc::NotGraded, "negative poset rank");
    for (std::size_t i = 0; i < m; ++i) {
      if (ranks[i] > n)
        throw Error(Errc::RankedTooHigh, "element " + std::to_string(i) + " has rank " +
                                             std::to_string(ranks[i]) + " > " + std::to_string(n));
      if (ranks[i] < 0) throw Error(Errc::NotGraded, "negative rank at " + std::to_string(i));
    }
    if (ranks[0] != 0 || std::count(ranks.begin(), ranks.end(), 0) != 1)
      throw Error(Errc::NoBottom, "element 0 must be the unique element of rank 0");
    p.ranks_ = std::move(ranks);
    if (labels.empty()) {
      labels.resize(m);
      for (std::size_t i = 0; i < m; ++i) labels[i] = std::to_string(i);
    }
    if (labels.size() != m) throw Error(Errc::UnknownElement, "label count does not match element count");
    p.labels_ = std::move(labels);
    p.up_.assign(m, {});
    p.down_.assign(m, {});
    for (auto [lo, hi] : covers) {
      if (lo >= m || hi >= m)
        throw Error(Errc::UnknownElement, "cover references unknown element");
      if (p.ranks_[hi] != p.ranks_[lo] + 1)
        throw Error(Errc::NotGraded, "cover (" + std::to_string(lo) + "," + std::to_string(hi) +
                                         ") does not raise rank by one");
      p.up_[lo].push_back(hi);
      p.down_[hi].push_back(lo);
    }
    for (std::size_t i = 0; i < m; ++i) {
      auto dedupe = [](std::vector<ElementId>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
      };
      dedupe(p.up_[i]);
      dedupe(p.down_[i]);
      if (i != kBottom && p.down_[i].empty())
        throw Error(Errc::UnreachableElement, "element " + std::to_string(i) + " is not above 0");
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (require_pure && p.up_[i].empty() && p.ranks_[i] != n)
        throw Error(Errc::NotGraded, "maximal element " + std::to_string(i) + " has rank " +
                                         std::to_string(p.ranks_[i]) + " < " + std::to_string(n));
    }
    p.build_order();
    return p;
  }

  /// The one-element poset {0} of rank 0.
  static GradedPoset point() {
    GradedPoset p(Raw{});
    p.n_ = 0;
    p.ranks_ = {0};
    p.labels_ = {"0"};
    p.up_.assign(1, {});
    p.down_.assign(1, {});
    p.build_order();
    return p;
  }

  int rank() const { return n_; }
  std::size_t size() const { return ranks_.size(); }
  int rank_of(ElementId x) const { return ranks_[check(x)]; }
  int rank_to_top(ElementId x) const { return n_ + 1 - rank_of(x); }
  const std::vector<int>& ranks() const { return ranks_; }

  const std::vector<ElementId>& upper_covers(ElementId x) const { return up_[check(x)]; }
  const std::vector<ElementId>& lower_covers(ElementId x) const { return down_[check(x)]; }
  const Bitset& up_set(ElementId x) const { return upset_[check(x)]; }
  const Bitset& down_set(ElementId x) const { return downset_[check(x)]; }

  bool leq(ElementId x, ElementId y) const { return upset_[check(x)].test(check(y)); }
  bool less(ElementId x, ElementId y) const { return x != y && leq(x, y); }

  const std::string& label(ElementId x) const { return labels_[check(x)]; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Origin: id of each element in the poset this one was derived from.
  const std::vector<ElementId>& origin() const { return origin_; }
  void set_origin(std::vector<ElementId> o) { origin_ = std::move(o); }

  /// Resolves a label, falling back to a numeric id.
  ElementId element(std::string_view token) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == token) return i;
    ElementId id = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), id);
    if (ec == std::errc() && ptr == token.data() + token.size() && id < size()) return id;
    throw Error(Errc::UnknownElement, "no element '" + std::string(token) + "'");
  }

  std::vector<ElementId> elements_of_rank(int r) const {
    std::vector<ElementId> out;
    for (std::size_t i = 0; i < size(); ++i)
      if (ranks_[i] == r) out.push_back(i);
    return out;
  }

  std::vector<ElementId> maximal_elements() const {
    std::vector<ElementId> out;
    for (std::size_t i = 0; i < size(); ++i)
      if (up_[i].empty()) out.push_back(i);
    return out;
  }

  /// Elements ordered by (rank, id): a linear extension.
  const std::vector<ElementId>& by_rank() const { return by_rank_; }

  CoverList covers() const {
    CoverList out;
    for (std::size_t i = 0; i < size(); ++i)
      for (auto j : up_[i]) out.emplace_back(i, j);
    return out;
  }

  std::size_t cover_count() const {
    std::size_t c = 0;
    for (const auto& u : up_) c += u.size();
    return c;
  }

 private:
  struct Raw {};
  explicit GradedPoset(Raw) {}

  std::size_t check(ElementId x) const {
    if (x >= ranks_.size()) throw Error(Errc::UnknownElement, "element " + std::to_string(x));
    return x;
  }

  void build_order() {
    const std::size_t m = size();
    by_rank_.resize(m);
    std::iota(by_rank_.begin(), by_rank_.end(), ElementId{0});
    std::stable_sort(by_rank_.begin(), by_rank_.end(),
                     [&](ElementId a, ElementId b) { return ranks_[a] < ranks_[b]; });
    upset_.assign(m, Bitset(m));
    downset_.assign(m, Bitset(m));
    for (auto it = by_rank_.rbegin(); it != by_rank_.rend(); ++it) {
      upset_[*it].set(*it);
      for (auto u : up_[*it]) upset_[*it] |= upset_[u];
    }
    for (auto x : by_rank_) {
      downset_[x].set(x);
      for (auto d : down_[x]) downset_[x] |= downset_[d];
    }
  }

  int n_ = 0;
  std::vector<int> ranks_;
  std::vector<std::string> labels_;
  std::vector<std::vector<ElementId>> up_, down_;
  std::vector<Bitset> upset_, downset_;
  std::vector<ElementId> by_rank_;
  std::vector<ElementId> origin_;
};

inline bool leq(const GradedPoset& p, ElementId x, ElementId y) { return p.leq(x, y); }

/// Sub-poset on a convex, down-closed-from-`bottom` element set, with ranks
/// shifted so that `bottom` has rank 0. Provenance is recorded in origin().
inline GradedPoset induced_subposet(const GradedPoset& p, std::vector<ElementId> elements, int n,
                                    ElementId bottom = kBottom, bool require_pure = false) {
  std::sort(elements.begin(), elements.end(), [&](ElementId a, ElementId b) {
    if (p.rank_of(a) != p.rank_of(b)) return p.rank_of(a) < p.rank_of(b);
    return a < b;
  });
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  if (elements.empty() || elements.front() != bottom)
    throw Error(Errc::NoBottom, "sub-poset must contain its bottom element");
  std::vector<ElementId> index(p.size(), p.size());
  for (std::size_t i = 0; i < elements.size(); ++i) index[elements[i]] = i;
  const int shift = p.rank_of(bottom);
  std::vector<int> ranks;
  std::vector<std::string> labels;
  CoverList covers;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    ranks.push_back(p.rank_of(elements[i]) - shift);
    labels.push_back(p.label(elements[i]));
    for (auto u : p.upper_covers(elements[i]))
      if (index[u] != p.size()) covers.emplace_back(i, index[u]);
  }
  auto q = GradedPoset::from_covers(n, std::move(ranks), covers, std::move(labels), require_pure);
  q.set_origin(std::move(elements));
  return q;
}

/// [x, upper] or [x, upper), re-ranked from x. A Top upper bound gives [x, 1).
inline GradedPoset interval(const GradedPoset& p, ElementId x, ElementOrTop upper, bool closed_upper = false) {
  std::vector<ElementId> elems;
  int n = 0;
  if (!upper) {
    n = p.rank() - p.rank_of(x);
    for (auto e = p.up_set(x).find_first(); e != Bitset::npos; e = p.up_set(x).find_next(e))
      elems.push_back(e);
  } else {
    const ElementId y = *upper;
    if (!p.leq(x, y) || (!closed_upper && x == y))
      throw Error(Errc::NotComparable, "interval [" + p.label(x) + "," + p.label(y) + "] is empty");
    n = p.rank_of(y) - p.rank_of(x) - (closed_upper ? 0 : 1);
    Bitset s = p.up_set(x) & p.down_set(y);
    if (!closed_upper) s.reset(y);
    for (auto e = s.find_first(); e != Bitset::npos; e = s.find_next(e)) elems.push_back(e);
  }
  return induced_subposet(p, std::move(elems), n, x, false);
}

/// Order-reversed poset. Requires a unique maximal element, which becomes 0.
inline GradedPoset dual(const GradedPoset& p) {
  const auto tops = p.maximal_elements();
  if (tops.size() != 1) throw Error(Errc::NoUniqueTop, "dual needs a unique maximal element");
  const ElementId t = tops.front();
  auto rename = [t](ElementId e) { return e == t ? kBottom : (e == kBottom ? t : e); };
  std::vector<int> ranks(p.size());
  std::vector<std::string> labels(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    ranks[rename(i)] = p.rank() - p.rank_of(i);
    labels[rename(i)] = p.label(i);
  }
  // the extremes keep their names: 0 stays at the bottom
  std::swap(labels[kBottom], labels[t]);
  CoverList covers;
  for (auto [lo, hi] : p.covers()) covers.emplace_back(rename(hi), rename(lo));
  return GradedPoset::from_covers(p.rank(), std::move(ranks), covers, std::move(labels));
}

/// P with an explicit maximum adjoined at rank n+1.
inline GradedPoset with_top(const GradedPoset& p, std::string top_label = "1") {
  std::vector<int> ranks = p.ranks();
  ranks.push_back(p.rank() + 1);
  auto labels = p.labels();
  labels.push_back(std::move(top_label));
  CoverList covers = p.covers();
  for (auto m : p.maximal_elements()) {
    if (p.rank_of(m) != p.rank()) throw Error(Errc::NotGraded, "cannot add a top to an impure poset");
    covers.emplace_back(m, p.size());
  }
  return GradedPoset::from_covers(p.rank() + 1, std::move(ranks), covers, std::move(labels));
}

/// P with its unique maximum removed.
inline GradedPoset without_top(const GradedPoset& p) {
  const auto tops = p.maximal_elements();
  if (tops.size() != 1 || p.rank() == 0) throw Error(Errc::NoUniqueTop, "poset has no removable top");
  std::vector<ElementId> keep;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (i != tops.front()) keep.push_back(i);
  auto q = induced_subposet(p, keep, p.rank() - 1, kBottom, true);
  return q;
}

/// Sum of (-1)^rank(tau,sigma) over tau <= sigma <= pi, for every tau < pi
/// with pi ranging over P and the virtual top, must vanish.
inline bool is_eulerian(const GradedPoset& p) {
  for (std::size_t t = 0; t < p.size(); ++t) {
    const Bitset& up = p.up_set(t);
    long total = 0;
    for (auto s = up.find_first(); s != Bitset::npos; s = up.find_next(s)) {
      const int sign = ((p.rank_of(s) - p.rank_of(t)) % 2 == 0) ? 1 : -1;
      total += sign;
      if (s == t) continue;
      Bitset between = up & p.down_set(s);
      long sum = 0;
      for (auto q = between.find_first(); q != Bitset::npos; q = between.find_next(q))
        sum += ((p.rank_of(q) - p.rank_of(t)) % 2 == 0) ? 1 : -1;
      if (sum != 0) return false;
    }
    total += (p.rank_to_top(t) % 2 == 0) ? 1 : -1;
    if (total != 0) return false;
  }
  return true;
}

namespace detail {

enum class JoinKind { Element, Top, Ambiguous };

inline std::pair<JoinKind, ElementId> try_join(const GradedPoset& p, ElementId x, ElementId y) {
  const Bitset ub = p.up_set(x) & p.up_set(y);
  if (ub.none()) return {JoinKind::Top, 0};
  for (auto u = ub.find_first(); u != Bitset::npos; u = ub.find_next(u))
    if (ub.is_subset_of(p.up_set(u))) return {JoinKind::Element, u};
  return {JoinKind::Ambiguous, 0};
}

}  // namespace detail

/// Least upper bound in P together with the virtual top.
inline ElementOrTop join(const GradedPoset& p, ElementId x, ElementId y) {
  auto [kind, e] = detail::try_join(p, x, y);
  if (kind == detail::JoinKind::Top) return kTop;
  if (kind == detail::JoinKind::Element) return e;
  throw Error(Errc::NotALattice,
              p.label(x) + " and " + p.label(y) + " have several minimal upper bounds");
}

/// P with the virtual top is a join-semilattice with 0, hence a lattice.
inline bool is_lattice(const GradedPoset& p) {
  for (std::size_t x = 0; x < p.size(); ++x)
    for (std::size_t y = x + 1; y < p.size(); ++y)
      if (detail::try_join(p, x, y).first == detail::JoinKind::Ambiguous) return false;
  return true;
}

/// Checked lattice precondition shared by the constructions over lattices.
inline void require_lattice(const GradedPoset& p) {
  if (!is_lattice(p)) throw Error(Errc::NotALattice, "poset with virtual top is not a lattice");
}

}  // namespace posetlab
