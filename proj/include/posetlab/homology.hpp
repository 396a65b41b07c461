#pragma once

// Reduced simplicial homology over Q, order complexes, links, and the
// Gorenstein / near-Gorenstein / Cohen-Macaulay predicates for posets.
//
// Poset predicates never build links explicitly. The link of a chain
// s_1 < ... < s_k in O(P) is the join of the order complexes of the open
// intervals (0,s_1), (s_1,s_2), ..., (s_k,1), and reduced Poincare
// polynomials multiply under joins. Each open interval is computed once.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "posetlab/error.hpp"
#include "posetlab/flag_enum.hpp"
#include "posetlab/linalg.hpp"
#include "posetlab/poset.hpp"

namespace posetlab {

using Simplex = std::vector<std::uint32_t>;

/// Reduced Betti numbers; betti[i + 1] is the dimension of H~_i, i >= -1.
struct HomologyProfile {
  std::vector<long> betti;

  long at(int degree) const {
    const auto i = static_cast<std::size_t>(degree + 1);
    return degree >= -1 && i < betti.size() ? betti[i] : 0;
  }
  bool is_zero() const {
    return std::all_of(betti.begin(), betti.end(), [](long b) { return b == 0; });
  }
  /// One-dimensional in `degree`, zero elsewhere.
  bool is_sphere_in(int degree) const {
    for (std::size_t i = 0; i < betti.size(); ++i)
      if (betti[i] != (static_cast<int>(i) - 1 == degree ? 1 : 0)) return false;
    return at(degree) == 1;
  }
  /// Zero in every degree below `degree`.
  bool vanishes_below(int degree) const {
    for (int d = -1; d < degree; ++d)
      if (at(d) != 0) return false;
    return true;
  }
  void trim() {
    while (!betti.empty() && betti.back() == 0) betti.pop_back();
  }
  std::string str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < betti.size(); ++i) os << (i ? "," : "") << betti[i];
    os << ']';
    return os.str();
  }
  friend bool operator==(const HomologyProfile&, const HomologyProfile&) = default;
};

/// Join of complexes: Poincare polynomials multiply (with the t-shift that
/// makes degree -1 the constant term).
inline HomologyProfile join_profiles(const HomologyProfile& a, const HomologyProfile& b) {
  HomologyProfile out;
  if (a.betti.empty() || b.betti.empty()) return out;
  out.betti.assign(a.betti.size() + b.betti.size() - 1, 0);
  for (std::size_t i = 0; i < a.betti.size(); ++i)
    for (std::size_t j = 0; j < b.betti.size(); ++j) out.betti[i + j] += a.betti[i] * b.betti[j];
  out.trim();
  return out;
}

/// A simplicial complex on vertices 0..m-1, always containing the empty face.
class SimplicialComplex {
 public:
  SimplicialComplex() : faces_(1, std::vector<Simplex>{Simplex{}}) {}

  /// Closure of the given faces under taking subsets.
  static SimplicialComplex from_faces(const std::vector<Simplex>& generators) {
    std::set<Simplex> all{Simplex{}};
    for (auto g : generators) {
      std::sort(g.begin(), g.end());
      g.erase(std::unique(g.begin(), g.end()), g.end());
      if (g.size() > 20) throw Error(Errc::ElementOutOfRange, "simplex too large to close");
      if (all.count(g)) continue;
      const std::uint32_t k = static_cast<std::uint32_t>(g.size());
      for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        Simplex s;
        for (std::uint32_t i = 0; i < k; ++i)
          if (mask >> i & 1) s.push_back(g[i]);
        all.insert(std::move(s));
      }
    }
    return from_closed(all);
  }

  /// Faces already closed under subsets (not checked beyond membership).
  template <typename Range>
  static SimplicialComplex from_closed(const Range& faces) {
    SimplicialComplex k;
    k.faces_.assign(1, {});
    for (const auto& f : faces) {
      Simplex s(f.begin(), f.end());
      std::sort(s.begin(), s.end());
      if (k.faces_.size() <= s.size()) k.faces_.resize(s.size() + 1);
      k.faces_[s.size()].push_back(std::move(s));
    }
    if (k.faces_[0].empty()) k.faces_[0].push_back({});
    for (auto& layer : k.faces_) {
      std::sort(layer.begin(), layer.end());
      layer.erase(std::unique(layer.begin(), layer.end()), layer.end());
    }
    k.reindex();
    return k;
  }

  int dim() const { return static_cast<int>(faces_.size()) - 2; }
  /// Faces of dimension d (d = -1 gives the empty face).
  const std::vector<Simplex>& faces(int d) const {
    static const std::vector<Simplex> none;
    const auto i = static_cast<std::size_t>(d + 1);
    return d >= -1 && i < faces_.size() ? faces_[i] : none;
  }
  std::size_t face_index(const Simplex& s) const {
    const auto& idx = index_.at(s.size());
    auto it = idx.find(s);
    if (it == idx.end()) throw Error(Errc::SimplexNotFound, "simplex not in complex");
    return it->second;
  }
  bool contains(const Simplex& s) const {
    return s.size() < index_.size() && index_[s.size()].count(s) > 0;
  }
  /// f_{-1}, f_0, ..., f_dim.
  std::vector<std::size_t> f_vector() const {
    std::vector<std::size_t> f;
    for (const auto& layer : faces_) f.push_back(layer.size());
    return f;
  }
  std::size_t num_vertices() const { return faces(0).size(); }

  /// Every facet has dimension dim().
  bool is_pure() const {
    for (int d = -1; d < dim(); ++d)
      for (const auto& s : faces(d)) {
        bool covered = false;
        for (const auto& t : faces(d + 1))
          if (std::includes(t.begin(), t.end(), s.begin(), s.end())) {
            covered = true;
            break;
          }
        if (!covered) return false;
      }
    return true;
  }

 private:
  void reindex() {
    index_.assign(faces_.size(), {});
    for (std::size_t d = 0; d < faces_.size(); ++d)
      for (std::size_t i = 0; i < faces_[d].size(); ++i) index_[d].emplace(faces_[d][i], i);
  }

  std::vector<std::vector<Simplex>> faces_;  // faces_[k]: faces with k vertices
  std::vector<std::map<Simplex, std::size_t>> index_;
};

namespace detail {

using SparseVec = std::vector<std::pair<std::size_t, Rational>>;  // sorted by index

/// Rank of a set of sparse vectors by column-pivot reduction on the largest
/// index. Pivot vectors are scaled so their pivot entry is 1.
inline std::size_t sparse_rank(std::vector<SparseVec> vecs) {
  std::map<std::size_t, SparseVec> pivots;
  for (auto& v : vecs) {
    while (!v.empty()) {
      auto it = pivots.find(v.back().first);
      if (it == pivots.end()) break;
      const Rational f = v.back().second;
      const SparseVec& p = it->second;
      SparseVec out;
      out.reserve(v.size() + p.size());
      std::size_t i = 0, j = 0;
      while (i < v.size() || j < p.size()) {
        if (j == p.size() || (i < v.size() && v[i].first < p[j].first)) {
          out.push_back(std::move(v[i++]));
        } else if (i == v.size() || p[j].first < v[i].first) {
          out.emplace_back(p[j].first, -f * p[j].second);
          ++j;
        } else {
          Rational x = v[i].second - f * p[j].second;
          if (x != 0) out.emplace_back(v[i].first, std::move(x));
          ++i, ++j;
        }
      }
      v = std::move(out);
    }
    if (v.empty()) continue;
    const Rational inv = 1 / v.back().second;
    for (auto& [_, x] : v) x *= inv;
    pivots.emplace(v.back().first, std::move(v));
  }
  return pivots.size();
}

/// Rank of the boundary map from d-faces to (d-1)-faces, d >= 0.
inline std::size_t boundary_rank(const SimplicialComplex& k, int d) {
  std::vector<SparseVec> cols;
  cols.reserve(k.faces(d).size());
  for (const auto& s : k.faces(d)) {
    SparseVec v;
    for (std::size_t i = 0; i < s.size(); ++i) {
      Simplex f = s;
      f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
      v.emplace_back(k.face_index(f), Rational(i % 2 == 0 ? 1 : -1));
    }
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    cols.push_back(std::move(v));
  }
  return sparse_rank(std::move(cols));
}

}  // namespace detail

/// Reduced homology via the augmented chain complex.
inline HomologyProfile reduced_homology(const SimplicialComplex& k) {
  const int top = k.dim();
  std::vector<std::size_t> ranks(static_cast<std::size_t>(top + 3), 0);  // ranks[d+1] = rank of boundary on d-faces
  for (int d = 0; d <= top; ++d) ranks[d + 1] = detail::boundary_rank(k, d);
  HomologyProfile h;
  for (int d = -1; d <= top; ++d) {
    const long faces = static_cast<long>(k.faces(d).size());
    h.betti.push_back(faces - static_cast<long>(ranks[d + 1]) - static_cast<long>(ranks[d + 2]));
  }
  h.trim();
  return h;
}

/// {t | t and s disjoint, t u s in K}.
inline SimplicialComplex link(const SimplicialComplex& k, const Simplex& s_in) {
  Simplex s = s_in;
  std::sort(s.begin(), s.end());
  if (!k.contains(s)) throw Error(Errc::SimplexNotFound, "simplex not in complex");
  std::vector<Simplex> out;
  for (int d = -1; d <= k.dim(); ++d)
    for (const auto& t : k.faces(d)) {
      if (!std::includes(t.begin(), t.end(), s.begin(), s.end())) continue;
      Simplex rest;
      std::set_difference(t.begin(), t.end(), s.begin(), s.end(), std::back_inserter(rest));
      out.push_back(std::move(rest));
    }
  return SimplicialComplex::from_closed(out);
}

/// Order complex of P minus 0. Vertex i is P.by_rank()[i + 1], so faces list
/// their vertices in rank order.
struct OrderComplex {
  SimplicialComplex complex;
  std::vector<ElementId> vertex_element;
};

inline OrderComplex order_complex_simplicial(const GradedPoset& p) {
  OrderComplex out;
  std::vector<std::uint32_t> vertex_of(p.size(), 0);
  for (std::size_t i = 1; i < p.by_rank().size(); ++i) {
    vertex_of[p.by_rank()[i]] = static_cast<std::uint32_t>(out.vertex_element.size());
    out.vertex_element.push_back(p.by_rank()[i]);
  }
  std::vector<Simplex> faces;
  for_each_chain(p, [&](const Chain& c) {
    Simplex s;
    for (std::size_t i = 1; i < c.size(); ++i) s.push_back(vertex_of[c[i]]);
    faces.push_back(std::move(s));
  });
  out.complex = SimplicialComplex::from_closed(faces);
  return out;
}

/// Outcome of a homological certification, with the first failing link.
struct HomologyReport {
  bool ok = true;
  std::string reason;
  Chain witness;  // chain of O(P) (without 0) whose link failed
  HomologyProfile witness_homology;
  explicit operator bool() const { return ok; }
};

/// Homology of the order complexes of the open intervals of P u {1}, memoised.
class IntervalHomology {
 public:
  explicit IntervalHomology(const GradedPoset& p) : p_(p) {}

  struct Entry {
    HomologyProfile homology;
    int dim = -1;
  };

  /// O((lo, hi)), hi = Top meaning the virtual top.
  const Entry& open_interval(ElementId lo, ElementOrTop hi) {
    const std::size_t key_hi = hi ? *hi : p_.size();
    auto key = std::make_pair(lo, key_hi);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Bitset inside = p_.up_set(lo);
    inside.reset(lo);
    if (hi) {
      inside &= p_.down_set(*hi);
      inside.reset(*hi);
    }
    std::vector<std::uint32_t> local(p_.size(), 0);
    std::uint32_t count = 0;
    for (auto e = inside.find_first(); e != Bitset::npos; e = inside.find_next(e)) local[e] = count++;
    std::vector<Simplex> faces{Simplex{}};
    Simplex cur;
    std::function<void(ElementId)> rec = [&](ElementId last) {
      Bitset next = inside & p_.up_set(last);
      next.reset(last);
      for (auto e = next.find_first(); e != Bitset::npos; e = next.find_next(e)) {
        cur.push_back(local[e]);
        faces.push_back(cur);
        rec(e);
        cur.pop_back();
      }
    };
    rec(lo);
    const auto k = SimplicialComplex::from_closed(faces);
    Entry entry{reduced_homology(k), k.dim()};
    return memo_.emplace(key, std::move(entry)).first->second;
  }

  /// Homology and dimension of the link of chain x (no 0; increasing).
  Entry link(const Chain& x) {
    Entry out{HomologyProfile{{1}}, -1};
    ElementId prev = kBottom;
    for (std::size_t i = 0; i <= x.size(); ++i) {
      const Entry& gap = i < x.size() ? open_interval(prev, x[i]) : open_interval(prev, kTop);
      out.homology = join_profiles(out.homology, gap.homology);
      out.dim += gap.dim + 1;
      if (i < x.size()) prev = x[i];
    }
    return out;
  }

  const GradedPoset& poset() const { return p_; }

 private:
  const GradedPoset& p_;
  std::map<std::pair<ElementId, std::size_t>, Entry> memo_;
};

namespace detail {

/// Calls f on every chain of O(P), the empty one included; stops when f
/// returns false.
inline void for_each_face_chain(const GradedPoset& p, const std::function<bool(const Chain&)>& f) {
  bool stop = false;
  for_each_chain(p, [&](const Chain& c) {
    if (stop) return;
    if (!f(Chain(c.begin() + 1, c.end()))) stop = true;
  });
}

inline std::string chain_str(const GradedPoset& p, const Chain& x) {
  if (x.empty()) return "{}";
  std::string s = "{";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "<" : "") + p.label(x[i]);
  return s + "}";
}

}  // namespace detail

/// Real homology sphere: pure, and every link (the empty face included) of
/// a face with m vertices is a sphere in degree dim - m.
inline bool is_gorenstein_complex(const SimplicialComplex& k) {
  if (!k.is_pure()) throw Error(Errc::NotPure, "complex is not pure");
  const int d = k.dim();
  for (int dd = -1; dd <= d; ++dd)
    for (const auto& s : k.faces(dd))
      if (!reduced_homology(link(k, s)).is_sphere_in(d - static_cast<int>(s.size()))) return false;
  return true;
}

inline HomologyReport gorenstein_star_report(const GradedPoset& p) {
  IntervalHomology ih(p);
  HomologyReport rep;
  const int n = p.rank();
  detail::for_each_face_chain(p, [&](const Chain& x) {
    auto e = ih.link(x);
    if (e.homology.is_sphere_in(n - static_cast<int>(x.size()) - 1)) return true;
    rep = {false, "link of " + detail::chain_str(p, x) + " is not a sphere", x, e.homology};
    return false;
  });
  return rep;
}

/// O(P) is a real homology sphere.
inline bool is_gorenstein_star(const GradedPoset& p) { return gorenstein_star_report(p).ok; }

/// Same predicate through the explicit order complex and its links.
inline bool is_gorenstein_star_direct(const GradedPoset& p) {
  const auto oc = order_complex_simplicial(p);
  if (!oc.complex.is_pure()) return false;
  return is_gorenstein_complex(oc.complex);
}

inline HomologyReport cohen_macaulay_report(const GradedPoset& p) {
  IntervalHomology ih(p);
  HomologyReport rep;
  detail::for_each_face_chain(p, [&](const Chain& x) {
    auto e = ih.link(x);
    if (e.homology.vanishes_below(e.dim)) return true;
    rep = {false, "link of " + detail::chain_str(p, x) + " has homology below its top degree", x,
           e.homology};
    return false;
  });
  return rep;
}

inline bool is_cohen_macaulay(const GradedPoset& p) { return cohen_macaulay_report(p).ok; }

namespace detail {

/// Checks the boundary is a down-closed set of rank n-1 and returns it as a
/// membership mask.
inline std::vector<char> validate_boundary(const GradedPoset& p, const std::vector<ElementId>& boundary) {
  std::vector<char> in(p.size(), 0);
  for (auto b : boundary) {
    if (b >= p.size()) throw Error(Errc::UnknownElement, "boundary element out of range");
    in[b] = 1;
  }
  for (auto b : boundary)
    for (auto l : p.lower_covers(b))
      if (!in[l]) throw Error(Errc::BoundaryNotIdeal, "boundary is not closed downwards at " + p.label(b));
  const int n = p.rank();
  if (n == 0) {
    if (!boundary.empty()) throw Error(Errc::BoundaryWrongRank, "rank 0 pair must have empty boundary");
    return in;
  }
  if (boundary.empty()) throw Error(Errc::BoundaryWrongRank, "boundary is empty");
  for (auto b : boundary) {
    if (p.rank_of(b) > n - 1) throw Error(Errc::BoundaryWrongRank, "boundary has an element of rank n");
    const bool maximal = std::none_of(p.upper_covers(b).begin(), p.upper_covers(b).end(),
                                      [&](ElementId u) { return in[u] != 0; });
    if (maximal && p.rank_of(b) != n - 1)
      throw Error(Errc::BoundaryWrongRank, "maximal boundary element " + p.label(b) + " has rank below n-1");
  }
  return in;
}

}  // namespace detail

/// Real homology ball whose boundary sphere is O(boundary).
inline HomologyReport near_gorenstein_star_report(const GradedPoset& p, const std::vector<ElementId>& boundary) {
  const auto in = detail::validate_boundary(p, boundary);
  const int n = p.rank();
  if (!boundary.empty()) {
    const auto sub = induced_subposet(p, boundary, n - 1, kBottom, true);
    auto inner = gorenstein_star_report(sub);
    if (!inner.ok) {
      Chain w;
      for (auto e : inner.witness) w.push_back(sub.origin()[e]);
      return {false, "boundary is not Gorenstein*: " + inner.reason, w, inner.witness_homology};
    }
  }
  IntervalHomology ih(p);
  HomologyReport rep;
  detail::for_each_face_chain(p, [&](const Chain& x) {
    const bool on_boundary = !boundary.empty() && (x.empty() || in[x.back()]);
    auto e = ih.link(x);
    const bool good = on_boundary ? e.homology.is_zero()
                                  : e.homology.is_sphere_in(n - static_cast<int>(x.size()) - 1);
    if (good) return true;
    rep = {false,
           "link of " + detail::chain_str(p, x) + (on_boundary ? " (boundary) is not acyclic" : " is not a sphere"),
           x, e.homology};
    return false;
  });
  return rep;
}

inline bool is_near_gorenstein_star(const GradedPoset& p, const std::vector<ElementId>& boundary) {
  return near_gorenstein_star_report(p, boundary).ok;
}

/// The boundary of a near-Gorenstein* poset: elements whose vertex link (the
/// whole complex for 0) is acyclic.
inline std::vector<ElementId> derive_boundary(const GradedPoset& p) {
  IntervalHomology ih(p);
  std::vector<ElementId> out;
  for (std::size_t s = 0; s < p.size(); ++s) {
    const Chain x = s == kBottom ? Chain{} : Chain{s};
    if (ih.link(x).homology.is_zero()) out.push_back(s);
  }
  try {
    if (is_near_gorenstein_star(p, out)) return out;
  } catch (const Error&) {
  }
  throw Error(Errc::NotNearGorenstein, "no boundary makes this poset a homology ball");
}

}  // namespace posetlab
