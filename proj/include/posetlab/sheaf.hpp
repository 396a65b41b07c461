#pragma once

// Sheaves of Q-vector spaces on graded posets, their cellular complexes on
// order complexes, duality, and the C / D operations that read cd-index
// coefficients off as stalk dimensions.
//
// A sheaf stores a stalk dimension per element and a restriction matrix
// (dim F_lower x dim F_upper) per cover. Cellular computations always happen
// on a simplicial base: either a face poset with vertex lists, or O(P) with
// chains as faces.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "posetlab/constructions.hpp"
#include "posetlab/error.hpp"
#include "posetlab/flag_enum.hpp"
#include "posetlab/homology.hpp"
#include "posetlab/linalg.hpp"
#include "posetlab/ncpoly.hpp"
#include "posetlab/poset.hpp"

namespace posetlab {

struct Sheaf {
  GradedPoset base;
  std::vector<std::size_t> dim;
  std::map<std::pair<ElementId, ElementId>, QMatrix> res;  // (upper, lower) cover

  const QMatrix& cover_res(ElementId hi, ElementId lo) const {
    auto it = res.find({hi, lo});
    if (it == res.end()) throw Error(Errc::NotComparable, "no cover " + base.label(hi) + " > " + base.label(lo));
    return it->second;
  }
  std::size_t total_dim() const {
    std::size_t t = 0;
    for (auto d : dim) t += d;
    return t;
  }
};

/// res^s_t for every t <= s, composed along cover paths and memoised.
class RestrictionTable {
 public:
  explicit RestrictionTable(const Sheaf& f) : f_(f) {}

  const QMatrix& operator()(ElementId s, ElementId t) const {
    auto key = std::make_pair(s, t);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    QMatrix m;
    if (s == t) {
      m = QMatrix::identity(f_.dim[s]);
    } else {
      if (!f_.base.less(t, s)) throw Error(Errc::NotComparable, "restriction needs t <= s");
      const auto& lows = f_.base.lower_covers(s);
      auto pi = std::find_if(lows.begin(), lows.end(), [&](ElementId l) { return f_.base.leq(t, l); });
      m = (*this)(*pi, t) * f_.cover_res(s, *pi);
    }
    return memo_.emplace(key, std::move(m)).first->second;
  }

 private:
  const Sheaf& f_;
  mutable std::map<std::pair<ElementId, ElementId>, QMatrix> memo_;
};

/// Shapes match the stalks and the two routes around every rank-2 diamond
/// agree, which makes all cover paths agree.
inline void validate_sheaf(const Sheaf& f) {
  const auto& p = f.base;
  if (f.dim.size() != p.size()) throw Error(Errc::InvalidSheaf, "stalk count does not match the base");
  for (auto [lo, hi] : p.covers()) {
    const QMatrix& m = f.cover_res(hi, lo);
    if (m.rows() != f.dim[lo] || m.cols() != f.dim[hi])
      throw Error(Errc::InvalidSheaf, "restriction " + p.label(hi) + " > " + p.label(lo) + " has the wrong shape");
  }
  for (std::size_t s = 0; s < p.size(); ++s)
    for (auto t = p.down_set(s).find_first(); t != Bitset::npos; t = p.down_set(s).find_next(t)) {
      if (p.rank_of(s) - p.rank_of(t) != 2) continue;
      std::optional<QMatrix> first;
      for (auto pi : p.lower_covers(s)) {
        if (!p.leq(t, pi)) continue;
        QMatrix m = f.cover_res(pi, t) * f.cover_res(s, pi);
        if (!first) first = std::move(m);
        else if (!(*first == m))
          throw Error(Errc::InvalidSheaf, "restrictions from " + p.label(s) + " to " + p.label(t) + " disagree");
      }
    }
}

inline Sheaf zero_sheaf(const GradedPoset& p) {
  Sheaf f{p, std::vector<std::size_t>(p.size(), 0), {}};
  for (auto [lo, hi] : p.covers()) f.res.emplace(std::make_pair(hi, lo), QMatrix(0, 0));
  return f;
}

/// Stalk Q on `support`, zero elsewhere, identity restrictions inside.
inline Sheaf constant_sheaf(const GradedPoset& p, const std::vector<ElementId>& support) {
  Bitset in(p.size());
  for (auto s : support) {
    if (s >= p.size()) throw Error(Errc::UnknownElement, "support element out of range");
    in.set(s);
  }
  for (auto s = in.find_first(); s != Bitset::npos; s = in.find_next(s))
    for (auto t = in.find_first(); t != Bitset::npos; t = in.find_next(t))
      if (p.less(t, s) && !(p.up_set(t) & p.down_set(s)).is_subset_of(in))
        throw Error(Errc::BadSupport, "support is not closed under intervals between " + p.label(t) + " and " +
                                          p.label(s));
  Sheaf f{p, std::vector<std::size_t>(p.size(), 0), {}};
  for (std::size_t s = 0; s < p.size(); ++s) f.dim[s] = in.test(s) ? 1 : 0;
  for (auto [lo, hi] : p.covers()) {
    QMatrix m(f.dim[lo], f.dim[hi]);
    if (f.dim[lo] && f.dim[hi]) m(0, 0) = 1;
    f.res.emplace(std::make_pair(hi, lo), std::move(m));
  }
  return f;
}

inline Sheaf constant_sheaf(const GradedPoset& p) {
  std::vector<ElementId> all(p.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return constant_sheaf(p, all);
}

/// The sheaf on the sub-poset `sub` (whose origin() points into f.base).
inline Sheaf restrict_sheaf(const Sheaf& f, const GradedPoset& sub) {
  Sheaf out{sub, std::vector<std::size_t>(sub.size(), 0), {}};
  for (std::size_t i = 0; i < sub.size(); ++i) out.dim[i] = f.dim[sub.origin()[i]];
  for (auto [lo, hi] : sub.covers()) out.res.emplace(std::make_pair(hi, lo), f.cover_res(sub.origin()[hi], sub.origin()[lo]));
  return out;
}

/// Elements of rank <= k, as a poset of rank k.
inline GradedPoset skeleton(const GradedPoset& p, int k) {
  std::vector<ElementId> keep;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.rank_of(i) <= k) keep.push_back(i);
  return induced_subposet(p, keep, k, kBottom, false);
}

/// A simplicial base: a face poset (empty face = 0) with each face's
/// vertices listed in a fixed global order.
struct CellBase {
  GradedPoset faces;
  std::vector<std::vector<std::size_t>> vertices;
};

struct CellSheaf {
  CellBase cells;
  Sheaf sheaf;
};

inline CellBase cell_base(const SimplicialComplex& k) {
  std::map<Simplex, ElementId> id;
  std::vector<int> ranks;
  std::vector<std::string> labels;
  CellBase out;
  for (int d = -1; d <= k.dim(); ++d)
    for (const auto& s : k.faces(d)) {
      id.emplace(s, ranks.size());
      ranks.push_back(d + 1);
      std::string l = "{";
      for (std::size_t i = 0; i < s.size(); ++i) l += (i ? "," : "") + std::to_string(s[i]);
      labels.push_back(l + "}");
      out.vertices.emplace_back(s.begin(), s.end());
    }
  CoverList covers;
  for (const auto& [s, i] : id)
    for (std::size_t j = 0; j < s.size(); ++j) {
      Simplex f = s;
      f.erase(f.begin() + static_cast<std::ptrdiff_t>(j));
      covers.emplace_back(id.at(f), i);
    }
  out.faces = GradedPoset::from_covers(k.dim() + 1, std::move(ranks), covers, std::move(labels), false);
  return out;
}

/// beta^*(F) on O(P): the stalk at a chain is F at its largest element.
struct PulledBack {
  CellSheaf cell;
  std::vector<Chain> chains;
  std::map<Chain, ElementId> chain_id;
};

inline PulledBack pullback(const Sheaf& f) {
  auto oc = order_complex_with_chains(f.base);
  PulledBack out;
  out.cell.cells.faces = oc.poset;
  for (const auto& c : oc.chains) out.cell.cells.vertices.emplace_back(c.begin() + 1, c.end());
  RestrictionTable table(f);
  Sheaf& g = out.cell.sheaf;
  g.base = oc.poset;
  for (const auto& c : oc.chains) g.dim.push_back(f.dim[c.back()]);
  for (auto [lo, hi] : oc.poset.covers())
    g.res.emplace(std::make_pair(hi, lo), table(oc.chains[hi].back(), oc.chains[lo].back()));
  for (std::size_t i = 0; i < oc.chains.size(); ++i) out.chain_id.emplace(oc.chains[i], i);
  out.chains = std::move(oc.chains);
  return out;
}

namespace detail {

struct SparseMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<SparseVec> columns;

  QMatrix dense() const {
    QMatrix m(rows, cols);
    for (std::size_t c = 0; c < cols; ++c)
      for (const auto& [r, v] : columns[c]) m(r, c) = v;
    return m;
  }
  SparseVec apply(const SparseVec& v) const {
    std::map<std::size_t, Rational> acc;
    for (const auto& [c, x] : v)
      for (const auto& [r, y] : columns[c]) acc[r] += x * y;
    SparseVec out;
    for (auto& [r, x] : acc)
      if (x != 0) out.emplace_back(r, x);
    return out;
  }
};

/// Position of the vertex of `big` missing from `small` (both in global order).
inline std::size_t removed_index(const std::vector<std::size_t>& big, const std::vector<std::size_t>& small) {
  for (std::size_t i = 0; i < small.size(); ++i)
    if (big[i] != small[i]) return i;
  return small.size();
}

}  // namespace detail

/// C^k = sum of the stalks at faces of rank n-k above x, for k = 0..n-rank(x).
struct CellularComplex {
  int n = 0;
  std::vector<std::vector<ElementId>> faces;
  std::vector<std::map<ElementId, std::size_t>> offset;
  std::vector<std::size_t> dim;
  std::vector<detail::SparseMatrix> d;  // d[k]: C^k -> C^{k+1}

  std::vector<std::size_t> cohomology() const {
    std::vector<std::size_t> rk(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) rk[k] = detail::sparse_rank(d[k].columns);
    std::vector<std::size_t> h(dim.size());
    for (std::size_t k = 0; k < dim.size(); ++k)
      h[k] = dim[k] - (k < rk.size() ? rk[k] : 0) - (k > 0 ? rk[k - 1] : 0);
    return h;
  }
};

/// Cellular complex of F on the faces above x (the star of x). With
/// `only_first` just d^0 is built.
inline CellularComplex cellular_complex(const CellSheaf& f, ElementId x = kBottom, bool only_first = false,
                                        bool check = true) {
  const auto& p = f.cells.faces;
  CellularComplex cc;
  cc.n = p.rank();
  const int terms = cc.n - p.rank_of(x) + 1;
  cc.faces.assign(terms, {});
  cc.offset.assign(terms, {});
  cc.dim.assign(terms, 0);
  const Bitset& up = p.up_set(x);
  for (auto y : p.by_rank()) {
    if (!up.test(y)) continue;
    const int k = cc.n - p.rank_of(y);
    cc.offset[k].emplace(y, cc.dim[k]);
    cc.faces[k].push_back(y);
    cc.dim[k] += f.sheaf.dim[y];
  }
  const int maps = only_first ? std::min(1, terms - 1) : terms - 1;
  for (int k = 0; k < maps; ++k) {
    detail::SparseMatrix m;
    m.rows = cc.dim[k + 1];
    m.cols = cc.dim[k];
    m.columns.assign(m.cols, {});
    for (auto y : cc.faces[k]) {
      const std::size_t cy = cc.offset[k].at(y);
      for (auto z : p.lower_covers(y)) {
        auto oz = cc.offset[k + 1].find(z);
        if (oz == cc.offset[k + 1].end()) continue;
        const int sign = detail::removed_index(f.cells.vertices[y], f.cells.vertices[z]) % 2 == 0 ? 1 : -1;
        const QMatrix& r = f.sheaf.cover_res(y, z);
        for (std::size_t c = 0; c < r.cols(); ++c)
          for (std::size_t rr = 0; rr < r.rows(); ++rr)
            if (r(rr, c) != 0) m.columns[cy + c].emplace_back(oz->second + rr, sign * r(rr, c));
      }
    }
    for (auto& col : m.columns)
      std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    cc.d.push_back(std::move(m));
  }
  if (check)
    for (std::size_t k = 0; k + 1 < cc.d.size(); ++k)
      for (const auto& col : cc.d[k].columns)
        if (!cc.d[k + 1].apply(col).empty()) throw Error(Errc::NotSimplicial, "cellular differential squares to nonzero");
  return cc;
}

/// H^0 of the star of x, with the faces of C^0 kept for projections.
struct H0 {
  std::vector<ElementId> facets;
  std::map<ElementId, std::size_t> offset;
  std::size_t ambient = 0;
  Kernel ker;

  std::size_t dim() const { return ker.dim(); }

  /// Coordinates in `to` (a smaller star) of the restriction of v.
  std::vector<Rational> project_vector(const std::vector<Rational>& v, const H0& to,
                                       const std::vector<std::size_t>& stalk) const {
    std::vector<Rational> w(to.ambient);
    for (auto y : to.facets) {
      const std::size_t src = offset.at(y), dst = to.offset.at(y);
      for (std::size_t i = 0; i < stalk[y]; ++i) w[dst + i] = v[src + i];
    }
    return to.ker.coords(w);
  }
};

inline H0 h0(const CellSheaf& f, ElementId x) {
  const auto cc = cellular_complex(f, x, true, false);
  H0 out;
  out.facets = cc.faces[0];
  out.offset = cc.offset[0];
  out.ambient = cc.dim[0];
  if (cc.d.empty()) out.ker = kernel(QMatrix(0, out.ambient), out.ambient);
  else out.ker = kernel(cc.d[0].dense(), out.ambient);
  return out;
}

/// Matrix (dim K_to x dim K_from) of the projection H0(x) -> H0(y), y >= x.
inline QMatrix projection(const H0& from, const H0& to, const std::vector<std::size_t>& stalk) {
  QMatrix m(to.dim(), from.dim());
  for (std::size_t j = 0; j < from.dim(); ++j) {
    std::vector<Rational> v(from.ambient);
    for (std::size_t i = 0; i < from.ambient; ++i) v[i] = from.ker.basis(i, j);
    const auto c = from.project_vector(v, to, stalk);
    for (std::size_t i = 0; i < c.size(); ++i) m(i, j) = c[i];
  }
  return m;
}

/// Every star has cellular cohomology only in degree 0.
inline bool is_cm_cell_sheaf(const CellSheaf& f) {
  for (std::size_t x = 0; x < f.cells.faces.size(); ++x) {
    const auto h = cellular_complex(f, x).cohomology();
    for (std::size_t k = 1; k < h.size(); ++k)
      if (h[k] != 0) return false;
  }
  return true;
}

inline bool is_cm_sheaf(const Sheaf& f) { return is_cm_cell_sheaf(pullback(f).cell); }

/// F^v_x = H^0(star x)^*, restrictions dual to the projections.
inline CellSheaf dual_cell_sheaf(const CellSheaf& f, bool check_cm = true) {
  if (check_cm && !is_cm_cell_sheaf(f)) throw Error(Errc::NotCohenMacaulay, "sheaf is not Cohen-Macaulay");
  const auto& p = f.cells.faces;
  std::vector<H0> hs;
  hs.reserve(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) hs.push_back(h0(f, x));
  CellSheaf out{f.cells, Sheaf{p, {}, {}}};
  for (const auto& h : hs) out.sheaf.dim.push_back(h.dim());
  for (auto [lo, hi] : p.covers())
    out.sheaf.res.emplace(std::make_pair(hi, lo), projection(hs[lo], hs[hi], f.sheaf.dim).transpose());
  return out;
}

/// Duality on a poset base through O(P): F^v_s is the dual of H^0 on the
/// star of the vertex s (the whole complex for s = 0).
class PosetDualizer {
 public:
  explicit PosetDualizer(const Sheaf& f) : f_(f), pb_(pullback(f)) {}

  const H0& at_chain(const Chain& c) {
    const ElementId id = pb_.chain_id.at(c);
    auto it = memo_.find(id);
    if (it != memo_.end()) return it->second;
    return memo_.emplace(id, h0(pb_.cell, id)).first->second;
  }
  const H0& at_element(ElementId s) { return at_chain(s == kBottom ? Chain{kBottom} : Chain{kBottom, s}); }

  std::size_t dual_dim(ElementId s) { return at_element(s).dim(); }

  /// Restriction F^v_s -> F^v_t for a cover s > t: (A^{-1} B)^T with
  /// A: K_s -> K_{t<s} and B: K_t -> K_{t<s}.
  QMatrix dual_restriction(ElementId s, ElementId t) {
    const auto& stalk = pb_.cell.sheaf.dim;
    const H0& ks = at_element(s);
    const H0& kt = at_element(t);
    if (t == kBottom) return projection(kt, ks, stalk).transpose();
    const H0& ky = at_chain(Chain{kBottom, t, s});
    const auto a_inv = inverse(projection(ks, ky, stalk));
    if (!a_inv) throw Error(Errc::NotCohenMacaulay, "star restriction at " + f_.base.label(s) + " is not invertible");
    return (*a_inv * projection(kt, ky, stalk)).transpose();
  }

  Sheaf dual() {
    Sheaf out{f_.base, {}, {}};
    for (std::size_t s = 0; s < f_.base.size(); ++s) out.dim.push_back(dual_dim(s));
    for (auto [lo, hi] : f_.base.covers()) out.res.emplace(std::make_pair(hi, lo), dual_restriction(hi, lo));
    return out;
  }

  const PulledBack& pulled_back() const { return pb_; }

 private:
  const Sheaf& f_;
  PulledBack pb_;
  std::map<ElementId, H0> memo_;
};

inline Sheaf dual_sheaf(const Sheaf& f, bool check_cm = true) {
  if (check_cm && !is_cm_sheaf(f)) throw Error(Errc::NotCohenMacaulay, "sheaf is not Cohen-Macaulay");
  PosetDualizer d(f);
  return d.dual();
}

/// sum over pi >= s of (-1)^(n - rank pi) dim F_pi.
inline long dual_dim_formula(const Sheaf& f, ElementId s) {
  const auto& p = f.base;
  long total = 0;
  for (auto pi = p.up_set(s).find_first(); pi != Bitset::npos; pi = p.up_set(s).find_next(pi))
    total += ((p.rank() - p.rank_of(pi)) % 2 == 0 ? 1 : -1) * static_cast<long>(f.dim[pi]);
  return total;
}

/// Psi_F: chain weights times the stalk dimension at the chain's top.
inline AbPoly sheaf_ab_index(const Sheaf& f) {
  std::vector<Integer> m;
  for (auto d : f.dim) m.emplace_back(static_cast<unsigned long>(d));
  return weighted_ab_index(f.base, m);
}

struct SheafOptions {
  bool check_base = true;  // every [0, s) Gorenstein*
  bool check_cm = false;   // full Cohen-Macaulay test of the input
  int max_retries = 8;
};

namespace detail {

inline void check_base(const GradedPoset& p) {
  for (std::size_t s = 1; s < p.size(); ++s)
    if (!is_gorenstein_star(interval(p, kBottom, s)))
      throw Error(Errc::BadBase, "[0," + p.label(s) + ") is not Gorenstein*");
}

inline void check_input(const Sheaf& f, const SheafOptions& opt) {
  if (opt.check_base) check_base(f.base);
  if (opt.check_cm && !is_cm_sheaf(f)) throw Error(Errc::NotCohenMacaulay, "sheaf is not Cohen-Macaulay");
}

inline Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-1000000, 1000000);
  std::uniform_int_distribution<long> den(1, 1000000);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

}  // namespace detail

/// Restriction to the elements of rank <= n-1.
inline Sheaf op_C(const Sheaf& f, const SheafOptions& opt = {}) {
  if (f.base.rank() < 1) throw Error(Errc::BadBase, "C needs a base of rank at least 1");
  detail::check_input(f, opt);
  return restrict_sheaf(f, skeleton(f.base, f.base.rank() - 1));
}

/// The seed-independent part of D: C(F)^v and, for every section e_j at a
/// rank-n element s, the rank-one terms of alpha_{e_j} at each t < s.
class DPreparation {
 public:
  explicit DPreparation(const Sheaf& f) : f_(f), cf_(restrict_sheaf(f, skeleton(f.base, f.base.rank() - 1))) {
    const GradedPoset& low = cf_.base;  // ids into low; origin() maps to f.base
    PosetDualizer dualizer(cf_);
    for (std::size_t t = 0; t < low.size(); ++t) {
      dual_dim_.push_back(dualizer.dual_dim(t));
      if (static_cast<long>(dual_dim_.back()) != dual_dim_formula(cf_, t))
        throw Error(Errc::NotCohenMacaulay, "dual stalk at " + low.label(t) + " has the wrong dimension");
    }
    for (auto [lo, hi] : low.covers()) dual_res_.emplace(std::make_pair(hi, lo), dualizer.dual_restriction(hi, lo));
    RestrictionTable table(f);
    const auto& pb = dualizer.pulled_back();
    const int n = f.base.rank();
    for (auto s : f.base.elements_of_rank(n)) {
      std::vector<ElementId> support;
      for (std::size_t t = 0; t < low.size(); ++t)
        if (f.base.less(low.origin()[t], s)) support.push_back(t);
      // Constant sheaf on [0, s) pulled back to the same O(low).
      const Sheaf rs = constant_sheaf(low, support);
      PosetDualizer rdual(rs);
      const auto& rstalk = rdual.pulled_back().cell.sheaf.dim;
      const H0& k_bottom = rdual.at_element(kBottom);
      if (k_bottom.dim() != 1) throw Error(Errc::BadBase, "[0," + f.base.label(s) + ") is not Gorenstein*");
      for (auto t : support) {
        const H0& kr = rdual.at_element(t);
        if (kr.dim() != 1) throw Error(Errc::BadBase, "[0," + f.base.label(s) + ") is not Gorenstein*");
        // iota_t: the restriction t -> 0 of the dual constant sheaf.
        Rational iota = 1;
        if (t != kBottom) iota = projection(k_bottom, kr, rstalk)(0, 0);
        std::vector<Rational> gen(kr.ambient);
        for (std::size_t i = 0; i < kr.ambient; ++i) gen[i] = kr.ker.basis(i, 0);
        const H0& kc = dualizer.at_element(t);
        const auto& cstalk = pb.cell.sheaf.dim;
        const ElementId t_full = low.origin()[t];
        const QMatrix& down = table(s, t_full);  // dim F_t x dim F_s
        for (std::size_t j = 0; j < f.dim[s]; ++j) {
          // phi_{e_j} applied to the generator, as a cocycle on the star of t.
          std::vector<Rational> img(kc.ambient);
          for (auto y : kr.facets) {
            if (rstalk[y] == 0) continue;
            const Rational& ky = gen[kr.offset.at(y)];
            if (ky == 0) continue;
            const ElementId top = low.origin()[pb.chains[y].back()];
            const QMatrix& r = table(s, top);
            const std::size_t dst = kc.offset.at(y);
            for (std::size_t i = 0; i < r.rows(); ++i) img[dst + i] = ky * r(i, j);
          }
          Term term;
          term.s = s;
          term.j = j;
          term.t = t;
          term.col.resize(down.rows());
          for (std::size_t i = 0; i < down.rows(); ++i) term.col[i] = down(i, j);
          term.row = kc.ker.coords(img);
          for (auto& x : term.row) x *= iota;
          terms_.push_back(std::move(term));
        }
      }
    }
    for (std::size_t i = 0; i < f.base.size(); ++i)
      if (f.base.rank_of(i) == n)
        for (std::size_t j = 0; j < f.dim[i]; ++j) sections_.emplace_back(i, j);
  }

  /// alpha at every t of the skeleton for the given coefficients.
  std::vector<QMatrix> alpha(const std::map<std::pair<ElementId, std::size_t>, Rational>& lambda) const {
    const GradedPoset& low = cf_.base;
    std::vector<QMatrix> a;
    for (std::size_t t = 0; t < low.size(); ++t) a.emplace_back(cf_.dim[t], dual_dim_[t]);
    for (const auto& term : terms_) {
      const Rational& l = lambda.at({term.s, term.j});
      QMatrix& m = a[term.t];
      for (std::size_t r = 0; r < term.col.size(); ++r) {
        if (term.col[r] == 0) continue;
        const Rational f = l * term.col[r];
        for (std::size_t c = 0; c < term.row.size(); ++c)
          if (term.row[c] != 0) m(r, c) += f * term.row[c];
      }
    }
    return a;
  }

  const std::vector<std::pair<ElementId, std::size_t>>& sections() const { return sections_; }
  const Sheaf& restricted() const { return cf_; }
  const std::vector<std::size_t>& dual_dims() const { return dual_dim_; }
  const QMatrix& dual_res(ElementId hi, ElementId lo) const { return dual_res_.at({hi, lo}); }

 private:
  struct Term {
    ElementId s = 0;
    std::size_t j = 0;
    ElementId t = 0;
    std::vector<Rational> col, row;
  };
  const Sheaf& f_;
  Sheaf cf_;
  std::vector<std::size_t> dual_dim_;
  std::map<std::pair<ElementId, ElementId>, QMatrix> dual_res_;
  std::vector<Term> terms_;
  std::vector<std::pair<ElementId, std::size_t>> sections_;
};

/// Finishes D with one random draw; nullopt when surjectivity fails at a
/// rank n-1 element (reported through `failed`).
inline std::optional<Sheaf> finish_D(const DPreparation& prep, std::mt19937_64& rng,
                                     std::optional<ElementId>* failed = nullptr) {
  std::map<std::pair<ElementId, std::size_t>, Rational> lambda;
  for (const auto& sec : prep.sections()) lambda.emplace(sec, detail::random_rational(rng));
  const auto a = prep.alpha(lambda);
  const Sheaf& cf = prep.restricted();
  const GradedPoset& low = cf.base;
  const int top = low.rank();
  std::vector<Kernel> ker;
  for (std::size_t t = 0; t < low.size(); ++t) {
    if (low.rank_of(t) == top && rank(a[t]) != cf.dim[t]) {
      if (failed) *failed = t;
      return std::nullopt;
    }
    ker.push_back(kernel(a[t], prep.dual_dims()[t]));
  }
  const GradedPoset out_base = skeleton(low, top - 1);
  Sheaf out{out_base, {}, {}};
  for (std::size_t i = 0; i < out_base.size(); ++i) out.dim.push_back(ker[out_base.origin()[i]].dim());
  for (auto [lo, hi] : out_base.covers()) {
    const ElementId h = out_base.origin()[hi], l = out_base.origin()[lo];
    const QMatrix image = prep.dual_res(h, l) * ker[h].basis;
    QMatrix m(ker[l].dim(), ker[h].dim());
    for (std::size_t c = 0; c < image.cols(); ++c) {
      std::vector<Rational> v(image.rows());
      for (std::size_t r = 0; r < image.rows(); ++r) v[r] = image(r, c);
      const auto coords = ker[l].coords(v);
      for (std::size_t r = 0; r < coords.size(); ++r) m(r, c) = coords[r];
    }
    out.res.emplace(std::make_pair(hi, lo), std::move(m));
  }
  return out;
}

/// Kernel of a general combination of the maps alpha_f: C(F)^v -> C(F),
/// a sheaf on the elements of rank <= n-2.
inline Sheaf op_D(const Sheaf& f, std::mt19937_64& rng, const SheafOptions& opt = {}) {
  if (f.base.rank() < 2) throw Error(Errc::BadBase, "D needs a base of rank at least 2");
  detail::check_input(f, opt);
  DPreparation prep(f);
  std::optional<ElementId> failed;
  for (int attempt = 0; attempt < std::max(1, opt.max_retries); ++attempt)
    if (auto out = finish_D(prep, rng, &failed)) return *out;
  throw Error(Errc::SurjectivityFailed,
              "alpha is not surjective at " + prep.restricted().base.label(failed.value_or(0)));
}

/// Applies w to F, rightmost letter first: w = dc means D(C(F)).
inline Sheaf apply_word(Sheaf f, const CdWord& w, std::mt19937_64& rng, const SheafOptions& opt = {}) {
  for (int i = w.length() - 1; i >= 0; --i) f = w.letter(i) ? op_D(f, rng, opt) : op_C(f, opt);
  return f;
}

/// dim w(C,D)(F) at 0.
inline std::size_t cd_coefficient_via_CD(const Sheaf& f, const CdWord& w, std::uint64_t seed,
                                         const SheafOptions& opt = {}) {
  if (w.degree() != f.base.rank()) throw Error(Errc::RankMismatch, "word degree differs from the base rank");
  std::mt19937_64 rng(seed);
  return apply_word(f, w, rng, opt).dim[kBottom];
}

inline std::size_t cd_coefficient_via_CD(const GradedPoset& p, const CdWord& w, std::uint64_t seed) {
  return cd_coefficient_via_CD(constant_sheaf(p), w, seed);
}

/// All coefficients of the f part of Psi_F = f + g a, as a cd-polynomial.
inline CdPoly cd_polynomial_via_CD(const Sheaf& f, std::uint64_t seed, const SheafOptions& opt = {}) {
  detail::check_input(f, opt);
  SheafOptions inner = opt;
  inner.check_base = false;
  inner.check_cm = false;
  CdPoly out;
  for (const auto& w : cd_words(f.base.rank())) {
    const auto d = cd_coefficient_via_CD(f, w, seed, inner);
    if (d) out.add_term(w, Integer(static_cast<unsigned long>(d)));
  }
  return out;
}

}  // namespace posetlab
