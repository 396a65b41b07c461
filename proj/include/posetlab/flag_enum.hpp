#pragma once

// Chain weights, ab- and cd-indices, and the flag-enumeration formulas for
// the posets Lambda_nu and their semisuspensions.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "posetlab/error.hpp"
#include "posetlab/ncpoly.hpp"
#include "posetlab/poset.hpp"

namespace posetlab {

/// A chain 0 = s_0 < s_1 < ... < s_k.
using Chain = std::vector<ElementId>;

namespace detail {

/// (a-b)^k for k = 0..n, computed once per call site.
class PowerTable {
 public:
  explicit PowerTable(int n) {
    const AbPoly amb = ab_a() - ab_b();
    powers_.push_back(AbPoly(1));
    for (int k = 1; k <= std::max(n, 0); ++k) powers_.push_back(powers_.back() * amb);
  }
  const AbPoly& operator[](int k) const { return powers_.at(k); }

 private:
  std::vector<AbPoly> powers_;
};

}  // namespace detail

/// Calls f on every chain starting at 0, depth first along the order.
inline void for_each_chain(const GradedPoset& p, const std::function<void(const Chain&)>& f) {
  Chain chain{kBottom};
  std::function<void()> rec = [&] {
    f(chain);
    const ElementId last = chain.back();
    const Bitset& up = p.up_set(last);
    for (auto e = up.find_first(); e != Bitset::npos; e = up.find_next(e)) {
      if (e == last) continue;
      chain.push_back(e);
      rec();
      chain.pop_back();
    }
  };
  rec();
}

/// (a-b)^(r(s0,s1)-1) b (a-b)^(r(s1,s2)-1) b ... b (a-b)^(r(sk,1)-1).
inline AbPoly weight(const GradedPoset& p, const Chain& chain) {
  if (chain.empty() || chain.front() != kBottom)
    throw Error(Errc::InvalidChain, "chain must start at 0");
  for (std::size_t i = 1; i < chain.size(); ++i)
    if (!p.less(chain[i - 1], chain[i])) throw Error(Errc::InvalidChain, "chain is not increasing");
  const detail::PowerTable pw(p.rank() + 1);
  AbPoly out(1);
  for (std::size_t i = 1; i < chain.size(); ++i)
    out = out * pw[p.rank_of(chain[i]) - p.rank_of(chain[i - 1]) - 1] * ab_b();
  return out * pw[p.rank_to_top(chain.back()) - 1];
}

/// Sum over chains x of wt(x) * mult(top of x). With unit multiplicities this
/// is the ab-index; the sheaf engine passes stalk dimensions.
inline AbPoly weighted_ab_index(const GradedPoset& p, const std::vector<Integer>& mult) {
  const detail::PowerTable pw(p.rank() + 1);
  // prefix[x]: summed weights of chains ending at x, through the final b.
  std::vector<AbPoly> prefix(p.size());
  prefix[kBottom] = AbPoly(1);
  AbPoly total;
  for (auto x : p.by_rank()) {
    if (x != kBottom) {
      AbPoly acc;
      const Bitset& below = p.down_set(x);
      for (auto t = below.find_first(); t != Bitset::npos; t = below.find_next(t)) {
        if (t == x || prefix[t].is_zero()) continue;
        acc += prefix[t] * pw[p.rank_of(x) - p.rank_of(t) - 1];
      }
      prefix[x] = acc * ab_b();
    }
    if (mult[x] != 0) total += prefix[x] * pw[p.rank_to_top(x) - 1] * mult[x];
  }
  return total;
}

inline AbPoly ab_index(const GradedPoset& p) {
  return weighted_ab_index(p, std::vector<Integer>(p.size(), Integer(1)));
}

inline CdPoly cd_index(const GradedPoset& p) {
  try {
    return cd_contract(ab_index(p));
  } catch (const Error& e) {
    if (e.code() == Errc::NotExpressible) throw Error(Errc::NotEulerian, e.what());
    throw;
  }
}

/// cd-index of a near-Gorenstein* pair, split as phi (degree n) plus the
/// boundary index (degree n-1).
struct NearCdIndex {
  CdPoly phi;
  CdPoly boundary;
  CdPoly total() const { return phi + boundary; }
};

/// ab-index of the sub-poset on `boundary`, taken with rank n-1. The empty
/// set has index 0.
inline AbPoly boundary_ab_index(const GradedPoset& p, const std::vector<ElementId>& boundary) {
  if (boundary.empty()) return AbPoly{};
  return ab_index(induced_subposet(p, boundary, p.rank() - 1));
}

inline NearCdIndex near_cd_index(const GradedPoset& p, const std::vector<ElementId>& boundary) {
  const AbPoly whole = ab_index(p);
  const AbPoly bd = boundary_ab_index(p, boundary);
  const AbPoly phi = whole - bd * ab_a();
  return {cd_contract(phi), cd_contract(bd)};
}

namespace detail {

inline void require_proper(const GradedPoset& lat, ElementId nu) {
  if (nu == kBottom || nu >= lat.size())
    throw Error(Errc::ElementOutOfRange, "element must satisfy 0 < nu < 1");
}

/// Elements pi with nu <= pi, in rank order.
inline std::vector<ElementId> upper_elements(const GradedPoset& p, ElementId nu) {
  std::vector<ElementId> out;
  for (auto x : p.by_rank())
    if (p.leq(nu, x)) out.push_back(x);
  return out;
}

}  // namespace detail

/// Sum over nu <= pi < 1 of Psi_[0,pi) * a * (b-a)^(r(pi,1)-1).
inline AbPoly lambda_nu_ab_formula(const GradedPoset& lat, ElementId nu) {
  detail::require_proper(lat, nu);
  require_lattice(lat);
  const AbPoly bma = ab_b() - ab_a();
  AbPoly out;
  for (auto pi : detail::upper_elements(lat, nu)) {
    const AbPoly lower = ab_index(interval(lat, kBottom, pi, false));
    out += lower * ab_a() * pow(bma, lat.rank_to_top(pi) - 1);
  }
  return out;
}

/// Total weight of the chains through * in the semisuspension:
/// sum of Psi_[0,pi) * ((a-b)^(r-1) - a(a-b)^(r-2)(1+(-1)^r)) * b, r = r(pi,1).
inline AbPoly star_chain_sum(const GradedPoset& lat, ElementId nu) {
  detail::require_proper(lat, nu);
  require_lattice(lat);
  const AbPoly amb = ab_a() - ab_b();
  AbPoly out;
  for (auto pi : detail::upper_elements(lat, nu)) {
    const int r = lat.rank_to_top(pi);
    AbPoly factor = pow(amb, r - 1);
    // (1 + (-1)^r) vanishes for odd r, which also covers the r = 1 term.
    if (r % 2 == 0) factor -= ab_a() * pow(amb, r - 2) * Integer(2);
    out += ab_index(interval(lat, kBottom, pi, false)) * factor * ab_b();
  }
  return out;
}

/// Sum over nu <= pi < 1 of Psi_[0,pi) * alpha_{r(pi,1)}.
inline CdPoly lambda_nu_prime_cd(const GradedPoset& lat, ElementId nu) {
  detail::require_proper(lat, nu);
  require_lattice(lat);
  CdPoly out;
  for (auto pi : detail::upper_elements(lat, nu))
    out += cd_index(interval(lat, kBottom, pi, false)) * alpha(lat.rank_to_top(pi));
  return out;
}

/// Pyr(Psi_[tau,pi)) - alpha_r(tau,pi) = sum_{tau<sigma<pi} alpha_r(tau,sigma) Pyr(Psi_[sigma,pi)).
inline bool pyr_alpha_recurrence_check(const GradedPoset& p, ElementId tau, ElementOrTop pi) {
  if (pi && !p.less(tau, *pi)) throw Error(Errc::NotComparable, "need tau < pi");
  auto rank_between = [&](ElementId x, ElementOrTop y) {
    return y ? p.rank_of(*y) - p.rank_of(x) : p.rank_to_top(x);
  };
  const CdPoly lhs = pyr_op(cd_index(interval(p, tau, pi, false))) - alpha(rank_between(tau, pi));
  CdPoly rhs;
  const Bitset& up = p.up_set(tau);
  for (auto s = up.find_first(); s != Bitset::npos; s = up.find_next(s)) {
    if (s == tau) continue;
    if (pi && !p.less(s, *pi)) continue;
    rhs += alpha(p.rank_of(s) - p.rank_of(tau)) * pyr_op(cd_index(interval(p, s, pi, false)));
  }
  return lhs == rhs;
}

}  // namespace posetlab
