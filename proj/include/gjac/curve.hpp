#pragma once
// The singular hyperelliptic curve C : y^2 = h(x) with h = P^2 h', its
// normalization C' : z^2 = h'(x), the modulus supported over the roots of P,
// and the discrete invariants (g, g', n, k, d, delta, pi).
//
// Integer invariants are computed through gcd/squarefree arithmetic alone, so
// they are available on both backends even when the roots of P are not
// representable. Branch/modulus point data needs the roots themselves; on the
// exact backend it exists only when P splits over Q and the split values
// h'(a_i) are perfect squares, otherwise the accessors throw
// exact_unavailable_error.

#include <optional>
#include <utility>
#include <vector>

#include "gjac/poly.hpp"
#include "gjac/roots.hpp"
#include "gjac/series.hpp"

namespace gjac {

template <class K>
struct PointC {
  K x{};
  K z{};
  bool at_inf = false;

  static PointC infinity() {
    PointC p;
    p.at_inf = true;
    return p;
  }
  static PointC affine(K x, K z) { return PointC{std::move(x), std::move(z), false}; }
};

template <class K>
bool point_eq(const PointC<K>& a, const PointC<K>& b, double tol = kDefaultTol) {
  if (a.at_inf || b.at_inf) return a.at_inf == b.at_inf;
  return field_traits<K>::eq(a.x, b.x, tol) && field_traits<K>::eq(a.z, b.z, tol);
}

template <class K>
PointC<K> involution(const PointC<K>& p) {
  if (p.at_inf) return p;
  return PointC<K>::affine(p.x, -p.z);
}

template <class K>
struct BranchDatum {
  K a;                 // root of P
  int ell = 0;         // multiplicity of a in P
  bool is_branch = false;  // h'(a) = 0 (one preimage) vs split (two preimages)
  std::optional<K> b;  // chosen square root of h'(a) when split
};

template <class K>
struct ModulusPoint {
  PointC<K> pt;
  int mult = 0;        // 2*ell at branch preimages, ell at each split preimage
  bool branch = false; // local parameter is z at branch points, x-a otherwise
};

// Affine local expansion: x(t), z(t) truncated at the carried order.
template <class K>
struct LocalExpansion {
  Series<K> x;
  Series<K> z;
};

inline constexpr int kMaxExpansionOrder = 64;

template <class K>
class Curve {
public:
  using traits = field_traits<K>;

  // Core data (immutable after analyze)
  Poly<K> h, P, hprime;
  int g = 0, gprime = 0, n = 0, k = 0, d = 0, delta = 0, pi = 0;
  double tol = kDefaultTol;

  static Curve analyze(const Poly<K>& h, double tol = kDefaultTol) {
    Curve c;
    c.tol = tol;
    c.h = h;
    if (h.is_zero() || !h.is_monic()) throw error("analyze_curve: h must be monic");
    if (h.degree() < 3 || h.degree() % 2 == 0)
      throw error("analyze_curve: h must have odd degree >= 3 (odd affine model only)");
    c.g = (h.degree() - 1) / 2;
    auto [P, hp] = max_quadratic_divisor(h, tol);
    c.P = P;
    c.hprime = hp;
    c.n = P.degree_or(0);
    c.gprime = (hp.degree() - 1) / 2;
    if (c.g != c.gprime + c.n) throw error("analyze_curve: degree bookkeeping failed");
    // k and d through gcd arithmetic (no root extraction): k is the number of
    // distinct roots of P, d the number of those that are roots of h'.
    if (c.n > 0) {
      const Poly<K> rad = poly_exact_div(P, poly_gcd_monic(P, P.derivative(), tol), tol);
      c.k = rad.degree();
      const Poly<K> common = poly_gcd_monic(rad, hp, tol);
      c.d = common.degree_or(0);
    }
    c.delta = c.n;   // delta_{(a_i,0)} = ell_i summed over the singular points
    c.pi = c.gprime + c.delta;
    c.build_branch_data();
    return c;
  }

  bool is_smooth() const { return n == 0; }

  // Branch data availability (always true on the approx backend).
  bool has_branch_data() const { return branch_ok_; }
  const std::string& branch_data_issue() const { return branch_issue_; }

  const std::vector<BranchDatum<K>>& branches() const {
    require_branch_data();
    return branches_;
  }
  const std::vector<ModulusPoint<K>>& modulus() const {
    require_branch_data();
    return modulus_;
  }
  int modulus_degree() const {
    require_branch_data();
    int deg = 0;
    for (const auto& m : modulus_) deg += m.mult;
    return deg;
  }

  bool on_normalized(const PointC<K>& p) const {
    if (p.at_inf) return true;
    const K resid = p.z * p.z - hprime.eval(p.x);
    return traits::is_zero(resid, tol * std::max(1.0, hprime.sup_norm()));
  }

  // C' -> C, (x, z) -> (x, P(x) z)
  std::pair<K, K> project(const PointC<K>& p) const {
    if (p.at_inf) throw error("project: point at infinity");
    return {p.x, P.eval(p.x) * p.z};
  }

  // The modulus support sits over the roots of P, so membership is a P(x)
  // test and needs no branch data.
  bool in_modulus_support(const K& x) const {
    if (n == 0) return false;
    return traits::is_zero(P.eval(x), tol * std::max(1.0, P.sup_norm()));
  }

  // Local expansion at an affine point of C'. Branch points (z = 0) use the
  // parameter t = z with x(t) the reversion of t^2 = h'(x); everywhere else
  // t = x - x0 and z(t) = z0 sqrt(h'(x0+t)/h'(x0)).
  LocalExpansion<K> local_expansion(const PointC<K>& p, int order) const {
    if (order < 1 || order > kMaxExpansionOrder)
      throw error("local_expansion: order out of range");
    if (p.at_inf) throw error("local_expansion: use expansion_at_infinity");
    if (!on_normalized(p)) throw error("local_expansion: point not on the curve");
    const K h_at = hprime.eval(p.x);
    if (traits::is_zero(p.z, tol) && traits::is_zero(h_at, tol * std::max(1.0, hprime.sup_norm()))) {
      // Weierstrass point: t = z, and x = x0 + e(t^2) where e inverts
      // s -> h'(x0 + s).
      const Poly<K> shifted = poly_shift(hprime, p.x);  // h'(x0 + s), zero constant term
      Series<K> q = Series<K>::of_poly(shifted, std::max(1, order / 2 + 1));
      q.coeff(0) = traits::zero();  // exact zero by construction; clears approx residue
      const Series<K> e = q.reverse();
      Series<K> xs = e.stretched(2).truncated(order);
      xs.coeff(0) = p.x;
      return {xs, Series<K>::identity(order)};
    }
    // split-type chart
    const Poly<K> shifted = poly_shift(hprime, p.x);
    Series<K> ratio = Series<K>::of_poly(shifted, order) * (traits::one() / h_at);
    Series<K> zs = ratio.sqrt_unit() * p.z;
    Series<K> xs = Series<K>::identity(order);
    xs.coeff(0) = p.x;
    return {xs, zs};
  }

  // Laurent pair (x, z) at infinity in the parameter t with x = 1/t^2 and
  // z of valuation -(2g'+1), principal branch.
  std::pair<Laurent<K>, Laurent<K>> expansion_at_infinity(int order) const {
    if (order < 1 || order > kMaxExpansionOrder)
      throw error("expansion_at_infinity: order out of range");
    Series<K> xu(order);
    xu.coeff(0) = traits::one();
    const Laurent<K> x = Laurent<K>::make(-2, xu);
    // z^2 = h'(x): z * t^{2g'+1} = sqrt(h'(1/t^2) t^{2(2g'+1)}), a unit series
    const Laurent<K> hp_inf = poly_at_infinity(hprime, order + 2 * hprime.degree());
    Series<K> unit = hp_inf.unit.truncated(order);
    const Laurent<K> z = Laurent<K>::make(-(2 * gprime + 1), unit.sqrt_unit());
    return {x, z};
  }

private:
  void require_branch_data() const {
    if (!branch_ok_)
      throw exact_unavailable_error("curve: branch data unavailable on this backend: " + branch_issue_);
  }

  void build_branch_data() {
    branch_ok_ = true;
    if (n == 0) return;  // smooth: empty modulus
    std::vector<std::pair<K, int>> roots;
    try {
      roots = poly_roots_in<K>(P, tol);
    } catch (const exact_unavailable_error& e) {
      branch_ok_ = false;
      branch_issue_ = e.what();
      return;
    }
    const double scale = std::max(1.0, hprime.sup_norm());
    for (const auto& [a, ell] : roots) {
      BranchDatum<K> bd;
      bd.a = a;
      bd.ell = ell;
      const K val = hprime.eval(a);
      const double mag = traits::norm(val);
      if (mag <= tol * scale) {
        bd.is_branch = true;
      } else if (!traits::is_exact && mag <= 10 * tol * scale) {
        throw gray_zone_error("analyze_curve: |h'(a)| in the classification gray zone");
      } else {
        auto b = traits::sqrt(val);
        if (!b) {
          branch_ok_ = false;
          branch_issue_ = "split value h'(a) is not a square in the field";
          branches_.clear();
          return;
        }
        bd.b = *b;
      }
      branches_.push_back(std::move(bd));
    }
    for (const auto& bd : branches_) {
      if (bd.is_branch) {
        modulus_.push_back({PointC<K>::affine(bd.a, traits::zero()), 2 * bd.ell, true});
      } else {
        modulus_.push_back({PointC<K>::affine(bd.a, *bd.b), bd.ell, false});
        modulus_.push_back({PointC<K>::affine(bd.a, -*bd.b), bd.ell, false});
      }
    }
  }

  bool branch_ok_ = true;
  std::string branch_issue_;
  std::vector<BranchDatum<K>> branches_;
  std::vector<ModulusPoint<K>> modulus_;
};

}  // namespace gjac
