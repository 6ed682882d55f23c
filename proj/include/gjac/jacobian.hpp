#pragma once
// Divisor classes on the normalized curve C' modulo the equivalence induced
// by the singular model C.
//
// A class is stored as the unique reduced Mumford pair (u, v) on C' (the
// image in the ordinary Jacobian) together with a jet record: one truncated
// unit series per modulus point, recording the local behaviour of the
// accumulated relation function. Two jet records represent the same kernel
// element exactly when their ratio is the jet of a local unit of C at every
// singular point:
//   - at a branch preimage (a, 0) the local ring is generated by x-a and
//     P(x) z, so unit ratios are series in t = z that are even below order
//     2 ell;
//   - at a split pair (a, +-b) the local ring identifies the two branches to
//     order ell, so the two ratio series must agree.
// The scalar ambiguity of relation functions is absorbed by these unit
// conditions (constants are units at every singular point).

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

#include "gjac/curve.hpp"
#include "gjac/mumford.hpp"
#include "gjac/poly.hpp"
#include "gjac/roots.hpp"
#include "gjac/series.hpp"

namespace gjac {

// ---------------------------------------------------------------------------
// divisors and rational functions

template <class K>
struct Divisor {
  std::vector<std::pair<PointC<K>, int>> terms;

  int degree() const {
    int d = 0;
    for (const auto& [p, m] : terms) d += m;
    return d;
  }

  Divisor& add(const PointC<K>& p, int mult, double tol = kDefaultTol) {
    for (auto& [q, m] : terms)
      if (point_eq(p, q, tol)) {
        m += mult;
        if (m == 0) {
          terms.erase(std::find_if(terms.begin(), terms.end(),
                                   [&](const auto& t) { return point_eq(t.first, p, tol); }));
        }
        return *this;
      }
    if (mult != 0) terms.emplace_back(p, mult);
    return *this;
  }

  friend Divisor operator-(const Divisor& a, const Divisor& b) {
    Divisor out = a;
    for (const auto& [p, m] : b.terms) out.add(p, -m);
    return out;
  }
  friend Divisor operator+(const Divisor& a, const Divisor& b) {
    Divisor out = a;
    for (const auto& [p, m] : b.terms) out.add(p, m);
    return out;
  }
};

// f = (a(x) + b(x) z) / cden(x) on C'; kept reduced: gcd(a, b, cden) = 1.
template <class K>
struct RationalFunc {
  Poly<K> a, b, cden;

  static RationalFunc of_poly(Poly<K> p) { return {std::move(p), Poly<K>(), Poly<K>::one()}; }
  static RationalFunc z_minus(Poly<K> V, Poly<K> den) {
    return {-std::move(V), Poly<K>::one(), std::move(den)};
  }

  RationalFunc reduced(double tol = kDefaultTol) const {
    if (a.is_zero() && b.is_zero()) return *this;
    Poly<K> g = poly_gcd3_monic(a, b, cden, tol);
    if (g.degree_or(0) == 0) return *this;
    return {a.is_zero() ? a : poly_exact_div(a, g, tol),
            b.is_zero() ? b : poly_exact_div(b, g, tol),
            poly_exact_div(cden, g, tol).monic()};
  }
};

// ---------------------------------------------------------------------------
// jets at the modulus

template <class K>
struct JetRecord {
  std::vector<Series<K>> jets;  // aligned with curve.modulus()

  friend JetRecord operator*(const JetRecord& a, const JetRecord& b) {
    JetRecord out;
    out.jets.reserve(a.jets.size());
    for (size_t i = 0; i < a.jets.size(); ++i) out.jets.push_back(a.jets[i] * b.jets[i]);
    return out;
  }
  JetRecord inverse() const {
    JetRecord out;
    out.jets.reserve(jets.size());
    for (const auto& s : jets) out.jets.push_back(s.inverse());
    return out;
  }
};

template <class K>
JetRecord<K> trivial_jets(const Curve<K>& c) {
  JetRecord<K> J;
  for (const auto& mp : c.modulus())
    J.jets.push_back(Series<K>::constant(field_traits<K>::one(), mp.mult - 1));
  return J;
}

// The jet of f at every modulus point, truncated at the point multiplicity.
// Throws support_collision_error if f has a zero or pole on the support.
template <class K>
JetRecord<K> jet_at(const RationalFunc<K>& f, const Curve<K>& c) {
  JetRecord<K> J;
  const auto& mods = c.modulus();
  J.jets.reserve(mods.size());
  for (const auto& mp : mods) {
    const int want = mp.mult - 1;
    const int slack = 8;
    const auto le = c.local_expansion(mp.pt, want + slack);
    Series<K> num = poly_on_series(f.a, le.x) + poly_on_series(f.b, le.x) * le.z;
    Series<K> den = poly_on_series(f.cden, le.x);
    const int vn = num.valuation(c.tol);
    const int vd = den.valuation(c.tol);
    if (vn < 0 || vd < 0 || vn != vd)
      throw support_collision_error("jet_at: zero or pole on the modulus support");
    Series<K> unit = num.shifted_down(vn) * den.shifted_down(vd).inverse();
    if (unit.order() < want)
      throw error("jet_at: expansion order exhausted");
    J.jets.push_back(unit.truncated(want));
  }
  return J;
}

// Ratio condition for the local units of C: even below the truncation at
// branch points, equal series across each split pair.
template <class K>
bool jets_trivial(const JetRecord<K>& J, const Curve<K>& c) {
  using traits = field_traits<K>;
  size_t mi = 0;
  for (const auto& bd : c.branches()) {
    if (bd.is_branch) {
      const Series<K>& s = J.jets[mi++];
      const double scale = std::max(1.0, s.sup_norm());
      for (int j = 1; j <= s.order(); j += 2)
        if (!traits::is_zero(s.coeff(j), c.tol * scale)) return false;
    } else {
      const Series<K>& sp = J.jets[mi];
      const Series<K>& sm = J.jets[mi + 1];
      mi += 2;
      const double scale = std::max({1.0, sp.sup_norm(), sm.sup_norm()});
      for (int j = 0; j <= sp.order(); ++j)
        if (!traits::is_zero(sp.coeff(j) - sm.coeff(j), c.tol * scale)) return false;
    }
  }
  return true;
}

template <class K>
bool jets_equivalent(const JetRecord<K>& a, const JetRecord<K>& b, const Curve<K>& c) {
  if (a.jets.size() != b.jets.size()) return false;
  if (a.jets.empty()) return true;
  return jets_trivial(a * b.inverse(), c);
}

// Coordinates of the kernel element carried by a jet record: the ratio
// series at each split pair and the odd part (relative to the constant term)
// at each branch point.
template <class K>
struct KernelCoordinates {
  std::vector<Series<K>> split_ratio;   // one unit series per split pair
  std::vector<std::vector<K>> branch_odd;  // odd coefficients of s/s(0) per branch point
};

template <class K>
KernelCoordinates<K> kernel_coordinates(const JetRecord<K>& J, const Curve<K>& c) {
  KernelCoordinates<K> out;
  size_t mi = 0;
  for (const auto& bd : c.branches()) {
    if (bd.is_branch) {
      const Series<K> s = J.jets[mi] * (field_traits<K>::one() / J.jets[mi].coeff(0));
      std::vector<K> odd;
      for (int j = 1; j <= s.order(); j += 2) odd.push_back(s.coeff(j));
      out.branch_odd.push_back(std::move(odd));
      mi += 1;
    } else {
      out.split_ratio.push_back(J.jets[mi] * J.jets[mi + 1].inverse());
      mi += 2;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// classes and the group law

template <class K>
struct GJClass {
  Poly<K> u, v;    // reduced Mumford pair on C'
  JetRecord<K> jet;
};

template <class K>
GJClass<K> identity_class(const Curve<K>& c) {
  return {Poly<K>::one(), Poly<K>(), trivial_jets(c)};
}

template <class K>
std::pair<Poly<K>, Poly<K>> tau(const GJClass<K>& cls) {
  return {cls.u, cls.v};
}

namespace detail {

template <class K>
void check_class_support(const Poly<K>& U, const Curve<K>& c) {
  if (c.n == 0 || U.degree_or(0) == 0) return;
  if (poly_gcd_monic(U, c.P, c.tol).degree() != 0)
    throw non_generic_error("class support touches the modulus");
}

// Reduce a semi-reduced pair with jet bookkeeping: each step divides out the
// relation function (z - V)/U_next and multiplies its jet in.
template <class K>
GJClass<K> reduce_class(Poly<K> U, Poly<K> V, JetRecord<K> J, const Curve<K>& c) {
  while (U.degree_or(0) > c.gprime) {
    Poly<K> Unext = poly_exact_div(c.hprime - V * V, U, c.tol).trimmed(c.tol);
    Unext = Unext.monic();
    const RationalFunc<K> rel = RationalFunc<K>::z_minus(V, Unext);
    if (!J.jets.empty()) J = J * jet_at(rel, c);
    U = Unext;
    V = U.degree_or(0) == 0 ? Poly<K>() : poly_mod(-V, U).trimmed(c.tol);
  }
  if (U.degree_or(0) == 0) {
    U = Poly<K>::one();
    V = Poly<K>();
  } else if (!V.is_zero()) {
    V = poly_mod(V, U).trimmed(c.tol);
  }
  check_class_support(U, c);
  return {std::move(U), std::move(V), std::move(J)};
}

}  // namespace detail

template <class K>
GJClass<K> class_add(const GJClass<K>& c1, const GJClass<K>& c2, const Curve<K>& c) {
  const auto [d1, e1, e2] = poly_xgcd(c1.u, c2.u, c.tol);
  Poly<K> d = d1, s1 = e1, s2 = e2, s3 = Poly<K>();
  const Poly<K> vsum = c1.v + c2.v;
  if (d1.degree() > 0 && !vsum.is_zero()) {
    const auto [d2, f1, f2] = poly_xgcd(d1, vsum, c.tol);
    d = d2;
    s1 = f1 * e1;
    s2 = f1 * e2;
    s3 = f2;
  }
  const Poly<K> U = poly_exact_div(c1.u, d, c.tol) * poly_exact_div(c2.u, d, c.tol);
  Poly<K> num = s1 * c1.u * c2.v + s2 * c2.u * c1.v + s3 * (c1.v * c2.v + c.hprime);
  Poly<K> V;
  if (d.degree_or(0) == 0) {
    V = U.degree_or(0) == 0 ? Poly<K>() : poly_mod(num, U).trimmed(c.tol);
  } else {
    V = U.degree_or(0) == 0 ? Poly<K>() : poly_mod(poly_exact_div(num, d, c.tol), U).trimmed(c.tol);
  }
  JetRecord<K> J = c1.jet * c2.jet;
  if (d.degree_or(0) > 0 && !J.jets.empty())
    J = J * jet_at(RationalFunc<K>::of_poly(d), c);
  return detail::reduce_class(U, V, std::move(J), c);
}

template <class K>
GJClass<K> class_neg(const GJClass<K>& cls, const Curve<K>& c) {
  JetRecord<K> J = cls.jet;
  if (!J.jets.empty() && cls.u.degree_or(0) > 0)
    J = J * jet_at(RationalFunc<K>::of_poly(cls.u), c);
  return {cls.u, cls.v.is_zero() ? cls.v : -cls.v, J.inverse()};
}

template <class K>
bool class_eq(const GJClass<K>& a, const GJClass<K>& b, const Curve<K>& c) {
  const double scale = std::max({1.0, a.u.sup_norm(), a.v.sup_norm(), b.u.sup_norm(), b.v.sup_norm()});
  if ((a.u - b.u).sup_norm() > c.tol * scale) return false;
  if ((a.v - b.v).sup_norm() > c.tol * scale) return false;
  return jets_equivalent(a.jet, b.jet, c);
}

template <class K>
bool class_is_identity(const GJClass<K>& a, const Curve<K>& c) {
  return class_eq(a, identity_class(c), c);
}

// Class of the degree-zero divisor p - infinity.
template <class K>
GJClass<K> point_class(const PointC<K>& p, const Curve<K>& c) {
  if (p.at_inf) return identity_class(c);
  if (c.in_modulus_support(p.x))
    throw non_generic_error("point_class: point over the modulus support");
  if (!c.on_normalized(p)) throw error("point_class: point not on the curve");
  return detail::reduce_class(Poly<K>({-p.x, field_traits<K>::one()}), Poly<K>::constant(p.z),
                              trivial_jets(c), c);
}

// Serre morphism: class of D - deg(D) * infinity, with the base point fixed
// at infinity. Accepts any divisor coprime to the modulus support.
template <class K>
GJClass<K> theta(const Divisor<K>& D, const Curve<K>& c) {
  GJClass<K> acc = identity_class(c);
  for (const auto& [p, m] : D.terms) {
    if (p.at_inf || m == 0) continue;
    GJClass<K> prim = point_class(p, c);
    if (m < 0) prim = class_neg(prim, c);
    for (int i = 0; i < std::abs(m); ++i) acc = class_add(acc, prim, c);
  }
  return acc;
}

template <class K>
bool is_m_equivalent(const Divisor<K>& D1, const Divisor<K>& D2, const Curve<K>& c) {
  if (D1.degree() != D2.degree())
    throw error("is_m_equivalent: divisors must have equal degree");
  for (const auto* D : {&D1, &D2})
    for (const auto& [p, m] : D->terms) {
      (void)m;
      if (!p.at_inf && c.in_modulus_support(p.x))
        throw non_generic_error("is_m_equivalent: divisor support touches the modulus");
    }
  return class_is_identity(theta(D1 - D2, c), c);
}

// Kernel ranks of the extension 0 -> C*^a x C^b -> Jac_m -> Jac -> 0,
// computed from the invariants and cross-checked against the dimensions of
// the realized jet group quotient when branch data is available.
template <class K>
std::pair<int, int> kernel_structure(const Curve<K>& c) {
  const int mult_rank = c.k - c.d;
  const int add_rank = c.n - c.k + c.d;
  if (c.has_branch_data()) {
    // local-unit quotient: each split pair contributes C* x C^{ell-1}
    // (the ratio series), each branch point C^{ell} (the odd coefficients)
    int mult_c = 0, add_c = 0;
    for (const auto& bd : c.branches()) {
      if (bd.is_branch) {
        add_c += bd.ell;
      } else {
        mult_c += 1;
        add_c += bd.ell - 1;
      }
    }
    if (mult_c != mult_rank || add_c != add_rank)
      throw error("kernel_structure: invariant count disagrees with the jet group");
  }
  return {mult_rank, add_rank};
}

// ---------------------------------------------------------------------------
// divisors of rational functions

// The principal divisor of f, including the point at infinity.
template <class K>
Divisor<K> divisor_of(const RationalFunc<K>& f_in, const Curve<K>& c) {
  using traits = field_traits<K>;
  const RationalFunc<K> f = f_in.reduced(c.tol);
  if (f.a.is_zero() && f.b.is_zero()) throw error("divisor_of: zero function");
  Divisor<K> out;

  // candidate x-coordinates: zeros of the norm a^2 - b^2 h' and of cden
  const Poly<K> norm = (f.a * f.a - f.b * f.b * c.hprime).trimmed(c.tol);
  std::vector<std::pair<K, int>> candidates;
  const auto add_candidates = [&](const Poly<K>& p) {
    if (p.is_zero() || p.degree() == 0) return;
    for (const auto& [x, m] : poly_roots_in<K>(p, c.tol)) {
      bool merged = false;
      for (auto& [y, my] : candidates)
        if (traits::eq(x, y, 1e3 * c.tol)) {
          my = std::max(my, m);
          merged = true;
          break;
        }
      if (!merged) candidates.emplace_back(x, m);
    }
  };
  add_candidates(norm);
  add_candidates(f.cden);

  const double hscale = std::max(1.0, c.hprime.sup_norm());
  for (const auto& [x, m] : candidates) {
    const int order = std::max(8, 2 * m + 6);
    const K hval = c.hprime.eval(x);
    std::vector<PointC<K>> pts;
    if (traits::is_zero(hval, c.tol * hscale)) {
      pts.push_back(PointC<K>::affine(x, traits::zero()));
    } else {
      auto z = traits::sqrt(hval);
      if (!z) throw exact_unavailable_error("divisor_of: branch value is not a square in the field");
      pts.push_back(PointC<K>::affine(x, *z));
      pts.push_back(PointC<K>::affine(x, -*z));
    }
    for (const auto& p : pts) {
      const auto le = c.local_expansion(p, order);
      const Series<K> num = poly_on_series(f.a, le.x) + poly_on_series(f.b, le.x) * le.z;
      const Series<K> den = poly_on_series(f.cden, le.x);
      const int vn = num.valuation(c.tol);
      const int vd = den.valuation(c.tol);
      if (vn < 0 || vd < 0) throw error("divisor_of: valuation out of carried order");
      if (vn != vd) out.add(p, vn - vd, c.tol);
    }
  }

  // infinity: the even/odd split of a + b z forbids cancellation
  const int iord = 2 * std::max({f.a.degree_or(0), f.b.degree_or(0), f.cden.degree_or(0)}) +
                   2 * c.gprime + 6;
  const auto [xi, zi] = c.expansion_at_infinity(std::min(iord, kMaxExpansionOrder));
  (void)xi;
  const Laurent<K> la = poly_at_infinity(f.a, zi.unit.order());
  const Laurent<K> lb = poly_at_infinity(f.b, zi.unit.order());
  const Laurent<K> lnum = la + lb * zi;
  const Laurent<K> lden = poly_at_infinity(f.cden, zi.unit.order());
  if (lnum.zero || lden.zero) throw error("divisor_of: vanishing fragment at infinity");
  const int vinf = lnum.val - lden.val;
  if (vinf != 0) out.add(PointC<K>::infinity(), vinf, c.tol);

  if (out.degree() != 0) throw error("divisor_of: total degree is nonzero");
  return out;
}

// ---------------------------------------------------------------------------
// the stratum-to-Jacobian maps

template <class K>
GJClass<K> phi_map(const MumfordMatrix<K>& A, const Curve<K>& c) {
  const auto pts = matrix_to_divisor(A, c);
  Divisor<K> D;
  for (const auto& p : pts) D.add(p, 1, c.tol);
  D.add(PointC<K>::infinity(), -static_cast<int>(pts.size()), c.tol);
  return theta(D, c);
}

template <class K>
struct PhiDirectResult {
  GJClass<K> cls;
  int zero_degree = 0;           // degree of the zero divisor of F
  int expected_zero_degree = 0;  // g + 2(n + k - j) + 1
  int pole_order_infinity = 0;   // 2(k + n) + 1
  Divisor<K> zeros;
};

// Evaluates the class through the explicit function
//   F = R_Q (P_Q z + v_Q) / u_{Q^2} + 1,   R = prod (x - a_i)^{ell_i + 1},
// by extracting the zero divisor of F and applying the Serre morphism.
template <class K>
PhiDirectResult<K> phi_map_direct(const MumfordMatrix<K>& A, const Curve<K>& c) {
  using traits = field_traits<K>;
  if (stratum_index(A, c.tol) != 0)
    throw error("phi_map_direct: matrix is not in the maximal stratum");
  if (!in_fiber(A, c.h, c.tol))
    throw error("phi_map_direct: matrix is not in the fiber of this curve");

  Poly<K> R = Poly<K>::one();
  for (const auto& bd : c.branches())
    R *= poly_pow(Poly<K>({-bd.a, traits::one()}), bd.ell + 1);

  const Poly<K> Q = poly_gcd3_monic(c.P, A.u, A.v, c.tol);
  const int j = Q.degree();
  Poly<K> RQ, PQ, vQ, uQQ;
  try {
    RQ = poly_exact_div(R, Q, c.tol);
    PQ = poly_exact_div(c.P, Q, c.tol);
    vQ = A.v.is_zero() ? Poly<K>() : poly_exact_div(A.v, Q, c.tol);
    uQQ = poly_exact_div(A.u, Q * Q, c.tol).trimmed(c.tol);
  } catch (const error&) {
    throw non_generic_error("phi_map_direct: gcd cancellation is inexact");
  }

  // F = (S + T z)/u_{Q^2} with S = R_Q v_Q + u_{Q^2}, T = R_Q P_Q
  const Poly<K> S = RQ * vQ + uQQ;
  const Poly<K> T = RQ * PQ;
  const Poly<K> N = (S * S - T * T * c.hprime).trimmed(c.tol);
  const Poly<K> M = poly_exact_div(N, uQQ, c.tol).trimmed(c.tol);

  PhiDirectResult<K> out;
  out.expected_zero_degree = c.g + 2 * (c.n + c.k - j) + 1;

  // pole order at infinity from the Laurent valuation of F
  {
    const auto [xi, zi] = c.expansion_at_infinity(8);
    (void)xi;
    const Laurent<K> num = poly_at_infinity(S, zi.unit.order()) +
                           poly_at_infinity(T, zi.unit.order()) * zi;
    const Laurent<K> den = poly_at_infinity(uQQ, zi.unit.order());
    if (num.zero || den.zero) throw error("phi_map_direct: vanishing fragment at infinity");
    out.pole_order_infinity = -(num.val - den.val);
  }

  // zero divisor of F: roots of M with the z-branch selected by evaluation
  const double hscale = std::max(1.0, c.hprime.sup_norm());
  const double fscale = std::max({1.0, S.sup_norm(), T.sup_norm()});
  Divisor<K> zeros;
  for (const auto& [x, m] : poly_roots_in<K>(M, c.tol)) {
    if (c.in_modulus_support(x))
      throw non_generic_error("phi_map_direct: zero divisor touches the modulus");
    const K hval = c.hprime.eval(x);
    if (traits::is_zero(hval, c.tol * hscale)) {
      zeros.add(PointC<K>::affine(x, traits::zero()), m, c.tol);
      continue;
    }
    auto zopt = traits::sqrt(hval);
    if (!zopt)
      throw exact_unavailable_error("phi_map_direct: branch value is not a square in the field");
    const K zp = *zopt;
    const double np = traits::norm(S.eval(x) + T.eval(x) * zp);
    const double nm = traits::norm(S.eval(x) - T.eval(x) * zp);
    K z;
    if constexpr (traits::is_exact) {
      if (S.eval(x) + T.eval(x) * zp == traits::zero())
        z = zp;
      else if (S.eval(x) - T.eval(x) * zp == traits::zero())
        z = -zp;
      else
        throw branch_ambiguity_error("phi_map_direct: no vanishing branch");
    } else {
      // require a clear magnitude gap between the two branches
      if (np > 1e-300 && nm > 1e-300 && np / nm < 1e3 && nm / np < 1e3)
        throw branch_ambiguity_error("phi_map_direct: branch selection ambiguous");
      z = (np < nm) ? zp : -zp;
      if (std::min(np, nm) > 1e-4 * fscale)
        throw branch_ambiguity_error("phi_map_direct: neither branch vanishes");
    }
    zeros.add(PointC<K>::affine(x, z), m, c.tol);
  }
  out.zero_degree = zeros.degree();
  if (out.zero_degree != M.degree())
    throw error("phi_map_direct: zero count does not match the norm degree");

  Divisor<K> D = zeros;
  D.add(PointC<K>::infinity(), -out.zero_degree, c.tol);
  out.zeros = zeros;
  out.cls = theta(D, c);
  return out;
}

}  // namespace gjac
