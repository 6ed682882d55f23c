#pragma once
// Function and differential spaces attached to a divisor D coprime to the
// modulus, computed by brute-force linear algebra.
//
//   L_m(D): functions f = (A + B z)/cden with (f) >= -D that lie in the
//           local ring of the singular model at every singular point. On a
//           hyperelliptic modulus this membership collapses to one clean
//           divisibility: P | B (the odd part of f vanishes to the modulus
//           order at branch points, and the two split-pair expansions agree).
//   I_m(D): differentials w = ((p + q z)/(cden P)) dx/z with (w) >= D - m
//           and vanishing odd principal parts / paired residues at the
//           modulus, which again collapses to P | q.
//
// Both spaces therefore reduce to valuation conditions at the support of D
// and at infinity, with rational constraint matrices whenever the curve and
// divisor are rational.

#include <utility>
#include <vector>

#include "gjac/jacobian.hpp"

namespace gjac {

inline constexpr int kMaxDivisorDegree = 20;

namespace detail {

// Nullspace of a constraint matrix (rows over `cols` unknowns).
template <class K>
std::vector<std::vector<K>> nullspace(std::vector<std::vector<K>> rows, int cols, double tol) {
  using traits = field_traits<K>;
  double scale = 1.0;
  for (const auto& row : rows)
    for (const K& v : row) scale = std::max(scale, traits::norm(v));
  std::vector<int> pivot_of;  // pivot column per eliminated row
  size_t r = 0;
  for (int col = 0; col < cols && r < rows.size(); ++col) {
    size_t best = r;
    double best_norm = 0.0;
    for (size_t i = r; i < rows.size(); ++i) {
      const double nv = traits::norm(rows[i][static_cast<size_t>(col)]);
      if (nv > best_norm) {
        best_norm = nv;
        best = i;
      }
    }
    if (best_norm <= tol * scale) continue;  // free column
    std::swap(rows[r], rows[best]);
    const K inv = traits::one() / rows[r][static_cast<size_t>(col)];
    for (K& v : rows[r]) v = v * inv;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == r) continue;
      const K factor = rows[i][static_cast<size_t>(col)];
      if (traits::is_zero(factor, 0.0)) continue;
      for (int j = 0; j < cols; ++j)
        rows[i][static_cast<size_t>(j)] -= factor * rows[r][static_cast<size_t>(j)];
    }
    pivot_of.push_back(col);
    ++r;
  }
  std::vector<std::vector<K>> basis;
  std::vector<bool> is_pivot(static_cast<size_t>(cols), false);
  for (int p : pivot_of) is_pivot[static_cast<size_t>(p)] = true;
  for (int col = 0; col < cols; ++col) {
    if (is_pivot[static_cast<size_t>(col)]) continue;
    std::vector<K> v(static_cast<size_t>(cols), traits::zero());
    v[static_cast<size_t>(col)] = traits::one();
    for (size_t i = 0; i < pivot_of.size(); ++i)
      v[static_cast<size_t>(pivot_of[i])] = -rows[i][static_cast<size_t>(col)];
    basis.push_back(std::move(v));
  }
  return basis;
}

// A basis function together with its expansions, used to assemble rows.
template <class K>
struct SpanFunction {
  Poly<K> a;  // coefficient of 1
  Poly<K> b;  // coefficient of z
};

template <class K>
struct DivisorGeometry {
  std::vector<std::pair<PointC<K>, int>> constraint_pts;  // point, required D(p)
  int inf_mult = 0;
};

template <class K>
DivisorGeometry<K> divisor_geometry(const Divisor<K>& D, const Curve<K>& c) {
  DivisorGeometry<K> geo;
  for (const auto& [p, m] : D.terms) {
    if (p.at_inf) {
      geo.inf_mult += m;
      continue;
    }
    if (c.in_modulus_support(p.x))
      throw non_generic_error("divisor support touches the modulus");
    if (!c.on_normalized(p)) throw error("divisor point not on the curve");
    geo.constraint_pts.emplace_back(p, m);
  }
  // involutions enter with their own multiplicity (possibly zero)
  const auto find_mult = [&](const PointC<K>& q) {
    for (const auto& [p, m] : D.terms)
      if (!p.at_inf && point_eq(p, q, c.tol)) return m;
    return 0;
  };
  std::vector<std::pair<PointC<K>, int>> extra;
  for (const auto& [p, m] : geo.constraint_pts) {
    (void)m;
    const PointC<K> q = involution(p);
    bool seen = false;
    for (const auto& [r, mr] : geo.constraint_pts) {
      (void)mr;
      if (point_eq(r, q, c.tol)) seen = true;
    }
    for (const auto& [r, mr] : extra) {
      (void)mr;
      if (point_eq(r, q, c.tol)) seen = true;
    }
    if (!seen) extra.emplace_back(q, find_mult(q));
  }
  geo.constraint_pts.insert(geo.constraint_pts.end(), extra.begin(), extra.end());
  return geo;
}

// Assemble valuation constraints for num = sum_j x_j * span_j over cden at
// the constraint points, plus val(num at infinity) >= required_num_val, and
// return the nullspace.
template <class K>
std::vector<std::vector<K>> solve_span(const std::vector<SpanFunction<K>>& span,
                                       const Poly<K>& cden, const DivisorGeometry<K>& geo,
                                       int required_num_val, const Curve<K>& c) {
  using traits = field_traits<K>;
  const int cols = static_cast<int>(span.size());
  std::vector<std::vector<K>> rows;

  for (const auto& [pt, mult] : geo.constraint_pts) {
    // ord_pt(num) - ord_pt(cden) >= -mult
    const int probe = 4 * (std::abs(mult) + cden.degree_or(0) + 2);
    const auto le = c.local_expansion(pt, std::min(probe, kMaxExpansionOrder));
    const int ordc = poly_on_series(cden, le.x).valuation(c.tol) < 0
                         ? 0
                         : poly_on_series(cden, le.x).valuation(c.tol);
    const int needed = ordc - mult;
    if (needed <= 0) continue;
    std::vector<Series<K>> fn;
    fn.reserve(span.size());
    for (const auto& s : span)
      fn.push_back(poly_on_series(s.a, le.x) + poly_on_series(s.b, le.x) * le.z);
    for (int o = 0; o < needed; ++o) {
      std::vector<K> row(static_cast<size_t>(cols), traits::zero());
      for (int j = 0; j < cols; ++j) row[static_cast<size_t>(j)] = fn[static_cast<size_t>(j)].coeff(o);
      rows.push_back(std::move(row));
    }
  }

  {
    const int want = required_num_val;
    int minval = 0;
    std::vector<Laurent<K>> fn;
    int maxdeg = 0;
    for (const auto& s : span)
      maxdeg = std::max({maxdeg, s.a.degree_or(0), s.b.degree_or(0)});
    const int lord = 2 * (c.gprime + 4) + 2 * maxdeg + 2 * std::abs(want) + 8;
    const auto [xi, zi] = c.expansion_at_infinity(std::min(std::max(8, lord), kMaxExpansionOrder));
    (void)xi;
    for (const auto& s : span) {
      Laurent<K> la = poly_at_infinity(s.a, zi.unit.order());
      Laurent<K> lb = poly_at_infinity(s.b, zi.unit.order());
      Laurent<K> total = la + lb * zi;
      fn.push_back(total);
      if (!total.zero) minval = std::min(minval, total.val);
    }
    for (int o = minval; o < want; ++o) {
      std::vector<K> row(static_cast<size_t>(cols), traits::zero());
      bool nonzero = false;
      for (int j = 0; j < cols; ++j) {
        const Laurent<K>& l = fn[static_cast<size_t>(j)];
        if (l.zero) continue;
        const int idx = o - l.val;
        if (idx >= 0 && idx <= l.unit.order()) {
          row[static_cast<size_t>(j)] = l.unit.coeff(idx);
          if (!traits::is_zero(row[static_cast<size_t>(j)], 0.0)) nonzero = true;
        }
      }
      if (nonzero) rows.push_back(std::move(row));
    }
  }

  return nullspace<K>(std::move(rows), cols, c.tol);
}

}  // namespace detail

// Basis of L_m(D): functions (A + B z)/cden with P | B.
template <class K>
std::vector<RationalFunc<K>> lm_space(const Divisor<K>& D, const Curve<K>& c) {
  using traits = field_traits<K>;
  if (std::abs(D.degree()) > kMaxDivisorDegree)
    throw error("lm_space: divisor degree beyond the supported range");
  const auto geo = detail::divisor_geometry(D, c);

  Poly<K> cden = Poly<K>::one();
  for (const auto& [p, m] : D.terms)
    if (!p.at_inf && m > 0) cden *= poly_pow(Poly<K>({-p.x, traits::one()}), m);
  const int dc = cden.degree_or(0);

  // caps from the infinity valuation, one degree of slack
  const int dA = std::max(0, (geo.inf_mult + 2 * dc) / 2 + 1);
  const int dB = (geo.inf_mult + 2 * dc - 2 * c.n - 2 * c.gprime - 1) / 2 + 1;

  std::vector<detail::SpanFunction<K>> span;
  for (int j = 0; j <= dA; ++j) span.push_back({Poly<K>::monomial(j, traits::one()), Poly<K>()});
  for (int j = 0; j <= dB; ++j)
    span.push_back({Poly<K>(), c.P * Poly<K>::monomial(j, traits::one())});

  const auto null = detail::solve_span(span, cden, geo, -geo.inf_mult - 2 * dc, c);
  std::vector<RationalFunc<K>> basis;
  for (const auto& v : null) {
    Poly<K> A, B;
    for (size_t j = 0; j < span.size(); ++j) {
      A += span[j].a * v[j];
      B += span[j].b * v[j];
    }
    basis.push_back(RationalFunc<K>{A.trimmed(c.tol), B.trimmed(c.tol), cden});
  }
  return basis;
}

// Differential (p + q z)/cden * dx/z.
template <class K>
struct DifferentialRep {
  Poly<K> p, q, cden;
};

// Basis of I_m(D): differentials ((p + q z)/(cden P)) dx/z with P | q.
template <class K>
std::vector<DifferentialRep<K>> im_space(const Divisor<K>& D, const Curve<K>& c) {
  using traits = field_traits<K>;
  if (std::abs(D.degree()) > kMaxDivisorDegree)
    throw error("im_space: divisor degree beyond the supported range");
  const auto geo = detail::divisor_geometry(D, c);

  Poly<K> cdenD = Poly<K>::one();
  for (const auto& [p, m] : D.terms)
    if (!p.at_inf && m < 0) cdenD *= poly_pow(Poly<K>({-p.x, traits::one()}), -m);
  const Poly<K> cden = cdenD * c.P;
  const int dc = cden.degree_or(0);

  // ord_inf(w) = val(F) + 2g' - 2 with F = num/cden
  const int required_f_val = geo.inf_mult - 2 * c.gprime + 2;
  const int dP = std::max(0, (2 * dc - required_f_val) / 2 + 1);
  const int dQ = (2 * dc - required_f_val - 2 * c.n - 2 * c.gprime - 1) / 2 + 1;

  std::vector<detail::SpanFunction<K>> span;
  for (int j = 0; j <= dP; ++j) span.push_back({Poly<K>::monomial(j, traits::one()), Poly<K>()});
  for (int j = 0; j <= dQ; ++j)
    span.push_back({Poly<K>(), c.P * Poly<K>::monomial(j, traits::one())});

  // constraint multiplicities flip sign: ord(F) >= +D(pt)
  detail::DivisorGeometry<K> flipped = geo;
  for (auto& [pt, m] : flipped.constraint_pts) {
    (void)pt;
    m = -m;
  }
  flipped.inf_mult = 0;

  // val(num) = val(F) + val(cden at infinity) >= required_f_val - 2 dc
  const auto null = detail::solve_span(span, cden, flipped, required_f_val - 2 * dc, c);
  std::vector<DifferentialRep<K>> basis;
  for (const auto& v : null) {
    Poly<K> P, Q;
    for (size_t j = 0; j < span.size(); ++j) {
      P += span[j].a * v[j];
      Q += span[j].b * v[j];
    }
    basis.push_back(DifferentialRep<K>{P.trimmed(c.tol), Q.trimmed(c.tol), cden});
  }
  return basis;
}

template <class K>
int lm_dim(const Divisor<K>& D, const Curve<K>& c) {
  return static_cast<int>(lm_space(D, c).size());
}
template <class K>
int im_dim(const Divisor<K>& D, const Curve<K>& c) {
  return static_cast<int>(im_space(D, c).size());
}

// l_m(D) - i_m(D) = deg D + 1 - pi
template <class K>
bool riemann_roch_check(const Divisor<K>& D, const Curve<K>& c) {
  return lm_dim(D, c) - im_dim(D, c) == D.degree() + 1 - c.pi;
}

}  // namespace gjac
