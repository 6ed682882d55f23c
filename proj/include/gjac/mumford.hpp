#pragma once
// Phase space of trace-free 2x2 polynomial matrices
//
//   A(x) = [ v(x)  u(x); w(x)  -v(x) ],  u monic deg g, deg v <= g-1,
//   w monic deg g+1,
//
// with the moment map A -> v^2 + u w, fiber/stratum membership, the gcd
// structure of maximal-stratum matrices, and the translations between
// matrices and degree-g divisors on the normalized curve.

#include <random>
#include <utility>
#include <vector>

#include "gjac/curve.hpp"
#include "gjac/poly.hpp"
#include "gjac/roots.hpp"

namespace gjac {

template <class K>
struct MumfordMatrix {
  Poly<K> u, v, w;
  int g = 0;

  void validate() const {
    if (u.is_zero() || !u.is_monic() || u.degree() != g)
      throw error("MumfordMatrix: u must be monic of degree g");
    if (!v.is_zero() && v.degree() > g - 1)
      throw error("MumfordMatrix: deg v must be <= g-1");
    if (w.is_zero() || !w.is_monic() || w.degree() != g + 1)
      throw error("MumfordMatrix: w must be monic of degree g+1");
  }
};

template <class K>
struct Tangent {
  Poly<K> du, dv, dw;
};

template <class K>
bool matrix_eq(const MumfordMatrix<K>& a, const MumfordMatrix<K>& b, double tol = kDefaultTol) {
  const double scale = std::max({1.0, a.u.sup_norm(), a.v.sup_norm(), a.w.sup_norm()});
  return a.g == b.g && (a.u - b.u).sup_norm() <= tol * scale &&
         (a.v - b.v).sup_norm() <= tol * scale && (a.w - b.w).sup_norm() <= tol * scale;
}

// -det A = v^2 + u w; always monic of degree 2g+1.
template <class K>
Poly<K> moment(const MumfordMatrix<K>& A) {
  A.validate();
  return A.v * A.v + A.u * A.w;
}

template <class K>
bool in_fiber(const MumfordMatrix<K>& A, const Poly<K>& h, double tol = kDefaultTol) {
  const Poly<K> diff = moment(A) - h;
  if (diff.is_zero()) return true;
  return diff.sup_norm() <= tol * std::max(1.0, h.sup_norm());
}

// deg gcd(u, v, w); zero exactly on the maximal stratum.
template <class K>
int stratum_index(const MumfordMatrix<K>& A, double tol = kDefaultTol) {
  return poly_gcd3_monic(A.u, A.v, A.w, tol).degree();
}

// Q = gcd(P, u, v) together with the square identities it satisfies on the
// maximal stratum: gcd(P^2, u) = Q^2 and gcd(P^2, w) = gcd(P, w, v)^2.
template <class K>
std::pair<Poly<K>, bool> gcd_structure(const MumfordMatrix<K>& A, const Curve<K>& c) {
  if (stratum_index(A, c.tol) != 0)
    throw error("gcd_structure: matrix is not in the maximal stratum");
  if (!in_fiber(A, c.h, c.tol))
    throw error("gcd_structure: matrix is not in the fiber of this curve");
  const Poly<K> Q = poly_gcd3_monic(c.P, A.u, A.v, c.tol);
  const Poly<K> Qw = poly_gcd3_monic(c.P, A.w, A.v, c.tol);
  const Poly<K> P2 = c.P * c.P;
  const bool ok_u = poly_gcd_monic(P2, A.u, c.tol) == Q * Q;
  const bool ok_w = poly_gcd_monic(P2, A.w, c.tol) == Qw * Qw;
  return {Q, ok_u && ok_w};
}

// Matrix of the divisor (x_1,z_1) + ... + (x_g,z_g) on C' through
// u = prod (x - x_i), v(x_i) = P(x_i) z_i, w = (h - v^2)/u.
template <class K>
MumfordMatrix<K> divisor_to_matrix(const Curve<K>& c, const std::vector<PointC<K>>& pts) {
  using traits = field_traits<K>;
  if (static_cast<int>(pts.size()) != c.g)
    throw error("divisor_to_matrix: expected exactly g points");
  std::vector<std::pair<K, K>> nodes;
  for (const auto& p : pts) {
    if (p.at_inf) throw error("divisor_to_matrix: point at infinity");
    if (traits::is_zero(p.z, c.tol)) throw non_generic_error("divisor_to_matrix: Weierstrass point");
    if (c.n > 0 && c.in_modulus_support(p.x))
      throw non_generic_error("divisor_to_matrix: point over the modulus support");
    if (!c.on_normalized(p)) throw error("divisor_to_matrix: point not on the curve");
    nodes.emplace_back(p.x, c.P.eval(p.x) * p.z);
  }
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      if (traits::eq(pts[i].x, pts[j].x, c.tol))
        throw non_generic_error("divisor_to_matrix: repeated x-coordinate");
  std::vector<K> xs;
  for (const auto& p : pts) xs.push_back(p.x);
  MumfordMatrix<K> A;
  A.g = c.g;
  A.u = poly_from_roots(xs);
  A.v = poly_interpolate(nodes);
  A.w = poly_exact_div(c.h - A.v * A.v, A.u, c.tol).trimmed(c.tol);
  A.validate();
  return A;
}

// Inverse translation: the divisor of a maximal-stratum matrix, with the
// gcd factor Q cancelled. Returns g - 2 deg Q points (x_i, v_Q(x_i)/P_Q(x_i)).
template <class K>
std::vector<PointC<K>> matrix_to_divisor(const MumfordMatrix<K>& A, const Curve<K>& c) {
  using traits = field_traits<K>;
  if (stratum_index(A, c.tol) != 0)
    throw error("matrix_to_divisor: matrix is not in the maximal stratum");
  if (!in_fiber(A, c.h, c.tol))
    throw error("matrix_to_divisor: matrix is not in the fiber of this curve");
  const Poly<K> Q = poly_gcd3_monic(c.P, A.u, A.v, c.tol);
  Poly<K> uQQ, vQ, PQ;
  try {
    uQQ = poly_exact_div(A.u, Q * Q, c.tol).trimmed(c.tol);
    vQ = A.v.is_zero() ? Poly<K>() : poly_exact_div(A.v, Q, c.tol).trimmed(c.tol);
    PQ = poly_exact_div(c.P, Q, c.tol).trimmed(c.tol);
  } catch (const error&) {
    throw non_generic_error("matrix_to_divisor: gcd cancellation is inexact");
  }
  if (uQQ.degree_or(0) == 0) return {};
  // u_{Q^2} must be squarefree and coprime to P_Q
  if (poly_gcd_monic(uQQ, uQQ.derivative(), c.tol).degree() != 0)
    throw non_generic_error("matrix_to_divisor: repeated roots in u after cancellation");
  if (!PQ.is_zero() && PQ.degree_or(0) > 0 &&
      poly_gcd_monic(uQQ, PQ, c.tol).degree() != 0)
    throw non_generic_error("matrix_to_divisor: divisor support touches the modulus");
  std::vector<PointC<K>> out;
  for (const auto& [x, m] : poly_roots_in<K>(uQQ, c.tol)) {
    if (m != 1) throw non_generic_error("matrix_to_divisor: repeated roots in u after cancellation");
    const K denom = PQ.eval(x);
    if (traits::is_zero(denom, c.tol))
      throw non_generic_error("matrix_to_divisor: root of u over the modulus support");
    const K z = vQ.eval(x) / denom;
    PointC<K> p = PointC<K>::affine(x, z);
    if (!c.on_normalized(p))
      throw error("matrix_to_divisor: recovered point misses the curve");
    out.push_back(std::move(p));
  }
  return out;
}

namespace detail {

// Cantor arithmetic on semi-reduced pairs (U, V) with U | V^2 - f. Used by
// the exact fiber sampler directly on the singular model y^2 = h.
template <class K>
struct CantorPair {
  Poly<K> U, V;
};

template <class K>
CantorPair<K> cantor_compose(const CantorPair<K>& a, const CantorPair<K>& b, const Poly<K>& f,
                             double tol = kDefaultTol) {
  const auto [d1, e1, e2] = poly_xgcd(a.U, b.U, tol);
  Poly<K> d = d1, s1 = e1, s2 = e2, s3 = Poly<K>();
  const Poly<K> vsum = a.V + b.V;
  if (d1.degree() > 0 && !vsum.is_zero()) {
    const auto [d2, c1, c2] = poly_xgcd(d1, vsum, tol);
    d = d2;
    s1 = c1 * e1;
    s2 = c1 * e2;
    s3 = c2;
  } else if (d1.degree() > 0 && vsum.is_zero()) {
    // whole pairs cancel against their involutes
    d = d1;
    s3 = Poly<K>();
  }
  const Poly<K> U = poly_exact_div(a.U, d, tol) * poly_exact_div(b.U, d, tol);
  Poly<K> num = s1 * a.U * b.V + s2 * b.U * a.V + s3 * (a.V * b.V + f);
  Poly<K> V;
  if (d.degree_or(0) == 0) {
    V = poly_mod(num, U);
  } else {
    V = poly_mod(poly_exact_div(num, d, tol), U);
  }
  return {U, V};
}

template <class K>
CantorPair<K> cantor_reduce_once(const CantorPair<K>& p, const Poly<K>& f, double tol = kDefaultTol) {
  Poly<K> Unew = poly_exact_div(f - p.V * p.V, p.U, tol).trimmed(tol);
  Unew = Unew.monic();
  Poly<K> Vnew = poly_mod(-p.V, Unew);
  return {Unew, Vnew};
}

template <class K>
CantorPair<K> cantor_reduce(CantorPair<K> p, const Poly<K>& f, int target_deg,
                            double tol = kDefaultTol) {
  while (p.U.degree_or(0) > target_deg) p = cantor_reduce_once(p, f, tol);
  if (!p.V.is_zero() && p.U.degree_or(0) > 0) p.V = poly_mod(p.V, p.U);
  return p;
}

}  // namespace detail

// Deterministic sampling of maximal-stratum matrices in the fiber of c.h.
//
// Approx backend: x-coordinates from a rational grid in [-5, 5], z as the
// principal square root of h'(x), rejection on modulus support and repeats.
//
// Exact backend: the same grid drives z when g' = 0 (the normalization is
// rational, so grid z-values give rational points); otherwise rational fiber
// points are produced by Cantor composing the rational families
// (P^2, cP, h'-c^2) and coprime monic splittings h = u * w directly on the
// singular model. Rank-zero smooth curves only carry their finitely many
// rational splittings, which the sampler then cycles through.
template <class K>
MumfordMatrix<K> sample_fiber(const Curve<K>& c, uint64_t seed, int max_retries = 64);

template <>
inline MumfordMatrix<CC> sample_fiber<CC>(const Curve<CC>& c, uint64_t seed, int max_retries) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);
  std::uniform_int_distribution<int> num(-20, 20);
  std::uniform_int_distribution<int> den(1, 4);
  std::uniform_int_distribution<int> sign(0, 1);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    std::vector<PointC<CC>> pts;
    int guard = 0;
    while (static_cast<int>(pts.size()) < c.g && guard++ < 200) {
      const double x = static_cast<double>(num(rng)) / static_cast<double>(den(rng));
      const CC xc(x, 0.0);
      bool bad = false;
      for (const auto& p : pts)
        if (std::abs(p.x - xc) < 1e-6) bad = true;
      if (c.n > 0 && c.in_modulus_support(xc)) bad = true;
      if (bad) continue;
      const CC hv = c.hprime.eval(xc);
      if (std::abs(hv) < 1e-6) continue;  // stay clear of Weierstrass points
      CC z = std::sqrt(hv);
      if (sign(rng)) z = -z;
      pts.push_back(PointC<CC>::affine(xc, z));
    }
    if (static_cast<int>(pts.size()) < c.g) continue;
    try {
      MumfordMatrix<CC> A = divisor_to_matrix(c, pts);
      if (stratum_index(A, c.tol) == 0) return A;
    } catch (const non_generic_error&) {
    }
  }
  throw error("sample_fiber: retries exhausted");
}

template <>
inline MumfordMatrix<Rat> sample_fiber<Rat>(const Curve<Rat>& c, uint64_t seed, int max_retries) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);
  std::uniform_int_distribution<int> num(1, 20);
  std::uniform_int_distribution<int> den(1, 4);
  std::uniform_int_distribution<int> sign(0, 1);

  const auto draw_rat = [&]() {
    Rat r(num(rng), den(rng));
    return sign(rng) ? -r : r;
  };

  if (c.gprime == 0) {
    // rational normalization: h' = x - r, points (z^2 + r, z)
    const Rat r = -c.hprime.coeff(0);
    for (int attempt = 0; attempt < max_retries; ++attempt) {
      std::vector<PointC<Rat>> pts;
      int guard = 0;
      while (static_cast<int>(pts.size()) < c.g && guard++ < 200) {
        const Rat z = draw_rat();
        if (z.sign() == 0) continue;
        const Rat x = z * z + r;
        bool bad = false;
        for (const auto& p : pts)
          if (p.x == x) bad = true;
        if (c.n > 0 && c.P.eval(x).sign() == 0) bad = true;
        if (bad) continue;
        pts.push_back(PointC<Rat>::affine(x, z));
      }
      if (static_cast<int>(pts.size()) < c.g) continue;
      try {
        MumfordMatrix<Rat> A = divisor_to_matrix(c, pts);
        if (stratum_index(A) == 0) return A;
      } catch (const non_generic_error&) {
      }
    }
    throw error("sample_fiber: retries exhausted");
  }

  // Rational building blocks on the singular model.
  std::vector<detail::CantorPair<Rat>> torsion;
  {
    // coprime monic splittings h = u * w with deg u = g (v = 0)
    std::vector<std::pair<Poly<Rat>, int>> fac;
    try {
      for (const auto& [f, m] : squarefree_decomposition(c.h))
        for (const auto& [root, mr] : poly_roots_exact(f)) fac.emplace_back(Poly<Rat>({-root, Rat(1)}), m * mr);
    } catch (const exact_unavailable_error&) {
      fac.clear();
    }
    const size_t parts = fac.size();
    for (uint32_t mask = 1; mask + 1 < (1u << parts); ++mask) {
      Poly<Rat> u = Poly<Rat>::one();
      for (size_t i = 0; i < parts; ++i)
        if (mask & (1u << i)) u *= poly_pow(fac[i].first, fac[i].second);
      if (u.degree_or(0) != c.g) continue;
      const Poly<Rat> w = poly_exact_div(c.h, u);
      if (poly_gcd_monic(u, w).degree() != 0) continue;
      torsion.push_back({u, Poly<Rat>()});
    }
  }
  const bool has_family = (c.n <= c.g - 1) && (c.gprime == c.n);
  if (!has_family && torsion.empty())
    throw error("sample_fiber: no exact sampling strategy for this curve");

  for (int attempt = 0; attempt < max_retries; ++attempt) {
    try {
      detail::CantorPair<Rat> acc{Poly<Rat>::one(), Poly<Rat>()};
      const int pieces = 1 + static_cast<int>(rng() % 3);
      bool used_family = false;
      for (int i = 0; i < pieces; ++i) {
        detail::CantorPair<Rat> piece;
        if (has_family && (!used_family || torsion.empty() || (rng() % 2 == 0))) {
          Rat cparam = draw_rat();
          if (cparam.sign() == 0) cparam = Rat(1);
          piece = {c.P * c.P, c.P * cparam};
          used_family = true;
        } else {
          piece = torsion[rng() % torsion.size()];
        }
        acc = detail::cantor_compose(acc, piece, c.h, c.tol);
        acc = detail::cantor_reduce(acc, c.h, c.g, c.tol);
      }
      if (acc.U.degree_or(0) != c.g) continue;
      MumfordMatrix<Rat> A;
      A.g = c.g;
      A.u = acc.U.monic();
      A.v = acc.V;
      A.w = poly_exact_div(c.h - A.v * A.v, A.u);
      A.validate();
      if (stratum_index(A) == 0 && in_fiber(A, c.h)) return A;
    } catch (const error&) {
    }
  }
  throw error("sample_fiber: retries exhausted");
}

}  // namespace gjac
