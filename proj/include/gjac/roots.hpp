#pragma once
// Root extraction.
//
// Complex backend: squarefree decomposition first, then Aberth-Ehrlich on
// each squarefree factor. The contract is the residual bound
// |p(root)| <= tol * sup|p|, not any particular method.
//
// Exact backend: rational root extraction (for polynomials that split over
// the rationals); throws exact_unavailable_error otherwise.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "gjac/poly.hpp"

namespace gjac {

namespace detail {

// Aberth-Ehrlich iteration for a squarefree monic polynomial.
inline std::vector<CC> aberth_roots(const Poly<CC>& p, double tol) {
  const int n = p.degree();
  std::vector<CC> z(static_cast<size_t>(n));
  if (n == 0) return z;
  if (n == 1) {
    z[0] = -p.coeff(0) / p.coeff(1);
    return z;
  }
  // Cauchy bound for the initial circle
  double bound = 0.0;
  for (int i = 0; i < n; ++i) bound = std::max(bound, std::abs(p.coeff(i) / p.lead()));
  bound += 1.0;
  for (int i = 0; i < n; ++i) {
    const double theta = 2.0 * M_PI * i / n + 0.41;
    z[static_cast<size_t>(i)] = std::polar(bound * (0.5 + 0.3 * i / n), theta);
  }
  const Poly<CC> dp = p.derivative();
  for (int iter = 0; iter < 400; ++iter) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const CC zi = z[static_cast<size_t>(i)];
      const CC fi = p.eval(zi);
      const CC di = dp.eval(zi);
      CC ratio = (std::abs(di) > 0) ? fi / di : fi;
      CC sum(0.0, 0.0);
      for (int j = 0; j < n; ++j)
        if (j != i) sum += 1.0 / (zi - z[static_cast<size_t>(j)]);
      const CC denom = 1.0 - ratio * sum;
      const CC w = (std::abs(denom) > 1e-300) ? ratio / denom : ratio;
      z[static_cast<size_t>(i)] = zi - w;
      worst = std::max(worst, std::abs(w));
    }
    if (worst < 1e-14 * std::max(1.0, bound)) break;
  }
  // Newton polish
  for (auto& zi : z)
    for (int it = 0; it < 3; ++it) {
      const CC d = dp.eval(zi);
      if (std::abs(d) < 1e-300) break;
      zi -= p.eval(zi) / d;
    }
  const double scale = std::max(1.0, p.sup_norm());
  for (const CC& zi : z)
    if (std::abs(p.eval(zi)) > 1e3 * tol * scale)
      throw error("aberth_roots: residual bound violated");
  return z;
}

}  // namespace detail

// All complex roots with multiplicities (multiplicity structure from the
// squarefree decomposition, then per-factor simple-root solves).
inline std::vector<std::pair<CC, int>> poly_roots(const Poly<CC>& p, double tol = kDefaultTol) {
  if (p.is_zero()) throw error("poly_roots: zero polynomial");
  std::vector<std::pair<CC, int>> out;
  if (p.degree() == 0) return out;
  for (const auto& [f, m] : squarefree_decomposition(p, tol))
    for (const CC& r : detail::aberth_roots(f.monic(), tol)) out.emplace_back(r, m);
  return out;
}

inline std::vector<std::pair<CC, int>> poly_roots_cc_of(const Poly<Rat>& p, double tol = kDefaultTol) {
  return poly_roots(poly_to_cc(p), tol);
}

namespace detail {

// Divisors of |n| up to a trial-division bound; incomplete sets are flagged.
inline bool small_divisors(const mpz_class& n_in, std::vector<mpz_class>& divs) {
  mpz_class n = abs(n_in);
  if (n == 0) return false;
  std::vector<std::pair<mpz_class, int>> fac;
  mpz_class rem = n;
  for (mpz_class f = 2; f * f <= rem && f < 1000000; ++f) {
    if (rem % f == 0) {
      int e = 0;
      while (rem % f == 0) { rem /= f; ++e; }
      fac.emplace_back(f, e);
    }
  }
  bool complete = true;
  if (rem > 1) {
    if (mpz_probab_prime_p(rem.get_mpz_t(), 20) != 0)
      fac.emplace_back(rem, 1);
    else
      complete = false;  // a large composite cofactor we did not split
  }
  divs.assign(1, mpz_class(1));
  for (const auto& [f, e] : fac) {
    const size_t base = divs.size();
    mpz_class pw = 1;
    for (int i = 1; i <= e; ++i) {
      pw *= f;
      for (size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pw);
    }
  }
  return complete;
}

}  // namespace detail

// Rational roots with multiplicities. Throws exact_unavailable_error when the
// polynomial provably does not split over Q, or when candidate enumeration is
// out of reach for the coefficient sizes at hand.
inline std::vector<std::pair<Rat, int>> poly_roots_exact(const Poly<Rat>& p) {
  if (p.is_zero()) throw error("poly_roots_exact: zero polynomial");
  std::vector<std::pair<Rat, int>> out;
  if (p.degree() == 0) return out;
  for (auto& [f0, m] : squarefree_decomposition(p)) {
    Poly<Rat> f = f0;
    while (!f.is_zero() && f.degree() >= 1) {
      if (field_traits<Rat>::is_zero(f.coeff(0))) {
        out.emplace_back(Rat(0), m);
        f = f.shifted_down(1);
        continue;
      }
      if (f.degree() == 1) {
        out.emplace_back(-f.coeff(0) / f.coeff(1), m);
        break;
      }
      // integerize: common denominator, then content-one integer coefficients
      mpz_class den = 1;
      for (const Rat& c : f.coeffs()) den = lcm(den, c.raw().get_den());
      std::vector<mpz_class> ic;
      ic.reserve(f.coeffs().size());
      mpz_class content = 0;
      for (const Rat& c : f.coeffs()) {
        mpz_class v = c.raw().get_num() * (den / c.raw().get_den());
        ic.push_back(v);
        content = gcd(content, v);
      }
      if (content > 1)
        for (mpz_class& v : ic) v /= content;
      std::vector<mpz_class> num_divs, den_divs;
      const bool c0 = detail::small_divisors(ic.front(), num_divs);
      const bool cn = detail::small_divisors(ic.back(), den_divs);
      bool found = false;
      for (const mpz_class& a : num_divs) {
        for (const mpz_class& b : den_divs) {
          for (int s = 0; s < 2; ++s) {
            Rat cand(s == 0 ? mpq_class(a, b) : mpq_class(-a, b));
            if (field_traits<Rat>::is_zero(f.eval(cand))) {
              out.emplace_back(cand, m);
              f = poly_exact_div(f, Poly<Rat>({-cand, Rat(1)}));
              found = true;
              break;
            }
          }
          if (found) break;
        }
        if (found) break;
      }
      if (!found) {
        if (c0 && cn)
          throw exact_unavailable_error("poly_roots_exact: polynomial does not split over Q");
        throw exact_unavailable_error("poly_roots_exact: candidate enumeration out of reach");
      }
    }
  }
  return out;
}

// Backend dispatch used by generic code.
template <class K>
std::vector<std::pair<K, int>> poly_roots_in(const Poly<K>& p, double tol = kDefaultTol);

template <>
inline std::vector<std::pair<Rat, int>> poly_roots_in<Rat>(const Poly<Rat>& p, double /*tol*/) {
  return poly_roots_exact(p);
}

template <>
inline std::vector<std::pair<CC, int>> poly_roots_in<CC>(const Poly<CC>& p, double tol) {
  return poly_roots(p, tol);
}

}  // namespace gjac
