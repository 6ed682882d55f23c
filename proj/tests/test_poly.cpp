#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gjac/poly.hpp"
#include "gjac/roots.hpp"

using namespace gjac;

namespace {

Poly<Rat> q(std::initializer_list<long> coeffs) {
  std::vector<Rat> c;
  for (long v : coeffs) c.emplace_back(v);
  return Poly<Rat>(std::move(c));
}

Poly<Rat> random_monic(std::mt19937_64& rng, int deg, long span = 9) {
  std::uniform_int_distribution<long> d(-span, span);
  std::vector<Rat> c;
  for (int i = 0; i < deg; ++i) c.emplace_back(d(rng));
  c.emplace_back(1);
  return Poly<Rat>(std::move(c));
}

}  // namespace

TEST_CASE("divrem basics") {
  // (x^3 - x^2 - 4) / (x - 2): quotient checked by re-expanding
  const Poly<Rat> a = q({-4, 0, -1, 1});
  const Poly<Rat> b = q({-2, 1});
  const auto [quo, rem] = poly_divrem(a, b);
  CHECK(quo == q({2, 1, 1}));
  CHECK(rem.is_zero());
  CHECK(quo * b + rem == a);

  const auto [q1, r1] = poly_divrem(a, Poly<Rat>::one());
  CHECK(q1 == a);
  CHECK(r1.is_zero());

  const auto [q2, r2] = poly_divrem(b, q({0, 0, 1}));
  CHECK(q2.is_zero());
  CHECK(r2 == b);

  CHECK_THROWS_AS(poly_divrem(a, Poly<Rat>()), error);
}

TEST_CASE("divrem identity on random instances") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Poly<Rat> a = random_monic(rng, 2 + static_cast<int>(rng() % 6));
    const Poly<Rat> b = random_monic(rng, 1 + static_cast<int>(rng() % 3));
    const auto [quo, rem] = poly_divrem(a, b);
    CHECK(quo * b + rem == a);
    if (!rem.is_zero()) CHECK(rem.degree() < b.degree());
  }
}

TEST_CASE("zero polynomial degree is refused") {
  CHECK_THROWS_AS(Poly<Rat>().degree(), error);
  CHECK(Poly<Rat>().degree_or(-100) == -100);
}

TEST_CASE("gcd_monic") {
  // x^2(x-1) vs x^2
  CHECK(poly_gcd_monic(q({0, 0, -1, 1}), q({0, 0, 1})) == q({0, 0, 1}));
  // coprime
  CHECK(poly_gcd_monic(q({0, 0, 1}), q({-2, 1})) == Poly<Rat>::one());
  // common part x(x-1): factored by hand
  CHECK(poly_gcd_monic(q({0, 0, -1, 1}), q({0, -1, 1})) == q({0, -1, 1}));
  CHECK_THROWS_AS(poly_gcd_monic(Poly<Rat>(), Poly<Rat>()), error);
}

TEST_CASE("gcd divides both inputs and is divided by common divisors") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const Poly<Rat> c = random_monic(rng, 1 + static_cast<int>(rng() % 2));
    const Poly<Rat> a = c * random_monic(rng, static_cast<int>(rng() % 3));
    const Poly<Rat> b = c * random_monic(rng, static_cast<int>(rng() % 3));
    const Poly<Rat> g = poly_gcd_monic(a, b);
    CHECK(poly_divrem(a, g).second.is_zero());
    CHECK(poly_divrem(b, g).second.is_zero());
    CHECK(poly_divrem(g, poly_gcd_monic(g, c)).second.is_zero());
    // c | a and c | b, so c | g
    CHECK(poly_divrem(g, c).second.is_zero());
  }
}

TEST_CASE("xgcd certificate") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const Poly<Rat> a = random_monic(rng, 1 + static_cast<int>(rng() % 4));
    const Poly<Rat> b = random_monic(rng, 1 + static_cast<int>(rng() % 4));
    const auto [g, s, t] = poly_xgcd(a, b);
    CHECK(s * a + t * b == g);
    CHECK(g == poly_gcd_monic(a, b));
  }
}

TEST_CASE("squarefree decomposition") {
  auto parts = squarefree_decomposition(q({0, 0, -1, 1}));  // x^2(x-1)
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].first == q({-1, 1}));
  CHECK(parts[0].second == 1);
  CHECK(parts[1].first == q({0, 1}));
  CHECK(parts[1].second == 2);

  parts = squarefree_decomposition(q({0, 0, 0, 1}));  // x^3
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].first == q({0, 1}));
  CHECK(parts[0].second == 3);

  // x^5 (x-1)
  const Poly<Rat> p = poly_pow(q({0, 1}), 5) * q({-1, 1});
  parts = squarefree_decomposition(p);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].first == q({-1, 1}));
  CHECK(parts[0].second == 1);
  CHECK(parts[1].first == q({0, 1}));
  CHECK(parts[1].second == 5);

  CHECK_THROWS_AS(squarefree_decomposition(Poly<Rat>()), error);
}

TEST_CASE("max_quadratic_divisor") {
  auto [P, hp] = max_quadratic_divisor(q({0, 0, -1, 1}));
  CHECK(P == q({0, 1}));
  CHECK(hp == q({-1, 1}));

  std::tie(P, hp) = max_quadratic_divisor(q({0, 0, 0, 1}));
  CHECK(P == q({0, 1}));
  CHECK(hp == q({0, 1}));

  std::tie(P, hp) = max_quadratic_divisor(poly_pow(q({0, 1}), 5) * q({-1, 1}));
  CHECK(P == q({0, 0, 1}));
  CHECK(hp == q({0, -1, 1}));

  // even degree is fine at this layer (the curve model enforces oddness)
  std::tie(P, hp) = max_quadratic_divisor(q({0, 0, 1}));
  CHECK(P == q({0, 1}));
  CHECK(hp == Poly<Rat>::one());
  CHECK_THROWS_AS(max_quadratic_divisor(q({0, 0, 0, 2})), error);   // non-monic
}

TEST_CASE("max_quadratic_divisor properties on random odd monic inputs") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> root(-4, 4);
  std::uniform_int_distribution<int> mult(1, 3);
  for (int trial = 0; trial < 60; ++trial) {
    Poly<Rat> h = Poly<Rat>::one();
    int deg = 0;
    while (deg == 0 || deg % 2 == 0 || deg > 9) {
      h = Poly<Rat>::one();
      deg = 0;
      for (int i = 0; i < 4 && deg < 9; ++i) {
        const int m = mult(rng);
        h *= poly_pow(q({-root(rng), 1}), m);
        deg = h.degree();
      }
    }
    const auto [P, hp] = max_quadratic_divisor(h);
    CHECK(P * P * hp == h);
    CHECK(poly_gcd_monic(hp, hp.derivative()) == Poly<Rat>::one());
  }
}

TEST_CASE("interpolation") {
  CHECK(poly_interpolate<Rat>({{Rat(2), Rat(2)}}) == q({2}));
  CHECK(poly_interpolate<Rat>({{Rat(0), Rat(0)}, {Rat(1), Rat(1)}}) == q({0, 1}));
  // through (0,1),(1,2),(2,5): evaluate candidate at all three nodes
  const Poly<Rat> p = poly_interpolate<Rat>({{Rat(0), Rat(1)}, {Rat(1), Rat(2)}, {Rat(2), Rat(5)}});
  CHECK(p == q({1, 0, 1}));
  for (long xv : {0L, 1L, 2L}) CHECK(p.eval(Rat(xv)) == Rat(xv * xv + 1));
  CHECK_THROWS_AS(poly_interpolate<Rat>({{Rat(1), Rat(0)}, {Rat(1), Rat(1)}}), error);
}

TEST_CASE("poly_shift") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const Poly<Rat> p = random_monic(rng, 1 + static_cast<int>(rng() % 5));
    const Rat a(static_cast<long>(rng() % 9) - 4);
    const Poly<Rat> sh = poly_shift(p, a);
    for (long s = -3; s <= 3; ++s) CHECK(sh.eval(Rat(s)) == p.eval(a + Rat(s)));
  }
}

TEST_CASE("complex roots: residual bound and multiplicities") {
  // x^2 + 1
  auto roots = poly_roots(poly_to_cc(q({1, 0, 1})));
  REQUIRE(roots.size() == 2);
  for (const auto& [r, m] : roots) {
    CHECK(m == 1);
    CHECK(std::abs(r * r + 1.0) < 1e-9);
  }

  // x^2 (x-1)
  roots = poly_roots(poly_to_cc(q({0, 0, -1, 1})));
  REQUIRE(roots.size() == 2);
  int total = 0;
  for (const auto& [r, m] : roots) {
    total += m;
    if (m == 2) CHECK(std::abs(r) < 1e-9);
    else CHECK(std::abs(r - 1.0) < 1e-9);
  }
  CHECK(total == 3);

  // x^2 + x + 2: quadratic-formula oracle
  const Poly<CC> p = poly_to_cc(q({2, 1, 1}));
  roots = poly_roots(p);
  REQUIRE(roots.size() == 2);
  const CC disc = std::sqrt(CC(1.0 - 8.0, 0.0));
  for (const auto& [r, m] : roots) {
    CHECK(m == 1);
    const bool near_plus = std::abs(r - (-1.0 + disc) / 2.0) < 1e-8;
    const bool near_minus = std::abs(r - (-1.0 - disc) / 2.0) < 1e-8;
    CHECK((near_plus || near_minus));
    CHECK(std::abs(p.eval(r)) <= 1e-9 * p.sup_norm());
  }
}

TEST_CASE("complex roots of random rational products") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> root(-5, 5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rat> rs;
    for (int i = 0; i < 5; ++i) rs.emplace_back(root(rng));
    const Poly<Rat> p = poly_from_roots(rs);
    const auto roots = poly_roots(poly_to_cc(p));
    int total = 0;
    for (const auto& [r, m] : roots) {
      total += m;
      CHECK(std::abs(poly_to_cc(p).eval(r)) <= 1e-7 * std::max(1.0, p.sup_norm()));
    }
    CHECK(total == 5);
  }
}

TEST_CASE("exact rational roots") {
  const Poly<Rat> p = poly_pow(q({-1, 2}), 2) * q({3, 1});  // (2x-1)^2 (x+3)
  const auto roots = poly_roots_exact(p);
  REQUIRE(roots.size() == 2);
  bool saw_half = false, saw_m3 = false;
  for (const auto& [r, m] : roots) {
    if (r == Rat(1, 2)) { saw_half = true; CHECK(m == 2); }
    if (r == Rat(-3)) { saw_m3 = true; CHECK(m == 1); }
  }
  CHECK(saw_half);
  CHECK(saw_m3);

  CHECK_THROWS_AS(poly_roots_exact(q({-2, 0, 1})), exact_unavailable_error);  // x^2 - 2
}

TEST_CASE("approx backend identities stay within tolerance") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> cd(-10.0, 10.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<CC> ac, bc;
    const int da = 1 + static_cast<int>(rng() % 4), db = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < da; ++i) ac.emplace_back(cd(rng), cd(rng));
    ac.emplace_back(1.0, 0.0);
    for (int i = 0; i < db; ++i) bc.emplace_back(cd(rng), cd(rng));
    bc.emplace_back(1.0, 0.0);
    const Poly<CC> a{std::vector<CC>(ac)}, b{std::vector<CC>(bc)};
    const auto [quo, rem] = poly_divrem(a, b);
    const Poly<CC> resid = quo * b + rem - a;
    CHECK(resid.sup_norm() <= 1e-9 * std::max(1.0, a.sup_norm()));
  }
}
