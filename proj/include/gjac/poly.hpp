#pragma once
// Dense univariate polynomials over a scalar backend.
//
// Invariant: the coefficient vector carries no trailing zero (exact zero for
// the rational backend, bitwise 0.0 for the complex backend), so the zero
// polynomial is the empty vector. degree() refuses the zero polynomial
// instead of returning -1 into arithmetic.

#include <algorithm>
#include <cassert>
#include <utility>
#include <vector>

#include "gjac/scalar.hpp"

namespace gjac {

template <class K>
class Poly {
public:
  using traits = field_traits<K>;

  Poly() = default;
  explicit Poly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim_exact(); }
  Poly(std::initializer_list<K> coeffs) : c_(coeffs) { trim_exact(); }

  static Poly zero() { return Poly(); }
  static Poly constant(K v) { return Poly(std::vector<K>{std::move(v)}); }
  static Poly one() { return constant(traits::one()); }
  static Poly x() { return Poly(std::vector<K>{traits::zero(), traits::one()}); }
  static Poly monomial(int deg, K v) {
    std::vector<K> c(static_cast<size_t>(deg) + 1, traits::zero());
    c.back() = std::move(v);
    return Poly(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const {
    if (is_zero()) throw error("Poly: degree of the zero polynomial");
    return static_cast<int>(c_.size()) - 1;
  }
  // degree, with the zero polynomial mapped to the given sentinel
  int degree_or(int sentinel) const { return is_zero() ? sentinel : degree(); }

  const K& lead() const {
    if (is_zero()) throw error("Poly: leading coefficient of zero");
    return c_.back();
  }
  K coeff(int i) const {
    if (i < 0 || static_cast<size_t>(i) >= c_.size()) return traits::zero();
    return c_[static_cast<size_t>(i)];
  }
  const std::vector<K>& coeffs() const { return c_; }

  bool is_monic() const { return !is_zero() && c_.back() == traits::one(); }

  K eval(const K& x) const {
    K acc = traits::zero();
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  Poly operator-() const {
    std::vector<K> c = c_;
    for (K& v : c) v = -v;
    return Poly(std::move(c));
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<K> c(std::max(a.c_.size(), b.c_.size()), traits::zero());
    for (size_t i = 0; i < a.c_.size(); ++i) c[i] = a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return Poly(std::move(c));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<K> c(std::max(a.c_.size(), b.c_.size()), traits::zero());
    for (size_t i = 0; i < a.c_.size(); ++i) c[i] = a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
    return Poly(std::move(c));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<K> c(a.c_.size() + b.c_.size() - 1, traits::zero());
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(c));
  }
  friend Poly operator*(const Poly& a, const K& s) {
    std::vector<K> c = a.c_;
    for (K& v : c) v = v * s;
    return Poly(std::move(c));
  }
  friend Poly operator*(const K& s, const Poly& a) { return a * s; }

  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (size_t i = 0; i < a.c_.size(); ++i)
      if (!(a.c_[i] == b.c_[i])) return false;
    return true;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly derivative() const {
    if (is_zero() || degree() == 0) return Poly();
    std::vector<K> c(c_.size() - 1, traits::zero());
    for (size_t i = 1; i < c_.size(); ++i) c[i - 1] = c_[i] * traits::from_int(static_cast<long>(i));
    return Poly(std::move(c));
  }

  Poly monic() const {
    if (is_zero()) throw error("Poly: cannot normalize zero");
    const K inv = traits::one() / c_.back();
    return *this * inv;
  }

  // Drop the i lowest coefficients: floor(p / x^i).
  Poly shifted_down(int i) const {
    if (is_zero() || static_cast<size_t>(i) >= c_.size()) return Poly();
    return Poly(std::vector<K>(c_.begin() + i, c_.end()));
  }
  // Multiply by x^i.
  Poly shifted_up(int i) const {
    if (is_zero()) return Poly();
    std::vector<K> c(static_cast<size_t>(i), traits::zero());
    c.insert(c.end(), c_.begin(), c_.end());
    return Poly(std::move(c));
  }
  // Coefficients below x^i.
  Poly low_part(int i) const {
    if (is_zero()) return Poly();
    std::vector<K> c(c_.begin(), c_.begin() + std::min<size_t>(static_cast<size_t>(i), c_.size()));
    return Poly(std::move(c));
  }

  double sup_norm() const {
    double m = 0.0;
    for (const K& v : c_) m = std::max(m, traits::norm(v));
    return m;
  }

  // Remove tolerance-small leading coefficients (approx backend cleanup).
  Poly trimmed(double tol) const {
    if constexpr (traits::is_exact) {
      return *this;
    } else {
      std::vector<K> c = c_;
      const double scale = std::max(1.0, sup_norm());
      while (!c.empty() && traits::norm(c.back()) <= tol * scale) c.pop_back();
      return Poly(std::move(c));
    }
  }

private:
  void trim_exact() {
    while (!c_.empty() && c_.back() == traits::zero()) c_.pop_back();
  }

  std::vector<K> c_;
};

template <class K>
Poly<K> poly_pow(const Poly<K>& p, int e) {
  Poly<K> acc = Poly<K>::one();
  for (int i = 0; i < e; ++i) acc *= p;
  return acc;
}

template <class K>
Poly<K> poly_from_roots(const std::vector<K>& roots) {
  Poly<K> acc = Poly<K>::one();
  for (const K& r : roots) acc *= Poly<K>({-r, field_traits<K>::one()});
  return acc;
}

// Euclidean division over a field: a = q*b + r, deg r < deg b.
template <class K>
std::pair<Poly<K>, Poly<K>> poly_divrem(const Poly<K>& a, const Poly<K>& b) {
  using traits = field_traits<K>;
  if (b.is_zero()) throw error("poly_divrem: division by zero polynomial");
  if (a.is_zero()) return {Poly<K>(), Poly<K>()};
  const int db = b.degree();
  if (a.degree() < db) return {Poly<K>(), a};
  std::vector<K> rem(a.coeffs());
  std::vector<K> quo(static_cast<size_t>(a.degree() - db) + 1, traits::zero());
  const K lead_inv = traits::one() / b.lead();
  for (int k = a.degree() - db; k >= 0; --k) {
    const K q = rem[static_cast<size_t>(k + db)] * lead_inv;
    quo[static_cast<size_t>(k)] = q;
    if (q == traits::zero()) continue;
    for (int j = 0; j <= db; ++j)
      rem[static_cast<size_t>(k + j)] -= q * b.coeff(j);
  }
  rem.resize(static_cast<size_t>(db));
  return {Poly<K>(std::move(quo)), Poly<K>(std::move(rem))};
}

template <class K>
Poly<K> poly_mod(const Poly<K>& a, const Poly<K>& b) {
  return poly_divrem(a, b).second;
}

// Division that must be exact: throws if the remainder is nonzero
// (exceeds tol * |a| coefficientwise for the approx backend).
template <class K>
Poly<K> poly_exact_div(const Poly<K>& a, const Poly<K>& b, double tol = kDefaultTol) {
  auto [q, r] = poly_divrem(a, b);
  const double scale = std::max(1.0, a.sup_norm());
  if (!r.is_zero() && r.sup_norm() > tol * scale)
    throw error("poly_exact_div: inexact division");
  return q;
}

namespace detail {
// One Euclid step cleanup for the approx backend: rescale to unit sup-norm
// and drop coefficients below tol.
template <class K>
Poly<K> gcd_cleanup(const Poly<K>& p, double tol) {
  if constexpr (field_traits<K>::is_exact) {
    (void)tol;
    return p;
  } else {
    if (p.is_zero()) return p;
    const double m = p.sup_norm();
    if (m <= tol) return Poly<K>();
    Poly<K> scaled = p * field_traits<K>::one() * CC(1.0 / m, 0.0);
    return scaled.trimmed(tol);
  }
}
}  // namespace detail

// Monic gcd; exact Euclid for rationals, tol-thresholded Euclid with
// renormalization for the complex backend.
template <class K>
Poly<K> poly_gcd_monic(const Poly<K>& a, const Poly<K>& b, double tol = kDefaultTol) {
  Poly<K> f = detail::gcd_cleanup(a, tol);
  Poly<K> g = detail::gcd_cleanup(b, tol);
  if (f.is_zero() && g.is_zero()) throw error("poly_gcd_monic: gcd(0, 0)");
  while (!g.is_zero()) {
    Poly<K> r = poly_divrem(f, g).second;
    f = std::move(g);
    g = detail::gcd_cleanup(r, tol);
  }
  return f.monic();
}

template <class K>
Poly<K> poly_gcd3_monic(const Poly<K>& a, const Poly<K>& b, const Poly<K>& c,
                        double tol = kDefaultTol) {
  if (a.is_zero() && b.is_zero()) return poly_gcd_monic(c, Poly<K>(), tol);
  Poly<K> g = poly_gcd_monic(a, b, tol);
  if (c.is_zero()) return g;
  return poly_gcd_monic(g, c, tol);
}

// Extended gcd: returns (g, s, t) monic g with s*a + t*b = g.
template <class K>
std::tuple<Poly<K>, Poly<K>, Poly<K>> poly_xgcd(const Poly<K>& a, const Poly<K>& b,
                                                double tol = kDefaultTol) {
  using traits = field_traits<K>;
  Poly<K> r0 = a, r1 = b;
  Poly<K> s0 = Poly<K>::one(), s1 = Poly<K>();
  Poly<K> t0 = Poly<K>(), t1 = Poly<K>::one();
  while (!(r1.is_zero() || (!traits::is_exact && r1.sup_norm() <= tol * std::max(1.0, a.sup_norm() + b.sup_norm())))) {
    auto [q, r] = poly_divrem(r0, r1);
    Poly<K> s2 = s0 - q * s1;
    Poly<K> t2 = t0 - q * t1;
    r0 = std::move(r1); r1 = std::move(r);
    s0 = std::move(s1); s1 = std::move(s2);
    t0 = std::move(t1); t1 = std::move(t2);
  }
  if (r0.is_zero()) throw error("poly_xgcd: gcd(0, 0)");
  const K inv = traits::one() / r0.lead();
  return {r0 * inv, s0 * inv, t0 * inv};
}

// Yun's squarefree decomposition: p = lead * prod f_i^{m_i}, f_i monic
// squarefree pairwise coprime. Returns pairs (f_i, m_i), m_i ascending.
template <class K>
std::vector<std::pair<Poly<K>, int>> squarefree_decomposition(const Poly<K>& p,
                                                              double tol = kDefaultTol) {
  if (p.is_zero()) throw error("squarefree_decomposition: zero input");
  std::vector<std::pair<Poly<K>, int>> out;
  if (p.degree() == 0) return out;
  Poly<K> f = p.monic();
  Poly<K> df = f.derivative();
  Poly<K> a = poly_gcd_monic(f, df, tol);
  Poly<K> b = poly_exact_div(f, a, tol);
  Poly<K> c = poly_exact_div(df, a, tol);
  Poly<K> d = c - b.derivative();
  int m = 1;
  while (!(b.degree() == 0)) {
    Poly<K> g = poly_gcd_monic(b, d, tol);
    if (g.degree_or(0) > 0) out.emplace_back(g, m);
    b = poly_exact_div(b, g, tol);
    c = poly_exact_div(d, g, tol);
    d = c - b.derivative();
    ++m;
  }
  return out;
}

// Largest monic P with P^2 | h, and h' = h / P^2 (squarefree by maximality).
// Defined for any monic nonzero input; the curve layer separately enforces
// the odd-degree model.
template <class K>
std::pair<Poly<K>, Poly<K>> max_quadratic_divisor(const Poly<K>& h, double tol = kDefaultTol) {
  if (h.is_zero() || !h.is_monic())
    throw error("max_quadratic_divisor: input must be monic");
  Poly<K> P = Poly<K>::one();
  for (const auto& [f, m] : squarefree_decomposition(h, tol))
    P *= poly_pow(f, m / 2);
  Poly<K> hp = poly_exact_div(h, P * P, tol);
  return {P, hp};
}

// Unique interpolant of degree < #points (Newton divided differences).
template <class K>
Poly<K> poly_interpolate(const std::vector<std::pair<K, K>>& points) {
  using traits = field_traits<K>;
  const size_t m = points.size();
  if (m == 0) return Poly<K>();
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j)
      if (points[i].first == points[j].first)
        throw error("poly_interpolate: repeated x-value");
  // divided-difference table
  std::vector<K> dd;
  dd.reserve(m);
  for (const auto& [x, y] : points) { (void)x; dd.push_back(y); }
  for (size_t level = 1; level < m; ++level)
    for (size_t i = m - 1; i >= level; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (points[i].first - points[i - level].first);
      if (i == level) break;
    }
  Poly<K> acc = Poly<K>::constant(dd[m - 1]);
  for (size_t i = m - 1; i-- > 0;) {
    acc = acc * Poly<K>({-points[i].first, traits::one()}) + Poly<K>::constant(dd[i]);
  }
  return acc;
}

// Taylor shift p(x0 + s) as a polynomial in s (repeated synthetic division).
template <class K>
Poly<K> poly_shift(const Poly<K>& p, const K& x0) {
  if (p.is_zero()) return p;
  std::vector<K> work(p.coeffs());
  const size_t n = work.size();
  std::vector<K> out(n, field_traits<K>::zero());
  for (size_t k = 0; k < n; ++k) {
    // one synthetic division of `work` by (x - x0); remainder = coefficient of s^k
    for (size_t i = n - 1 - k; i-- > 0;) work[i] += x0 * work[i + 1];
    out[k] = work[0];
    work.erase(work.begin());
  }
  return Poly<K>(std::move(out));
}

template <class K>
Poly<CC> poly_to_cc(const Poly<K>& p) {
  std::vector<CC> c;
  c.reserve(p.coeffs().size());
  for (const K& v : p.coeffs()) c.push_back(to_cc(v));
  return Poly<CC>(std::move(c));
}

template <class K>
std::string poly_str(const Poly<K>& p, const std::string& var = "x") {
  if (p.is_zero()) return "0";
  std::string s;
  for (int i = p.degree(); i >= 0; --i) {
    const K c = p.coeff(i);
    if (field_traits<K>::is_zero(c, 0.0) && !(i == 0 && s.empty())) continue;
    if (!s.empty()) s += " + ";
    s += field_traits<K>::str(c);
    if (i > 0) s += "*" + var + (i > 1 ? "^" + std::to_string(i) : "");
  }
  return s;
}

}  // namespace gjac
