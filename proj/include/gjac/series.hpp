#pragma once
// Truncated power series and Laurent fragments in one local parameter.
//
// A Series carries coefficients c[0..N] where N is the (inclusive) truncation
// order. Arithmetic never extends the order: binary operations carry the
// minimum of the operand orders.

#include <algorithm>
#include <utility>
#include <vector>

#include "gjac/poly.hpp"
#include "gjac/scalar.hpp"

namespace gjac {

template <class K>
class Series {
public:
  using traits = field_traits<K>;

  Series() : c_(1, traits::zero()) {}
  explicit Series(int order) : c_(static_cast<size_t>(order) + 1, traits::zero()) {
    if (order < 0) throw error("Series: negative order");
  }
  Series(std::vector<K> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw error("Series: empty coefficient list");
  }

  static Series constant(K v, int order) {
    Series s(order);
    s.c_[0] = std::move(v);
    return s;
  }
  static Series identity(int order) {  // the series t
    Series s(order);
    if (order >= 1) s.c_[1] = traits::one();
    return s;
  }
  static Series of_poly(const Poly<K>& p, int order) {
    Series s(order);
    for (int i = 0; i <= order; ++i) s.c_[static_cast<size_t>(i)] = p.coeff(i);
    return s;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const K& coeff(int i) const { return c_[static_cast<size_t>(i)]; }
  K& coeff(int i) { return c_[static_cast<size_t>(i)]; }
  const std::vector<K>& coeffs() const { return c_; }

  Series truncated(int order) const {
    if (order >= this->order()) return *this;
    return Series(std::vector<K>(c_.begin(), c_.begin() + order + 1));
  }

  double sup_norm() const {
    double m = 0.0;
    for (const K& v : c_) m = std::max(m, traits::norm(v));
    return m;
  }

  // Index of the first nonzero coefficient, or -1 if none within the order.
  int valuation(double tol = kDefaultTol) const {
    const double scale = std::max(1.0, sup_norm());
    for (size_t i = 0; i < c_.size(); ++i)
      if (!traits::is_zero(c_[i], tol * scale)) return static_cast<int>(i);
    return -1;
  }

  bool is_unit(double tol = kDefaultTol) const {
    return !traits::is_zero(c_[0], tol * std::max(1.0, sup_norm()));
  }

  Series operator-() const {
    Series s = *this;
    for (K& v : s.c_) v = -v;
    return s;
  }

  friend Series operator+(const Series& a, const Series& b) {
    const int n = std::min(a.order(), b.order());
    Series s(n);
    for (int i = 0; i <= n; ++i) s.c_[static_cast<size_t>(i)] = a.coeff(i) + b.coeff(i);
    return s;
  }
  friend Series operator-(const Series& a, const Series& b) {
    const int n = std::min(a.order(), b.order());
    Series s(n);
    for (int i = 0; i <= n; ++i) s.c_[static_cast<size_t>(i)] = a.coeff(i) - b.coeff(i);
    return s;
  }
  friend Series operator*(const Series& a, const Series& b) {
    const int n = std::min(a.order(), b.order());
    Series s(n);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; i + j <= n && j <= b.order(); ++j)
        if (i <= a.order()) s.c_[static_cast<size_t>(i + j)] += a.coeff(i) * b.coeff(j);
    return s;
  }
  friend Series operator*(const Series& a, const K& v) {
    Series s = a;
    for (K& x : s.c_) x = x * v;
    return s;
  }
  friend Series operator*(const K& v, const Series& a) { return a * v; }

  friend bool operator==(const Series& a, const Series& b) {
    if (a.order() != b.order()) return false;
    for (int i = 0; i <= a.order(); ++i)
      if (!(a.coeff(i) == b.coeff(i))) return false;
    return true;
  }

  // Multiplicative inverse; requires a unit constant term.
  Series inverse() const {
    if (c_[0] == traits::zero()) throw error("Series: inverting non-unit");
    const int n = order();
    Series s(n);
    const K inv0 = traits::one() / c_[0];
    s.c_[0] = inv0;
    for (int k = 1; k <= n; ++k) {
      K acc = traits::zero();
      for (int j = 1; j <= k && j <= order(); ++j) acc += coeff(j) * s.c_[static_cast<size_t>(k - j)];
      s.c_[static_cast<size_t>(k)] = -acc * inv0;
    }
    return s;
  }

  // Square root with the branch fixed by sqrt of the constant term.
  // Exact backend: the constant term must be a perfect square.
  Series sqrt_unit() const {
    if (c_[0] == traits::zero()) throw error("Series: sqrt of non-unit (normalize valuation first)");
    auto r0 = traits::sqrt(c_[0]);
    if (!r0) throw exact_unavailable_error("Series: constant term is not a square in the field");
    const int n = order();
    Series s(n);
    s.c_[0] = *r0;
    const K half_inv = traits::one() / (field_traits<K>::from_int(2) * (*r0));
    for (int k = 1; k <= n; ++k) {
      K acc = coeff(k);
      for (int j = 1; j < k; ++j) acc -= s.c_[static_cast<size_t>(j)] * s.c_[static_cast<size_t>(k - j)];
      s.c_[static_cast<size_t>(k)] = acc * half_inv;
    }
    return s;
  }

  // Substitute a series with zero constant term: this(inner).
  Series compose(const Series& inner) const {
    if (!(inner.coeff(0) == traits::zero()))
      throw error("Series: composition needs zero constant term");
    const int n = std::min(order(), inner.order());
    Series acc = Series::constant(coeff(order()), n);
    for (int i = order(); i-- > 0;) {
      acc = acc * inner.truncated(n);
      acc.c_[0] += coeff(i);
    }
    return acc;
  }

  // Compositional inverse: rev with this(rev(t)) = t + O(t^{N+1}).
  // Requires zero constant term and a unit linear coefficient.
  Series reverse() const {
    if (!(coeff(0) == traits::zero()) || order() < 1 || coeff(1) == traits::zero())
      throw error("Series: reversion needs zero constant and nonzero linear term");
    const int n = order();
    Series rev(n);
    const K inv1 = traits::one() / coeff(1);
    rev.c_[1] = inv1;
    for (int m = 2; m <= n; ++m) {
      // correction from the t^m coefficient of this(rev) - t
      Series err = compose(rev.truncated(m)) - Series::identity(m);
      rev.c_[static_cast<size_t>(m)] = -err.coeff(m) * inv1;
    }
    return rev;
  }

  // Divide by t^k (drops low coefficients, shrinks the order).
  Series shifted_down(int k) const {
    if (k == 0) return *this;
    if (k > order()) throw error("Series: shift below order");
    return Series(std::vector<K>(c_.begin() + k, c_.end()));
  }

  // Stretch the parameter: s(t) -> s(t^k).
  Series stretched(int k) const {
    Series s(order() * k);
    for (int i = 0; i <= order(); ++i) s.c_[static_cast<size_t>(i * k)] = coeff(i);
    return s;
  }

private:
  std::vector<K> c_;
};

// Evaluate a polynomial on a series argument (arbitrary constant term).
template <class K>
Series<K> poly_on_series(const Poly<K>& p, const Series<K>& arg) {
  Series<K> acc = Series<K>::constant(field_traits<K>::zero(), arg.order());
  if (p.is_zero()) return acc;
  for (int i = p.degree(); i >= 0; --i) {
    acc = acc * arg;
    acc.coeff(0) += p.coeff(i);
  }
  return acc;
}

// t^val * unit, with unit a Series of nonzero constant term. A separate flag
// represents an identically-zero fragment (to the carried order).
template <class K>
struct Laurent {
  bool zero = true;
  int val = 0;
  Series<K> unit;

  static Laurent make(int val, Series<K> unit) {
    Laurent l;
    l.zero = false;
    l.val = val;
    l.unit = std::move(unit);
    return l;
  }
  static Laurent zero_to_order(int order) {
    Laurent l;
    l.zero = true;
    l.val = order;  // zero up to (excl.) this order
    l.unit = Series<K>(0);
    return l;
  }

  // Recognize the valuation of a raw series fragment starting at t^base.
  static Laurent from_series(int base, const Series<K>& s, double tol = kDefaultTol) {
    const int v = s.valuation(tol);
    if (v < 0) return zero_to_order(base + s.order() + 1);
    return make(base + v, s.shifted_down(v));
  }

  friend Laurent operator*(const Laurent& a, const Laurent& b) {
    if (a.zero || b.zero) {
      // order bookkeeping only
      const int v = (a.zero ? a.val : a.val) + (b.zero ? b.val : b.val);
      return zero_to_order(v);
    }
    return make(a.val + b.val, a.unit * b.unit);
  }
  friend Laurent operator+(const Laurent& a, const Laurent& b) {
    if (a.zero && b.zero) return zero_to_order(std::min(a.val, b.val));
    if (a.zero) {
      if (a.val <= b.val) return zero_to_order(a.val);
      return make(b.val, b.unit.truncated(std::min(b.unit.order(), a.val - b.val - 1)));
    }
    if (b.zero) return b + a;
    const int v = std::min(a.val, b.val);
    const int hi = std::min(a.val + a.unit.order(), b.val + b.unit.order());
    Series<K> s(hi - v);
    for (int i = 0; i <= s.order(); ++i) {
      K acc = field_traits<K>::zero();
      const int ia = v + i - a.val;
      const int ib = v + i - b.val;
      if (ia >= 0 && ia <= a.unit.order()) acc += a.unit.coeff(ia);
      if (ib >= 0 && ib <= b.unit.order()) acc += b.unit.coeff(ib);
      s.coeff(i) = acc;
    }
    return from_series(v, s);
  }
  Laurent inverse() const {
    if (zero) throw error("Laurent: inverting zero fragment");
    return make(-val, unit.inverse());
  }
};

// p(1/t^2) as a Laurent fragment in t, carried to the given series order.
template <class K>
Laurent<K> poly_at_infinity(const Poly<K>& p, int order) {
  if (p.is_zero()) return Laurent<K>::zero_to_order(order);
  const int d = p.degree();
  Series<K> s(order);
  for (int i = d; i >= 0; --i) {
    const int pos = 2 * (d - i);
    if (pos <= order) s.coeff(pos) = p.coeff(i);
  }
  return Laurent<K>::from_series(-2 * d, s);
}

}  // namespace gjac
