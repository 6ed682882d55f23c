#pragma once
// Scalar backends: exact rationals (GMP) and approximate complex doubles.
// Everything above this layer is templated on the backend type, so mixing
// backends is a compile error rather than a silent coercion.

#include <complex>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <gmpxx.h>

namespace gjac {

inline constexpr double kDefaultTol = 1e-9;

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configuration violates the genericity assumptions of the divisor/class
// machinery (support touching the modulus, repeated roots, ...).
struct non_generic_error : error {
  using error::error;
};

// A function has a zero or pole on the modulus support.
struct support_collision_error : non_generic_error {
  using non_generic_error::non_generic_error;
};

// Requested exact-backend data is not representable over the rationals
// (irrational branch values, polynomials that do not split, ...).
struct exact_unavailable_error : error {
  using error::error;
};

// Branch classification landed between tol and 10*tol.
struct gray_zone_error : error {
  using error::error;
};

// Both z-branches evaluate to comparable magnitudes where one had to vanish.
struct branch_ambiguity_error : error {
  using error::error;
};

// Exact rational scalar. Thin value wrapper over mpq_class; always stored
// canonicalized (lowest terms, positive denominator).
class Rat {
public:
  Rat() : v_(0) {}
  Rat(int n) : v_(n) {}
  Rat(long n) : v_(static_cast<signed long>(n)) {}
  Rat(long num, long den) : v_(static_cast<signed long>(num), static_cast<signed long>(den)) {
    if (den == 0) throw error("Rat: zero denominator");
    v_.canonicalize();
  }
  explicit Rat(mpq_class q) : v_(std::move(q)) { v_.canonicalize(); }

  // Accepts "p", "p/q", optionally signed.
  static Rat parse(const std::string& s) {
    try {
      mpq_class q(s, 10);
      q.canonicalize();
      return Rat(std::move(q));
    } catch (const std::invalid_argument&) {
      throw error("Rat: cannot parse '" + s + "'");
    }
  }

  const mpq_class& raw() const { return v_; }
  std::string str() const { return v_.get_str(); }
  double to_double() const { return v_.get_d(); }
  int sign() const { return sgn(v_); }
  bool is_integer() const { return v_.get_den() == 1; }

  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.sign() == 0) throw error("Rat: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
  friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
  friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
  friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }
  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }

  // Exact square root if the value is a perfect square of a rational.
  std::optional<Rat> exact_sqrt() const {
    if (sign() < 0) return std::nullopt;
    if (sign() == 0) return Rat(0);
    mpz_class num = v_.get_num(), den = v_.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return std::nullopt;
    if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    return Rat(mpq_class(rn) / mpq_class(rd));
  }

private:
  mpq_class v_;
};

using CC = std::complex<double>;

// Per-backend capabilities used by the generic layers.
template <class K>
struct field_traits;

template <>
struct field_traits<Rat> {
  static constexpr bool is_exact = true;
  static Rat zero() { return Rat(0); }
  static Rat one() { return Rat(1); }
  static Rat from_int(long n) { return Rat(n); }
  static Rat from_ratio(long p, long q) { return Rat(p, q); }
  static bool is_zero(const Rat& x, double /*tol*/ = kDefaultTol) { return x.sign() == 0; }
  static bool eq(const Rat& a, const Rat& b, double /*tol*/ = kDefaultTol) { return a == b; }
  static double norm(const Rat& x) { return std::abs(x.to_double()); }
  static CC to_complex(const Rat& x) { return CC(x.to_double(), 0.0); }
  // Square root within the field; nullopt if not a perfect square.
  static std::optional<Rat> sqrt(const Rat& x) { return x.exact_sqrt(); }
  static std::string str(const Rat& x) { return x.str(); }
};

template <>
struct field_traits<CC> {
  static constexpr bool is_exact = false;
  static CC zero() { return CC(0.0, 0.0); }
  static CC one() { return CC(1.0, 0.0); }
  static CC from_int(long n) { return CC(static_cast<double>(n), 0.0); }
  static CC from_ratio(long p, long q) { return CC(static_cast<double>(p) / static_cast<double>(q), 0.0); }
  static bool is_zero(const CC& x, double tol = kDefaultTol) { return std::abs(x) <= tol; }
  static bool eq(const CC& a, const CC& b, double tol = kDefaultTol) { return std::abs(a - b) <= tol; }
  static double norm(const CC& x) { return std::abs(x); }
  static CC to_complex(const CC& x) { return x; }
  // Principal branch.
  static std::optional<CC> sqrt(const CC& x) { return std::sqrt(x); }
  static std::string str(const CC& x);
};

inline std::string field_traits<CC>::str(const CC& x) {
  std::string s = "(" + std::to_string(x.real());
  s += (x.imag() < 0 ? "" : "+");
  s += std::to_string(x.imag()) + "i)";
  return s;
}

inline CC to_cc(const Rat& x) { return field_traits<Rat>::to_complex(x); }
inline CC to_cc(const CC& x) { return x; }

}  // namespace gjac
