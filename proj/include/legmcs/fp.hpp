#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include <Eigen/Core>

#include "legmcs/errors.hpp"

namespace legmcs {

/// Verified prime modulus. Construction checks primality by trial division
/// (moduli here are tiny: 2, 3, 5, ...).
class Field {
public:
  explicit Field(std::int64_t p) : p_(p) {
    if (p < 2 || !is_prime(p)) fail("NotPrime", std::to_string(p) + " is not prime");
  }

  std::int64_t modulus() const { return p_; }
  bool operator==(const Field& o) const { return p_ == o.p_; }
  bool operator!=(const Field& o) const { return p_ != o.p_; }

  static bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t q = 2; q * q <= p; ++q)
      if (p % q == 0) return false;
    return true;
  }

private:
  std::int64_t p_;
};

/// Element of F_p, usable as an Eigen scalar.
///
/// A default-constructed or int-constructed Fp has modulus 0 and behaves as a
/// plain integer constant; it promotes to the other operand's modulus in
/// binary operations. Eigen's internals only ever materialize Scalar(0) and
/// Scalar(1) this way. Mixing two distinct nonzero moduli is a FieldMismatch.
class Fp {
public:
  Fp() : v_(0), p_(0) {}
  Fp(long long n) : v_(n), p_(0) {}  // NOLINT: implicit for Eigen literals
  Fp(int n) : v_(n), p_(0) {}        // NOLINT
  Fp(std::int64_t value, const Field& F) : v_(mod(value, F.modulus())), p_(F.modulus()) {}

  std::int64_t value() const { return v_; }
  std::int64_t modulus() const { return p_; }
  bool is_zero() const { return p_ == 0 ? v_ == 0 : v_ % p_ == 0; }
  bool is_constant() const { return p_ == 0; }

  friend Fp operator+(Fp a, Fp b) {
    promote(a, b);
    return raw(a.p_ == 0 ? a.v_ + b.v_ : mod(a.v_ + b.v_, a.p_), a.p_);
  }
  friend Fp operator-(Fp a, Fp b) {
    promote(a, b);
    return raw(a.p_ == 0 ? a.v_ - b.v_ : mod(a.v_ - b.v_, a.p_), a.p_);
  }
  friend Fp operator*(Fp a, Fp b) {
    promote(a, b);
    return raw(a.p_ == 0 ? a.v_ * b.v_ : mod(a.v_ * b.v_, a.p_), a.p_);
  }
  friend Fp operator/(Fp a, Fp b) { return a * b.inverse(); }

  Fp operator-() const { return raw(p_ == 0 ? -v_ : mod(-v_, p_), p_); }
  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }
  Fp& operator/=(const Fp& o) { return *this = *this / o; }

  Fp inverse() const {
    if (p_ == 0) {
      if (v_ == 1 || v_ == -1) return raw(v_, 0);
      fail("NotInvertible", "no inverse for integer constant " + std::to_string(v_));
    }
    if (v_ == 0) fail("NotInvertible", "division by zero in F_" + std::to_string(p_));
    // extended Euclid
    std::int64_t a = v_, b = p_, x0 = 1, x1 = 0;
    while (b != 0) {
      std::int64_t q = a / b;
      std::int64_t t = a - q * b;
      a = b;
      b = t;
      t = x0 - q * x1;
      x0 = x1;
      x1 = t;
    }
    return raw(mod(x0, p_), p_);
  }

  friend bool operator==(Fp a, Fp b) {
    promote(a, b);
    return a.v_ == b.v_;
  }
  friend bool operator!=(Fp a, Fp b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const Fp& x) { return os << x.v_; }

private:
  static Fp raw(std::int64_t v, std::int64_t p) {
    Fp x;
    x.v_ = v;
    x.p_ = p;
    return x;
  }
  static std::int64_t mod(std::int64_t v, std::int64_t p) {
    std::int64_t r = v % p;
    return r < 0 ? r + p : r;
  }
  static void promote(Fp& a, Fp& b) {
    if (a.p_ == b.p_) return;
    if (a.p_ == 0) {
      a = raw(mod(a.v_, b.p_), b.p_);
    } else if (b.p_ == 0) {
      b = raw(mod(b.v_, a.p_), a.p_);
    } else {
      fail("FieldMismatch", "mixed moduli " + std::to_string(a.p_) + " and " + std::to_string(b.p_));
    }
  }

  std::int64_t v_;
  std::int64_t p_;
};

}  // namespace legmcs

namespace Eigen {
template <>
struct NumTraits<legmcs::Fp> {
  using Real = legmcs::Fp;
  using NonInteger = legmcs::Fp;
  using Literal = legmcs::Fp;
  using Nested = legmcs::Fp;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 0,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 3,
    MulCost = 3
  };
  static inline Real epsilon() { return legmcs::Fp(0); }
  static inline Real dummy_precision() { return legmcs::Fp(0); }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen

namespace legmcs {  // NOLINT

using Mat = Eigen::Matrix<Fp, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::Matrix<Fp, Eigen::Dynamic, 1>;

inline Mat zeros(const Field& F, Eigen::Index rows, Eigen::Index cols) {
  Mat m(rows, cols);
  m.setConstant(Fp(0, F));
  return m;
}

inline Mat identity(const Field& F, Eigen::Index n) {
  Mat m = zeros(F, n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = Fp(1, F);
  return m;
}

inline Vec zero_vec(const Field& F, Eigen::Index n) {
  Vec v(n);
  v.setConstant(Fp(0, F));
  return v;
}

template <typename DerivedA, typename DerivedB>
bool mat_equal(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (Fp(a(i, j)) != Fp(b(i, j))) return false;
  return true;
}

template <typename Derived>
bool mat_is_zero(const Eigen::MatrixBase<Derived>& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!Fp(a(i, j)).is_zero()) return false;
  return true;
}

}  // namespace legmcs
