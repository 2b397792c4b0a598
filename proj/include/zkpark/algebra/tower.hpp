#pragma once

#include <span>
#include <vector>

#include "zkpark/algebra/fields.hpp"

namespace zkpark {

// Fq2 = Fq[u] / (u^2 + 1).
struct Fq2 {
  Fq c0;
  Fq c1;

  static Fq2 zero() { return {}; }
  static Fq2 one() { return {Fq::one(), Fq::zero()}; }

  bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
  bool operator==(const Fq2& o) const { return c0 == o.c0 && c1 == o.c1; }
  bool operator!=(const Fq2& o) const { return !(*this == o); }

  Fq2 operator+(const Fq2& o) const { return {c0 + o.c0, c1 + o.c1}; }
  Fq2 operator-(const Fq2& o) const { return {c0 - o.c0, c1 - o.c1}; }
  Fq2 operator-() const { return {-c0, -c1}; }
  Fq2& operator+=(const Fq2& o) { return *this = *this + o; }
  Fq2& operator-=(const Fq2& o) { return *this = *this - o; }

  Fq2 operator*(const Fq2& o) const {
    const Fq t0 = c0 * o.c0;
    const Fq t1 = c1 * o.c1;
    return {t0 - t1, (c0 + c1) * (o.c0 + o.c1) - t0 - t1};
  }
  Fq2& operator*=(const Fq2& o) { return *this = *this * o; }

  Fq2 operator*(const Fq& s) const { return {c0 * s, c1 * s}; }

  Fq2 square() const {
    const Fq ab = c0 * c1;
    return {(c0 + c1) * (c0 - c1), ab + ab};
  }

  Fq2 dbl() const { return *this + *this; }
  Fq2 conjugate() const { return {c0, -c1}; }

  // Multiplication by the sextic non-residue xi = 9 + u.
  Fq2 mul_by_xi() const {
    const Fq nine = Fq::from_u64(9);
    return {c0 * nine - c1, c0 + c1 * nine};
  }

  Fq2 inverse() const {
    const Fq norm = c0.square() + c1.square();
    if (norm.is_zero()) throw DivisionByZero("Fq2 inverse of zero");
    const Fq inv = norm.inverse();
    return {c0 * inv, -(c1 * inv)};
  }

  Fq2 pow(const U256& e) const {
    Fq2 acc = one();
    for (int i = static_cast<int>(e.bit_length()) - 1; i >= 0; --i) {
      acc = acc.square();
      if (e.bit(static_cast<unsigned>(i))) acc *= *this;
    }
    return acc;
  }
};

// Fq6 = Fq2[v] / (v^3 - xi).
struct Fq6 {
  Fq2 c0;
  Fq2 c1;
  Fq2 c2;

  static Fq6 zero() { return {}; }
  static Fq6 one() { return {Fq2::one(), Fq2::zero(), Fq2::zero()}; }

  bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }
  bool operator==(const Fq6& o) const { return c0 == o.c0 && c1 == o.c1 && c2 == o.c2; }

  Fq6 operator+(const Fq6& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
  Fq6 operator-(const Fq6& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
  Fq6 operator-() const { return {-c0, -c1, -c2}; }

  Fq6 operator*(const Fq6& o) const {
    const Fq2 t0 = c0 * o.c0;
    const Fq2 t1 = c1 * o.c1;
    const Fq2 t2 = c2 * o.c2;
    return {
        t0 + ((c1 + c2) * (o.c1 + o.c2) - t1 - t2).mul_by_xi(),
        (c0 + c1) * (o.c0 + o.c1) - t0 - t1 + t2.mul_by_xi(),
        (c0 + c2) * (o.c0 + o.c2) - t0 - t2 + t1,
    };
  }

  Fq6 square() const { return *this * *this; }

  Fq6 mul_by_v() const { return {c2.mul_by_xi(), c0, c1}; }

  Fq6 inverse() const {
    const Fq2 t0 = c0.square() - (c1 * c2).mul_by_xi();
    const Fq2 t1 = c2.square().mul_by_xi() - c0 * c1;
    const Fq2 t2 = c1.square() - c0 * c2;
    const Fq2 norm = c0 * t0 + (c2 * t1 + c1 * t2).mul_by_xi();
    const Fq2 inv = norm.inverse();
    return {t0 * inv, t1 * inv, t2 * inv};
  }
};

// Fq12 = Fq6[w] / (w^2 - v). As a vector space over Fq2 the basis is
// 1, w, w^2 = v, w^3 = vw, w^4 = v^2, w^5 = v^2 w, with w^6 = xi.
struct Fq12 {
  Fq6 c0;
  Fq6 c1;

  static Fq12 one() { return {Fq6::one(), Fq6::zero()}; }

  bool is_one() const { return c0 == Fq6::one() && c1.is_zero(); }
  bool operator==(const Fq12& o) const { return c0 == o.c0 && c1 == o.c1; }
  bool operator!=(const Fq12& o) const { return !(*this == o); }

  Fq12 operator*(const Fq12& o) const {
    const Fq6 t0 = c0 * o.c0;
    const Fq6 t1 = c1 * o.c1;
    return {t0 + t1.mul_by_v(), (c0 + c1) * (o.c0 + o.c1) - t0 - t1};
  }
  Fq12& operator*=(const Fq12& o) { return *this = *this * o; }

  Fq12 square() const {
    const Fq6 ab = c0 * c1;
    const Fq6 t = (c0 + c1) * (c0 + c1.mul_by_v());
    return {t - ab - ab.mul_by_v(), ab + ab};
  }

  // Equals the p^6-power Frobenius.
  Fq12 conjugate() const { return {c0, -c1}; }

  Fq12 inverse() const {
    const Fq6 norm = c0.square() - c1.square().mul_by_v();
    const Fq6 inv = norm.inverse();
    return {c0 * inv, -(c1 * inv)};
  }

  // Exponent as little-endian 64-bit limbs of arbitrary length.
  Fq12 pow(std::span<const std::uint64_t> exponent) const {
    Fq12 acc = one();
    for (std::size_t limb = exponent.size(); limb-- > 0;) {
      for (int bit = 63; bit >= 0; --bit) {
        acc = acc.square();
        if ((exponent[limb] >> bit) & 1U) acc *= *this;
      }
    }
    return acc;
  }
};

}  // namespace zkpark
