#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

#include "zkpark/algebra/fields.hpp"
#include "zkpark/algebra/tower.hpp"

namespace zkpark {

struct G1Curve {
  using Base = Fq;
  static Fq b() { return Fq::from_u64(3); }
  static constexpr std::size_t kEncodedSize = 64;
};

struct G2Curve {
  using Base = Fq2;
  // Twist coefficient 3 / (9 + u).
  static Fq2 b() {
    static const Fq2 kB = Fq2{Fq::from_u64(3), Fq::zero()} * Fq2{Fq::from_u64(9), Fq::one()}.inverse();
    return kB;
  }
  static constexpr std::size_t kEncodedSize = 128;
};

// Short Weierstrass y^2 = x^3 + b point in affine coordinates. The point at
// infinity is flagged explicitly.
template <class Curve>
struct AffinePoint {
  using F = typename Curve::Base;
  F x{};
  F y{};
  bool infinity = true;

  static AffinePoint identity() { return {}; }

  bool is_identity() const { return infinity; }

  bool is_on_curve() const {
    if (infinity) return true;
    return y.square() == x.square() * x + Curve::b();
  }

  bool operator==(const AffinePoint& o) const {
    if (infinity || o.infinity) return infinity == o.infinity;
    return x == o.x && y == o.y;
  }
  bool operator!=(const AffinePoint& o) const { return !(*this == o); }

  AffinePoint operator-() const {
    if (infinity) return *this;
    return {x, -y, false};
  }
};

// Jacobian coordinates (X, Y, Z) representing (X/Z^2, Y/Z^3); Z = 0 is the
// identity.
template <class Curve>
class JacobianPoint {
 public:
  using F = typename Curve::Base;
  using Affine = AffinePoint<Curve>;

  JacobianPoint() : x_(F::one()), y_(F::one()), z_(F::zero()) {}
  JacobianPoint(const Affine& p)  // NOLINT(google-explicit-constructor)
      : x_(p.infinity ? F::one() : p.x), y_(p.infinity ? F::one() : p.y), z_(p.infinity ? F::zero() : F::one()) {}

  static JacobianPoint identity() { return {}; }

  bool is_identity() const { return z_.is_zero(); }

  JacobianPoint dbl() const {
    if (is_identity()) return *this;
    const F a = x_.square();
    const F b = y_.square();
    const F c = b.square();
    F d = (x_ + b).square() - a - c;
    d = d + d;
    const F e = a + a + a;
    const F f = e.square();
    JacobianPoint r;
    r.x_ = f - d - d;
    const F c8 = c.dbl().dbl().dbl();
    r.y_ = e * (d - r.x_) - c8;
    r.z_ = (y_ * z_).dbl();
    return r;
  }

  JacobianPoint operator+(const JacobianPoint& o) const {
    if (is_identity()) return o;
    if (o.is_identity()) return *this;
    const F z1z1 = z_.square();
    const F z2z2 = o.z_.square();
    const F u1 = x_ * z2z2;
    const F u2 = o.x_ * z1z1;
    const F s1 = y_ * o.z_ * z2z2;
    const F s2 = o.y_ * z_ * z1z1;
    const F h = u2 - u1;
    const F rr = (s2 - s1).dbl();
    if (h.is_zero()) {
      if (rr.is_zero()) return dbl();
      return identity();
    }
    const F i = h.dbl().square();
    const F j = h * i;
    const F v = u1 * i;
    JacobianPoint r;
    r.x_ = rr.square() - j - v - v;
    r.y_ = rr * (v - r.x_) - (s1 * j).dbl();
    r.z_ = ((z_ + o.z_).square() - z1z1 - z2z2) * h;
    return r;
  }

  // Mixed addition with an affine point.
  JacobianPoint add_affine(const Affine& o) const {
    if (o.infinity) return *this;
    if (is_identity()) return JacobianPoint(o);
    const F z1z1 = z_.square();
    const F u2 = o.x * z1z1;
    const F s2 = o.y * z_ * z1z1;
    const F h = u2 - x_;
    const F rr = (s2 - y_).dbl();
    if (h.is_zero()) {
      if (rr.is_zero()) return dbl();
      return identity();
    }
    const F hh = h.square();
    const F i = hh.dbl().dbl();
    const F j = h * i;
    const F v = x_ * i;
    JacobianPoint r;
    r.x_ = rr.square() - j - v - v;
    r.y_ = rr * (v - r.x_) - (y_ * j).dbl();
    r.z_ = (z_ + h).square() - z1z1 - hh;
    return r;
  }

  JacobianPoint& operator+=(const JacobianPoint& o) { return *this = *this + o; }

  JacobianPoint operator-() const {
    JacobianPoint r = *this;
    r.y_ = -r.y_;
    return r;
  }
  JacobianPoint operator-(const JacobianPoint& o) const { return *this + (-o); }

  JacobianPoint mul(const U256& k) const {
    JacobianPoint acc;
    for (int i = static_cast<int>(k.bit_length()) - 1; i >= 0; --i) {
      acc = acc.dbl();
      if (k.bit(static_cast<unsigned>(i))) acc += *this;
    }
    return acc;
  }

  JacobianPoint operator*(const Fr& k) const { return mul(k.to_canonical()); }

  Affine to_affine() const {
    if (is_identity()) return Affine::identity();
    const F zinv = z_.inverse();
    const F zinv2 = zinv.square();
    return {x_ * zinv2, y_ * zinv2 * zinv, false};
  }

  bool operator==(const JacobianPoint& o) const {
    if (is_identity() || o.is_identity()) return is_identity() == o.is_identity();
    const F z1z1 = z_.square();
    const F z2z2 = o.z_.square();
    return x_ * z2z2 == o.x_ * z1z1 && y_ * z2z2 * o.z_ == o.y_ * z1z1 * z_;
  }
  bool operator!=(const JacobianPoint& o) const { return !(*this == o); }

  const F& x() const { return x_; }
  const F& y() const { return y_; }
  const F& z() const { return z_; }

 private:
  F x_;
  F y_;
  F z_;
};

// Converts many Jacobian points to affine with a single inversion.
template <class Curve>
std::vector<AffinePoint<Curve>> batch_to_affine(std::span<const JacobianPoint<Curve>> points) {
  using F = typename Curve::Base;
  std::vector<AffinePoint<Curve>> out(points.size());
  std::vector<F> zs;
  std::vector<std::size_t> idx;
  zs.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].is_identity()) {
      zs.push_back(points[i].z());
      idx.push_back(i);
    }
  }
  if constexpr (std::is_same_v<F, Fq>) {
    batch_inverse<Fq>(zs);
  } else {
    for (auto& z : zs) z = z.inverse();
  }
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const auto& p = points[idx[k]];
    const F zinv2 = zs[k].square();
    out[idx[k]] = {p.x() * zinv2, p.y() * zinv2 * zs[k], false};
  }
  return out;
}

using G1Affine = AffinePoint<G1Curve>;
using G2Affine = AffinePoint<G2Curve>;
using G1Jacobian = JacobianPoint<G1Curve>;
using G2Jacobian = JacobianPoint<G2Curve>;

/// Group element of G1 in its external (affine) form.
using G1Point = G1Affine;
/// Group element of G2 in its external (affine) form.
using G2Point = G2Affine;

/// Generator (1, 2) of G1.
G1Affine g1_generator();
/// Standard BN254 G2 generator (the one used by the Ethereum precompiles).
G2Affine g2_generator();

/// True iff r * P is the identity (subgroup membership; trivial on G1,
/// which has cofactor 1).
bool in_g2_subgroup(const G2Affine& p);

// Bit-exact encodings. G1: x || y, G2: x.c0 || x.c1 || y.c0 || y.c1; every
// coordinate as 32-byte little-endian canonical residue; identity = zeros.
std::array<std::uint8_t, 64> encode_g1(const G1Affine& p);
std::array<std::uint8_t, 128> encode_g2(const G2Affine& p);
// Throw DecodeError on wrong length, non-canonical coordinates, off-curve
// points, or (for G2) points outside the prime-order subgroup.
G1Affine decode_g1(std::span<const std::uint8_t> bytes);
G2Affine decode_g2(std::span<const std::uint8_t> bytes);

}  // namespace zkpark
