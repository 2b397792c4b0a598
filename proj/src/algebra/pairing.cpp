#include "zkpark/algebra/pairing.hpp"

#include <array>
#include <vector>

namespace zkpark {

namespace detail {

std::span<const std::uint64_t> p_squared_limbs() {
  static constexpr std::array<std::uint64_t, 8> kLimbs = {
      0x3b5458a2275d69b1ULL, 0xa602072d09eac101ULL, 0x4a50189c6d96cadcULL, 0x04689e957a1242c8ULL,
      0x26edfa5c34c6b38dULL, 0xb00b855116375606ULL, 0x599a6f7c0348d21cULL, 0x0925c4b8763cbf9cULL};
  return kLimbs;
}

// (p^4 - p^2 + 1) / r
std::span<const std::uint64_t> hard_part_limbs() {
  static constexpr std::array<std::uint64_t, 12> kLimbs = {
      0xe81bb482ccdf42b1ULL, 0x5abf5cc4f49c36d4ULL, 0xf1154e7e1da014fdULL, 0xdcc7b44c87cdbacfULL,
      0xaaa441e3954bcf8aULL, 0x6b887d56d5095f23ULL, 0x79581e16f3fd90c6ULL, 0x3b1b1355d189227dULL,
      0x4e529a5861876f6bULL, 0x6c0eb522d5b12278ULL, 0x331ec15183177fafULL, 0x01baaa710b0759adULL};
  return kLimbs;
}

U256 ate_loop_count() { return U256::from_hex("6f4d8248eeb859fbf83e9682e87cfd46"); }

}  // namespace detail

namespace {

// Line through the (untwisted) point T with twist slope lambda, evaluated at
// P: yP - lambda*xP*w + (lambda*xT - yT)*w^3.
Fq12 line_value(const Fq2& lambda, const Fq2& xt, const Fq2& yt, const G1Affine& p) {
  Fq12 l;
  l.c0 = Fq6{Fq2{p.y, Fq::zero()}, Fq2::zero(), Fq2::zero()};
  l.c1 = Fq6{-(lambda * p.x), lambda * xt - yt, Fq2::zero()};
  return l;
}

struct MillerState {
  G1Affine p;
  G2Affine q;
  Fq2 x;
  Fq2 y;
};

}  // namespace

Fq12 miller_loop(std::span<const std::pair<G1Affine, G2Affine>> terms) {
  std::vector<MillerState> states;
  for (const auto& [p, q] : terms) {
    if (p.infinity || q.infinity) continue;
    states.push_back({p, q, q.x, q.y});
  }
  Fq12 f = Fq12::one();
  if (states.empty()) return f;

  const U256 loop = detail::ate_loop_count();
  const Fq2 three{Fq::from_u64(3), Fq::zero()};
  for (int bit = static_cast<int>(loop.bit_length()) - 2; bit >= 0; --bit) {
    f = f.square();
    for (auto& s : states) {
      const Fq2 lambda = (three * s.x.square()) * s.y.dbl().inverse();
      f *= line_value(lambda, s.x, s.y, s.p);
      const Fq2 nx = lambda.square() - s.x.dbl();
      s.y = lambda * (s.x - nx) - s.y;
      s.x = nx;
    }
    if (loop.bit(static_cast<unsigned>(bit))) {
      for (auto& s : states) {
        // T is never +-Q here: intermediate multiples stay below r.
        const Fq2 lambda = (s.q.y - s.y) * (s.q.x - s.x).inverse();
        f *= line_value(lambda, s.x, s.y, s.p);
        const Fq2 nx = lambda.square() - s.x - s.q.x;
        s.y = lambda * (s.x - nx) - s.y;
        s.x = nx;
      }
    }
  }
  return f;
}

Fq12 final_exponentiation(const Fq12& f) {
  // Easy part: f^((p^6 - 1)(p^2 + 1)).
  const Fq12 t = f.conjugate() * f.inverse();
  const Fq12 easy = t.pow(detail::p_squared_limbs()) * t;
  return easy.pow(detail::hard_part_limbs());
}

Fq12 pairing(const G1Affine& p, const G2Affine& q) {
  const std::array<std::pair<G1Affine, G2Affine>, 1> terms{{{p, q}}};
  return final_exponentiation(miller_loop(terms));
}

bool pairing_check(std::span<const std::pair<G1Affine, G2Affine>> terms) {
  for (const auto& [p, q] : terms) {
    if (!p.is_on_curve()) throw DecodeError("pairing input: G1 point not on curve");
    if (!q.is_on_curve()) throw DecodeError("pairing input: G2 point not on curve");
    if (!in_g2_subgroup(q)) throw DecodeError("pairing input: G2 point outside subgroup");
  }
  return final_exponentiation(miller_loop(terms)).is_one();
}

}  // namespace zkpark
